//! Strategy dominance, preference relations over strategy vectors, and the
//! Nash-equilibrium check.
//!
//! Two per-point metrics are supported everywhere:
//!
//! - [`Metric::FinalUtility`]: the player's final utility, taxes included.
//!   The equilibrium results certify under this metric.
//! - [`Metric::DecisionValuation`]: the pre-tax valuation of the induced
//!   decision, `d (theta_i - c/n)`. Kept selectable because the two can
//!   genuinely disagree (taxes vary across announcements that preserve the
//!   decision, and a decision flip can raise the valuation while taxes eat
//!   the gain); [`dominance_optimality_crosscheck`] measures the
//!   discrepancy instead of hiding it.
//!
//! The preference relation over vectors is lexicographic: a deviation is
//! discarded outright when the equilibrium component strictly dominates it
//! point by point; when the two components are everywhere equal, the full
//! played vectors are compared point by point. The starred variant first
//! composes every component through a fixed base vector.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{decide, final_utility, valuation, TaxScheme, TypeProfile};
use crate::rat::Rat;
use crate::strategy::{grid_inputs, Strategy, StrategyVector};
use crate::verdict::{DeviationRef, Verdict, Witness, WorstWitness};
use crate::verify::grid::Grid;
use crate::{engine, verify::checks::verify_optimal};

/// Per-point comparison metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    /// `u_i = d (theta_i - c/n) + t_i`.
    FinalUtility,
    /// `v_i = d (theta_i - c/n)`, taxes ignored.
    DecisionValuation,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::FinalUtility => "utility",
            Metric::DecisionValuation => "valuation",
        }
    }
}

/// How one strategy compares to another of the same player, point by point
/// over the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dominance {
    /// Weakly better everywhere, strictly better somewhere.
    Greater,
    /// Equal everywhere.
    Equal,
    /// Weakly worse everywhere, strictly worse somewhere.
    Less,
    /// Strictly better somewhere and strictly worse somewhere else.
    Incomparable,
}

/// Metric value of announcing `announcement` for `player` at the true
/// profile, everyone else truthful.
fn simultaneous_metric(
    instance: &crate::model::ProjectInstance,
    scheme: &TaxScheme,
    metric: Metric,
    profile: &TypeProfile,
    player: usize,
    announcement: Rat,
) -> Rat {
    let announced = profile.with_replaced(player, announcement);
    match metric {
        Metric::FinalUtility => {
            final_utility(instance, scheme, &announced, player, profile.get(player))
        }
        Metric::DecisionValuation => {
            let d = decide(instance, &announced);
            valuation(instance, d, profile.get(player)).expect("profile entries validated")
        }
    }
}

/// Pointwise comparison of two strategies of the same player over every
/// grid profile: each strategy is evaluated at the true prefix and own
/// type, and its announcement is scored against the others' true types.
pub fn dominance_relation(
    scheme: &TaxScheme,
    grid: &Grid,
    strategy: &Strategy,
    other: &Strategy,
    metric: Metric,
) -> Result<Dominance, Error> {
    if strategy.player() != other.player() {
        return Err(Error::PlayerMismatch {
            left: strategy.player(),
            right: other.player(),
        });
    }
    let instance = grid.instance();
    let player = strategy.player();
    let mut any_gt = false;
    let mut any_lt = false;
    for profile in grid.profiles() {
        let prefix = &profile.values()[..player - 1];
        let own = profile.get(player);
        let mine = strategy.announce(instance, prefix, own)?;
        let theirs = other.announce(instance, prefix, own)?;
        let v_mine = simultaneous_metric(instance, scheme, metric, &profile, player, mine);
        let v_theirs = simultaneous_metric(instance, scheme, metric, &profile, player, theirs);
        if v_mine > v_theirs {
            any_gt = true;
        } else if v_mine < v_theirs {
            any_lt = true;
        }
        if any_gt && any_lt {
            return Ok(Dominance::Incomparable);
        }
    }
    Ok(match (any_gt, any_lt) {
        (false, false) => Dominance::Equal,
        (true, false) => Dominance::Greater,
        (false, true) => Dominance::Less,
        (true, true) => unreachable!("early return above"),
    })
}

/// Metric value player `i` obtains when `vector` is played sequentially
/// (identity order) at true profile `theta`.
fn play_metric(
    scheme: &TaxScheme,
    grid: &Grid,
    vector: &StrategyVector,
    profile: &TypeProfile,
    player: usize,
    metric: Metric,
) -> Result<Rat, Error> {
    let instance = grid.instance();
    let trace = engine::play(
        instance,
        scheme,
        &engine::PlayerOrder::identity(instance.players()),
        vector,
        profile,
    )?;
    Ok(match metric {
        Metric::FinalUtility => trace.outcome.utilities[player - 1].clone(),
        Metric::DecisionValuation => {
            valuation(instance, trace.outcome.decision, profile.get(player))
                .expect("profile entries validated")
        }
    })
}

/// Which preference relation to check the equilibrium under.
#[derive(Debug, Clone, Copy)]
pub enum Relation<'a> {
    /// Compare the vectors as they stand.
    Direct,
    /// Compose every component through the fixed base vector first
    /// (component `i` becomes `base_i` applied after the compared rule).
    ComposedThrough(&'a StrategyVector),
}

/// Per-player sets of deviation strategies.
pub struct DeviationUniverse {
    per_player: Vec<Vec<Strategy>>,
}

impl DeviationUniverse {
    pub fn new(per_player: Vec<Vec<Strategy>>) -> Self {
        DeviationUniverse { per_player }
    }

    /// The documented universe: the named rules, every constant rule over
    /// the grid points, the grid tabulation of the checked vector's own
    /// component, and every single-point mutation of that tabulation.
    /// A pass certifies "Nash within this universe".
    pub fn standard(grid: &Grid, vector: &StrategyVector) -> Result<Self, Error> {
        let instance = grid.instance();
        let mut per_player = Vec::with_capacity(instance.players());
        for player in 1..=instance.players() {
            let mut set: Vec<Strategy> = Strategy::NAMED_IDS
                .iter()
                .map(|name| Strategy::by_name(name, player))
                .collect::<Result<_, _>>()?;
            for point in grid.points() {
                set.push(Strategy::constant(player, point.clone()));
            }
            let tab = vector
                .get(player)
                .tabulate(instance, grid_inputs(grid.points(), player))?;
            for input in grid_inputs(grid.points(), player) {
                let current = tab.table_value(&input).expect("tabulated on these inputs");
                for point in grid.points() {
                    if point != current {
                        set.push(tab.with_table_override(&input, point.clone())?);
                    }
                }
            }
            set.push(tab);
            per_player.push(set);
        }
        Ok(DeviationUniverse { per_player })
    }

    pub fn for_player(&self, player: usize) -> &[Strategy] {
        &self.per_player[player - 1]
    }

    pub fn total(&self) -> usize {
        self.per_player.iter().map(|s| s.len()).sum()
    }
}

/// Check that `vector` is a Nash equilibrium over the deviation universe:
/// for every player and every deviation, the vector is weakly preferred
/// to the unilaterally deviated vector under the lexicographic relation.
/// With [`Relation::ComposedThrough`], both sides are first composed
/// through the base vector.
pub fn nash_check(
    scheme: &TaxScheme,
    grid: &Grid,
    vector: &StrategyVector,
    universe: &DeviationUniverse,
    metric: Metric,
    relation: Relation<'_>,
) -> Result<Verdict, Error> {
    let instance = grid.instance();
    let n = instance.players();
    let property = match relation {
        Relation::Direct => format!("nash[{},{}]", vector.label(), metric.name()),
        Relation::ComposedThrough(base) => format!(
            "nash[{},{} composed through {}]",
            vector.label(),
            metric.name(),
            base.label()
        ),
    };
    let (kept_vector, profiles) = match relation {
        Relation::Direct => (vector.clone(), grid.profiles()),
        Relation::ComposedThrough(base) => (vector.composed_through(base)?, grid.profiles()),
    };
    let mut worst = WorstWitness::new();
    for player in 1..=n {
        for deviation in universe.for_player(player) {
            let deviated_vector = match relation {
                Relation::Direct => vector.with_replaced(player, deviation.clone()),
                Relation::ComposedThrough(base) => vector
                    .with_replaced(player, deviation.clone())
                    .composed_through(base)?,
            };
            let mine = kept_vector.get(player);
            let theirs = deviated_vector.get(player);
            match dominance_relation(scheme, grid, mine, theirs, metric)? {
                Dominance::Greater => continue,
                Dominance::Equal => {
                    // Tie clause: compare the played vectors point by point.
                    for profile in &profiles {
                        let lhs = play_metric(scheme, grid, &kept_vector, profile, player, metric)?;
                        let rhs =
                            play_metric(scheme, grid, &deviated_vector, profile, player, metric)?;
                        if rhs > lhs {
                            worst.offer(
                                &rhs - &lhs,
                                Witness {
                                    profile: profile.values().to_vec(),
                                    player: Some(player),
                                    announced: None,
                                    deviation: Some(DeviationRef::Strategy(deviation.label())),
                                    lhs: lhs.clone(),
                                    rhs,
                                    note: "deviation wins the played-vector comparison".into(),
                                },
                            );
                        }
                    }
                }
                Dominance::Less | Dominance::Incomparable => {
                    // The deviation is strictly better somewhere in the
                    // pointwise comparison; report the worst such point.
                    for profile in &profiles {
                        let prefix = &profile.values()[..player - 1];
                        let own = profile.get(player);
                        let a_mine = mine.announce(instance, prefix, own)?;
                        let a_theirs = theirs.announce(instance, prefix, own)?;
                        let v_mine =
                            simultaneous_metric(instance, scheme, metric, profile, player, a_mine);
                        let v_theirs = simultaneous_metric(
                            instance,
                            scheme,
                            metric,
                            profile,
                            player,
                            a_theirs.clone(),
                        );
                        if v_theirs > v_mine {
                            worst.offer(
                                &v_theirs - &v_mine,
                                Witness {
                                    profile: profile.values().to_vec(),
                                    player: Some(player),
                                    announced: Some(a_theirs),
                                    deviation: Some(DeviationRef::Strategy(deviation.label())),
                                    lhs: v_mine,
                                    rhs: v_theirs,
                                    note: "deviation not dominated pointwise".into(),
                                },
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(worst.into_verdict(property))
}

/// Cross-check of the claimed equivalence "optimal iff weakly dominant
/// against every deviation": under the final-utility metric the two agree;
/// under the decision-valuation metric they can part ways. The result
/// reports both sides instead of asserting either.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DominanceCrosscheck {
    pub strategy: String,
    pub player: usize,
    pub metric: Metric,
    pub optimal: bool,
    pub dominant: bool,
    pub agree: bool,
    /// Label of a deviation breaking dominance, when one exists.
    pub breaker: Option<String>,
}

pub fn dominance_optimality_crosscheck(
    scheme: &TaxScheme,
    grid: &Grid,
    strategy: &Strategy,
    universe: &DeviationUniverse,
    metric: Metric,
) -> Result<DominanceCrosscheck, Error> {
    let optimal = verify_optimal(strategy, grid)?.holds;
    let mut dominant = true;
    let mut breaker = None;
    for deviation in universe.for_player(strategy.player()) {
        match dominance_relation(scheme, grid, strategy, deviation, metric)? {
            Dominance::Greater | Dominance::Equal => {}
            Dominance::Less | Dominance::Incomparable => {
                dominant = false;
                breaker = Some(deviation.label());
                break;
            }
        }
    }
    Ok(DominanceCrosscheck {
        strategy: strategy.label(),
        player: strategy.player(),
        metric,
        optimal,
        dominant,
        agree: optimal == dominant,
        breaker,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ProjectInstance;
    use crate::rat::rat;

    fn grid3() -> Grid {
        Grid::new(ProjectInstance::new(3, rat("300")).unwrap(), 3).unwrap()
    }

    fn grid6() -> Grid {
        Grid::new(ProjectInstance::new(3, rat("300")).unwrap(), 6).unwrap()
    }

    #[test]
    fn dominance_examples_under_final_utility() {
        let grid = grid6();
        let scheme = TaxScheme::pivotal();
        for player in 1..=3 {
            // Reflexive: equal.
            assert_eq!(
                dominance_relation(
                    &scheme,
                    &grid,
                    &Strategy::optimal(player),
                    &Strategy::optimal(player),
                    Metric::FinalUtility,
                )
                .unwrap(),
                Dominance::Equal
            );
            // The optimal rule preserves the decision pointwise, so it ties
            // truth-telling in utility as well.
            assert_eq!(
                dominance_relation(
                    &scheme,
                    &grid,
                    &Strategy::optimal(player),
                    &Strategy::truth(player),
                    Metric::FinalUtility,
                )
                .unwrap(),
                Dominance::Equal
            );
        }
        // Truth strictly dominates the all-or-nothing rule in utility: the
        // greedy decision flips trigger taxes that swallow the gain.
        for player in 1..=2 {
            assert_eq!(
                dominance_relation(
                    &scheme,
                    &grid,
                    &Strategy::truth(player),
                    &Strategy::greedy(player),
                    Metric::FinalUtility,
                )
                .unwrap(),
                Dominance::Greater
            );
        }
    }

    #[test]
    fn decision_valuation_metric_tells_a_different_story() {
        // Measured by the pre-tax valuation of the induced decision, the
        // greedy rule weakly *beats* truth-telling (it always flips the
        // decision toward the sign of theta_i - c/n), which is exactly the
        // discrepancy the crosscheck reports.
        let grid = grid6();
        let scheme = TaxScheme::pivotal();
        assert_eq!(
            dominance_relation(
                &scheme,
                &grid,
                &Strategy::truth(1),
                &Strategy::greedy(1),
                Metric::DecisionValuation,
            )
            .unwrap(),
            Dominance::Less
        );

        let universe =
            DeviationUniverse::standard(&grid3(), &StrategyVector::by_name("truth", 3).unwrap())
                .unwrap();
        let check = dominance_optimality_crosscheck(
            &scheme,
            &grid3(),
            &Strategy::truth(1),
            &universe,
            Metric::DecisionValuation,
        )
        .unwrap();
        assert!(check.optimal);
        assert!(!check.dominant);
        assert!(!check.agree);
        assert_eq!(check.breaker.as_deref(), Some("greedy"));

        let check = dominance_optimality_crosscheck(
            &scheme,
            &grid3(),
            &Strategy::truth(1),
            &universe,
            Metric::FinalUtility,
        )
        .unwrap();
        assert!(check.agree, "{check:?}");
    }

    #[test]
    fn deviation_universe_size() {
        let grid = grid3();
        let vector = StrategyVector::by_name("thm3", 3).unwrap();
        let universe = DeviationUniverse::standard(&grid, &vector).unwrap();
        // 4 points per axis: named(4) + constants(4) + tabulation(1)
        // + mutations(4^i * 3).
        assert_eq!(universe.for_player(1).len(), 4 + 4 + 1 + 4 * 3);
        assert_eq!(universe.for_player(2).len(), 4 + 4 + 1 + 16 * 3);
        assert_eq!(universe.for_player(3).len(), 4 + 4 + 1 + 64 * 3);
    }
}
