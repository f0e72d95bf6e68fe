//! Grid-quantified certification checks: strategy optimality, social
//! optimality, structural constraints on optimal announcements, incentive
//! compatibility, and optimality invariance across Groves members.

use crate::error::Error;
use crate::model::{
    final_utility, mechanism_predicates, outcome, GrovesSpec, TaxScheme, TypeProfile,
};
use crate::rat::Rat;
use crate::strategy::{grid_inputs, Strategy};
use crate::verdict::{DeviationRef, Verdict, Witness, WorstWitness};
use crate::verify::grid::Grid;
use crate::verify::optset::{cartesian, opt_members, opt_membership};

fn full_profile(prefix: &[Rat], own: &Rat, tail: &[Rat]) -> Vec<Rat> {
    let mut values = prefix.to_vec();
    values.push(own.clone());
    values.extend(tail.iter().cloned());
    values
}

/// Certify that a strategy is optimal in the sequential pivotal mechanism:
/// at every grid input, its announcement is weakly best against every
/// achievable continuation and every alternative announcement. Exact in
/// the continuation (tails range over the continuous type space); the
/// failing witness is the most profitable alternative found.
pub fn verify_optimal(strategy: &Strategy, grid: &Grid) -> Result<Verdict, Error> {
    let instance = grid.instance();
    let player = strategy.player();
    instance.check_player(player)?;
    let mut worst = WorstWitness::new();
    for (prefix, own) in grid_inputs(grid.points(), player) {
        let announced = strategy.announce(instance, &prefix, &own)?;
        if let Some(excl) = opt_membership(instance, &prefix, &own, &announced)? {
            worst.offer(
                excl.margin(),
                Witness {
                    profile: full_profile(&prefix, &own, &excl.tail),
                    player: Some(player),
                    announced: Some(announced),
                    deviation: Some(DeviationRef::Announcement(excl.alternative.clone())),
                    lhs: excl.candidate_utility.clone(),
                    rhs: excl.alternative_utility.clone(),
                    note: "a better announcement exists against this continuation".into(),
                },
            );
        }
    }
    Ok(worst.into_verdict(format!("optimal[{},player={player}]", strategy.label())))
}

/// Certify that a strategy is socially optimal: optimal, and at every grid
/// input and grid continuation its announcement yields weakly the highest
/// social welfare among all optimal announcements.
pub fn verify_socially_optimal(strategy: &Strategy, grid: &Grid) -> Result<Verdict, Error> {
    let instance = grid.instance();
    let player = strategy.player();
    let property = format!("socially_optimal[{},player={player}]", strategy.label());

    let optimality = verify_optimal(strategy, grid)?;
    if !optimality.holds {
        let mut witness = optimality.witness.expect("failed verdict carries witness");
        witness.note = format!("not even optimal: {}", witness.note);
        return Ok(Verdict::fail(property, witness));
    }

    let scheme = TaxScheme::pivotal();
    let n = instance.players();
    let mut worst = WorstWitness::new();
    for (prefix, own) in grid_inputs(grid.points(), player) {
        let announced = strategy.announce(instance, &prefix, &own)?;
        let members = opt_members(instance, &prefix, &own, grid.points())?;
        for tail in cartesian(grid.points(), n - player) {
            let true_types = TypeProfile::new(instance, full_profile(&prefix, &own, &tail))?;
            let sw_of = |a: &Rat| -> Result<Rat, Error> {
                let announced_profile = true_types.with_replaced(player, a.clone());
                Ok(outcome(instance, &scheme, &announced_profile, &true_types).social_welfare)
            };
            let sw_mine = sw_of(&announced)?;
            for b in &members {
                let sw_alt = sw_of(b)?;
                if sw_alt > sw_mine {
                    worst.offer(
                        &sw_alt - &sw_mine,
                        Witness {
                            profile: true_types.values().to_vec(),
                            player: Some(player),
                            announced: Some(announced.clone()),
                            deviation: Some(DeviationRef::Announcement(b.clone())),
                            lhs: sw_mine.clone(),
                            rhs: sw_alt,
                            note: "another optimal announcement yields higher social welfare"
                                .into(),
                        },
                    );
                }
            }
        }
    }
    Ok(worst.into_verdict(property))
}

/// Structural constraints every optimal announcement obeys, checked for
/// every player over every grid input:
///
/// 1. running sum below the cost, not the last mover: only the truthful
///    announcement is optimal;
/// 2. running sum below the cost, last mover: every optimal announcement
///    keeps the announced sum below the cost;
/// 3. running sum exactly the cost, not the last mover: every optimal
///    announcement is at least the true type;
/// 4. running sum above the cost: every optimal announcement keeps the
///    prefix-plus-announcement sum at least the cost.
pub fn verify_opt_constraints(grid: &Grid) -> Result<Verdict, Error> {
    let instance = grid.instance();
    let n = instance.players();
    let c = instance.cost();
    let mut worst = WorstWitness::new();
    for player in 1..=n {
        for (prefix, own) in grid_inputs(grid.points(), player) {
            let members = opt_members(instance, &prefix, &own, grid.points())?;
            let prefix_sum: Rat = prefix.iter().sum();
            let running = &prefix_sum + &own;
            for a in &members {
                let violation: Option<(String, Rat, Rat)> = if running < *c && player < n {
                    (a != &own).then(|| {
                        (
                            "below cost, mid-order: only truth is optimal".into(),
                            a.clone(),
                            own.clone(),
                        )
                    })
                } else if running < *c && player == n {
                    let announced_sum = &prefix_sum + a;
                    (announced_sum >= *c).then(|| {
                        (
                            "below cost, last mover: announced sum must stay below the cost".into(),
                            announced_sum,
                            c.clone(),
                        )
                    })
                } else if running == *c && player < n {
                    (a < &own).then(|| {
                        (
                            "at cost, mid-order: announcement must not fall below the type".into(),
                            a.clone(),
                            own.clone(),
                        )
                    })
                } else if running > *c {
                    let announced_sum = &prefix_sum + a;
                    (announced_sum < *c).then(|| {
                        (
                            "above cost: announced sum must reach the cost".into(),
                            announced_sum,
                            c.clone(),
                        )
                    })
                } else {
                    None // running == cost for the last mover: unconstrained
                };
                if let Some((note, lhs, rhs)) = violation {
                    worst.offer(
                        (&lhs - &rhs).abs(),
                        Witness {
                            profile: full_profile(&prefix, &own, &vec![Rat::zero(); n - player]),
                            player: Some(player),
                            announced: Some(a.clone()),
                            deviation: None,
                            lhs,
                            rhs,
                            note,
                        },
                    );
                }
            }
        }
    }
    Ok(worst.into_verdict("opt_constraints"))
}

/// Incentive compatibility over the grid: truthful reporting is a best
/// response to every profile against every unilateral grid deviation.
pub fn verify_ic(scheme: &TaxScheme, grid: &Grid) -> Result<Verdict, Error> {
    let preds = mechanism_predicates(grid.instance(), scheme, &grid.profiles(), grid.points());
    Ok(preds.incentive_compatible)
}

/// Grid-tail optimality verdict under an explicit tax scheme: the
/// brute-force double loop, used where scheme-specific utilities matter
/// and as the independent oracle for [`verify_optimal`].
pub fn grid_optimal_verdict(
    strategy: &Strategy,
    scheme: &TaxScheme,
    grid: &Grid,
) -> Result<Verdict, Error> {
    let instance = grid.instance();
    let player = strategy.player();
    instance.check_player(player)?;
    let n = instance.players();
    let mut worst = WorstWitness::new();
    for (prefix, own) in grid_inputs(grid.points(), player) {
        let announced = strategy.announce(instance, &prefix, &own)?;
        for tail in cartesian(grid.points(), n - player) {
            let base = TypeProfile::new(instance, full_profile(&prefix, &own, &tail))?;
            let mine = final_utility(
                instance,
                scheme,
                &base.with_replaced(player, announced.clone()),
                player,
                &own,
            );
            for b in grid.points() {
                let alt = final_utility(
                    instance,
                    scheme,
                    &base.with_replaced(player, b.clone()),
                    player,
                    &own,
                );
                if alt > mine {
                    worst.offer(
                        &alt - &mine,
                        Witness {
                            profile: base.values().to_vec(),
                            player: Some(player),
                            announced: Some(announced.clone()),
                            deviation: Some(DeviationRef::Announcement(b.clone())),
                            lhs: mine.clone(),
                            rhs: alt,
                            note: format!("better announcement under {}", scheme.name()),
                        },
                    );
                }
            }
        }
    }
    Ok(worst.into_verdict(format!(
        "grid_optimal[{},player={player},{}]",
        strategy.label(),
        scheme.name()
    )))
}

/// A strategy is optimal in one sequential Groves mechanism iff it is
/// optimal in any other: check that the grid optimality verdicts under two
/// `h` families agree.
pub fn verify_groves_invariance(
    strategy: &Strategy,
    grid: &Grid,
    spec_a: &GrovesSpec,
    spec_b: &GrovesSpec,
) -> Result<Verdict, Error> {
    let verdict_a = grid_optimal_verdict(strategy, &TaxScheme::Groves(spec_a.clone()), grid)?;
    let verdict_b = grid_optimal_verdict(strategy, &TaxScheme::Groves(spec_b.clone()), grid)?;
    let property = format!(
        "groves_invariance[{},player={},{}~{}]",
        strategy.label(),
        strategy.player(),
        spec_a.name(),
        spec_b.name()
    );
    if verdict_a.holds == verdict_b.holds {
        Ok(Verdict::pass(property))
    } else {
        let (side, mut witness) = if verdict_a.holds {
            (spec_b.name(), verdict_b.witness.expect("failing side"))
        } else {
            (spec_a.name(), verdict_a.witness.expect("failing side"))
        };
        witness.note = format!("optimality verdicts disagree; counterexample under {side}");
        Ok(Verdict::fail(property, witness))
    }
}

/// Repeat-evaluation purity check for an `h` family over the grid.
pub fn verify_spec_determinism(spec: &GrovesSpec, grid: &Grid) -> Result<Verdict, Error> {
    let instance = grid.instance();
    for profile in grid.profiles() {
        for player in 1..=instance.players() {
            let others: Vec<Rat> = profile
                .values()
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != player - 1)
                .map(|(_, v)| v.clone())
                .collect();
            let first = spec.h_value(instance, player, &others);
            let second = spec.h_value(instance, player, &others);
            if first != second {
                return Ok(Verdict::fail(
                    format!("spec_determinism[{}]", spec.name()),
                    Witness {
                        profile: profile.values().to_vec(),
                        player: Some(player),
                        announced: None,
                        deviation: None,
                        lhs: first,
                        rhs: second,
                        note: "h returned different values on repeat evaluation".into(),
                    },
                ));
            }
        }
    }
    Ok(Verdict::pass(format!("spec_determinism[{}]", spec.name())))
}
