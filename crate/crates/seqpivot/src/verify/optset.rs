//! Optimal announcement sets.
//!
//! At an announced prefix `p` and own true type `theta`, an announcement
//! `a` is *optimal* when no alternative announcement does strictly better
//! against any way the remaining players could announce. For the pivotal
//! mechanism (indeed for every Groves member; the `h` offsets cancel in
//! comparisons) the final utility of player `i` depends on the others'
//! announcements only through their sum `S`, and
//!
//! ```text
//! u(fund at S) - u(cancel at S) = S + theta - c
//! ```
//!
//! so funding is strictly better above `S = c - theta`, cancelling is
//! strictly better below it, and the two tie exactly at it. Announcement
//! `a` funds exactly when `S >= c - a`. `a` is therefore suboptimal iff
//! an achievable others-sum falls where `a` takes the strictly worse
//! side:
//!
//! - `a < theta`: `a` cancels while funding is strictly better, i.e.
//!   some `S` in the open interval `(c - theta, c - a)`;
//! - `a > theta`: `a` funds while cancelling is strictly better, i.e.
//!   some `S` in the half-open interval `[c - a, c - theta)`.
//!
//! The achievable others-sums are `[P, P + r c]` with `P` the prefix sum
//! and `r` the number of players still to move. Membership is decided by
//! exact interval intersection — the tail quantifier effectively ranges
//! over the whole continuous type space, not just grid tails, and every
//! exclusion carries a concrete witness tail. A brute-force double loop
//! over grid tails ([`grid_opt_members`]) is kept as an independent
//! oracle; it can only be coarser (it misses tails between grid points),
//! never finer.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::model::{final_utility, ProjectInstance, TaxScheme, TypeProfile};
use crate::rat::Rat;
use crate::strategy::{grid_inputs, StrategyInput};
use crate::verify::grid::Grid;

/// Why a candidate announcement is not optimal: a concrete tail and a
/// concrete better alternative, with both utilities.
#[derive(Debug, Clone, PartialEq)]
pub struct OptExclusion {
    /// Announcements of the players still to move.
    pub tail: Vec<Rat>,
    /// An alternative announcement that does strictly better there (the
    /// truthful announcement always works, and is what gets reported).
    pub alternative: Rat,
    /// Utility of the candidate against this tail.
    pub candidate_utility: Rat,
    /// Utility of the alternative against this tail.
    pub alternative_utility: Rat,
}

impl OptExclusion {
    pub fn margin(&self) -> Rat {
        &self.alternative_utility - &self.candidate_utility
    }
}

/// Is announcing `candidate` at `(prefix, own)` weakly best against every
/// achievable continuation? Returns the exclusion witness when not.
pub fn opt_membership(
    instance: &ProjectInstance,
    prefix: &[Rat],
    own: &Rat,
    candidate: &Rat,
) -> Result<Option<OptExclusion>, Error> {
    let n = instance.players();
    let stage = prefix.len() + 1;
    if stage > n {
        return Err(Error::PrefixLength {
            player: stage,
            expected: n - 1,
            got: prefix.len(),
        });
    }
    instance.check_type(own)?;
    instance.check_type(candidate)?;
    for p in prefix {
        instance.check_type(p)?;
    }
    if candidate == own {
        return Ok(None);
    }

    let c = instance.cost();
    let remaining = n - stage;
    let prefix_sum: Rat = prefix.iter().sum();
    let lo = prefix_sum.clone();
    let hi = &prefix_sum + c * Rat::from_int(remaining as i64);
    let tie = c - own; // funding beats cancelling strictly above this sum

    // The bad region for the candidate, as (lower, lower_open, upper,
    // upper_open); empty when candidate == own.
    let (lower, lower_open, upper, upper_open) = if candidate < own {
        (tie.clone(), true, c - candidate, true)
    } else {
        (c - candidate, false, tie.clone(), true)
    };

    // Intersect with the achievable [lo, hi] and pick a witness sum,
    // preferring the attainable end with the largest utility margin
    // (|S - tie| grows away from the tie point).
    let (eff_lower, eff_lower_open) = if lo > lower {
        (lo.clone(), false)
    } else {
        (lower, lower_open)
    };
    let (eff_upper, eff_upper_open) = if hi < upper {
        (hi.clone(), false)
    } else {
        (upper, upper_open)
    };

    let witness_sum = if eff_lower < eff_upper {
        if candidate < own {
            // margin grows toward the upper end
            if eff_upper_open {
                Some(Rat::midpoint(&eff_lower, &eff_upper))
            } else {
                Some(eff_upper)
            }
        } else {
            // margin grows toward the lower end
            if eff_lower_open {
                Some(Rat::midpoint(&eff_lower, &eff_upper))
            } else {
                Some(eff_lower)
            }
        }
    } else if eff_lower == eff_upper && !eff_lower_open && !eff_upper_open {
        Some(eff_lower)
    } else {
        None
    };

    let Some(sum) = witness_sum else {
        return Ok(None);
    };

    // Distribute the tail sum over the remaining players.
    let mut tail = Vec::with_capacity(remaining);
    let mut left = &sum - &prefix_sum;
    for _ in 0..remaining {
        let coord = left.clone().min(c.clone());
        left = &left - &coord;
        tail.push(coord);
    }
    debug_assert!(left.is_zero());

    // Score candidate vs. the truthful alternative through the model.
    let scheme = TaxScheme::pivotal();
    let mut values: Vec<Rat> = prefix.to_vec();
    values.push(candidate.clone());
    values.extend(tail.iter().cloned());
    let announced = TypeProfile::new(instance, values)?;
    let candidate_utility = final_utility(instance, &scheme, &announced, stage, own);
    let alt_announced = announced.with_replaced(stage, own.clone());
    let alternative_utility = final_utility(instance, &scheme, &alt_announced, stage, own);
    debug_assert!(alternative_utility > candidate_utility);

    Ok(Some(OptExclusion {
        tail,
        alternative: own.clone(),
        candidate_utility,
        alternative_utility,
    }))
}

/// The optimal announcements among `candidates` at `(prefix, own)`.
pub fn opt_members(
    instance: &ProjectInstance,
    prefix: &[Rat],
    own: &Rat,
    candidates: &[Rat],
) -> Result<Vec<Rat>, Error> {
    let mut members = Vec::new();
    for a in candidates {
        if opt_membership(instance, prefix, own, a)?.is_none() {
            members.push(a.clone());
        }
    }
    Ok(members)
}

/// The optimal-announcement table of one player over a grid: for every
/// grid input `(prefix, own)`, the set of grid announcements that are
/// weakly best against every achievable continuation and alternative.
#[derive(Debug, Clone, PartialEq)]
pub struct OptSet {
    player: usize,
    entries: BTreeMap<StrategyInput, Vec<Rat>>,
}

impl OptSet {
    pub fn player(&self) -> usize {
        self.player
    }

    pub fn members(&self, prefix: &[Rat], own: &Rat) -> Option<&[Rat]> {
        self.entries
            .get(&(prefix.to_vec(), own.clone()))
            .map(|v| v.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StrategyInput, &Vec<Rat>)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Materialize the optimal-announcement table for `player` over the grid.
pub fn compute_opt_set(grid: &Grid, player: usize) -> Result<OptSet, Error> {
    let instance = grid.instance();
    instance.check_player(player)?;
    let mut entries = BTreeMap::new();
    for (prefix, own) in grid_inputs(grid.points(), player) {
        let members = opt_members(instance, &prefix, &own, grid.points())?;
        entries.insert((prefix, own), members);
    }
    Ok(OptSet { player, entries })
}

/// Brute-force oracle: optimal announcements among `grid` candidates when
/// the tail quantifier ranges over grid tails only, under an explicit tax
/// scheme. Coarser than [`opt_members`] (off-grid tails are invisible to
/// it) but computed by an independent path: full outcome evaluation and a
/// per-tail argmax.
pub fn grid_opt_members(
    instance: &ProjectInstance,
    scheme: &TaxScheme,
    points: &[Rat],
    prefix: &[Rat],
    own: &Rat,
) -> Result<Vec<Rat>, Error> {
    let n = instance.players();
    let stage = prefix.len() + 1;
    let remaining = n - stage;
    let mut survivors: Vec<Rat> = points.to_vec();
    for tail in cartesian(points, remaining) {
        let utility = |a: &Rat| -> Result<Rat, Error> {
            let mut values: Vec<Rat> = prefix.to_vec();
            values.push(a.clone());
            values.extend(tail.iter().cloned());
            let announced = TypeProfile::new(instance, values)?;
            Ok(final_utility(instance, scheme, &announced, stage, own))
        };
        let mut best: Option<Rat> = None;
        let mut scored = Vec::with_capacity(points.len());
        for a in points {
            let u = utility(a)?;
            if best.as_ref().is_none_or(|b| u > *b) {
                best = Some(u.clone());
            }
            scored.push((a.clone(), u));
        }
        let best = best.expect("grids are nonempty");
        survivors.retain(|a| {
            scored
                .iter()
                .find(|(cand, _)| cand == a)
                .map(|(_, u)| *u == best)
                .unwrap_or(false)
        });
        if survivors.is_empty() {
            break;
        }
    }
    Ok(survivors)
}

/// All tuples of length `len` over `points`, lexicographic.
pub(crate) fn cartesian(points: &[Rat], len: usize) -> Vec<Vec<Rat>> {
    let mut out: Vec<Vec<Rat>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * points.len());
        for t in &out {
            for p in points {
                let mut u = t.clone();
                u.push(p.clone());
                next.push(u);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn inst3() -> ProjectInstance {
        ProjectInstance::new(3, rat("300")).unwrap()
    }

    fn rats(vals: &[&str]) -> Vec<Rat> {
        vals.iter().map(|v| rat(v)).collect()
    }

    #[test]
    fn truth_is_always_a_member() {
        let inst = inst3();
        let grid = Grid::new(inst.clone(), 6).unwrap();
        for player in 1..=3 {
            let set = compute_opt_set(&grid, player).unwrap();
            for ((prefix, own), members) in set.iter() {
                assert!(
                    members.contains(own),
                    "truth excluded at prefix {prefix:?}, own {own}"
                );
                assert!(!members.is_empty());
            }
        }
    }

    #[test]
    fn last_mover_tie_admits_every_announcement() {
        // Prefix (110, 80), own 110: the announced sum sits exactly at the
        // cost, so funding and cancelling tie and every announcement is
        // optimal — including 110, 300, and everything that funds.
        let inst = inst3();
        let grid = Grid::new(inst.clone(), 6)
            .unwrap()
            .enrich(&rats(&["110", "80"]))
            .unwrap();
        let members =
            opt_members(&inst, &rats(&["110", "80"]), &rat("110"), grid.points()).unwrap();
        assert_eq!(members, grid.points());
    }

    #[test]
    fn first_mover_overclaim_is_excluded_with_a_tail_witness() {
        let inst = inst3();
        // own 110: claiming 300 funds the project against tails that make
        // it a loss; truth survives, and here it is the only survivor.
        let excl = opt_membership(&inst, &[], &rat("110"), &rat("300"))
            .unwrap()
            .expect("300 must be excluded");
        assert!(excl.alternative_utility > excl.candidate_utility);
        // the witness tail funds the project against player 1's interest
        let total: Rat = excl.tail.iter().sum::<Rat>() + rat("300");
        assert!(total >= rat("300"));

        let grid = Grid::new(inst.clone(), 6)
            .unwrap()
            .enrich(&[rat("110")])
            .unwrap();
        let members = opt_members(&inst, &[], &rat("110"), grid.points()).unwrap();
        assert_eq!(members, rats(&["110"]));
    }

    #[test]
    fn exclusions_cite_genuine_violations() {
        let inst = inst3();
        let grid = Grid::new(inst.clone(), 3).unwrap();
        let scheme = TaxScheme::pivotal();
        for (prefix, own) in grid_inputs(grid.points(), 2) {
            for a in grid.points() {
                if let Some(excl) = opt_membership(&inst, &prefix, &own, a).unwrap() {
                    // Re-derive both utilities from the model.
                    let mut values = prefix.clone();
                    values.push(a.clone());
                    values.extend(excl.tail.iter().cloned());
                    let announced = TypeProfile::new(&inst, values).unwrap();
                    let u_cand = final_utility(&inst, &scheme, &announced, 2, &own);
                    let u_alt = final_utility(
                        &inst,
                        &scheme,
                        &announced.with_replaced(2, excl.alternative.clone()),
                        2,
                        &own,
                    );
                    assert_eq!(u_cand, excl.candidate_utility);
                    assert_eq!(u_alt, excl.alternative_utility);
                    assert!(u_alt > u_cand);
                }
            }
        }
    }

    #[test]
    fn exact_members_refine_the_grid_oracle() {
        // Exact membership quantifies tails over the continuous domain, so
        // it can only exclude more than the grid-tail double loop. Where
        // both see a decision-relevant tail they agree; the exact test
        // additionally kills marginal under-announcements whose bad region
        // falls between grid sums.
        let inst = inst3();
        let scheme = TaxScheme::pivotal();
        for steps in [3usize, 6] {
            let grid = Grid::new(inst.clone(), steps).unwrap();
            for player in 1..=3 {
                for (prefix, own) in grid_inputs(grid.points(), player) {
                    let exact = opt_members(&inst, &prefix, &own, grid.points()).unwrap();
                    let coarse =
                        grid_opt_members(&inst, &scheme, grid.points(), &prefix, &own).unwrap();
                    for a in &exact {
                        assert!(
                            coarse.contains(a),
                            "player {player}, prefix {prefix:?}, own {own}: exact member {a} \
                             missing from the grid oracle"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn last_mover_sets_match_the_grid_oracle_exactly() {
        // With no players left to move there are no off-grid tails, so the
        // two computations must agree point for point.
        let inst = inst3();
        let scheme = TaxScheme::pivotal();
        let grid = Grid::new(inst.clone(), 3)
            .unwrap()
            .enrich(&rats(&["110", "80"]))
            .unwrap();
        for (prefix, own) in grid_inputs(grid.points(), 3) {
            let exact = opt_members(&inst, &prefix, &own, grid.points()).unwrap();
            let coarse = grid_opt_members(&inst, &scheme, grid.points(), &prefix, &own).unwrap();
            assert_eq!(exact, coarse, "prefix {prefix:?}, own {own}");
        }
    }
}
