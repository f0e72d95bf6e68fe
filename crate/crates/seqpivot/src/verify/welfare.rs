//! Welfare maximization over optimal announcement paths.
//!
//! An announcement path is *consistent with optimal play* when every
//! player's announcement is an optimal announcement at the announced
//! prefix it actually saw plus its own true type. Since optimality
//! constrains each input independently, those paths are exactly the plays
//! reachable by some vector of optimal strategies.

use crate::error::Error;
use crate::model::{outcome, ProjectInstance, TaxScheme, TypeProfile};
use crate::rat::Rat;
use crate::strategy::StrategyVector;
use crate::verdict::{Verdict, Witness, WorstWitness};
use crate::verify::grid::Grid;
use crate::verify::optset::opt_members;
use crate::{engine, strategy::Strategy};

/// The maximal social welfare over optimal announcement paths, with a
/// witnessing announced profile (the lexicographically smallest
/// maximizer).
#[derive(Debug, Clone, PartialEq)]
pub struct WelfareMax {
    pub social_welfare: Rat,
    pub announcements: TypeProfile,
}

/// Enumerate every announcement path in which each player, at the prefix
/// actually announced before it, picks some optimal announcement from the
/// grid; return the maximal social welfare and a witnessing path. True
/// types must lie on the grid (enrich it if needed) so that the truthful
/// announcement is always available, which keeps every stage's choice set
/// nonempty.
pub fn max_welfare_over_optimal(
    grid: &Grid,
    true_types: &TypeProfile,
) -> Result<WelfareMax, Error> {
    let instance = grid.instance();
    for v in true_types.values() {
        if !grid.contains(v) {
            return Err(Error::Config(format!(
                "true type {v} is not a grid point; enrich the grid"
            )));
        }
    }
    let scheme = TaxScheme::pivotal();
    let n = instance.players();
    let mut best: Option<WelfareMax> = None;
    let mut prefix: Vec<Rat> = Vec::with_capacity(n);
    descend(instance, &scheme, grid, true_types, &mut prefix, &mut best)?;
    best.ok_or_else(|| Error::InternalInvariant("no optimal path found".into()))
}

fn descend(
    instance: &ProjectInstance,
    scheme: &TaxScheme,
    grid: &Grid,
    true_types: &TypeProfile,
    prefix: &mut Vec<Rat>,
    best: &mut Option<WelfareMax>,
) -> Result<(), Error> {
    let stage = prefix.len() + 1;
    if stage > instance.players() {
        let announced = TypeProfile::new(instance, prefix.clone())?;
        let sw = outcome(instance, scheme, &announced, true_types).social_welfare;
        let better = match best {
            None => true,
            Some(b) => {
                sw > b.social_welfare
                    || (sw == b.social_welfare && announced.values() < b.announcements.values())
            }
        };
        if better {
            *best = Some(WelfareMax {
                social_welfare: sw,
                announcements: announced,
            });
        }
        return Ok(());
    }
    let own = true_types.get(stage);
    let choices = opt_members(instance, prefix, own, grid.points())?;
    debug_assert!(!choices.is_empty(), "truth keeps the choice set nonempty");
    for a in choices {
        prefix.push(a);
        descend(instance, scheme, grid, true_types, prefix, best)?;
        prefix.pop();
    }
    Ok(())
}

/// Certify that the socially optimal vector attains the welfare maximum:
/// at every grid profile, the social welfare of its sequential play equals
/// [`max_welfare_over_optimal`].
pub fn verify_welfare_maximality(grid: &Grid) -> Result<Verdict, Error> {
    let instance = grid.instance();
    let vector = StrategyVector::uniform(instance.players(), Strategy::socially_optimal);
    let scheme = TaxScheme::pivotal();
    let order = engine::PlayerOrder::identity(instance.players());
    let mut worst = WorstWitness::new();
    for profile in grid.profiles() {
        let played = engine::play(instance, &scheme, &order, &vector, &profile)?;
        let max = max_welfare_over_optimal(grid, &profile)?;
        if played.outcome.social_welfare != max.social_welfare {
            worst.offer(
                (&max.social_welfare - &played.outcome.social_welfare).abs(),
                Witness {
                    profile: profile.values().to_vec(),
                    player: None,
                    announced: None,
                    deviation: None,
                    lhs: played.outcome.social_welfare.clone(),
                    rhs: max.social_welfare.clone(),
                    note: format!(
                        "played welfare differs from the optimal-path maximum (witness path {:?})",
                        max.announcements.values()
                    ),
                },
            );
        }
    }
    Ok(worst.into_verdict("welfare_maximality[thm5]"))
}

/// Report, for a vector of strategies, at how many grid profiles its play
/// attains the optimal-path welfare maximum; used to compare the two named
/// vectors side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximalityReport {
    pub vector: String,
    pub profiles: usize,
    pub attains_maximum: usize,
    /// First profile where the maximum is missed, with (played, maximum).
    pub first_miss: Option<(Vec<Rat>, Rat, Rat)>,
}

pub fn welfare_maximality_report(
    grid: &Grid,
    vector: &StrategyVector,
) -> Result<MaximalityReport, Error> {
    let instance = grid.instance();
    let scheme = TaxScheme::pivotal();
    let order = engine::PlayerOrder::identity(instance.players());
    let profiles = grid.profiles();
    let mut attains = 0usize;
    let mut first_miss = None;
    for profile in &profiles {
        let played = engine::play(instance, &scheme, &order, vector, profile)?;
        let max = max_welfare_over_optimal(grid, profile)?;
        if played.outcome.social_welfare == max.social_welfare {
            attains += 1;
        } else if first_miss.is_none() {
            first_miss = Some((
                profile.values().to_vec(),
                played.outcome.social_welfare.clone(),
                max.social_welfare.clone(),
            ));
        }
    }
    Ok(MaximalityReport {
        vector: vector.label(),
        profiles: profiles.len(),
        attains_maximum: attains,
        first_miss,
    })
}
