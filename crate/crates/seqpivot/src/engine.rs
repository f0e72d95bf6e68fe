//! Sequential play: stage-by-stage announcements, player orders, pivotal
//! players, and the budget-balancing order search.
//!
//! Play proceeds through the positions of a [`PlayerOrder`]. The player at
//! each position sees the announcements made at earlier positions, feeds
//! them with its own true type to its strategy, and announces the result.
//! Strategies travel with players, not with positions: permuting the order
//! changes who sees whose announcements and who counts as the last mover,
//! but not which rule a player uses.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{outcome, pivotal_tax, Outcome, ProjectInstance, TaxScheme, TypeProfile};
use crate::rat::Rat;
use crate::strategy::{Strategy, StrategyVector};

/// A permutation of the players `1..=n`; position `k` moves at stage
/// `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlayerOrder(Vec<usize>);

impl PlayerOrder {
    pub fn new(order: Vec<usize>, n: usize) -> Result<Self, Error> {
        let mut seen = vec![false; n + 1];
        let valid = order.len() == n
            && order.iter().all(|&p| {
                if p == 0 || p > n || seen[p] {
                    false
                } else {
                    seen[p] = true;
                    true
                }
            });
        if !valid {
            return Err(Error::InvalidOrder { order, n });
        }
        Ok(PlayerOrder(order))
    }

    /// The identity order `1, 2, ..., n`.
    pub fn identity(n: usize) -> Self {
        PlayerOrder((1..=n).collect())
    }

    pub fn players(&self) -> &[usize] {
        &self.0
    }

    pub fn last_player(&self) -> usize {
        *self.0.last().expect("orders are nonempty")
    }

    /// All `n!` orders in lexicographic sequence. Guarded: refuses above
    /// `n = 8`.
    pub fn all(n: usize) -> Result<Vec<PlayerOrder>, Error> {
        const LIMIT: usize = 8;
        if n > LIMIT {
            return Err(Error::TooManyOrders { n, limit: LIMIT });
        }
        let mut current: Vec<usize> = (1..=n).collect();
        let mut out = vec![PlayerOrder(current.clone())];
        // next_permutation in lexicographic order
        while let Some(i) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| current[i] < current[i + 1])
        {
            let j = (i + 1..n)
                .rev()
                .find(|&j| current[j] > current[i])
                .expect("exists");
            current.swap(i, j);
            current[i + 1..].reverse();
            out.push(PlayerOrder(current.clone()));
        }
        Ok(out)
    }
}

impl std::fmt::Display for PlayerOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// One stage of a play: who moved, what they saw, what they announced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub player: usize,
    pub prefix: Vec<Rat>,
    pub announcement: Rat,
}

/// A full sequential play: the order, the true types, the final announced
/// profile (in original player indexing), the per-stage records, and the
/// resulting outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayTrace {
    pub order: PlayerOrder,
    pub true_types: TypeProfile,
    pub announcements: TypeProfile,
    pub per_stage: Vec<Stage>,
    pub outcome: Outcome,
}

/// Play the sequential mechanism: each player in order announces the value
/// of its strategy at the announced prefix of its predecessors plus its own
/// true type; the outcome is then computed from the full announced profile
/// against the true types.
pub fn play(
    instance: &ProjectInstance,
    scheme: &TaxScheme,
    order: &PlayerOrder,
    strategies: &StrategyVector,
    true_types: &TypeProfile,
) -> Result<PlayTrace, Error> {
    let n = instance.players();
    if strategies.len() != n {
        return Err(Error::WrongLength {
            expected: n,
            got: strategies.len(),
        });
    }
    let mut prefix: Vec<Rat> = Vec::with_capacity(n);
    let mut per_stage = Vec::with_capacity(n);
    let mut announcements = true_types.values().to_vec();
    for &player in order.players() {
        let own = true_types.get(player);
        let announced = strategies.get(player).announce(instance, &prefix, own)?;
        per_stage.push(Stage {
            player,
            prefix: prefix.clone(),
            announcement: announced.clone(),
        });
        announcements[player - 1] = announced.clone();
        prefix.push(announced);
    }
    let announcements = TypeProfile::new(instance, announcements)?;
    let outcome = outcome(instance, scheme, &announcements, true_types);
    Ok(PlayTrace {
        order: order.clone(),
        true_types: true_types.clone(),
        announcements,
        per_stage,
        outcome,
    })
}

/// A player is pivotal at a profile when its pivotal tax there is nonzero.
pub fn is_pivotal(instance: &ProjectInstance, profile: &TypeProfile, player: usize) -> bool {
    !pivotal_tax(instance, profile)[player - 1].is_zero()
}

/// Search for a player order whose sequential play of the optimal
/// deficit-reducing strategies collects no taxes at all.
///
/// Candidate orders are scanned lexicographically; an order qualifies when
/// its last player is not pivotal at the true profile, and the play is
/// verified to produce an all-zero tax vector before returning. A
/// non-pivotal player always exists and the verification always succeeds;
/// either failing signals a bug, not a property of the input.
pub fn find_budget_balanced_order(
    instance: &ProjectInstance,
    true_types: &TypeProfile,
) -> Result<(PlayerOrder, PlayTrace), Error> {
    let n = instance.players();
    let strategies = StrategyVector::uniform(n, Strategy::optimal);
    let scheme = TaxScheme::pivotal();
    for order in PlayerOrder::all(n)? {
        if is_pivotal(instance, true_types, order.last_player()) {
            continue;
        }
        let trace = play(instance, &scheme, &order, &strategies, true_types)?;
        if trace.outcome.taxes.iter().all(|t| t.is_zero()) {
            return Ok((order, trace));
        }
        return Err(Error::InternalInvariant(format!(
            "order {order} ends in non-pivotal player {} but play taxes are {:?}",
            order.last_player(),
            trace.outcome.taxes
        )));
    }
    Err(Error::InternalInvariant(format!(
        "no non-pivotal last player at {:?}",
        true_types.values()
    )))
}

/// Play every permutation of the players, in lexicographic order of the
/// permutations. Evaluation is parallel but the result sequence is
/// identical to sequential evaluation.
pub fn sweep_orders(
    instance: &ProjectInstance,
    scheme: &TaxScheme,
    strategies: &StrategyVector,
    true_types: &TypeProfile,
) -> Result<Vec<(PlayerOrder, PlayTrace)>, Error> {
    let orders = PlayerOrder::all(instance.players())?;
    orders
        .into_par_iter()
        .map(|order| {
            let trace = play(instance, scheme, &order, strategies, true_types)?;
            Ok((order, trace))
        })
        .collect()
}
