//! The public project problem and its direct mechanisms.
//!
//! A project of cost `c` is either built or cancelled by `n` players whose
//! private values lie in `[0, c]`. The efficient decision rule builds the
//! project exactly when the announced values sum to at least `c` (the
//! boundary case counts as building; there is no tolerance). Taxes come
//! from the Groves family, `t_i = sum_{j != i} v_j(f(theta), theta_j) +
//! h_i(theta_{-i})`; the pivotal (VCG) member uses
//! `h_i = -max_d sum_{j != i} v_j(d, theta_j)` and is implemented both via
//! that definition and via its closed form, which stay in exact agreement.
//!
//! Decisions and taxes are always computed from *announced* profiles;
//! utilities and social welfare are always computed against *true* types.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rat::Rat;
use crate::verdict::{DeviationRef, Verdict, Witness, WorstWitness};

/// A public project instance: player count and project cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectInstance {
    n: usize,
    cost: Rat,
}

impl ProjectInstance {
    pub fn new(n: usize, cost: Rat) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::PlayerCount(n));
        }
        if !cost.is_positive() {
            return Err(Error::NonPositiveCost(cost.to_string()));
        }
        Ok(ProjectInstance { n, cost })
    }

    pub fn players(&self) -> usize {
        self.n
    }

    pub fn cost(&self) -> &Rat {
        &self.cost
    }

    /// Per-player cost share `c/n` (derived, never stored).
    pub fn share(&self) -> Rat {
        &self.cost / Rat::from_int(self.n as i64)
    }

    /// `(n-1) c / n`, the pivotality threshold on the others' sum.
    pub fn others_share(&self) -> Rat {
        &self.cost * Rat::from_int(self.n as i64 - 1) / Rat::from_int(self.n as i64)
    }

    pub fn check_player(&self, index: usize) -> Result<(), Error> {
        if index == 0 || index > self.n {
            return Err(Error::PlayerIndex { index, n: self.n });
        }
        Ok(())
    }

    pub fn check_type(&self, value: &Rat) -> Result<(), Error> {
        if value.is_negative() || value > &self.cost {
            return Err(Error::TypeOutOfRange {
                value: value.to_string(),
                cost: self.cost.to_string(),
            });
        }
        Ok(())
    }
}

/// A vector of `n` types in `[0, c]`; serves both true and announced
/// profiles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TypeProfile(Vec<Rat>);

impl TypeProfile {
    pub fn new(instance: &ProjectInstance, values: Vec<Rat>) -> Result<Self, Error> {
        if values.len() != instance.players() {
            return Err(Error::WrongLength {
                expected: instance.players(),
                got: values.len(),
            });
        }
        for v in &values {
            instance.check_type(v)?;
        }
        Ok(TypeProfile(values))
    }

    pub fn values(&self) -> &[Rat] {
        &self.0
    }

    /// 1-based access.
    pub fn get(&self, player: usize) -> &Rat {
        &self.0[player - 1]
    }

    pub fn sum(&self) -> Rat {
        self.0.iter().sum()
    }

    /// Sum over everyone but `player` (1-based).
    pub fn sum_without(&self, player: usize) -> Rat {
        self.0
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != player - 1)
            .map(|(_, v)| v)
            .sum()
    }

    /// Copy with entry `player` (1-based) replaced.
    pub fn with_replaced(&self, player: usize, value: Rat) -> TypeProfile {
        let mut values = self.0.clone();
        values[player - 1] = value;
        TypeProfile(values)
    }
}

/// The binary collective decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Cancel,
    Build,
}

impl Decision {
    pub fn as_u8(self) -> u8 {
        match self {
            Decision::Cancel => 0,
            Decision::Build => 1,
        }
    }

    pub fn is_build(self) -> bool {
        matches!(self, Decision::Build)
    }
}

impl Serialize for Decision {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(self.as_u8())
    }
}

impl<'de> Deserialize<'de> for Decision {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match u8::deserialize(d)? {
            0 => Ok(Decision::Cancel),
            1 => Ok(Decision::Build),
            other => Err(serde::de::Error::custom(format!(
                "decision must be 0 or 1, got {other}"
            ))),
        }
    }
}

/// `v_i(d, theta_i) = d (theta_i - c/n)`.
pub fn valuation(instance: &ProjectInstance, d: Decision, theta_i: &Rat) -> Result<Rat, Error> {
    instance.check_type(theta_i)?;
    Ok(match d {
        Decision::Cancel => Rat::zero(),
        Decision::Build => theta_i - instance.share(),
    })
}

/// Efficient decision rule: build iff the values sum to at least `c`.
pub fn decide(instance: &ProjectInstance, profile: &TypeProfile) -> Decision {
    if profile.sum() >= *instance.cost() {
        Decision::Build
    } else {
        Decision::Cancel
    }
}

/// Signature of a custom `h` component: `(instance, player, others)`.
pub type HFn = Arc<dyn Fn(&ProjectInstance, usize, &[Rat]) -> Rat + Send + Sync>;

/// The `h` family of a Groves mechanism: per player, a function of the
/// other players' announced types only. Pure and deterministic.
#[derive(Clone)]
pub enum GrovesSpec {
    /// `h_i = -max_d sum_{j != i} v_j(d, theta_j)`; yields the pivotal
    /// (VCG) mechanism, which is pay-only.
    Pivotal,
    /// `h_i` identically equal to a constant (0 gives the bare
    /// externality tax `t_i = sum_{j != i} v_j`).
    ConstantH(Rat),
    /// Arbitrary `h_i(instance, i, others)` for experiments. The closure
    /// must depend only on `others` and be deterministic.
    Custom { name: String, h: HFn },
}

impl GrovesSpec {
    pub fn h_zero() -> Self {
        GrovesSpec::ConstantH(Rat::zero())
    }

    pub fn name(&self) -> String {
        match self {
            GrovesSpec::Pivotal => "pivotal".into(),
            GrovesSpec::ConstantH(k) if k.is_zero() => "hzero".into(),
            GrovesSpec::ConstantH(k) => format!("h={k}"),
            GrovesSpec::Custom { name, .. } => name.clone(),
        }
    }

    /// Evaluate `h_i` on the other players' announced types, given in
    /// original player order with player `i` removed.
    pub fn h_value(&self, instance: &ProjectInstance, player: usize, others: &[Rat]) -> Rat {
        match self {
            GrovesSpec::Pivotal => {
                // max over d of sum_{j != i} v_j(d, theta_j): 0 when cancelled,
                // sum (theta_j - c/n) when built.
                let built: Rat = others.iter().map(|t| t - instance.share()).sum();
                -built.max(Rat::zero())
            }
            GrovesSpec::ConstantH(k) => k.clone(),
            GrovesSpec::Custom { h, .. } => h(instance, player, others),
        }
    }
}

impl fmt::Debug for GrovesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GrovesSpec({})", self.name())
    }
}

/// A direct mechanism's tax schedule: a Groves member, or the all-zero
/// schedule (not a Groves mechanism; kept as the standard counterexample
/// for incentive-compatibility checks and welfare comparisons).
#[derive(Debug, Clone)]
pub enum TaxScheme {
    Groves(GrovesSpec),
    ZeroTax,
}

impl TaxScheme {
    pub fn pivotal() -> Self {
        TaxScheme::Groves(GrovesSpec::Pivotal)
    }

    pub fn h_zero() -> Self {
        TaxScheme::Groves(GrovesSpec::h_zero())
    }

    pub fn name(&self) -> String {
        match self {
            TaxScheme::Groves(spec) => spec.name(),
            TaxScheme::ZeroTax => "zerotax".into(),
        }
    }
}

fn others(profile: &TypeProfile, player: usize) -> Vec<Rat> {
    profile
        .values()
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != player - 1)
        .map(|(_, v)| v.clone())
        .collect()
}

/// Groves tax vector: `t_i = sum_{j != i} v_j(f(theta), theta_j) + h_i`.
pub fn groves_tax(
    instance: &ProjectInstance,
    spec: &GrovesSpec,
    announced: &TypeProfile,
) -> Vec<Rat> {
    let d = decide(instance, announced);
    (1..=instance.players())
        .map(|i| {
            let externality: Rat = announced
                .values()
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i - 1)
                .map(|(_, t)| valuation(instance, d, t).expect("profile entries validated"))
                .sum();
            externality + spec.h_value(instance, i, &others(announced, i))
        })
        .collect()
}

/// Pivotal tax vector via its closed form: with `H = (n-1)c/n` and
/// `S_i` the others' announced sum,
/// `t_i = min(0, H - S_i)` when the project is cancelled and
/// `t_i = min(0, S_i - H)` when it is built. Every entry is <= 0.
pub fn pivotal_tax(instance: &ProjectInstance, announced: &TypeProfile) -> Vec<Rat> {
    let d = decide(instance, announced);
    let threshold = instance.others_share();
    (1..=instance.players())
        .map(|i| {
            let s = announced.sum_without(i);
            match d {
                Decision::Cancel => (&threshold - &s).min(Rat::zero()),
                Decision::Build => (&s - &threshold).min(Rat::zero()),
            }
        })
        .collect()
}

/// Tax vector under any scheme.
pub fn taxes(instance: &ProjectInstance, scheme: &TaxScheme, announced: &TypeProfile) -> Vec<Rat> {
    match scheme {
        TaxScheme::Groves(spec) => groves_tax(instance, spec, announced),
        TaxScheme::ZeroTax => vec![Rat::zero(); instance.players()],
    }
}

/// Decision, taxes, per-player final utilities and social welfare.
/// Decision and taxes derive from the announced profile; utilities are
/// evaluated against the true types.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub decision: Decision,
    pub taxes: Vec<Rat>,
    pub utilities: Vec<Rat>,
    pub social_welfare: Rat,
}

/// Run the direct mechanism on an announced profile, scoring against the
/// true types: `u_i = d (theta_i - c/n) + t_i`.
pub fn outcome(
    instance: &ProjectInstance,
    scheme: &TaxScheme,
    announced: &TypeProfile,
    true_types: &TypeProfile,
) -> Outcome {
    let decision = decide(instance, announced);
    let tax = taxes(instance, scheme, announced);
    let utilities: Vec<Rat> = true_types
        .values()
        .iter()
        .zip(&tax)
        .map(|(theta, t)| {
            valuation(instance, decision, theta).expect("profile entries validated") + t
        })
        .collect();
    let social_welfare = utilities.iter().sum();
    Outcome {
        decision,
        taxes: tax,
        utilities,
        social_welfare,
    }
}

/// Final utility of one player when `announced` is submitted and the
/// player's true type is `theta_i`.
pub fn final_utility(
    instance: &ProjectInstance,
    scheme: &TaxScheme,
    announced: &TypeProfile,
    player: usize,
    theta_i: &Rat,
) -> Rat {
    let d = decide(instance, announced);
    let t = taxes(instance, scheme, announced);
    valuation(instance, d, theta_i).expect("type validated") + &t[player - 1]
}

/// Grid-quantified mechanism predicates; each failed predicate carries the
/// most severe witness found.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MechanismPredicates {
    pub feasible: Verdict,
    pub budget_balanced: Verdict,
    pub pay_only: Verdict,
    pub incentive_compatible: Verdict,
}

impl MechanismPredicates {
    pub fn all_hold(&self) -> bool {
        self.feasible.holds
            && self.budget_balanced.holds
            && self.pay_only.holds
            && self.incentive_compatible.holds
    }
}

/// Evaluate feasibility, budget balance, pay-only and incentive
/// compatibility by exhaustive quantification over `profiles` (and, for
/// incentive compatibility, over all unilateral deviations to announcements
/// drawn from `deviations`).
pub fn mechanism_predicates(
    instance: &ProjectInstance,
    scheme: &TaxScheme,
    profiles: &[TypeProfile],
    deviations: &[Rat],
) -> MechanismPredicates {
    let mut feasible = WorstWitness::new();
    let mut balanced = WorstWitness::new();
    let mut pay_only = WorstWitness::new();
    let mut ic = WorstWitness::new();

    for profile in profiles {
        let tax = taxes(instance, scheme, profile);
        let total: Rat = tax.iter().sum();
        if total.is_positive() {
            feasible.offer(
                total.clone(),
                Witness {
                    profile: profile.values().to_vec(),
                    player: None,
                    announced: None,
                    deviation: None,
                    lhs: total.clone(),
                    rhs: Rat::zero(),
                    note: "taxes sum above zero".into(),
                },
            );
        }
        if !total.is_zero() {
            balanced.offer(
                total.abs(),
                Witness {
                    profile: profile.values().to_vec(),
                    player: None,
                    announced: None,
                    deviation: None,
                    lhs: total.clone(),
                    rhs: Rat::zero(),
                    note: "taxes do not sum to zero".into(),
                },
            );
        }
        for (idx, t) in tax.iter().enumerate() {
            if t.is_positive() {
                pay_only.offer(
                    t.clone(),
                    Witness {
                        profile: profile.values().to_vec(),
                        player: Some(idx + 1),
                        announced: None,
                        deviation: None,
                        lhs: t.clone(),
                        rhs: Rat::zero(),
                        note: "positive tax".into(),
                    },
                );
            }
        }
        for i in 1..=instance.players() {
            let truthful = final_utility(instance, scheme, profile, i, profile.get(i));
            for b in deviations {
                if b == profile.get(i) {
                    continue;
                }
                let deviated = profile.with_replaced(i, b.clone());
                let gained = final_utility(instance, scheme, &deviated, i, profile.get(i));
                if gained > truthful {
                    ic.offer(
                        &gained - &truthful,
                        Witness {
                            profile: profile.values().to_vec(),
                            player: Some(i),
                            announced: Some(profile.get(i).clone()),
                            deviation: Some(DeviationRef::Announcement(b.clone())),
                            lhs: truthful.clone(),
                            rhs: gained,
                            note: "profitable unilateral misreport".into(),
                        },
                    );
                }
            }
        }
    }

    let name = scheme.name();
    MechanismPredicates {
        feasible: feasible.into_verdict(format!("feasible[{name}]")),
        budget_balanced: balanced.into_verdict(format!("budget_balanced[{name}]")),
        pay_only: pay_only.into_verdict(format!("pay_only[{name}]")),
        incentive_compatible: ic.into_verdict(format!("incentive_compatible[{name}]")),
    }
}

/// Result of a welfare-dominance comparison between two tax schemes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum WelfareDominance {
    /// Weakly higher social welfare everywhere, strictly higher here.
    Dominates { strict_at: Vec<Rat> },
    /// Strictly lower somewhere.
    NotDominant { witness: Box<Witness> },
    /// Weakly higher everywhere but never strictly (includes equality).
    NoStrictImprovement,
}

impl WelfareDominance {
    pub fn dominates(&self) -> bool {
        matches!(self, WelfareDominance::Dominates { .. })
    }
}

/// Re-evaluate a profitable-misreport witness through the model operations
/// alone; true when the recorded deviation really beats the recorded
/// truthful utility. Used by tests and by callers that audit verdicts.
pub fn recheck_misreport(
    instance: &ProjectInstance,
    scheme: &TaxScheme,
    witness: &Witness,
) -> Result<bool, Error> {
    let player = witness
        .player
        .ok_or_else(|| Error::Config("witness has no player".into()))?;
    let announcement = match &witness.deviation {
        Some(DeviationRef::Announcement(a)) => a.clone(),
        _ => {
            return Err(Error::Config(
                "witness has no announcement deviation".into(),
            ))
        }
    };
    let profile = TypeProfile::new(instance, witness.profile.clone())?;
    let truthful = final_utility(instance, scheme, &profile, player, profile.get(player));
    let deviated = profile.with_replaced(player, announcement);
    let gained = final_utility(instance, scheme, &deviated, player, profile.get(player));
    Ok(gained > truthful && truthful == witness.lhs && gained == witness.rhs)
}

/// Does `scheme_a` welfare-dominate `scheme_b`? Social welfare under
/// truthful announcements must be weakly higher at every profile and
/// strictly higher at some profile.
pub fn welfare_dominates(
    instance: &ProjectInstance,
    scheme_a: &TaxScheme,
    scheme_b: &TaxScheme,
    profiles: &[TypeProfile],
) -> WelfareDominance {
    let mut worst = WorstWitness::new();
    let mut strict_at: Option<Vec<Rat>> = None;
    for profile in profiles {
        let sw_a = outcome(instance, scheme_a, profile, profile).social_welfare;
        let sw_b = outcome(instance, scheme_b, profile, profile).social_welfare;
        if sw_a < sw_b {
            worst.offer(
                &sw_b - &sw_a,
                Witness {
                    profile: profile.values().to_vec(),
                    player: None,
                    announced: None,
                    deviation: None,
                    lhs: sw_a.clone(),
                    rhs: sw_b.clone(),
                    note: "social welfare strictly lower".into(),
                },
            );
        } else if sw_a > sw_b && strict_at.is_none() {
            strict_at = Some(profile.values().to_vec());
        }
    }
    if !worst.is_empty() {
        let verdict = worst.into_verdict("welfare_dominates");
        return WelfareDominance::NotDominant {
            witness: Box::new(verdict.witness.expect("failing verdict carries witness")),
        };
    }
    match strict_at {
        Some(strict_at) => WelfareDominance::Dominates { strict_at },
        None => WelfareDominance::NoStrictImprovement,
    }
}
