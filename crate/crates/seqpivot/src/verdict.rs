//! Pass/fail results with re-checkable counterexamples.

use serde::{Deserialize, Serialize};

use crate::rat::Rat;

/// What a failing check deviated to: either a concrete alternative
/// announcement, or an alternative strategy identified by label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeviationRef {
    Announcement(Rat),
    Strategy(String),
}

impl Serialize for DeviationRef {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            DeviationRef::Announcement(r) => s.serialize_str(&r.to_string()),
            DeviationRef::Strategy(name) => s.serialize_str(name),
        }
    }
}

impl<'de> Deserialize<'de> for DeviationRef {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.parse::<Rat>() {
            Ok(r) => Ok(DeviationRef::Announcement(r)),
            Err(_) => Ok(DeviationRef::Strategy(s)),
        }
    }
}

/// A concrete counterexample. `lhs` is the quantity achieved by the checked
/// object, `rhs` the quantity achieved by the deviation; a genuine violation
/// of a `lhs >= rhs`-shaped property has `lhs < rhs` (equality-shaped
/// properties record the two unequal sides). Everything needed to re-derive
/// the violation from the model operations alone is present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Full type profile at which the violation occurs.
    pub profile: Vec<Rat>,
    /// Offending player, 1-based, when the property is per-player.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub player: Option<usize>,
    /// What the checked strategy announced, when applicable.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub announced: Option<Rat>,
    /// The profitable deviation.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub deviation: Option<DeviationRef>,
    pub lhs: Rat,
    pub rhs: Rat,
    pub note: String,
}

/// Outcome of one verified property. A failing verdict always carries a
/// witness; when several violations exist the one with the largest
/// `rhs - lhs` margin is reported (ties broken by scan order), so the
/// witness is the most severe counterexample found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub property: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn pass(property: impl Into<String>) -> Self {
        Verdict {
            property: property.into(),
            holds: true,
            witness: None,
        }
    }

    pub fn fail(property: impl Into<String>, witness: Witness) -> Self {
        Verdict {
            property: property.into(),
            holds: false,
            witness: Some(witness),
        }
    }
}

/// Accumulates violations and keeps the one with the largest margin.
#[derive(Debug, Default)]
pub(crate) struct WorstWitness {
    best: Option<(Rat, Witness)>,
}

impl WorstWitness {
    pub fn new() -> Self {
        WorstWitness { best: None }
    }

    /// Record a violation whose severity is `margin` (> 0 for genuine
    /// violations). Keeps the first witness among equal margins.
    pub fn offer(&mut self, margin: Rat, witness: Witness) {
        match &self.best {
            Some((m, _)) if *m >= margin => {}
            _ => self.best = Some((margin, witness)),
        }
    }

    pub fn into_verdict(self, property: impl Into<String>) -> Verdict {
        match self.best {
            None => Verdict::pass(property),
            Some((_, w)) => Verdict::fail(property, w),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.best.is_none()
    }
}
