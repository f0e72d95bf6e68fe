//! Announcement strategies for sequential play.
//!
//! A strategy of player `i` maps the announced prefix of its predecessors
//! plus the player's own true type to an announcement in `[0, c]`. The
//! stage a player occupies is derived from the prefix length, so the same
//! rule works at any position when orders are permuted; the "last mover"
//! cases of the named rules bind to the position in the order, not to the
//! player's index.
//!
//! Named rules, addressable by the string ids used on the command line:
//!
//! - `truth` — the projection: announce the true type.
//! - `thm3` — the optimal deficit-reducing rule: announce truthfully while
//!   the running sum (announced prefix plus own type) stays below the
//!   cost, except that the last mover withholds with 0; announce the full
//!   cost once the running sum reaches it.
//! - `thm5` — the socially optimal rule: same as `thm3`, except the last
//!   mover also announces 0 when the running sum hits the cost exactly and
//!   their own type exceeds the cost share, cancelling a marginal project.
//! - `greedy` — the all-or-nothing rule: 0 when the own type is at most
//!   the cost share, the full cost otherwise; ignores the prefix. A
//!   standard non-optimal deviation.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::ProjectInstance;
use crate::rat::Rat;

/// Tabulated-rule key: (announced prefix, own true type).
pub type StrategyInput = (Vec<Rat>, Rat);

#[derive(Debug, Clone, PartialEq, Eq)]
enum Rule {
    Truth,
    Optimal,
    SociallyOptimal,
    Greedy,
    Constant(Rat),
    Table {
        source: String,
        entries: BTreeMap<StrategyInput, Rat>,
    },
    Composed(Box<Strategy>, Box<Strategy>),
}

/// A deterministic announcement rule owned by one player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    player: usize,
    rule: Rule,
}

impl Strategy {
    /// Truth-telling: the projection onto the own type.
    pub fn truth(player: usize) -> Strategy {
        Strategy {
            player,
            rule: Rule::Truth,
        }
    }

    /// The optimal deficit-reducing rule (id `thm3`).
    pub fn optimal(player: usize) -> Strategy {
        Strategy {
            player,
            rule: Rule::Optimal,
        }
    }

    /// The socially optimal rule (id `thm5`).
    pub fn socially_optimal(player: usize) -> Strategy {
        Strategy {
            player,
            rule: Rule::SociallyOptimal,
        }
    }

    /// The all-or-nothing non-optimal rule (id `greedy`).
    pub fn greedy(player: usize) -> Strategy {
        Strategy {
            player,
            rule: Rule::Greedy,
        }
    }

    /// Always announce `value`, regardless of prefix and type.
    pub fn constant(player: usize, value: Rat) -> Strategy {
        Strategy {
            player,
            rule: Rule::Constant(value),
        }
    }

    /// Look up a named rule by its string id.
    pub fn by_name(name: &str, player: usize) -> Result<Strategy, Error> {
        match name {
            "truth" => Ok(Strategy::truth(player)),
            "thm3" | "optimal" => Ok(Strategy::optimal(player)),
            "thm5" | "social" => Ok(Strategy::socially_optimal(player)),
            "greedy" => Ok(Strategy::greedy(player)),
            other => Err(Error::UnknownStrategy(other.into())),
        }
    }

    /// The ids accepted by [`Strategy::by_name`], canonical forms only.
    pub const NAMED_IDS: [&'static str; 4] = ["truth", "thm3", "thm5", "greedy"];

    pub fn player(&self) -> usize {
        self.player
    }

    /// Stable label used in reports and witnesses.
    pub fn label(&self) -> String {
        match &self.rule {
            Rule::Truth => "truth".into(),
            Rule::Optimal => "thm3".into(),
            Rule::SociallyOptimal => "thm5".into(),
            Rule::Greedy => "greedy".into(),
            Rule::Constant(v) => format!("const({v})"),
            Rule::Table { source, .. } => source.clone(),
            Rule::Composed(outer, inner) => {
                format!("compose({},{})", outer.label(), inner.label())
            }
        }
    }

    /// Evaluate the rule at an announced prefix and the player's own true
    /// type. The stage is `prefix.len() + 1`; a prefix of length `n` or
    /// more, or a type outside `[0, c]`, is rejected.
    pub fn announce(
        &self,
        instance: &ProjectInstance,
        prefix: &[Rat],
        own: &Rat,
    ) -> Result<Rat, Error> {
        let n = instance.players();
        let stage = prefix.len() + 1;
        if stage > n {
            return Err(Error::PrefixLength {
                player: self.player,
                expected: n - 1,
                got: prefix.len(),
            });
        }
        instance.check_type(own)?;
        for p in prefix {
            instance.check_type(p)?;
        }
        let last = stage == n;
        let c = instance.cost();
        let running: Rat = prefix.iter().sum::<Rat>() + own;
        let announced = match &self.rule {
            Rule::Truth => own.clone(),
            Rule::Optimal => {
                if running < *c {
                    if last {
                        Rat::zero()
                    } else {
                        own.clone()
                    }
                } else {
                    c.clone()
                }
            }
            Rule::SociallyOptimal => {
                if running < *c {
                    if last {
                        Rat::zero()
                    } else {
                        own.clone()
                    }
                } else if running == *c && last && *own > instance.share() {
                    Rat::zero()
                } else {
                    c.clone()
                }
            }
            Rule::Greedy => {
                if *own <= instance.share() {
                    Rat::zero()
                } else {
                    c.clone()
                }
            }
            Rule::Constant(v) => v.clone(),
            Rule::Table { entries, .. } => entries
                .get(&(prefix.to_vec(), own.clone()))
                .cloned()
                .ok_or_else(|| Error::OffGridLookup {
                    prefix: fmt_prefix(prefix),
                    own: own.to_string(),
                })?,
            Rule::Composed(outer, inner) => {
                let substituted = inner.announce(instance, prefix, own)?;
                outer.announce(instance, prefix, &substituted)?
            }
        };
        instance.check_type(&announced)?;
        Ok(announced)
    }

    /// Composition `(outer ∘ inner)(prefix, own) = outer(prefix,
    /// inner(prefix, own))`: the inner rule's announcement is substituted
    /// for the own-type argument of the outer rule. Both rules must belong
    /// to the same player.
    pub fn compose(outer: Strategy, inner: Strategy) -> Result<Strategy, Error> {
        if outer.player != inner.player {
            return Err(Error::PlayerMismatch {
                left: outer.player,
                right: inner.player,
            });
        }
        Ok(Strategy {
            player: outer.player,
            rule: Rule::Composed(Box::new(outer), Box::new(inner)),
        })
    }

    /// Freeze this rule into a finite table over the given inputs. The
    /// table agrees with the source on every tabulated input; lookups off
    /// the table are errors.
    pub fn tabulate<I>(&self, instance: &ProjectInstance, inputs: I) -> Result<Strategy, Error>
    where
        I: IntoIterator<Item = StrategyInput>,
    {
        let mut entries = BTreeMap::new();
        for (prefix, own) in inputs {
            let value = self.announce(instance, &prefix, &own)?;
            entries.insert((prefix, own), value);
        }
        Ok(Strategy {
            player: self.player,
            rule: Rule::Table {
                source: format!("tab({})", self.label()),
                entries,
            },
        })
    }

    /// For a tabulated strategy, produce a copy that differs at exactly
    /// one input. Errors when the rule is not a table or the input is not
    /// tabulated.
    pub fn with_table_override(
        &self,
        input: &StrategyInput,
        value: Rat,
    ) -> Result<Strategy, Error> {
        match &self.rule {
            Rule::Table { source, entries } => {
                if !entries.contains_key(input) {
                    return Err(Error::OffGridLookup {
                        prefix: fmt_prefix(&input.0),
                        own: input.1.to_string(),
                    });
                }
                let mut entries = entries.clone();
                let label = format!("{source}[{};{}->{}]", fmt_prefix(&input.0), input.1, value);
                entries.insert(input.clone(), value);
                Ok(Strategy {
                    player: self.player,
                    rule: Rule::Table {
                        source: label,
                        entries,
                    },
                })
            }
            _ => Err(Error::Config(
                "can only override tabulated strategies".into(),
            )),
        }
    }

    /// Serializable form of a tabulated strategy: a JSON map from input
    /// tuples (`"p1,p2|own"`) to announcements, rationals as `p/q`
    /// strings. `None` for non-table rules.
    pub fn to_table_repr(&self) -> Option<TableRepr> {
        match &self.rule {
            Rule::Table { source, entries } => {
                let mut map = BTreeMap::new();
                for ((prefix, own), value) in entries {
                    let key = format!(
                        "{}|{}",
                        prefix
                            .iter()
                            .map(|r| r.to_string())
                            .collect::<Vec<_>>()
                            .join(","),
                        own
                    );
                    map.insert(key, value.clone());
                }
                Some(TableRepr {
                    player: self.player,
                    source: source.clone(),
                    entries: map,
                })
            }
            _ => None,
        }
    }

    /// Rebuild a tabulated strategy from its serialized form.
    pub fn from_table_repr(repr: &TableRepr) -> Result<Strategy, Error> {
        let mut entries = BTreeMap::new();
        for (key, value) in &repr.entries {
            let (prefix_text, own_text) = key
                .split_once('|')
                .ok_or_else(|| Error::Config(format!("bad table key {key:?}")))?;
            let prefix: Vec<Rat> = if prefix_text.is_empty() {
                Vec::new()
            } else {
                prefix_text
                    .split(',')
                    .map(|p| p.parse())
                    .collect::<Result<_, _>>()?
            };
            let own: Rat = own_text.parse()?;
            entries.insert((prefix, own), value.clone());
        }
        Ok(Strategy {
            player: repr.player,
            rule: Rule::Table {
                source: repr.source.clone(),
                entries,
            },
        })
    }

    /// Tabulated inputs, when this is a table.
    pub fn table_inputs(&self) -> Option<impl Iterator<Item = &StrategyInput>> {
        match &self.rule {
            Rule::Table { entries, .. } => Some(entries.keys()),
            _ => None,
        }
    }

    /// Table entry at an input, when this is a table.
    pub fn table_value(&self, input: &StrategyInput) -> Option<&Rat> {
        match &self.rule {
            Rule::Table { entries, .. } => entries.get(input),
            _ => None,
        }
    }
}

fn fmt_prefix(prefix: &[Rat]) -> String {
    let parts: Vec<String> = prefix.iter().map(|r| r.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Wire form of a tabulated strategy: keys are `"prefix|own"` with the
/// prefix comma-separated, values are announcements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRepr {
    pub player: usize,
    pub source: String,
    pub entries: BTreeMap<String, Rat>,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[player {}]", self.label(), self.player)
    }
}

/// One strategy per player, entry `i` owned by player `i+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyVector(Vec<Strategy>);

impl StrategyVector {
    pub fn new(strategies: Vec<Strategy>) -> Result<Self, Error> {
        for (k, s) in strategies.iter().enumerate() {
            if s.player() != k + 1 {
                return Err(Error::PlayerIndex {
                    index: s.player(),
                    n: strategies.len(),
                });
            }
        }
        Ok(StrategyVector(strategies))
    }

    /// The same named family for every player.
    pub fn uniform(n: usize, make: impl Fn(usize) -> Strategy) -> Self {
        StrategyVector((1..=n).map(make).collect())
    }

    pub fn by_name(name: &str, n: usize) -> Result<Self, Error> {
        let strategies = (1..=n)
            .map(|i| Strategy::by_name(name, i))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(StrategyVector(strategies))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based access.
    pub fn get(&self, player: usize) -> &Strategy {
        &self.0[player - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Strategy> {
        self.0.iter()
    }

    /// Copy with one player's strategy swapped out.
    pub fn with_replaced(&self, player: usize, strategy: Strategy) -> StrategyVector {
        let mut v = self.0.clone();
        v[player - 1] = strategy;
        StrategyVector(v)
    }

    /// Per-player composition through a base vector:
    /// entry `i` becomes `base_i ∘ self_i`.
    pub fn composed_through(&self, base: &StrategyVector) -> Result<StrategyVector, Error> {
        let strategies = self
            .0
            .iter()
            .zip(base.iter())
            .map(|(inner, outer)| Strategy::compose(outer.clone(), inner.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(StrategyVector(strategies))
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|s| s.label()).collect();
        if parts.windows(2).all(|w| w[0] == w[1]) && !parts.is_empty() {
            parts[0].clone()
        } else {
            format!("({})", parts.join(","))
        }
    }
}

/// All tabulation inputs for a player over a point set: every prefix in
/// `points^(stage-1)` crossed with every own type in `points`.
pub fn grid_inputs(points: &[Rat], player: usize) -> Vec<StrategyInput> {
    let mut prefixes: Vec<Vec<Rat>> = vec![vec![]];
    for _ in 1..player {
        let mut next = Vec::with_capacity(prefixes.len() * points.len());
        for p in &prefixes {
            for point in points {
                let mut q = p.clone();
                q.push(point.clone());
                next.push(q);
            }
        }
        prefixes = next;
    }
    let mut inputs = Vec::with_capacity(prefixes.len() * points.len());
    for p in prefixes {
        for own in points {
            inputs.push((p.clone(), own.clone()));
        }
    }
    inputs
}
