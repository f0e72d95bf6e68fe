//! Built-in reference scenarios and their embedded expected values.
//!
//! `replay-tables` recomputes each scenario from scratch and diffs every
//! field against the constants below; any mismatch is reported field by
//! field and fails the run. The catalog doubles as a smoke test that the
//! whole pipeline (strategies, play, taxes, utilities) is wired together
//! exactly.

use seqpivot::engine::{play, PlayerOrder};
use seqpivot::model::{outcome, ProjectInstance, TaxScheme, TypeProfile};
use seqpivot::rat::{rat, Rat};
use seqpivot::strategy::{Strategy, StrategyVector};

use crate::report::player_label;

pub struct Expected {
    pub name: &'static str,
    pub types: [&'static str; 3],
    pub submitted: [&'static str; 3],
    pub taxes: [&'static str; 3],
    pub utilities: [&'static str; 3],
    pub social_welfare: &'static str,
}

/// The three-player, cost-300 reference scenarios.
pub const EXPECTED: [Expected; 5] = [
    Expected {
        name: "table-1 simultaneous pivotal, truthful",
        types: ["110", "80", "110"],
        submitted: ["110", "80", "110"],
        taxes: ["-10", "0", "-10"],
        utilities: ["0", "-20", "0"],
        social_welfare: "-20",
    },
    Expected {
        name: "table-2 sequential pivotal, optimal strategies (order A,B,C)",
        types: ["110", "80", "110"],
        submitted: ["110", "80", "300"],
        taxes: ["0", "0", "-10"],
        utilities: ["10", "-20", "0"],
        social_welfare: "-10",
    },
    Expected {
        name: "table-3 sequential pivotal, socially optimal strategies (order A,B,C)",
        types: ["60", "70", "250"],
        submitted: ["60", "70", "300"],
        taxes: ["0", "0", "-70"],
        utilities: ["-40", "-30", "80"],
        social_welfare: "10",
    },
    Expected {
        name: "marginal project cancelled by the socially optimal last mover",
        types: ["110", "80", "110"],
        submitted: ["110", "80", "0"],
        taxes: ["0", "0", "0"],
        utilities: ["0", "0", "0"],
        social_welfare: "0",
    },
    Expected {
        name: "middle player overclaims: taxes vanish, welfare 80",
        types: ["60", "70", "250"],
        submitted: ["60", "300", "300"],
        taxes: ["0", "0", "0"],
        utilities: ["-40", "-30", "150"],
        social_welfare: "80",
    },
];

fn rats(vals: &[&'static str; 3]) -> Vec<Rat> {
    vals.iter().map(|v| rat(v)).collect()
}

/// Recompute one scenario. The first is the simultaneous mechanism; the
/// rest are sequential plays in order A, B, C.
fn recompute(scenario: &Expected) -> (Vec<Rat>, Vec<Rat>, Vec<Rat>, Rat) {
    let instance = ProjectInstance::new(3, rat("300")).expect("reference instance");
    let scheme = TaxScheme::pivotal();
    let types = TypeProfile::new(&instance, rats(&scenario.types)).expect("reference types");
    let o = match scenario.name {
        n if n.starts_with("table-1") => {
            let o = outcome(&instance, &scheme, &types, &types);
            return (
                types.values().to_vec(),
                o.taxes,
                o.utilities,
                o.social_welfare,
            );
        }
        n if n.starts_with("table-2") => {
            let vector = StrategyVector::by_name("thm3", 3).expect("named vector");
            play(
                &instance,
                &scheme,
                &PlayerOrder::identity(3),
                &vector,
                &types,
            )
        }
        n if n.starts_with("table-3") || n.starts_with("marginal") => {
            let vector = StrategyVector::by_name("thm5", 3).expect("named vector");
            play(
                &instance,
                &scheme,
                &PlayerOrder::identity(3),
                &vector,
                &types,
            )
        }
        _ => {
            // Socially optimal play except the middle player announces the
            // full cost.
            let vector = StrategyVector::new(vec![
                Strategy::socially_optimal(1),
                Strategy::constant(2, rat("300")),
                Strategy::socially_optimal(3),
            ])
            .expect("vector");
            play(
                &instance,
                &scheme,
                &PlayerOrder::identity(3),
                &vector,
                &types,
            )
        }
    }
    .expect("reference scenarios play cleanly");
    (
        o.announcements.values().to_vec(),
        o.outcome.taxes,
        o.outcome.utilities,
        o.outcome.social_welfare,
    )
}

/// Replay the catalog; returns the per-field diffs (empty means a clean
/// bit-exact pass) and writes one status line per scenario to `log`.
pub fn replay(log: &mut String) -> Vec<String> {
    let mut diffs: Vec<String> = Vec::new();
    for scenario in &EXPECTED {
        let before = diffs.len();
        let (submitted, taxes, utilities, sw) = recompute(scenario);
        let mut mismatch = |field: &str, player: usize, got: &Rat, want: &str| {
            if *got != rat(want) {
                diffs.push(format!(
                    "{}: {} of player {}: computed {}, expected {}",
                    scenario.name,
                    field,
                    player_label(player),
                    got,
                    want
                ));
            }
        };
        for p in 1..=3usize {
            mismatch(
                "submitted type",
                p,
                &submitted[p - 1],
                scenario.submitted[p - 1],
            );
            mismatch("tax", p, &taxes[p - 1], scenario.taxes[p - 1]);
            mismatch("utility", p, &utilities[p - 1], scenario.utilities[p - 1]);
        }
        if sw != rat(scenario.social_welfare) {
            diffs.push(format!(
                "{}: social welfare: computed {}, expected {}",
                scenario.name, sw, scenario.social_welfare
            ));
        }
        let status = if diffs.len() == before {
            "ok"
        } else {
            "MISMATCH"
        };
        log.push_str(&format!("{status:<8} {}\n", scenario.name));
    }
    diffs
}
