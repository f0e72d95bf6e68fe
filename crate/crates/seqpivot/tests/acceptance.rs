//! Acceptance suite: the toolkit's exit gate.
//!
//! One test per criterion; each prints a `criterion N: pass` line (run
//! with `--nocapture` to see them) and enforces its runtime bound where
//! one is stated. All comparisons are exact — rationals either match bit
//! for bit or the test fails.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use seqpivot::engine::{find_budget_balanced_order, play, sweep_orders, PlayerOrder};
use seqpivot::model::{
    decide, groves_tax, outcome, pivotal_tax, valuation, welfare_dominates, Decision, GrovesSpec,
    ProjectInstance, TaxScheme, TypeProfile,
};
use seqpivot::rat::{rat, Rat};
use seqpivot::strategy::{Strategy, StrategyVector};
use seqpivot::verify::{
    grid_optimal_verdict, max_welfare_over_optimal, nash_check, opt_members, verify_ic,
    verify_opt_constraints, verify_optimal, verify_socially_optimal, verify_welfare_maximality,
    DeviationUniverse, Grid, Metric, Relation,
};

fn inst3() -> ProjectInstance {
    ProjectInstance::new(3, rat("300")).unwrap()
}

fn profile(vals: &[&str]) -> TypeProfile {
    TypeProfile::new(&inst3(), vals.iter().map(|v| rat(v)).collect()).unwrap()
}

fn rats(vals: &[&str]) -> Vec<Rat> {
    vals.iter().map(|v| rat(v)).collect()
}

const ENRICH: [&str; 5] = ["110", "80", "250", "60", "70"];

fn enriched_grid(steps: usize) -> Grid {
    Grid::new(inst3(), steps)
        .unwrap()
        .enrich(&rats(&ENRICH))
        .unwrap()
}

fn finish(criterion: &str, started: Instant, bound: Option<Duration>) {
    let elapsed = started.elapsed();
    if let Some(bound) = bound {
        assert!(
            elapsed < bound,
            "criterion {criterion}: took {elapsed:?}, bound {bound:?}"
        );
    }
    println!("criterion {criterion}: pass ({elapsed:?})");
}

#[test]
fn criterion_01_table_replays() {
    let started = Instant::now();
    let inst = inst3();
    let scheme = TaxScheme::pivotal();

    // Simultaneous pivotal mechanism, truthful reports.
    let types = profile(&["110", "80", "110"]);
    let o = outcome(&inst, &scheme, &types, &types);
    assert_eq!(o.taxes, rats(&["-10", "0", "-10"]));
    assert_eq!(o.utilities, rats(&["0", "-20", "0"]));
    assert_eq!(o.social_welfare, rat("-20"));

    // Sequential play under the optimal strategies, order A, B, C.
    let trace = play(
        &inst,
        &scheme,
        &PlayerOrder::identity(3),
        &StrategyVector::by_name("thm3", 3).unwrap(),
        &types,
    )
    .unwrap();
    assert_eq!(
        trace.announcements.values(),
        &rats(&["110", "80", "300"])[..]
    );
    assert_eq!(trace.outcome.taxes, rats(&["0", "0", "-10"]));
    assert_eq!(trace.outcome.utilities, rats(&["10", "-20", "0"]));
    assert_eq!(trace.outcome.social_welfare, rat("-10"));

    // Sequential play under the socially optimal strategies.
    let types2 = profile(&["60", "70", "250"]);
    let trace = play(
        &inst,
        &scheme,
        &PlayerOrder::identity(3),
        &StrategyVector::by_name("thm5", 3).unwrap(),
        &types2,
    )
    .unwrap();
    assert_eq!(
        trace.announcements.values(),
        &rats(&["60", "70", "300"])[..]
    );
    assert_eq!(trace.outcome.taxes, rats(&["0", "0", "-70"]));
    assert_eq!(trace.outcome.utilities, rats(&["-40", "-30", "80"]));
    assert_eq!(trace.outcome.social_welfare, rat("10"));

    // The middle player's overclaim raises welfare from 10 to 80.
    let overclaim = profile(&["60", "300", "300"]);
    let o = outcome(&inst, &scheme, &overclaim, &types2);
    assert_eq!(o.social_welfare, rat("80"));

    finish("1 (table replays)", started, Some(Duration::from_secs(1)));
}

#[test]
fn criterion_02_budget_balance_order_search() {
    let started = Instant::now();
    let inst = inst3();
    let grid = enriched_grid(6);
    let profiles = grid.profiles();
    assert!(profiles.len() >= 343);
    profiles.par_iter().for_each(|p| {
        let (order, trace) = find_budget_balanced_order(&inst, p).unwrap();
        assert!(
            trace.outcome.taxes.iter().all(|t| t.is_zero()),
            "taxes nonzero at {:?} via {order}",
            p.values()
        );
    });

    // At (110, 80, 110) the qualifying orders are exactly those ending in
    // player B.
    let types = profile(&["110", "80", "110"]);
    let rows = sweep_orders(
        &inst,
        &TaxScheme::pivotal(),
        &StrategyVector::by_name("thm3", 3).unwrap(),
        &types,
    )
    .unwrap();
    for (order, trace) in &rows {
        let balanced = trace.outcome.taxes.iter().all(|t| t.is_zero());
        assert_eq!(balanced, order.last_player() == 2, "order {order}");
    }
    let (order, _) = find_budget_balanced_order(&inst, &types).unwrap();
    assert_eq!(order.last_player(), 2);

    finish("2 (budget balance)", started, Some(Duration::from_secs(10)));
}

#[test]
fn criterion_03_optimality() {
    let started = Instant::now();
    for steps in [3usize, 6] {
        let grid = enriched_grid(steps);
        for player in 1..=3 {
            assert!(
                verify_optimal(&Strategy::optimal(player), &grid)
                    .unwrap()
                    .holds,
                "thm3 player {player} on m={steps}"
            );
            assert!(
                verify_optimal(&Strategy::socially_optimal(player), &grid)
                    .unwrap()
                    .holds,
                "thm5 player {player} on m={steps}"
            );
            let verdict = verify_optimal(&Strategy::greedy(player), &grid).unwrap();
            assert!(!verdict.holds, "greedy player {player} on m={steps}");
            let w = verdict.witness.unwrap();
            assert!(
                w.profile[player - 1] > rat("100"),
                "witness type above the share"
            );
            let total: Rat = w.profile.iter().sum();
            assert!(total < rat("300"), "witness profile sum below the cost");
        }
    }
    finish("3 (optimality)", started, Some(Duration::from_secs(60)));
}

#[test]
fn criterion_04_social_optimality() {
    let started = Instant::now();
    for steps in [3usize, 6] {
        let grid = enriched_grid(steps);
        assert!(
            verify_socially_optimal(&Strategy::socially_optimal(3), &grid)
                .unwrap()
                .holds,
            "thm5 last mover on m={steps}"
        );
        let verdict = verify_socially_optimal(&Strategy::optimal(3), &grid).unwrap();
        assert!(!verdict.holds, "thm3 last mover on m={steps}");
        let w = verdict.witness.unwrap();
        let total: Rat = w.profile.iter().sum();
        assert_eq!(total, rat("300"), "witness sits exactly at the cost");
        assert!(
            w.profile[2] > rat("100"),
            "witness last type above the share"
        );
    }
    finish("4 (social optimality)", started, None);
}

#[test]
fn criterion_05_welfare_maximality() {
    let started = Instant::now();
    for steps in [3usize, 6] {
        let grid = enriched_grid(steps);
        let verdict = verify_welfare_maximality(&grid).unwrap();
        assert!(verdict.holds, "m={steps}: {verdict:?}");
    }

    let grid = enriched_grid(6);
    let types = profile(&["60", "70", "250"]);
    let max = max_welfare_over_optimal(&grid, &types).unwrap();
    assert_eq!(max.social_welfare, rat("10"));

    // Welfare 80 is reachable, but only through a non-optimal announcement
    // by the middle player.
    let inst = inst3();
    let sw80 = outcome(
        &inst,
        &TaxScheme::pivotal(),
        &profile(&["60", "300", "300"]),
        &types,
    )
    .social_welfare;
    assert_eq!(sw80, rat("80"));
    let members = opt_members(&inst, &[rat("60")], &rat("70"), grid.points()).unwrap();
    assert!(!members.contains(&rat("300")));

    finish("5 (welfare maximality)", started, None);
}

#[test]
fn criterion_06_incentive_compatibility() {
    let started = Instant::now();
    let grid = Grid::new(inst3(), 6).unwrap();
    assert!(verify_ic(&TaxScheme::pivotal(), &grid).unwrap().holds);
    assert!(verify_ic(&TaxScheme::h_zero(), &grid).unwrap().holds);
    let verdict = verify_ic(&TaxScheme::ZeroTax, &grid).unwrap();
    assert!(!verdict.holds);
    let w = verdict.witness.unwrap();
    assert!(
        seqpivot::model::recheck_misreport(&inst3(), &TaxScheme::ZeroTax, &w).unwrap(),
        "witness does not recheck"
    );
    finish("6 (incentive compatibility)", started, None);
}

#[test]
fn criterion_07_optimal_announcement_constraints() {
    let started = Instant::now();
    let verdict = verify_opt_constraints(&Grid::new(inst3(), 6).unwrap()).unwrap();
    assert!(verdict.holds, "{verdict:?}");
    finish("7 (optimal announcement constraints)", started, None);
}

#[test]
fn criterion_08_groves_invariance() {
    let started = Instant::now();
    let grid = Grid::new(inst3(), 6).unwrap();
    let pivotal = TaxScheme::Groves(GrovesSpec::Pivotal);
    let hzero = TaxScheme::Groves(GrovesSpec::h_zero());
    for name in Strategy::NAMED_IDS {
        for player in 1..=3 {
            let s = Strategy::by_name(name, player).unwrap();
            let a = grid_optimal_verdict(&s, &pivotal, &grid).unwrap().holds;
            let b = grid_optimal_verdict(&s, &hzero, &grid).unwrap().holds;
            assert_eq!(a, b, "{name} player {player}: verdicts diverge across h");
        }
    }
    finish("8 (groves invariance)", started, None);
}

#[test]
fn criterion_09_nash_equilibria() {
    let started = Instant::now();
    let grid = Grid::new(inst3(), 3).unwrap();
    let scheme = TaxScheme::pivotal();

    for name in ["thm3", "thm5"] {
        let vector = StrategyVector::by_name(name, 3).unwrap();
        let universe = DeviationUniverse::standard(&grid, &vector).unwrap();
        let verdict = nash_check(
            &scheme,
            &grid,
            &vector,
            &universe,
            Metric::FinalUtility,
            Relation::Direct,
        )
        .unwrap();
        assert!(verdict.holds, "{name}: {verdict:?}");
    }

    let projection = StrategyVector::by_name("truth", 3).unwrap();
    let universe = DeviationUniverse::standard(&grid, &projection).unwrap();
    for base_name in ["thm3", "thm5"] {
        let base = StrategyVector::by_name(base_name, 3).unwrap();
        let verdict = nash_check(
            &scheme,
            &grid,
            &projection,
            &universe,
            Metric::FinalUtility,
            Relation::ComposedThrough(&base),
        )
        .unwrap();
        assert!(verdict.holds, "projection through {base_name}: {verdict:?}");
    }

    finish(
        "9 (nash equilibria)",
        started,
        Some(Duration::from_secs(300)),
    );
}

#[test]
fn criterion_10_property_suites() {
    let started = Instant::now();
    let inst = inst3();
    let grid = Grid::new(inst.clone(), 6).unwrap();
    let scheme = TaxScheme::pivotal();
    let profiles = grid.profiles();

    for p in &profiles {
        let closed_form = pivotal_tax(&inst, p);
        // Pay-only and feasible.
        for t in &closed_form {
            assert!(!t.is_positive(), "positive tax at {:?}", p.values());
        }
        let total: Rat = closed_form.iter().sum();
        assert!(!total.is_positive(), "infeasible at {:?}", p.values());
        // The closed form and the Groves definition agree entry for entry.
        assert_eq!(closed_form, groves_tax(&inst, &GrovesSpec::Pivotal, p));
        // The decision rule is efficient.
        let d = decide(&inst, p);
        let welfare = |d: Decision| -> Rat {
            p.values()
                .iter()
                .map(|t| valuation(&inst, d, t).unwrap())
                .sum()
        };
        assert!(welfare(d) >= welfare(Decision::Build));
        assert!(welfare(d) >= welfare(Decision::Cancel));
    }

    // Truthful play equals the simultaneous outcome for every order.
    let truth = StrategyVector::by_name("truth", 3).unwrap();
    let orders = PlayerOrder::all(3).unwrap();
    profiles.par_iter().for_each(|p| {
        let simultaneous = outcome(&inst, &scheme, p, p);
        for order in &orders {
            let trace = play(&inst, &scheme, order, &truth, p).unwrap();
            assert_eq!(
                trace.outcome,
                simultaneous,
                "order {order} at {:?}",
                p.values()
            );
        }
    });

    // The welfare-dominance comparator, validated pointwise: the zero-tax
    // schedule dominates the pivotal one (weakly everywhere, strictly at
    // the taxed profiles); never the reverse; never reflexively.
    let zero = TaxScheme::ZeroTax;
    assert!(welfare_dominates(&inst, &zero, &scheme, &profiles).dominates());
    assert!(!welfare_dominates(&inst, &scheme, &zero, &profiles).dominates());
    assert!(!welfare_dominates(&inst, &scheme, &scheme, &profiles).dominates());

    finish("10 (property suites)", started, None);
}
