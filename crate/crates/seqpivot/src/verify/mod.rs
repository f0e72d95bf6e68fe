//! Brute-force certification engine: grid enumeration, optimal-announcement
//! analysis, optimality / social-optimality / incentive-compatibility
//! checks, Nash-equilibrium checks over finite deviation universes, and
//! welfare maximization over optimal paths.

pub mod checks;
pub mod dominance;
pub mod grid;
pub mod optset;
pub mod welfare;

pub use checks::{
    grid_optimal_verdict, verify_groves_invariance, verify_ic, verify_opt_constraints,
    verify_optimal, verify_socially_optimal, verify_spec_determinism,
};
pub use dominance::{
    dominance_optimality_crosscheck, dominance_relation, nash_check, DeviationUniverse, Dominance,
    DominanceCrosscheck, Metric, Relation,
};
pub use grid::{Grid, PROFILE_LIMIT};
pub use optset::{
    compute_opt_set, grid_opt_members, opt_members, opt_membership, OptExclusion, OptSet,
};
pub use welfare::{
    max_welfare_over_optimal, verify_welfare_maximality, welfare_maximality_report,
    MaximalityReport, WelfareMax,
};
