//! Simulation and brute-force verification toolkit for the sequential
//! pivotal (VCG) mechanism on the public project problem.
//!
//! The crate plays sequential mechanisms under named announcement
//! strategies, finds budget-balancing player orders, and certifies
//! optimality, social optimality, incentive compatibility and
//! Nash-equilibrium claims by exhaustive enumeration over discretized type
//! spaces — all in exact rational arithmetic.
//!
//! Layout:
//!
//! - [`rat`] — exact rationals and their `"p/q"` text form;
//! - [`model`] — the public project problem, Groves taxes, outcomes and
//!   mechanism predicates;
//! - [`strategy`] — the announcement strategies and their algebra
//!   (composition, tabulation, single-point mutation);
//! - [`engine`] — sequential play, order permutations, the
//!   budget-balancing order search;
//! - [`verify`] — grids, optimal-announcement sets, and the certification
//!   checks ending in pass/fail verdicts with re-checkable witnesses.

pub mod engine;
pub mod error;
pub mod model;
pub mod rat;
pub mod strategy;
pub mod verdict;
pub mod verify;

pub use engine::{
    find_budget_balanced_order, is_pivotal, play, sweep_orders, PlayTrace, PlayerOrder,
};
pub use error::Error;
pub use model::{
    decide, groves_tax, mechanism_predicates, outcome, pivotal_tax, taxes, valuation,
    welfare_dominates, Decision, GrovesSpec, MechanismPredicates, Outcome, ProjectInstance,
    TaxScheme, TypeProfile, WelfareDominance,
};
pub use rat::Rat;
pub use strategy::{Strategy, StrategyVector};
pub use verdict::{DeviationRef, Verdict, Witness};
