//! Estimation of the detector gain `τ` in the quantized count model
//! `X = floor(τ N)`.
//!
//! The observed set of distinct integers `S` carries all the information
//! about `τ`. This crate provides:
//!
//! - exact lattice primitives and index recovery ([`lattice`]),
//! - closed-form upper bounds ([`bounds`]),
//! - the compatible-values estimator with a certified interval and an
//!   exhaustive enumeration of every compatible interval ([`compat`]),
//! - comparison estimators: double Poisson MLE, DFT peak, and regression
//!   ([`alt`]),
//! - a seeded simulation harness with kernel density summaries
//!   ([`simulation`], [`kde`]).
//!
//! All lattice work is done in exact rational arithmetic ([`rational`]).
//! Data-parallel loops run on rayon when the `parallel` feature is enabled
//! (the default) and sequentially otherwise; see [`exec`].
//!
//! ```
//! use gainlattice::{largest_compatible_interval, EmpiricalLattice, Rational};
//!
//! let s = EmpiricalLattice::from_values([1, 2, 3, 5, 6, 7, 9, 10, 11, 13]).unwrap();
//! let est = largest_compatible_interval(&s).unwrap();
//! assert_eq!(est.point, Rational::frac(79, 60));
//! ```

#![forbid(unsafe_code)]

pub mod alt;
pub mod bounds;
pub mod compat;
pub mod error;
pub mod exec;
pub mod kde;
pub mod lattice;
pub mod rational;
pub mod simulation;

pub use bounds::{bound_report, density_bound, interval_bound, pairwise_bound, BoundReport};
pub use compat::{
    constraint_interval, enumerate_compatible_set, largest_compatible_interval, scan_step_budget,
    CompatEstimate, CompatibleSet, StepBudget,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use lattice::{
    build_empirical_lattice, is_compatible, lattice_contains, lattice_prefix,
    recover_count_distribution, recover_indices, CountDistribution, Dataset, EmpiricalLattice,
    IndexPair,
};
pub use rational::{Rational, RationalInterval};
