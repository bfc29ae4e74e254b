//! Weighted partial set cover by LP rounding.
//!
//! Pick a minimum-weight subfamily of sets covering a required amount of
//! element profit. The pipeline: guess the heaviest set of the optimum,
//! solve the residual LP with an embedded bounded simplex, split elements
//! into deep and shallow by fractional coverage, round the deep side with a
//! pluggable set-cover rounder and the shallow side by cost-preserving
//! pairwise transfers. An exact enumeration oracle and seeded instance
//! generators support end-to-end auditing of the approximation factor.

pub mod core;
pub mod generators;
pub mod lp;
pub mod psc_rounding;
pub mod sc_rounding;
mod simplex;
pub mod solver;

pub use crate::core::{
    CoverSolution, Error, FractionalSolution, PscInstance, Result, SetSystem,
};
pub use crate::psc_rounding::Pairing;
pub use crate::sc_rounding::RounderKind;
pub use crate::solver::SolveReport;
