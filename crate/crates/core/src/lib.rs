//! Branch-and-cut machinery for the routing and spectrum allocation (RSA)
//! problem on flexgrid optical networks.
//!
//! The crate is `no_std` (with `alloc`): everything here is pure computation.
//! File formats, wall-clock timing and the command line live in `rsa-cli`.
//!
//! Layout:
//! - [`instance`]: digraphs, demands, canonical solutions, random generator.
//! - [`model`]: the arc/slot binary formulation and row evaluation.
//! - [`lp`]: bounded-variable primal simplex used for every relaxation.
//! - [`cuts`]: separation procedures for flow, contiguity and non-overlap families.
//! - [`symmetry`]: slot, flow and endpoint mirrors of cuts.
//! - [`strategy`]: which separators to call in a cut round.
//! - [`bnc`]: the branch-and-cut driver.
//! - [`oracle`]: brute-force enumeration used to verify optima and cuts.
//! - [`bench`]: the τ score.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bench;
pub mod bnc;
pub mod cuts;
pub mod fixtures;
pub mod instance;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod strategy;
pub mod symmetry;

/// Primal feasibility tolerance shared by the simplex and row checks.
pub const FEAS_TOL: f64 = 1e-7;
/// Reduced-cost tolerance for simplex optimality.
pub const COST_TOL: f64 = 1e-7;
/// Distance from an integer below which an LP value counts as integral.
pub const INT_TOL: f64 = 1e-6;

pub use instance::{CanonicalSolution, Demand, Digraph, Instance, Lightpath};
pub use model::{FractionalPoint, LinearRow, Model, Sense, VarIndex};
