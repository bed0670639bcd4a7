//! Adiabatic spatial-search simulator: a single hardcore boson hopping on a
//! d-dimensional cubic lattice with one marked site, annealed from the
//! delocalized ground state to the localized one.
//!
//! The crate computes the two lowest eigenvalues and the transition matrix
//! element of the interpolating Hamiltonian `H(s) = -(1-s) t A - s mu P`,
//! the local-adiabatic integrand `V01/g^2`, peak/runtime estimates, scaling
//! exponents over size sweeps, constant-rate Schrodinger dynamics, and the
//! open-boundary spread of the peak over marked-site orbits.

// Numerics idioms used deliberately: negated float comparisons reject NaN,
// and index loops run over several slices in lockstep in the hot kernels.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod lattice;
pub mod numeric;
pub mod output;
pub mod schedule;
pub mod spectral;

pub use error::{Error, Result};
pub use lattice::{Boundary, LatticeSpec, ModelParams};
