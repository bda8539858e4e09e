//! Moments of Brownian motion on O(N), Sp(N) and U(N) through Brauer algebra
//! formulas, with Weingarten calculus for the Haar limit and two independent
//! oracles (Casimir matrix exponential, Monte Carlo).

pub mod brauer;
pub mod cache;
pub mod coeff;
pub mod error;
pub mod heat;
pub mod linalg;
pub mod mc_oracle;
pub mod perm;
pub mod spectral;
pub mod tensor_rep;
pub mod verify;
pub mod weingarten;
pub mod young;

pub use brauer::{BrauerDiagram, BrauerElement};
pub use coeff::Q;
pub use error::{Error, Result};
pub use perm::{GroupAlgebraElement, Permutation, Subgroup};
pub use tensor_rep::{GroupFamily, GroupSpec, MomentTensor};

pub use young::{IntegerPartition, StandardTableau};
