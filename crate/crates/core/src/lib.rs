//! Numerical verification of involutive R-matrices, the Fock spaces they
//! symmetrize, the Zamolodchikov–Faddeev relations realized on them, and
//! diagonal two-particle S-matrices built from limits of rapidity functions.

pub mod corpus;
pub mod error;
pub mod fock;
pub mod isofactory;
pub mod rmatrix;
pub mod smatrix;
pub mod symgroup;
pub mod tensor;
pub mod zamrep;

pub use error::{Error, Result};
