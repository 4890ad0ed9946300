//! Exact computations for metaplectic Eisenstein series: dual-group root
//! data, weight multiplicities, IC-stalk polynomials, function-field
//! generating series and the `SL_2` theta-sheaf Hecke module.

pub mod cli;
pub mod error;
pub mod ic_stalks;
pub mod lattice;
pub mod laurent;
pub mod metaplectic;
pub mod report;
pub mod rep;
pub mod rootdata;
pub mod selftest;
pub mod series;
pub mod sl2;

pub use error::{Error, Result};
