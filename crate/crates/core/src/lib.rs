//! Reconstructive hitting-set generators built from low-degree polynomials
//! over small binary fields, with their reconstruction procedures.

pub mod algebra;
pub mod bootstrap;
pub mod chen_tell;
pub mod decoding;
pub mod error;
pub mod genmatrix;
pub mod hitting;
pub mod oracle;
pub mod owp_prg;
pub mod rng;
pub mod su_hsg;
pub mod su_modified;

pub use error::{Error, Result};
