//! Projective graphs over Z_m made runnable: exact construction of the
//! canonically ordered projective spaces, their incidence and Gram
//! matrices, tensor-structured spectra verified in integer arithmetic,
//! the expanding-property bound chain, and matching-family verification,
//! construction and exhaustive search at desk scale.

pub mod arith;
pub mod bounds;
pub mod cache;
pub mod cli;
pub mod error;
pub mod families;
pub mod incidence;
pub mod matrix;
pub mod projective;
pub mod report;
pub mod ring;
pub mod spectra;

pub use error::{Error, Result};
