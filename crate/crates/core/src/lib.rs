//! Exact prolongation of point vector fields on jet spaces of ODEs, Lie determinants,
//! symmetry certificates and first integrals.

pub mod catalog;
pub mod error;
pub mod expr;
pub mod integrals;
pub mod jetspace;
pub mod linear;
pub mod oracle;
pub mod parse;
pub mod remarkable;

pub use error::{Error, Result, SourceSpan};
