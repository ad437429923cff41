//! Heights and successive minima of lattices of sections.
//!
//! Two families of lattices are covered: integral cusp forms of weight `12k`
//! under the Petersson metric, and integer polynomials under L² or sup norms on
//! discs. Shared machinery computes successive minima, slope spectra, Chebyshev
//! transforms and empirical measures.

pub mod chebyshev;
pub mod error;
pub mod lattice;
pub mod measures;
pub mod numeric;
pub mod petersson;
pub mod poly;
pub mod qseries;

pub use error::{Error, Result};
