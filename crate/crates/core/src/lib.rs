//! Exact-arithmetic toolkit for scalarizing tensor Feynman integrals.
//!
//! Tensor numerators (dot products of internal momenta) are traded for extra
//! generalized propagators by coextending the cycle matroid of the Feynman
//! graph. The crate provides the pieces of that pipeline: exact linear algebra
//! over Q and small prime fields, matroids given by circuits or representing
//! matrices, Feynman graphs with momentum routing, first and second Symanzik
//! polynomials computed by independent methods, the coextension construction
//! itself, and emission of momentum-space and parametric integrands.

pub mod error;
pub mod exact_linalg;
pub mod fixtures;
pub mod formats;
pub mod graph;
pub mod integrand;
pub mod matroid;
pub mod momentum;
pub mod poly;
pub mod symanzik;
pub mod tensor_reduce;
pub mod util;

pub use error::{Error, Result};
