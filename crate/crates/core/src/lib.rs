//! Numerical toolkit for quantum non-local games: dense complex tensor
//! algebra, no-signalling correlations built from explicit matrix data,
//! game constructions, dilations, quantum graphs, colourings and rank
//! bounds, with JSON interchange for every artifact.
//!
//! The linear-algebra kernel is generic over the real scalar (`f32`/`f64`
//! via [`scalar::Scalar`]); the domain modules work over `f64` through the
//! aliases below.

pub mod colouring;
pub mod correlations;
pub mod dilation;
pub mod error;
pub mod games;
pub mod graph;
pub mod json;
pub mod quantum_graphs;
pub mod random;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
pub use graph::Graph;
pub use random::SeedRng;
pub use scalar::Scalar;

/// Default real scalar of the domain modules.
pub type Real = f64;
/// Complex scalar over [`Real`].
pub type C64 = num_complex::Complex<f64>;
/// Dense complex matrix over [`Real`].
pub type CMatrix = tensor::ComplexMatrix<f64>;
/// Dense complex vector over [`Real`].
pub type CVec = tensor::CVector<f64>;
/// Orthonormalized subspace basis over [`Real`].
pub type Subspace = tensor::SubspaceBasis<f64>;

/// Complex unit convenience.
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
