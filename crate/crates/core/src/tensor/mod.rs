//! Dense complex linear-algebra kernel: matrices, tensor-leg operations,
//! Hermitian eigendecomposition and subspace machinery.

pub mod eig;
pub mod matrix;
pub mod ops;
pub mod subspace;

pub use eig::{hermitian_eig, is_psd, min_eigenvalue, psd_project, psd_sqrt, HermitianEig};
pub use matrix::{CVector, ComplexMatrix};
pub use ops::{
    devectorize, diag_expectation, entangled_constants, flip, kron, partial_trace, skew_functional,
    slice_map, slice_map_second, theta_map, theta_untwist, vectorize, Leg,
};
pub use subspace::{matrix_span, SubspaceBasis, RANK_TOL};
