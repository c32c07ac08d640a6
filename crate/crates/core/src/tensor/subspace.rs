//! Orthonormalized subspace bases, projectors and containment tests.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::eig::hermitian_eig;
use crate::tensor::matrix::{CVector, ComplexMatrix};
use num_complex::Complex;

/// Relative singular-value threshold used for rank decisions.
pub const RANK_TOL: f64 = 1e-10;

/// An orthonormal basis of a subspace of ℂ^n. The zero subspace is
/// represented by an empty basis.
#[derive(Debug, Clone)]
pub struct SubspaceBasis<T: Scalar> {
    pub ambient_dim: usize,
    pub vectors: Vec<CVector<T>>,
    pub tol: T,
}

impl<T: Scalar> SubspaceBasis<T> {
    /// Orthonormalizes the span of arbitrary vectors by singular-value
    /// thresholding of their frame operator Σ v v*.
    pub fn from_spanning(ambient_dim: usize, spanning: &[CVector<T>]) -> Result<Self> {
        let tol = T::real(RANK_TOL);
        for v in spanning {
            if v.dim() != ambient_dim {
                return Err(Error::dims(ambient_dim, v.dim()));
            }
        }
        if spanning.is_empty() {
            return Ok(Self {
                ambient_dim,
                vectors: vec![],
                tol,
            });
        }
        let mut frame = ComplexMatrix::zeros(ambient_dim, ambient_dim);
        for v in spanning {
            frame = frame.add(&v.outer(v));
        }
        let eig = hermitian_eig(&frame)?;
        let lam_max = eig.values.last().copied().unwrap_or(T::zero());
        // Eigenvalues of Σ v v* are squared singular values of the
        // column matrix of the spanning set; the cut is floored at the
        // eigenvalue noise level n·ε·λ_max.
        let noise = T::from_dim(ambient_dim) * T::epsilon();
        let cut = (tol * tol).max(noise) * lam_max;
        let mut vectors = Vec::new();
        for (k, &lam) in eig.values.iter().enumerate() {
            if lam_max > T::zero() && lam > cut {
                vectors.push(eig.vectors.column(k));
            }
        }
        Ok(Self {
            ambient_dim,
            vectors,
            tol,
        })
    }

    /// Wraps vectors that are already orthonormal; checked against the
    /// Gram-matrix invariant.
    pub fn from_orthonormal(ambient_dim: usize, vectors: Vec<CVector<T>>) -> Result<Self> {
        let tol = T::real(RANK_TOL);
        for (i, v) in vectors.iter().enumerate() {
            if v.dim() != ambient_dim {
                return Err(Error::dims(ambient_dim, v.dim()));
            }
            for (j, w) in vectors.iter().enumerate() {
                let g = v.inner(w);
                let expect = if i == j { T::one() } else { T::zero() };
                if (g - Complex::new(expect, T::zero())).norm() > tol {
                    return Err(Error::InvariantViolation(
                        "basis vectors are not orthonormal".into(),
                    ));
                }
            }
        }
        Ok(Self {
            ambient_dim,
            vectors,
            tol,
        })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> ComplexMatrix<T> {
        let mut p = ComplexMatrix::zeros(self.ambient_dim, self.ambient_dim);
        for v in &self.vectors {
            p = p.add(&v.outer(v));
        }
        p
    }

    /// Component of `v` inside the subspace.
    pub fn project(&self, v: &CVector<T>) -> CVector<T> {
        let mut out = CVector::zeros(self.ambient_dim);
        for b in &self.vectors {
            out = out.add(&b.scale(v.inner(b)));
        }
        out
    }

    /// Membership test: ‖(I − P) c‖ ≤ tol · ‖c‖.
    pub fn contains(&self, candidate: &CVector<T>, tol: T) -> bool {
        if candidate.dim() != self.ambient_dim {
            return false;
        }
        let residual = candidate.sub(&self.project(candidate)).norm();
        residual <= tol * candidate.norm().max(T::one() * T::epsilon())
    }

    /// True when `other` spans the same subspace within `tol`.
    pub fn same_span(&self, other: &Self, tol: T) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.projector().dist(&other.projector()) <= tol * T::from_dim(self.ambient_dim)
    }
}

/// Subspace spanned by a family of matrices under the Hilbert-Schmidt
/// inner product, via vectorization.
pub fn matrix_span<T: Scalar>(
    dim: usize,
    matrices: &[ComplexMatrix<T>],
) -> Result<SubspaceBasis<T>> {
    let vecs: Vec<CVector<T>> = matrices
        .iter()
        .map(|m| {
            if m.rows != dim || m.cols != dim {
                Err(Error::dims(dim, m.rows))
            } else {
                Ok(CVector::new(m.data.clone()))
            }
        })
        .collect::<Result<_>>()?;
    SubspaceBasis::from_spanning(dim * dim, &vecs)
}
