//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and
//! the PSD utilities built on it.
//!
//! Sizes in this crate stay in the low hundreds, where Jacobi is accurate
//! to a few ulps and needs no external dependencies.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::matrix::ComplexMatrix;
use num_complex::Complex;

/// Eigendecomposition of a Hermitian matrix: `values` ascending,
/// `vectors` holding the corresponding orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEig<T: Scalar> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Scalar> HermitianEig<T> {
    /// Rebuilds `V f(Λ) V*` for an entrywise spectral function `f`.
    pub fn apply_spectral(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.values.len();
        let v = &self.vectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lam) in self.values.iter().enumerate() {
            let flam = f(lam);
            if flam == T::zero() {
                continue;
            }
            for r in 0..n {
                let vr = v.get(r, k);
                if vr.norm_sqr() == T::zero() {
                    continue;
                }
                for c in 0..n {
                    let add = vr * v.get(c, k).conj() * Complex::new(flam, T::zero());
                    out.add_at(r, c, add);
                }
            }
        }
        out
    }
}

fn off_diagonal_norm<T: Scalar>(a: &ComplexMatrix<T>) -> T {
    let n = a.rows;
    let mut acc = T::zero();
    for r in 0..n {
        for c in 0..n {
            if r != c {
                acc += a.get(r, c).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Diagonalizes a Hermitian matrix. The input is symmetrized first, so
/// Hermitian-up-to-rounding inputs are accepted.
pub fn hermitian_eig<T: Scalar>(m: &ComplexMatrix<T>) -> Result<HermitianEig<T>> {
    m.check_square()?;
    let n = m.rows;
    if n == 0 {
        return Ok(HermitianEig {
            values: vec![],
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    // Symmetrize: (M + M*) / 2.
    let half = Complex::new(T::real(0.5), T::zero());
    let mut a = m.add(&m.adjoint()).scale(half);
    let mut v = ComplexMatrix::<T>::identity(n);

    let scale = a.frobenius_norm().max(T::one());
    let stop = scale * T::epsilon() * T::from_dim(n) * T::real(4.0);
    let max_sweeps = 60;

    for _sweep in 0..max_sweeps {
        if off_diagonal_norm(&a) <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r <= scale * T::epsilon() {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                // Phase that makes the pivot real, then a classical
                // symmetric Jacobi rotation on the resulting 2x2 block.
                let phase = apq / Complex::new(r, T::zero()); // e^{i phi}
                let tau = (aqq - app) / (T::real(2.0) * r);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;

                let cc = Complex::new(c, T::zero());
                let sc = Complex::new(s, T::zero()) * phase.conj(); // s e^{-i phi}
                                                                    // Unitary U: U[p][p]=c, U[p][q]=s·e^{i phi}... realized through
                                                                    // its action: columns (p,q) mix as (A U), rows as (U* A).
                                                                    // U[p][p] = c, U[p][q] = s*phase, U[q][p] = -s*conj(phase)... we
                                                                    // apply with the p-column receiving c·col_p - s e^{-iphi} col_q.
                let spc = Complex::new(s, T::zero()) * phase; // s e^{i phi}

                // A <- A U : col_p' = c col_p - conj(spc) col_q? Derivation:
                // U = D J with D = diag(1, e^{-i phi}) on (p,q) and J the real
                // rotation [[c, s], [-s, c]]. Then U[p][p]=c, U[p][q]=s,
                // U[q][p]=-s e^{-i phi}, U[q][q]=c e^{-i phi}.
                for row in 0..n {
                    let xp = a.get(row, p);
                    let xq = a.get(row, q);
                    a.set(row, p, xp * cc - xq * sc);
                    a.set(
                        row,
                        q,
                        xp * Complex::new(s, T::zero()) + xq * cc * phase.conj(),
                    );
                }
                // A <- U* A : row_p' = c row_p - s e^{i phi} row_q ... conj of above.
                for col in 0..n {
                    let xp = a.get(p, col);
                    let xq = a.get(q, col);
                    a.set(p, col, xp * cc - xq * spc);
                    a.set(q, col, xp * Complex::new(s, T::zero()) + xq * cc * phase);
                }
                // Accumulate V <- V U.
                for row in 0..n {
                    let xp = v.get(row, p);
                    let xq = v.get(row, q);
                    v.set(row, p, xp * cc - xq * sc);
                    v.set(
                        row,
                        q,
                        xp * Complex::new(s, T::zero()) + xq * cc * phase.conj(),
                    );
                }
            }
        }
    }

    // Extract, clean and sort ascending.
    let mut order: Vec<usize> = (0..n).collect();
    let values_raw: Vec<T> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| values_raw[i].partial_cmp(&values_raw[j]).unwrap());
    let values: Vec<T> = order.iter().map(|&i| values_raw[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v.get(r, order[c]));
    Ok(HermitianEig { values, vectors })
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue<T: Scalar>(m: &ComplexMatrix<T>) -> Result<T> {
    let eig = hermitian_eig(m)?;
    Ok(eig.values.first().copied().unwrap_or(T::zero()))
}

/// Positive semidefiniteness within an absolute tolerance on the minimum
/// eigenvalue; Hermitian deviation is checked against the same tolerance.
pub fn is_psd<T: Scalar>(m: &ComplexMatrix<T>, tol: T) -> bool {
    if !m.is_square() {
        return false;
    }
    if m.dist(&m.adjoint()) > tol * T::from_dim(m.rows).max(T::one()) {
        return false;
    }
    match min_eigenvalue(m) {
        Ok(lam) => lam >= -tol,
        Err(_) => false,
    }
}

/// PSD square root with negative eigenvalues clipped at `-tol`; an
/// eigenvalue below `-tol` is an error.
pub fn psd_sqrt<T: Scalar>(m: &ComplexMatrix<T>, tol: T) -> Result<ComplexMatrix<T>> {
    let eig = hermitian_eig(m)?;
    if let Some(&lam) = eig.values.first() {
        if lam < -tol {
            return Err(Error::NotPsd {
                min_eig: lam.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(eig.apply_spectral(|lam| {
        if lam > T::zero() {
            lam.sqrt()
        } else {
            T::zero()
        }
    }))
}

/// Projection onto the PSD cone: negative eigenvalues clipped to zero.
pub fn psd_project<T: Scalar>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let eig = hermitian_eig(m)?;
    Ok(eig.apply_spectral(|lam| lam.max(T::zero())))
}
