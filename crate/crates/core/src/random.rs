//! Seeded sampling of Gaussian matrices, Haar unitaries and isometries.
//!
//! All randomness in the crate flows through `SeedRng` so that a 64-bit
//! seed reproduces every artifact bit-for-bit.

use crate::scalar::Scalar;
use crate::tensor::{CVector, ComplexMatrix};
use num_complex::Complex;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Deterministic random stream keyed by a 64-bit seed.
pub struct SeedRng {
    inner: ChaCha12Rng,
}

impl SeedRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    /// Derives an independent stream for a labelled subtask.
    pub fn derive(&mut self, label: u64) -> SeedRng {
        let base = self.inner.next_u64();
        SeedRng::new(base ^ label.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    fn uniform<T: Scalar>(&mut self) -> T {
        // 53-bit uniform in [0, 1).
        let bits = self.inner.next_u64() >> 11;
        T::real(bits as f64 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller.
    pub fn gaussian<T: Scalar>(&mut self) -> T {
        let mut u1: T = self.uniform();
        let tiny = T::real(1e-300);
        if u1 < tiny {
            u1 = tiny;
        }
        let u2: T = self.uniform();
        let two_pi = T::real(std::f64::consts::TAU);
        (-T::real(2.0) * u1.ln()).sqrt() * (two_pi * u2).cos()
    }

    pub fn complex_gaussian<T: Scalar>(&mut self) -> Complex<T> {
        Complex::new(self.gaussian(), self.gaussian())
    }

    pub fn ginibre<T: Scalar>(&mut self, rows: usize, cols: usize) -> ComplexMatrix<T> {
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            data.push(self.complex_gaussian());
        }
        ComplexMatrix::new(rows, cols, data)
    }

    /// Haar-distributed unitary via QR of a Ginibre matrix with the
    /// phase convention that makes the factor unique.
    pub fn haar_unitary<T: Scalar>(&mut self, n: usize) -> ComplexMatrix<T> {
        self.haar_isometry(n, n)
    }

    /// Haar-distributed isometry ℂ^cols → ℂ^rows (requires rows ≥ cols):
    /// the first `cols` columns of a Haar unitary.
    pub fn haar_isometry<T: Scalar>(&mut self, rows: usize, cols: usize) -> ComplexMatrix<T> {
        assert!(rows >= cols, "isometry needs rows >= cols");
        let g = self.ginibre::<T>(rows, cols);
        // Modified Gram-Schmidt with a second pass for orthogonality.
        let mut columns: Vec<CVector<T>> = (0..cols).map(|c| g.column(c)).collect();
        for i in 0..cols {
            for _pass in 0..2 {
                for j in 0..i {
                    let coeff = columns[i].inner(&columns[j]);
                    let adj = columns[j].scale(coeff);
                    columns[i] = columns[i].sub(&adj);
                }
            }
            let norm = columns[i].norm();
            columns[i] = columns[i].scale(Complex::new(T::one() / norm, T::zero()));
            // Fix the phase so R has positive diagonal: multiply by the
            // conjugate phase of the leading nonzero coefficient against g.
            let lead = g.column(i).inner(&columns[i]);
            let mag = lead.norm();
            if mag > T::zero() {
                let phase = lead / Complex::new(mag, T::zero());
                columns[i] = columns[i].scale(phase);
            }
        }
        ComplexMatrix::from_columns(&columns)
    }

    pub fn unit_vector<T: Scalar>(&mut self, dim: usize) -> CVector<T> {
        loop {
            let v = CVector::new((0..dim).map(|_| self.complex_gaussian()).collect());
            if let Ok(u) = v.normalized() {
                return u;
            }
        }
    }

    /// Random point of the probability simplex (flat Dirichlet).
    pub fn simplex_weights<T: Scalar>(&mut self, n: usize) -> Vec<T> {
        let raw: Vec<T> = (0..n)
            .map(|_| {
                let u: T = self.uniform();
                -(u.max(T::real(1e-300))).ln()
            })
            .collect();
        let total = raw.iter().fold(T::zero(), |a, &b| a + b);
        raw.into_iter().map(|v| v / total).collect()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
}
