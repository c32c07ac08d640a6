//! Dense complex matrices and vectors in row-major order.
//!
//! `ComplexMatrix` is the universal carrier of the crate: operators,
//! Choi matrices, projections and Kraus operators are all stored in this
//! form. Composite indices (tensor legs) are always row-major with the
//! first leg major, so `kron(A, B)` places the `A` index in the high
//! position of the composite index.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use num_complex::Complex;

/// Dense complex matrix with explicit row/column dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T: Scalar> {
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries; `data[r * cols + c]` is the `(r, c)` entry.
    pub data: Vec<Complex<T>>,
}

/// Dense complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector<T: Scalar> {
    pub data: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must match dimensions");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, Complex::new(T::one(), T::zero()));
        }
        m
    }

    /// Matrix unit ε_{r,c} of the given dimension.
    pub fn matrix_unit(dim: usize, r: usize, c: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        m.set(r, c, Complex::new(T::one(), T::zero()));
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex<T>,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn scalar_multiple_of_identity(dim: usize, z: Complex<T>) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, z);
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex<T>) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: Complex<T>) {
        self.data[r * self.cols + c] += v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn check_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::invalid(format!(
                "expected square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, z: Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * z).collect(),
        }
    }

    pub fn scale_re(&self, t: T) -> Self {
        self.scale(Complex::new(t, T::zero()))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "inner dimensions must agree in matmul"
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.norm_sqr() == T::zero() {
                    continue;
                }
                let row_off = k * other.cols;
                let out_off = r * other.cols;
                for c in 0..other.cols {
                    out.data[out_off + c] += a * other.data[row_off + c];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn trace(&self) -> Complex<T> {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Normalized trace `Tr(M) / dim`.
    pub fn normalized_trace(&self) -> Complex<T> {
        self.trace() / Complex::new(T::from_dim(self.rows), T::zero())
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|a| a.norm_sqr())
            .fold(T::zero(), |acc, v| acc + v)
            .sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|a| a.norm())
            .fold(T::zero(), |acc, v| acc.max(v))
    }

    /// Frobenius distance to another matrix.
    pub fn dist(&self, other: &Self) -> T {
        self.sub(other).frobenius_norm()
    }

    /// Hilbert-Schmidt inner product ⟨A, B⟩ = Tr(B* A).
    pub fn hs_inner(&self, other: &Self) -> Complex<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    /// The duality pairing ⟨ρ, ω^d⟩ = Tr(ρ ω), computed entrywise.
    pub fn pairing(&self, omega: &Self) -> Complex<T> {
        debug_assert_eq!(self.cols, omega.rows);
        debug_assert_eq!(self.rows, omega.cols);
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += self.get(i, j) * omega.get(j, i);
            }
        }
        acc
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        if !self.is_square() {
            return false;
        }
        self.dist(&self.adjoint()) <= tol * T::from_dim(self.rows).max(T::one())
    }

    pub fn is_identity(&self, tol: T) -> bool {
        self.is_square() && self.dist(&Self::identity(self.rows)) <= tol
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.is_square() && self.adjoint().matmul(self).is_identity(tol)
    }

    /// Idempotent and self-adjoint within `tol`.
    pub fn is_projection(&self, tol: T) -> bool {
        if !self.is_square() {
            return false;
        }
        let herm = self.dist(&self.adjoint());
        let idem = self.matmul(self).dist(self);
        herm <= tol && idem <= tol
    }

    /// Partial isometry: U U* U = U within `tol`.
    pub fn is_partial_isometry(&self, tol: T) -> bool {
        let u = self;
        u.matmul(&u.adjoint()).matmul(u).dist(u) <= tol
    }

    pub fn column(&self, c: usize) -> CVector<T> {
        CVector {
            data: (0..self.rows).map(|r| self.get(r, c)).collect(),
        }
    }

    /// Columns `c0..c0+width` as a `rows x width` block.
    pub fn column_block(&self, c0: usize, width: usize) -> Self {
        Self::from_fn(self.rows, width, |r, c| self.get(r, c0 + c))
    }

    pub fn from_columns(columns: &[CVector<T>]) -> Self {
        let rows = columns.first().map(|v| v.dim()).unwrap_or(0);
        Self::from_fn(rows, columns.len(), |r, c| columns[c].data[r])
    }

    /// Interprets an `n x 1` or `1 x n` matrix as a vector.
    pub fn as_vector(&self) -> Result<CVector<T>> {
        if self.cols == 1 || self.rows == 1 {
            Ok(CVector {
                data: self.data.clone(),
            })
        } else {
            Err(Error::invalid(format!(
                "expected a vector-shaped matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }
}

impl<T: Scalar> CVector<T> {
    pub fn new(data: Vec<Complex<T>>) -> Self {
        Self { data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: vec![Complex::new(T::zero(), T::zero()); dim],
        }
    }

    /// Standard basis vector e_i.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[i] = Complex::new(T::one(), T::zero());
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn norm(&self) -> T {
        self.data
            .iter()
            .map(|a| a.norm_sqr())
            .fold(T::zero(), |acc, v| acc + v)
            .sqrt()
    }

    /// Inner product ⟨self, other⟩, conjugate-linear in `other`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.dim(), other.dim());
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn dist(&self, other: &Self) -> T {
        self.sub(other).norm()
    }

    pub fn scale(&self, z: Complex<T>) -> Self {
        Self {
            data: self.data.iter().map(|a| a * z).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self {
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self {
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            data: self.data.iter().map(|a| a.conj()).collect(),
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= T::zero() {
            return Err(Error::invalid("cannot normalize the zero vector"));
        }
        Ok(self.scale(Complex::new(T::one() / n, T::zero())))
    }

    /// Rank-one operator |self⟩⟨other|.
    pub fn outer(&self, other: &Self) -> ComplexMatrix<T> {
        ComplexMatrix::from_fn(self.dim(), other.dim(), |r, c| {
            self.data[r] * other.data[c].conj()
        })
    }

    /// Tensor product, first factor major.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut data = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        Self { data }
    }

    /// Column-matrix view of the vector.
    pub fn as_column(&self) -> ComplexMatrix<T> {
        ComplexMatrix {
            rows: self.dim(),
            cols: 1,
            data: self.data.clone(),
        }
    }

    /// Applies a matrix: `M · self`.
    pub fn apply(&self, m: &ComplexMatrix<T>) -> Self {
        assert_eq!(m.cols, self.dim());
        let mut out = Self::zeros(m.rows);
        for r in 0..m.rows {
            let mut acc = Complex::new(T::zero(), T::zero());
            for c in 0..m.cols {
                acc += m.get(r, c) * self.data[c];
            }
            out.data[r] = acc;
        }
        out
    }
}
