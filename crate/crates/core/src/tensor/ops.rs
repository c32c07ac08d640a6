//! Tensor-leg primitives: Kronecker products, partial traces, slice maps,
//! vectorization, entangled constants, and the θ/flip machinery on
//! ℂ^Z ⊗ ℂ^Z.
//!
//! Composite indices are row-major with the first leg major throughout:
//! the pair (i, j) on H1 ⊗ H2 is the flat index `i * dim(H2) + j`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::matrix::{CVector, ComplexMatrix};
use num_complex::Complex;

/// Which tensor leg an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Leg {
    First,
    Second,
}

/// Kronecker product with the composite index ordered `A`-major.
pub fn kron<T: Scalar>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let mut out = ComplexMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for ra in 0..a.rows {
        for ca in 0..a.cols {
            let va = a.get(ra, ca);
            if va.norm_sqr() == T::zero() {
                continue;
            }
            for rb in 0..b.rows {
                for cb in 0..b.cols {
                    out.set(ra * b.rows + rb, ca * b.cols + cb, va * b.get(rb, cb));
                }
            }
        }
    }
    out
}

fn check_product_dims<T: Scalar>(m: &ComplexMatrix<T>, d1: usize, d2: usize) -> Result<()> {
    if m.rows != d1 * d2 || m.cols != d1 * d2 {
        return Err(Error::dims(d1 * d2, m.rows));
    }
    Ok(())
}

/// Partial trace over the named leg of an operator on H1 ⊗ H2.
pub fn partial_trace<T: Scalar>(
    m: &ComplexMatrix<T>,
    leg: Leg,
    dims: (usize, usize),
) -> Result<ComplexMatrix<T>> {
    let (d1, d2) = dims;
    check_product_dims(m, d1, d2)?;
    match leg {
        Leg::First => {
            let mut out = ComplexMatrix::zeros(d2, d2);
            for i in 0..d1 {
                for r in 0..d2 {
                    for c in 0..d2 {
                        out.add_at(r, c, m.get(i * d2 + r, i * d2 + c));
                    }
                }
            }
            Ok(out)
        }
        Leg::Second => {
            let mut out = ComplexMatrix::zeros(d1, d1);
            for j in 0..d2 {
                for r in 0..d1 {
                    for c in 0..d1 {
                        out.add_at(r, c, m.get(r * d2 + j, c * d2 + j));
                    }
                }
            }
            Ok(out)
        }
    }
}

/// Slice map L_ω : M(H1 ⊗ H2) → M(H2) with L_ω(S ⊗ T) = Tr(S ωᵗ) T.
/// `L_I` coincides with the partial trace over the first leg.
pub fn slice_map<T: Scalar>(
    m: &ComplexMatrix<T>,
    omega: &ComplexMatrix<T>,
    dims: (usize, usize),
) -> Result<ComplexMatrix<T>> {
    let (d1, d2) = dims;
    check_product_dims(m, d1, d2)?;
    omega.check_square()?;
    if omega.rows != d1 {
        return Err(Error::dims(d1, omega.rows));
    }
    // ⟨ε_{i,i'}, ω⟩ = Tr(ε_{i,i'} ωᵗ) = ω[i, i'], so the (i,i') block of M
    // contributes with weight ω[i, i'].
    let mut out = ComplexMatrix::zeros(d2, d2);
    for i in 0..d1 {
        for ip in 0..d1 {
            let w = omega.get(i, ip);
            if w.norm_sqr() == T::zero() {
                continue;
            }
            for r in 0..d2 {
                for c in 0..d2 {
                    out.add_at(r, c, w * m.get(i * d2 + r, ip * d2 + c));
                }
            }
        }
    }
    Ok(out)
}

/// Slice map over the second leg: L_ρ(S ⊗ T) = Tr(T ρᵗ) S for ρ on H2.
pub fn slice_map_second<T: Scalar>(
    m: &ComplexMatrix<T>,
    rho: &ComplexMatrix<T>,
    dims: (usize, usize),
) -> Result<ComplexMatrix<T>> {
    let (d1, d2) = dims;
    check_product_dims(m, d1, d2)?;
    rho.check_square()?;
    if rho.rows != d2 {
        return Err(Error::dims(d2, rho.rows));
    }
    let mut out = ComplexMatrix::zeros(d1, d1);
    for j in 0..d2 {
        for jp in 0..d2 {
            let w = rho.get(j, jp);
            if w.norm_sqr() == T::zero() {
                continue;
            }
            for r in 0..d1 {
                for c in 0..d1 {
                    out.add_at(r, c, w * m.get(r * d2 + j, c * d2 + jp));
                }
            }
        }
    }
    Ok(out)
}

/// Conditional expectation Δ onto the diagonal algebra: zeroes all
/// off-diagonal entries.
pub fn diag_expectation<T: Scalar>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    m.check_square()?;
    let mut out = ComplexMatrix::zeros(m.rows, m.cols);
    for i in 0..m.rows {
        out.set(i, i, m.get(i, i));
    }
    Ok(out)
}

/// Vectorization ζ̃_T of a square matrix: (ζ̃_T)_(a,b) = T(a,b), so the
/// matrix unit ε_{a,b} maps to e_a ⊗ e_b. With `normalize`, returns
/// ζ_T = ζ̃_T / ‖ζ̃_T‖ (an error on T = 0).
pub fn vectorize<T: Scalar>(t: &ComplexMatrix<T>, normalize: bool) -> Result<CVector<T>> {
    t.check_square()?;
    let v = CVector::new(t.data.clone());
    if normalize {
        v.normalized()
            .map_err(|_| Error::invalid("cannot normalize the vectorization of the zero matrix"))
    } else {
        Ok(v)
    }
}

/// Inverse of `vectorize(_, false)`.
pub fn devectorize<T: Scalar>(v: &CVector<T>) -> Result<ComplexMatrix<T>> {
    let n = perfect_square_root(v.dim())?;
    Ok(ComplexMatrix::new(n, n, v.data.clone()))
}

fn perfect_square_root(n: usize) -> Result<usize> {
    let mut r = (n as f64).sqrt().round() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    if r * r != n {
        return Err(Error::invalid(format!(
            "dimension {n} is not a perfect square"
        )));
    }
    Ok(r)
}

/// The maximally entangled unit vector m_n, its rank-one projection J_n,
/// and the classical part J_n^cl = Σ_x ε_{x,x} ⊗ ε_{x,x}.
pub fn entangled_constants<T: Scalar>(
    n: usize,
) -> (CVector<T>, ComplexMatrix<T>, ComplexMatrix<T>) {
    assert!(n >= 1, "alphabet must be nonempty");
    let inv_sqrt = T::one() / T::from_dim(n).sqrt();
    let mut m = CVector::zeros(n * n);
    for x in 0..n {
        m.data[x * n + x] = Complex::new(inv_sqrt, T::zero());
    }
    let j = m.outer(&m);
    let mut jcl = ComplexMatrix::zeros(n * n, n * n);
    for x in 0..n {
        jcl.set(x * n + x, x * n + x, Complex::new(T::one(), T::zero()));
    }
    (m, j, jcl)
}

/// θ(v) composed with the basis unitary U_Z^{-1}, yielding an ordinary
/// matrix in M_Z: theta_untwist(e_x ⊗ e_y) = ε_{y,x}. Linear in `v`.
pub fn theta_untwist<T: Scalar>(v: &CVector<T>) -> Result<ComplexMatrix<T>> {
    Ok(devectorize(v)?.transpose())
}

/// The map θ(ξ ⊗ η)(ζ^d) = ⟨ξ, ζ⟩ η read in the dual basis e_x^d. Since
/// the basis unitary U_Z has the identity as its coordinate matrix, this
/// coincides entrywise with [`theta_untwist`]; only the leg bookkeeping
/// differs.
pub fn theta_map<T: Scalar>(v: &CVector<T>) -> Result<ComplexMatrix<T>> {
    theta_untwist(v)
}

/// The flip operator on ℂ^Z ⊗ ℂ^Z: e_x ⊗ e_y ↦ e_y ⊗ e_x.
pub fn flip<T: Scalar>(v: &CVector<T>) -> Result<CVector<T>> {
    let n = perfect_square_root(v.dim())?;
    let mut out = CVector::zeros(v.dim());
    for x in 0..n {
        for y in 0..n {
            out.data[y * n + x] = v.data[x * n + y];
        }
    }
    Ok(out)
}

/// The skew functional m(ζ) = ⟨ζ, Σ_z e_z ⊗ e_z⟩; vanishing on a subspace
/// is the "skew" condition.
pub fn skew_functional<T: Scalar>(v: &CVector<T>) -> Result<Complex<T>> {
    let n = perfect_square_root(v.dim())?;
    let mut acc = Complex::new(T::zero(), T::zero());
    for z in 0..n {
        acc += v.data[z * n + z];
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    type M = ComplexMatrix<f64>;
    type V = CVector<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn lcg(seed: u64) -> impl FnMut() -> f64 {
        let mut state = seed;
        move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        }
    }

    fn random_matrix(n: usize, seed: u64) -> M {
        let mut next = lcg(seed);
        M::from_fn(n, n, |_, _| c(next(), next()))
    }

    #[test]
    fn kron_matrix_units() {
        // ε_{0,0} ⊗ ε_{1,1} has its single 1 at composite (0,1) = row 1, col 1.
        let k = kron(&M::matrix_unit(2, 0, 0), &M::matrix_unit(2, 1, 1));
        assert_eq!(k.rows, 4);
        for r in 0..4 {
            for cidx in 0..4 {
                let expect = if r == 1 && cidx == 1 { 1.0 } else { 0.0 };
                assert!((k.get(r, cidx) - c(expect, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn kron_identities() {
        assert!(kron(&M::identity(2), &M::identity(3)).dist(&M::identity(6)) < 1e-15);
    }

    #[test]
    fn kron_scaled_units() {
        // (2 ε_{0,1}) ⊗ (3 ε_{1,0}) → 6 at composite ((0,1),(1,0)).
        // Index oracle: row = 0*2+1 = 1, col = 1*2+0 = 2.
        let k = kron(
            &M::matrix_unit(2, 0, 1).scale(c(2.0, 0.0)),
            &M::matrix_unit(2, 1, 0).scale(c(3.0, 0.0)),
        );
        for r in 0..4 {
            for cidx in 0..4 {
                let expect = if r == 1 && cidx == 2 { 6.0 } else { 0.0 };
                assert!((k.get(r, cidx) - c(expect, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn partial_trace_of_product_state() {
        let rho = random_matrix(2, 7);
        let sigma = random_matrix(2, 8);
        let full = kron(&rho, &sigma);
        let tr2 = partial_trace(&full, Leg::Second, (2, 2)).unwrap();
        assert!(tr2.dist(&rho.scale(sigma.trace())) < 1e-13);
        let tr1 = partial_trace(&full, Leg::First, (2, 2)).unwrap();
        assert!(tr1.dist(&sigma.scale(rho.trace())) < 1e-13);
    }

    #[test]
    fn partial_trace_of_entangled_projection() {
        // Elementwise summation oracle on the explicit J_X matrix, |X| = 2:
        // J_2[(x,x'),(y,y')] = δ_{x,y-ish pattern} / 2; summing the first leg
        // diagonal blocks leaves I_2 / 2.
        let (_, j2, _) = entangled_constants::<f64>(2);
        let mut oracle = M::zeros(2, 2);
        for i in 0..2 {
            for r in 0..2 {
                for cidx in 0..2 {
                    let v = oracle.get(r, cidx) + j2.get(i * 2 + r, i * 2 + cidx);
                    oracle.set(r, cidx, v);
                }
            }
        }
        let got = partial_trace(&j2, Leg::First, (2, 2)).unwrap();
        assert!(got.dist(&oracle) < 1e-15);
        assert!(got.dist(&M::identity(2).scale(c(0.5, 0.0))) < 1e-15);
    }

    #[test]
    fn partial_trace_of_identity() {
        let got = partial_trace(&M::identity(4), Leg::Second, (2, 2)).unwrap();
        assert!(got.dist(&M::identity(2).scale(c(2.0, 0.0))) < 1e-15);
    }

    #[test]
    fn slice_map_is_partial_trace_at_identity() {
        let m = random_matrix(6, 15);
        let s = slice_map(&m, &M::identity(2), (2, 3)).unwrap();
        let t = partial_trace(&m, Leg::First, (2, 3)).unwrap();
        assert!(s.dist(&t) < 1e-13);
    }

    #[test]
    fn slice_map_on_matrix_unit() {
        // ⟨ε_{0,0}, ε_{0,0}⟩ = Tr(ε_{0,0} ε_{0,0}ᵗ) = 1, so
        // L_{ε_{0,0}}(ε_{0,0} ⊗ σ) = σ.
        let sigma = random_matrix(3, 99);
        let m = kron(&M::matrix_unit(2, 0, 0), &sigma);
        let got = slice_map(&m, &M::matrix_unit(2, 0, 0), (2, 3)).unwrap();
        assert!(got.dist(&sigma) < 1e-14);
    }

    #[test]
    fn diag_expectation_cases() {
        let d = M::new(
            2,
            2,
            vec![c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 3.0)],
        );
        assert_eq!(diag_expectation(&d).unwrap(), d);
        let offdiag = M::matrix_unit(2, 0, 1);
        assert!(diag_expectation(&offdiag).unwrap().frobenius_norm() < 1e-15);
        // Idempotent.
        let m = random_matrix(4, 3);
        let once = diag_expectation(&m).unwrap();
        assert_eq!(diag_expectation(&once).unwrap(), once);
    }

    #[test]
    fn diag_expectation_of_entangled() {
        // Δ_{XX}(J_X) = J_X^cl / |X| for |X| = 2, 3.
        for n in [2usize, 3] {
            let (_, j, jcl) = entangled_constants::<f64>(n);
            let got = diag_expectation(&j).unwrap();
            assert!(got.dist(&jcl.scale(c(1.0 / n as f64, 0.0))) < 1e-15);
        }
    }

    #[test]
    fn vectorize_cases() {
        // ζ_{I_2} = m_2.
        let (m2, _, _) = entangled_constants::<f64>(2);
        let z = vectorize(&M::identity(2), true).unwrap();
        assert!(z.dist(&m2) < 1e-15);
        // ζ̃_{ε_{0,1}} = e_0 ⊗ e_1.
        let z = vectorize(&M::matrix_unit(2, 0, 1), false).unwrap();
        assert!(z.dist(&V::basis(2, 0).tensor(&V::basis(2, 1))) < 1e-15);
        // Zero matrix cannot be normalized.
        assert!(vectorize(&M::zeros(2, 2), true).is_err());
    }

    #[test]
    fn vectorize_intertwining_relation() {
        // (R ⊗ S) ζ̃_T = ζ̃_{R T Sᵗ}, both sides computed independently.
        for seed in 0..20u64 {
            let r = random_matrix(3, 1000 + seed);
            let s = random_matrix(3, 2000 + seed);
            let t = random_matrix(3, 3000 + seed);
            let lhs = vectorize(&t, false).unwrap().apply(&kron(&r, &s));
            let rhs = vectorize(&r.matmul(&t).matmul(&s.transpose()), false).unwrap();
            assert!(lhs.dist(&rhs) < 1e-12);
        }
    }

    #[test]
    fn entangled_constants_shapes() {
        let (m1, j1, jcl1) = entangled_constants::<f64>(1);
        assert!(m1.dist(&V::basis(1, 0).tensor(&V::basis(1, 0))) < 1e-15);
        assert!(j1.dist(&M::identity(1)) < 1e-15);
        assert!(jcl1.dist(&M::identity(1)) < 1e-15);

        // Outer-product oracle for n = 2: value 1/2 at the {00,11} corners.
        let (m2, j2, _) = entangled_constants::<f64>(2);
        let oracle = m2.outer(&m2);
        assert!(j2.dist(&oracle) < 1e-15);
        for (r, cidx) in [(0usize, 0usize), (0, 3), (3, 0), (3, 3)] {
            assert!((j2.get(r, cidx) - c(0.5, 0.0)).norm() < 1e-15);
        }
        assert!((j2.get(1, 1)).norm() < 1e-15);

        for n in 2..=5usize {
            let (_, j, jcl) = entangled_constants::<f64>(n);
            assert!((j.trace() - c(1.0, 0.0)).norm() < 1e-13);
            assert!((jcl.trace() - c(n as f64, 0.0)).norm() < 1e-13);
            assert!(j.is_projection(1e-12));
            assert!(jcl.is_projection(1e-12));
        }
    }

    #[test]
    fn theta_untwist_basis_action() {
        // theta_untwist(e_x ⊗ e_y) = ε_{y,x}.
        for x in 0..3 {
            for y in 0..3 {
                let v = V::basis(3, x).tensor(&V::basis(3, y));
                let t = theta_untwist(&v).unwrap();
                assert!(t.dist(&M::matrix_unit(3, y, x)) < 1e-15);
            }
        }
    }

    #[test]
    fn theta_untwist_of_entangled() {
        // theta_untwist(m_Z √|Z|) = I_Z, since Σ_z θ(e_z ⊗ e_z) U^{-1} = Σ_z ε_{z,z}.
        let (m3, _, _) = entangled_constants::<f64>(3);
        let scaled = m3.scale(c(3f64.sqrt(), 0.0));
        assert!(theta_untwist(&scaled).unwrap().dist(&M::identity(3)) < 1e-14);
    }

    #[test]
    fn theta_untwist_linearity() {
        let mut next = lcg(42);
        for _ in 0..5 {
            let u = V::new((0..9).map(|_| c(next(), next())).collect());
            let v = V::new((0..9).map(|_| c(next(), next())).collect());
            let alpha = c(next(), next());
            let beta = c(next(), next());
            let lhs = theta_untwist(&u.scale(alpha).add(&v.scale(beta))).unwrap();
            let rhs = theta_untwist(&u)
                .unwrap()
                .scale(alpha)
                .add(&theta_untwist(&v).unwrap().scale(beta));
            assert!(lhs.dist(&rhs) < 1e-13);
        }
    }

    #[test]
    fn kernel_is_scalar_generic() {
        // The same kernel code instantiates over f32.
        let i2 = ComplexMatrix::<f32>::identity(2);
        let i3 = ComplexMatrix::<f32>::identity(3);
        let k = kron(&i2, &i3);
        assert_eq!(k.rows, 6);
        let t = partial_trace(&k, Leg::Second, (2, 3)).unwrap();
        assert!((t.get(0, 0).re - 3.0f32).abs() < 1e-6);
        let (m, j, _) = entangled_constants::<f32>(2);
        assert!((m.norm() - 1.0).abs() < 1e-6);
        assert!(j.is_projection(1e-6));
    }

    #[test]
    fn flip_and_skew() {
        let v = V::basis(2, 0).tensor(&V::basis(2, 1));
        assert!(
            flip(&v)
                .unwrap()
                .dist(&V::basis(2, 1).tensor(&V::basis(2, 0)))
                < 1e-15
        );
        assert!(skew_functional(&v).unwrap().norm() < 1e-15);
        // Inner-product oracle: ⟨m_4, Σ e_z ⊗ e_z⟩ = 4 / √4 = 2 = √|Z|.
        let (m4, _, _) = entangled_constants::<f64>(4);
        let got = skew_functional(&m4).unwrap();
        assert!((got - c(2.0, 0.0)).norm() < 1e-14);
    }
}
