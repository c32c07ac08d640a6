//! Stochastic operator matrices, matrix unit systems and block-unitary
//! (Brown-type) representations, together with seeded samplers.

use crate::error::{Error, Result};
use crate::random::SeedRng;
use crate::tensor::{is_psd, kron};
use crate::CMatrix;

/// Positive block operator matrix (E_{x,x',a,a'}) over an auxiliary
/// dimension `k` with Tr_A E = I; the semi-classical variant is
/// block-diagonal in the input index.
#[derive(Debug, Clone)]
pub struct StochasticOperatorMatrix {
    pub x_size: usize,
    pub a_size: usize,
    pub aux_dim: usize,
    pub semi_classical: bool,
    /// Blocks indexed by ((x · X + x') · A + a) · A + a'.
    blocks: Vec<CMatrix>,
}

impl StochasticOperatorMatrix {
    pub fn new(
        x_size: usize,
        a_size: usize,
        aux_dim: usize,
        semi_classical: bool,
        blocks: Vec<CMatrix>,
    ) -> Result<Self> {
        let expected = x_size * x_size * a_size * a_size;
        if blocks.len() != expected {
            return Err(Error::dims(expected, blocks.len()));
        }
        for b in &blocks {
            if b.rows != aux_dim || b.cols != aux_dim {
                return Err(Error::dims(aux_dim, b.rows));
            }
        }
        let som = Self {
            x_size,
            a_size,
            aux_dim,
            semi_classical,
            blocks,
        };
        som.validate(1e-9)?;
        Ok(som)
    }

    /// Semi-classical constructor from blocks indexed by (x, a, a').
    pub fn from_semiclassical_blocks(
        x_size: usize,
        a_size: usize,
        aux_dim: usize,
        diag_blocks: &[CMatrix],
    ) -> Result<Self> {
        if diag_blocks.len() != x_size * a_size * a_size {
            return Err(Error::dims(x_size * a_size * a_size, diag_blocks.len()));
        }
        let mut blocks = vec![CMatrix::zeros(aux_dim, aux_dim); x_size * x_size * a_size * a_size];
        for x in 0..x_size {
            for a in 0..a_size {
                for ap in 0..a_size {
                    let src = (x * a_size + a) * a_size + ap;
                    let dst = ((x * x_size + x) * a_size + a) * a_size + ap;
                    blocks[dst] = diag_blocks[src].clone();
                }
            }
        }
        Self::new(x_size, a_size, aux_dim, true, blocks)
    }

    pub fn block(&self, x: usize, xp: usize, a: usize, ap: usize) -> &CMatrix {
        &self.blocks[((x * self.x_size + xp) * self.a_size + a) * self.a_size + ap]
    }

    /// Semi-classical block E_{x,a,a'}.
    pub fn sc_block(&self, x: usize, a: usize, ap: usize) -> &CMatrix {
        self.block(x, x, a, ap)
    }

    /// The full block matrix over rows (x, a, κ) and columns (x', a', κ').
    pub fn assembled(&self) -> CMatrix {
        let side = self.x_size * self.a_size * self.aux_dim;
        let mut m = CMatrix::zeros(side, side);
        for x in 0..self.x_size {
            for xp in 0..self.x_size {
                for a in 0..self.a_size {
                    for ap in 0..self.a_size {
                        let blk = self.block(x, xp, a, ap);
                        let r0 = (x * self.a_size + a) * self.aux_dim;
                        let c0 = (xp * self.a_size + ap) * self.aux_dim;
                        for i in 0..self.aux_dim {
                            for j in 0..self.aux_dim {
                                m.set(r0 + i, c0 + j, blk.get(i, j));
                            }
                        }
                    }
                }
            }
        }
        m
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        if !is_psd(&self.assembled(), tol) {
            return Err(Error::InvariantViolation(
                "stochastic operator matrix is not positive".into(),
            ));
        }
        let id = CMatrix::identity(self.aux_dim);
        for x in 0..self.x_size {
            for xp in 0..self.x_size {
                let mut acc = CMatrix::zeros(self.aux_dim, self.aux_dim);
                for a in 0..self.a_size {
                    acc = acc.add(self.block(x, xp, a, a));
                }
                let expect = if x == xp {
                    id.clone()
                } else {
                    CMatrix::zeros(self.aux_dim, self.aux_dim)
                };
                if acc.dist(&expect) > tol * (self.aux_dim as f64).max(1.0) {
                    return Err(Error::InvariantViolation(format!(
                        "partial trace over outputs is not δ_(x,x') I at x = {x}, x' = {xp}"
                    )));
                }
                let _ = expect;
            }
        }
        if self.semi_classical {
            for x in 0..self.x_size {
                for xp in 0..self.x_size {
                    if x == xp {
                        continue;
                    }
                    for a in 0..self.a_size {
                        for ap in 0..self.a_size {
                            if self.block(x, xp, a, ap).frobenius_norm() > tol {
                                return Err(Error::InvariantViolation(
                                    "semi-classical matrix has off-diagonal input blocks".into(),
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn all_blocks(&self) -> &[CMatrix] {
        &self.blocks
    }
}

/// For each input label, a family {e_{x,a,a'}} of matrix units of M_A
/// represented on a common auxiliary space M_n.
#[derive(Debug, Clone)]
pub struct MatrixUnitSystemFamily {
    pub x_size: usize,
    pub a_size: usize,
    pub n: usize,
    /// systems[x][a · A + a'] = e_{x,a,a'}.
    pub systems: Vec<Vec<CMatrix>>,
}

impl MatrixUnitSystemFamily {
    pub fn new(x_size: usize, a_size: usize, n: usize, systems: Vec<Vec<CMatrix>>) -> Result<Self> {
        let fam = Self {
            x_size,
            a_size,
            n,
            systems,
        };
        fam.validate(1e-9)?;
        Ok(fam)
    }

    pub fn unit(&self, x: usize, a: usize, ap: usize) -> &CMatrix {
        &self.systems[x][a * self.a_size + ap]
    }

    /// Largest residual of the matrix-unit relations
    /// e_{x,a,a'} e_{x,b,b'} = δ_{a',b} e_{x,a,b'}, e* = swap, Σ_a e_{x,a,a} = I.
    pub fn relation_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        let id = CMatrix::identity(self.n);
        for x in 0..self.x_size {
            let mut sum = CMatrix::zeros(self.n, self.n);
            for a in 0..self.a_size {
                sum = sum.add(self.unit(x, a, a));
                for ap in 0..self.a_size {
                    worst = worst.max(self.unit(x, a, ap).adjoint().dist(self.unit(x, ap, a)));
                    for b in 0..self.a_size {
                        for bp in 0..self.a_size {
                            let prod = self.unit(x, a, ap).matmul(self.unit(x, b, bp));
                            let expect = if ap == b {
                                self.unit(x, a, bp).clone()
                            } else {
                                CMatrix::zeros(self.n, self.n)
                            };
                            worst = worst.max(prod.dist(&expect));
                        }
                    }
                }
            }
            worst = worst.max(sum.dist(&id));
        }
        worst
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.systems.len() != self.x_size {
            return Err(Error::dims(self.x_size, self.systems.len()));
        }
        for sys in &self.systems {
            if sys.len() != self.a_size * self.a_size {
                return Err(Error::dims(self.a_size * self.a_size, sys.len()));
            }
            for m in sys {
                if m.rows != self.n || m.cols != self.n {
                    return Err(Error::dims(self.n, m.rows));
                }
            }
        }
        let res = self.relation_residual();
        if res > tol {
            return Err(Error::InvariantViolation(format!(
                "matrix unit relations violated (residual {res:.3e})"
            )));
        }
        Ok(())
    }

    /// Canonical matrix units of M_A reused for every input label
    /// (n = a_size).
    pub fn canonical(x_size: usize, a_size: usize) -> Self {
        let sys: Vec<CMatrix> = (0..a_size * a_size)
            .map(|idx| CMatrix::matrix_unit(a_size, idx / a_size, idx % a_size))
            .collect();
        Self {
            x_size,
            a_size,
            n: a_size,
            systems: (0..x_size).map(|_| sys.clone()).collect(),
        }
    }

    /// Family e_{x,a,a'} = W_x (ε_{a,a'} ⊗ I_k) W_x* on M_{A·k}.
    pub fn conjugated(a_size: usize, aux: usize, unitaries: &[CMatrix]) -> Result<Self> {
        let n = a_size * aux;
        let id_k = CMatrix::identity(aux);
        let mut systems = Vec::with_capacity(unitaries.len());
        for w in unitaries {
            if w.rows != n || w.cols != n {
                return Err(Error::dims(n, w.rows));
            }
            if !w.is_unitary(1e-9) {
                return Err(Error::InvariantViolation(
                    "conjugator is not unitary".into(),
                ));
            }
            let mut sys = Vec::with_capacity(a_size * a_size);
            for a in 0..a_size {
                for ap in 0..a_size {
                    let unit = kron(&CMatrix::matrix_unit(a_size, a, ap), &id_k);
                    sys.push(w.matmul(&unit).matmul(&w.adjoint()));
                }
            }
            systems.push(sys);
        }
        Self::new(unitaries.len(), a_size, n, systems)
    }

    /// Views the family as a semi-classical stochastic operator matrix.
    pub fn as_som(&self) -> Result<StochasticOperatorMatrix> {
        let mut diag = Vec::with_capacity(self.x_size * self.a_size * self.a_size);
        for x in 0..self.x_size {
            for a in 0..self.a_size {
                for ap in 0..self.a_size {
                    diag.push(self.unit(x, a, ap).clone());
                }
            }
        }
        StochasticOperatorMatrix::from_semiclassical_blocks(self.x_size, self.a_size, self.n, &diag)
    }
}

/// Finite-dimensional block unitary (u_{a,x})_{a,x} with |A| = |X|; the
/// products u_{a,x}* u_{a',x'} generate concurrent QNS correlations.
#[derive(Debug, Clone)]
pub struct BrownRep {
    pub x_size: usize,
    pub aux_dim: usize,
    /// blocks[a · X + x] = u_{a,x}.
    pub blocks: Vec<CMatrix>,
}

impl BrownRep {
    pub fn new(x_size: usize, aux_dim: usize, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != x_size * x_size {
            return Err(Error::dims(x_size * x_size, blocks.len()));
        }
        for b in &blocks {
            if b.rows != aux_dim || b.cols != aux_dim {
                return Err(Error::dims(aux_dim, b.rows));
            }
        }
        let rep = Self {
            x_size,
            aux_dim,
            blocks,
        };
        if !rep.block_unitary().is_unitary(1e-9) {
            return Err(Error::InvariantViolation(
                "block matrix (u_{a,x}) is not unitary".into(),
            ));
        }
        Ok(rep)
    }

    pub fn unit(&self, a: usize, x: usize) -> &CMatrix {
        &self.blocks[a * self.x_size + x]
    }

    /// The |X|k × |X|k matrix with (a, x) block u_{a,x}.
    pub fn block_unitary(&self) -> CMatrix {
        let side = self.x_size * self.aux_dim;
        let mut m = CMatrix::zeros(side, side);
        for a in 0..self.x_size {
            for x in 0..self.x_size {
                let blk = self.unit(a, x);
                for i in 0..self.aux_dim {
                    for j in 0..self.aux_dim {
                        m.set(a * self.aux_dim + i, x * self.aux_dim + j, blk.get(i, j));
                    }
                }
            }
        }
        m
    }

    /// From a plain unitary on ℂ^{Xk}, splitting into (a, x) blocks.
    pub fn from_unitary(x_size: usize, aux_dim: usize, u: &CMatrix) -> Result<Self> {
        let side = x_size * aux_dim;
        if u.rows != side || u.cols != side {
            return Err(Error::dims(side, u.rows));
        }
        let mut blocks = Vec::with_capacity(x_size * x_size);
        for a in 0..x_size {
            for x in 0..x_size {
                blocks.push(CMatrix::from_fn(aux_dim, aux_dim, |i, j| {
                    u.get(a * aux_dim + i, x * aux_dim + j)
                }));
            }
        }
        Self::new(x_size, aux_dim, blocks)
    }

    /// τ(w_{a,b}) = tr_k(Σ_x u_{a,x}* u_{b,x}); equals δ_{a,b} for any
    /// genuine representation.
    pub fn tau_w(&self, a: usize, b: usize) -> crate::C64 {
        let mut acc = CMatrix::zeros(self.aux_dim, self.aux_dim);
        for x in 0..self.x_size {
            acc = acc.add(&self.unit(a, x).adjoint().matmul(self.unit(b, x)));
        }
        acc.normalized_trace()
    }

    /// The stochastic operator matrix E_{x,x',a,a'} = u_{a,x}* u_{a',x'}.
    pub fn as_som(&self) -> Result<StochasticOperatorMatrix> {
        let xs = self.x_size;
        let mut blocks = Vec::with_capacity(xs * xs * xs * xs);
        for x in 0..xs {
            for xp in 0..xs {
                for a in 0..xs {
                    for ap in 0..xs {
                        blocks.push(self.unit(a, x).adjoint().matmul(self.unit(ap, xp)));
                    }
                }
            }
        }
        StochasticOperatorMatrix::new(xs, xs, self.aux_dim, false, blocks)
    }
}

/// Haar-seeded matrix unit system family: e_{x,a,a'} = W_x(ε_{a,a'} ⊗ I_k)W_x*.
pub fn sample_matrix_unit_family(
    x_size: usize,
    a_size: usize,
    aux: usize,
    seed: u64,
) -> MatrixUnitSystemFamily {
    let mut rng = SeedRng::new(seed);
    let n = a_size * aux;
    let ws: Vec<CMatrix> = (0..x_size).map(|_| rng.haar_unitary(n)).collect();
    MatrixUnitSystemFamily::conjugated(a_size, aux, &ws).expect("Haar conjugation is valid")
}

/// Haar-seeded Brown representation: a Haar block unitary of size |X|k.
pub fn sample_brown_rep(x_size: usize, aux: usize, seed: u64) -> BrownRep {
    let mut rng = SeedRng::new(seed);
    let u = rng.haar_unitary(x_size * aux);
    BrownRep::from_unitary(x_size, aux, &u).expect("Haar block unitary is valid")
}

/// Haar-seeded semi-classical stochastic operator matrix: for each x an
/// isometry V : ℂ^k → ℂ^A ⊗ ℂ^k with E_{x,a,a'} = V_a* V_{a'}.
pub fn sample_semiclassical_som(
    x_size: usize,
    a_size: usize,
    aux: usize,
    seed: u64,
) -> StochasticOperatorMatrix {
    let mut rng = SeedRng::new(seed);
    let mut diag = Vec::with_capacity(x_size * a_size * a_size);
    for _ in 0..x_size {
        let v = rng.haar_isometry::<f64>(a_size * aux, aux);
        // V_a = rows of the a-th block.
        let va: Vec<CMatrix> = (0..a_size)
            .map(|a| CMatrix::from_fn(aux, aux, |i, j| v.get(a * aux + i, j)))
            .collect();
        for a in 0..a_size {
            for ap in 0..a_size {
                diag.push(va[a].adjoint().matmul(&va[ap]));
            }
        }
    }
    StochasticOperatorMatrix::from_semiclassical_blocks(x_size, a_size, aux, &diag)
        .expect("isometry blocks satisfy the invariants")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_units_validate() {
        let fam = MatrixUnitSystemFamily::canonical(2, 3);
        assert!(fam.relation_residual() < 1e-14);
        let som = fam.as_som().unwrap();
        assert!(som.semi_classical);
        assert!(som.validate(1e-10).is_ok());
    }

    #[test]
    fn sampled_reps_satisfy_invariants() {
        let fam = sample_matrix_unit_family(2, 2, 1, 7);
        assert!(fam.relation_residual() < 1e-10);
        assert_eq!(fam.n, 2);

        let brown = sample_brown_rep(3, 2, 1);
        assert_eq!(brown.block_unitary().rows, 6);
        assert!(brown.block_unitary().is_unitary(1e-10));
        for a in 0..3 {
            for b in 0..3 {
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((brown.tau_w(a, b) - c64(expect, 0.0)).norm() < 1e-10);
            }
        }

        let som = sample_semiclassical_som(3, 2, 2, 5);
        assert!(som.validate(1e-10).is_ok());
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_semiclassical_som(2, 2, 2, 7);
        let b = sample_semiclassical_som(2, 2, 2, 7);
        for (x, y) in a.all_blocks().iter().zip(b.all_blocks()) {
            assert_eq!(x.data, y.data);
        }
    }

    #[test]
    fn scalar_brown_rep_is_permutation_friendly() {
        // k = 1, U = I: u_{a,x} = δ_{a,x}.
        let brown = BrownRep::from_unitary(3, 1, &CMatrix::identity(3)).unwrap();
        assert!((brown.unit(0, 0).get(0, 0) - c64(1.0, 0.0)).norm() < 1e-15);
        assert!(brown.unit(0, 1).get(0, 0).norm() < 1e-15);
    }

    use crate::c64;
}
