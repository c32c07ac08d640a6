//! Quantum graphs as symmetric skew subspaces, their untwisted operator
//! anti-systems, homomorphism verification through Kraus inclusions, and
//! strategy construction for the homomorphism game.
//!
//! All twisted objects are handled in untwisted matrix form through the
//! basis unitary U_X, so no dual-space bookkeeping appears anywhere.

use crate::correlations::{QnsCorrelation, StochasticOperatorMatrix};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tensor::{
    entangled_constants, flip, kron, matrix_span, skew_functional, theta_untwist, vectorize,
    SubspaceBasis,
};
use crate::{CMatrix, CVec, Subspace};

/// Validation tolerance for skew/symmetric subspaces and anti-systems.
pub const SKEW_TOL: f64 = 1e-10;

/// A subspace 𝒰 ⊆ ℂ^X ⊗ ℂ^X that is skew (the diagonal functional
/// vanishes on it) and symmetric (flip-invariant): the crate's model of
/// a quantum graph.
#[derive(Debug, Clone)]
pub struct SymmetricSkewSubspace {
    pub label_size: usize,
    pub basis: Subspace,
}

impl SymmetricSkewSubspace {
    pub fn new(label_size: usize, basis: Subspace) -> Result<Self> {
        if basis.ambient_dim != label_size * label_size {
            return Err(Error::dims(label_size * label_size, basis.ambient_dim));
        }
        let space = Self { label_size, basis };
        space.validate(SKEW_TOL)?;
        Ok(space)
    }

    pub fn from_spanning(label_size: usize, vectors: &[CVec]) -> Result<Self> {
        let basis = SubspaceBasis::from_spanning(label_size * label_size, vectors)?;
        Self::new(label_size, basis)
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        for v in &self.basis.vectors {
            if skew_functional(v)?.norm() > tol {
                return Err(Error::InvariantViolation(
                    "subspace is not skew: diagonal functional does not vanish".into(),
                ));
            }
            if !self.basis.contains(&flip(v)?, tol) {
                return Err(Error::InvariantViolation(
                    "subspace is not symmetric: flip leaves the span".into(),
                ));
            }
        }
        Ok(())
    }

    /// 𝒰_G = span{e_x ⊗ e_y : x ∼ y} of a simple graph.
    pub fn from_graph(g: &Graph) -> Result<Self> {
        let vectors: Vec<CVec> = g
            .directed_edges()
            .into_iter()
            .map(|(x, y)| CVec::basis(g.n, x).tensor(&CVec::basis(g.n, y)))
            .collect();
        let basis = SubspaceBasis::from_orthonormal(g.n * g.n, vectors)?;
        Self::new(g.n, basis)
    }

    /// ⟨m_A⟩^⊥, the quantum graph whose anti-system is (ℂ I_A)^⊥; the
    /// target turning relaxed colouring into a homomorphism game.
    pub fn me_perp(a_size: usize) -> Result<Self> {
        let (m, _, _) = entangled_constants::<f64>(a_size);
        let dim = a_size * a_size;
        let mut spanning = Vec::with_capacity(dim);
        for i in 0..dim {
            let e = CVec::basis(dim, i);
            spanning.push(e.sub(&m.scale(e.inner(&m))));
        }
        Self::from_spanning(a_size, &spanning)
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// 𝒰 ⊗ m_Z viewed inside (ℂ^X ⊗ ℂ^Z)⊗(ℂ^X ⊗ ℂ^Z) after the shuffle
    /// ((x₁,x₂),(z₁,z₂)) ↦ ((x₁,z₁),(x₂,z₂)).
    pub fn tensor_with_me(&self, z_size: usize) -> Result<Self> {
        assert!(z_size >= 1);
        let x = self.label_size;
        let new_label = x * z_size;
        let inv_sqrt = 1.0 / (z_size as f64).sqrt();
        let mut vectors = Vec::with_capacity(self.basis.dim());
        for xi in &self.basis.vectors {
            let mut w = CVec::zeros(new_label * new_label);
            for x1 in 0..x {
                for x2 in 0..x {
                    let coeff = xi.data[x1 * x + x2];
                    if coeff.norm_sqr() == 0.0 {
                        continue;
                    }
                    for z in 0..z_size {
                        // (x1, z) ⊗ (x2, z) component of ξ ⊗ m_Z shuffled.
                        let row = (x1 * z_size + z) * new_label + (x2 * z_size + z);
                        w.data[row] = coeff * crate::c64(inv_sqrt, 0.0);
                    }
                }
            }
            vectors.push(w);
        }
        let basis = SubspaceBasis::from_orthonormal(new_label * new_label, vectors)?;
        Self::new(new_label, basis)
    }
}

/// A transpose-closed, trace-zero subspace of M_X: the untwisted form of
/// a twisted operator anti-system. `basis` spans it; `span`
/// is the orthonormalized Hilbert-Schmidt span.
#[derive(Debug, Clone)]
pub struct OperatorAntiSystem {
    pub dim: usize,
    pub basis: Vec<CMatrix>,
    pub span: Subspace,
}

impl OperatorAntiSystem {
    pub fn new(dim: usize, basis: Vec<CMatrix>) -> Result<Self> {
        let span = matrix_span(dim, &basis)?;
        let sys = Self { dim, basis, span };
        sys.validate(SKEW_TOL)?;
        Ok(sys)
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        for v in &self.span.vectors {
            let t = crate::tensor::devectorize(v)?;
            if t.trace().norm() > tol {
                return Err(Error::InvariantViolation(
                    "anti-system contains a matrix with nonzero trace".into(),
                ));
            }
            let t_vec = vectorize(&t.transpose(), false)?;
            if !self.span.contains(&t_vec, tol) {
                return Err(Error::InvariantViolation(
                    "anti-system is not transpose-closed".into(),
                ));
            }
        }
        Ok(())
    }

    /// S_G^0 = span{ε_{x,x'} : x ∼ x'}.
    pub fn edge_system(g: &Graph) -> Result<Self> {
        let basis: Vec<CMatrix> = g
            .directed_edges()
            .into_iter()
            .map(|(x, y)| CMatrix::matrix_unit(g.n, x, y))
            .collect();
        Self::new(g.n, basis)
    }

    /// (ℂ I)^⊥: all traceless matrices.
    pub fn traceless_full(dim: usize) -> Result<Self> {
        let mut basis = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    basis.push(CMatrix::matrix_unit(dim, i, j));
                }
            }
        }
        for i in 0..dim.saturating_sub(1) {
            basis.push(CMatrix::matrix_unit(dim, i, i).sub(&CMatrix::matrix_unit(
                dim,
                i + 1,
                i + 1,
            )));
        }
        Self::new(dim, basis)
    }

    pub fn rank(&self) -> usize {
        self.span.dim()
    }

    pub fn contains(&self, m: &CMatrix, tol: f64) -> bool {
        match vectorize(m, false) {
            Ok(v) => self.span.contains(&v, tol),
            Err(_) => false,
        }
    }
}

/// Untwisted anti-system θ(𝒰)U_X^{-1} of a symmetric skew subspace.
pub fn antisystem_of(u: &SymmetricSkewSubspace) -> Result<OperatorAntiSystem> {
    let basis: Vec<CMatrix> = u
        .basis
        .vectors
        .iter()
        .map(theta_untwist)
        .collect::<Result<_>>()?;
    OperatorAntiSystem::new(u.label_size, basis)
}

/// Kraus operators of a channel M_in → M_out (trace preservation:
/// Σ_i N_i* N_i = I on the input space).
#[derive(Debug, Clone)]
pub struct KrausFamily {
    pub in_dim: usize,
    pub out_dim: usize,
    pub ops: Vec<CMatrix>,
}

impl KrausFamily {
    pub fn new(in_dim: usize, out_dim: usize, ops: Vec<CMatrix>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::invalid("Kraus family cannot be empty"));
        }
        for op in &ops {
            if op.rows != out_dim || op.cols != in_dim {
                return Err(Error::dims(out_dim, op.rows));
            }
        }
        let fam = Self {
            in_dim,
            out_dim,
            ops,
        };
        let dev = fam.completeness_deviation();
        if dev > 1e-9 * (in_dim as f64).max(1.0) {
            return Err(Error::InvariantViolation(format!(
                "Kraus completeness Σ N*N = I fails by {dev:.3e}"
            )));
        }
        Ok(fam)
    }

    pub fn completeness_deviation(&self) -> f64 {
        let mut acc = CMatrix::zeros(self.in_dim, self.in_dim);
        for op in &self.ops {
            acc = acc.add(&op.adjoint().matmul(op));
        }
        acc.dist(&CMatrix::identity(self.in_dim))
    }

    /// Applies the induced channel T ↦ Σ N_i T N_i*.
    pub fn apply(&self, t: &CMatrix) -> Result<CMatrix> {
        if t.rows != self.in_dim || t.cols != self.in_dim {
            return Err(Error::dims(self.in_dim, t.rows));
        }
        let mut out = CMatrix::zeros(self.out_dim, self.out_dim);
        for op in &self.ops {
            out = out.add(&op.matmul(t).matmul(&op.adjoint()));
        }
        Ok(out)
    }

    /// Applies the adjoint (unital) side: T ↦ Σ N_i* T N_i.
    pub fn apply_adjoint(&self, t: &CMatrix) -> Result<CMatrix> {
        if t.rows != self.out_dim || t.cols != self.out_dim {
            return Err(Error::dims(self.out_dim, t.rows));
        }
        let mut out = CMatrix::zeros(self.in_dim, self.in_dim);
        for op in &self.ops {
            out = out.add(&op.adjoint().matmul(t).matmul(op));
        }
        Ok(out)
    }
}

/// The deterministic channel of a graph homomorphism f : G → H, with
/// Kraus operators M_x = e_{f(x)} e_x* summing to Σ_x e_{f(x)} e_x*
/// (so Σ_x M_x* M_x = Σ_x ε_{x,x} = I even for non-injective f).
pub fn classical_hom_channel(g: &Graph, h: &Graph, f: &[usize]) -> Result<KrausFamily> {
    g.is_homomorphism_to(h, f)?;
    let ops: Vec<CMatrix> = f
        .iter()
        .enumerate()
        .map(|(x, &fx)| {
            let mut m = CMatrix::zeros(h.n, g.n);
            m.set(fx, x, crate::c64(1.0, 0.0));
            m
        })
        .collect();
    KrausFamily::new(g.n, h.n, ops)
}

/// Report of a homomorphism check: the worst relative Hilbert-Schmidt
/// residual of N_i (B ⊗ I_aux) N_j* against the target span.
#[derive(Debug, Clone)]
pub struct HomCheckReport {
    pub verdict: bool,
    pub max_residual: f64,
}

/// Verifies N_i (S ⊗ 1_aux) N_j* ⊆ T for all Kraus pairs, where the
/// auxiliary multiplicity is inferred from the Kraus input dimension.
pub fn hom_check(
    s: &OperatorAntiSystem,
    t: &OperatorAntiSystem,
    kraus: &KrausFamily,
    tol: f64,
) -> Result<HomCheckReport> {
    if kraus.out_dim != t.dim {
        return Err(Error::dims(t.dim, kraus.out_dim));
    }
    if !kraus.in_dim.is_multiple_of(s.dim) {
        return Err(Error::dims(s.dim, kraus.in_dim));
    }
    let aux = kraus.in_dim / s.dim;
    let id_aux = CMatrix::identity(aux);
    let mut max_residual = 0.0f64;
    for b in &s.span.vectors {
        let bmat = crate::tensor::devectorize(b)?;
        let lifted = if aux == 1 { bmat } else { kron(&bmat, &id_aux) };
        for ni in &kraus.ops {
            let left = ni.matmul(&lifted);
            for nj in &kraus.ops {
                let w = left.matmul(&nj.adjoint());
                let wv = vectorize(&w, false)?;
                let residual = wv.sub(&t.span.project(&wv)).norm() / wv.norm().max(1.0);
                max_residual = max_residual.max(residual);
            }
        }
    }
    Ok(HomCheckReport {
        verdict: max_residual <= tol,
        max_residual,
    })
}

/// Builds the tracial strategy of Kraus data for the homomorphism game:
/// the blocks of ψ(ε_{a,a'}) = Σ_i N_i* ε_{a,a'} N_i form a stochastic
/// operator matrix over (X, A) with auxiliary dimension Z, whose tracial
/// correlation (normalized trace over Z) is returned.
pub fn strategy_from_kraus(
    kraus: &KrausFamily,
    x_size: usize,
    z_size: usize,
) -> Result<QnsCorrelation> {
    if kraus.in_dim != x_size * z_size {
        return Err(Error::dims(x_size * z_size, kraus.in_dim));
    }
    let a_size = kraus.out_dim;
    // ψ(ε_{a,a'}) ∈ M_X ⊗ M_Z, sliced into (x, x') blocks over M_Z.
    let mut blocks = vec![CMatrix::zeros(z_size, z_size); x_size * x_size * a_size * a_size];
    for a in 0..a_size {
        for ap in 0..a_size {
            let psi = kraus.apply_adjoint(&CMatrix::matrix_unit(a_size, a, ap))?;
            for x in 0..x_size {
                for xp in 0..x_size {
                    let blk = CMatrix::from_fn(z_size, z_size, |z, zp| {
                        psi.get(x * z_size + z, xp * z_size + zp)
                    });
                    blocks[((x * x_size + xp) * a_size + a) * a_size + ap] = blk;
                }
            }
        }
    }
    let som = StochasticOperatorMatrix::new(x_size, a_size, z_size, false, blocks)?;
    QnsCorrelation::tracial_qns_from_som(&som)
}
