//! Mirror strategies Γ_{ρ,τ}: classical-input correlations built from a
//! matrix unit system family, a pair of mirror functions and per-input
//! unitaries, with their rank-one output targets and the vector identity
//! of the underlying tracial model.

use crate::correlations::som::MatrixUnitSystemFamily;
use crate::correlations::{GameDims, QnsCorrelation};
use crate::error::{Error, Result};
use crate::tensor::{entangled_constants, kron, vectorize};
use crate::{CMatrix, CVec};

/// Data of the mirror construction: mirror functions f : X → Y and
/// g : Y → X, unitaries U_x, V_y on ℂ^A, and the player-one matrix unit
/// systems (e_{x,a,a'}).
#[derive(Debug, Clone)]
pub struct MirrorGameSpec {
    pub f: Vec<usize>,
    pub g: Vec<usize>,
    pub u: Vec<CMatrix>,
    pub v: Vec<CMatrix>,
    pub rep: MatrixUnitSystemFamily,
}

impl MirrorGameSpec {
    pub fn new(
        f: Vec<usize>,
        g: Vec<usize>,
        u: Vec<CMatrix>,
        v: Vec<CMatrix>,
        rep: MatrixUnitSystemFamily,
    ) -> Result<Self> {
        let x_size = rep.x_size;
        let a_size = rep.a_size;
        if f.len() != x_size || g.len() != f.len() || u.len() != x_size || v.len() != x_size {
            return Err(Error::dims(x_size, f.len()));
        }
        if f.iter().any(|&y| y >= x_size) || g.iter().any(|&x| x >= x_size) {
            return Err(Error::invalid(
                "mirror functions must map into the alphabets",
            ));
        }
        for w in u.iter().chain(v.iter()) {
            if w.rows != a_size || w.cols != a_size {
                return Err(Error::dims(a_size, w.rows));
            }
            if !w.is_unitary(1e-9) {
                return Err(Error::InvariantViolation(
                    "mirror unitaries must be unitary".into(),
                ));
            }
        }
        Ok(Self { f, g, u, v, rep })
    }

    /// Seeded consistent spec: f a random permutation, g = f^{-1},
    /// random Haar U_x with V_{f(x)} = U_x, and a conjugated matrix unit
    /// family of auxiliary size `a_size · aux`.
    pub fn sampled(x_size: usize, a_size: usize, aux: usize, seed: u64) -> Self {
        let mut rng = crate::random::SeedRng::new(seed);
        // Fisher-Yates permutation from the seeded stream.
        let mut f: Vec<usize> = (0..x_size).collect();
        for i in (1..x_size).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            f.swap(i, j);
        }
        let mut g = vec![0usize; x_size];
        for (x, &y) in f.iter().enumerate() {
            g[y] = x;
        }
        let u: Vec<CMatrix> = (0..x_size).map(|_| rng.haar_unitary(a_size)).collect();
        let mut v = vec![CMatrix::identity(a_size); x_size];
        for (x, &y) in f.iter().enumerate() {
            v[y] = u[x].clone();
        }
        let rep = crate::correlations::som::sample_matrix_unit_family(
            x_size,
            a_size,
            aux,
            seed ^ 0xABCD_1234,
        );
        Self { f, g, u, v, rep }
    }

    /// The identity spec: f = g = id, U = V = I, targets J_A.
    pub fn identity(rep: MatrixUnitSystemFamily) -> Self {
        let x_size = rep.x_size;
        let a_size = rep.a_size;
        let id: Vec<usize> = (0..x_size).collect();
        let eye = vec![CMatrix::identity(a_size); x_size];
        Self {
            f: id.clone(),
            g: id,
            u: eye.clone(),
            v: eye,
            rep,
        }
    }

    fn x_size(&self) -> usize {
        self.rep.x_size
    }

    fn a_size(&self) -> usize {
        self.rep.a_size
    }

    /// ρ(f_{y,b,b'}) = Σ_{a,a'} conj(V_y[a,b]) V_y[a',b'] e_{g(y),a,a'}:
    /// the (b,b') block of (V_y* ⊗ I)(e_{g(y),a,a'})_{a,a'}(V_y ⊗ I).
    fn rho_block(&self, y: usize, b: usize, bp: usize) -> CMatrix {
        let a_size = self.a_size();
        let vy = &self.v[y];
        let mut acc = CMatrix::zeros(self.rep.n, self.rep.n);
        for a in 0..a_size {
            for ap in 0..a_size {
                let w = vy.get(a, b).conj() * vy.get(ap, bp);
                if w.norm_sqr() == 0.0 {
                    continue;
                }
                acc = acc.add(&self.rep.unit(self.g[y], a, ap).scale(w));
            }
        }
        acc
    }

    /// Same block computed from the U_x side of the hypothesis, defined
    /// when y = f(x).
    fn rho_block_via_u(&self, x: usize, b: usize, bp: usize) -> CMatrix {
        let a_size = self.a_size();
        let ux = &self.u[x];
        let mut acc = CMatrix::zeros(self.rep.n, self.rep.n);
        for a in 0..a_size {
            for ap in 0..a_size {
                let w = ux.get(a, b).conj() * ux.get(ap, bp);
                if w.norm_sqr() == 0.0 {
                    continue;
                }
                acc = acc.add(&self.rep.unit(x, a, ap).scale(w));
            }
        }
        acc
    }

    /// Verifies the hypothesis: both ρ formulas agree on y = f(x) and the
    /// ρ images form matrix unit systems.
    pub fn check_hypothesis(&self, tol: f64) -> Result<()> {
        let a_size = self.a_size();
        for x in 0..self.x_size() {
            let y = self.f[x];
            if self.g[y] != x {
                return Err(Error::InvariantViolation(format!(
                    "mirror functions are inconsistent: g(f({x})) = {} ≠ {x}",
                    self.g[y]
                )));
            }
            for b in 0..a_size {
                for bp in 0..a_size {
                    let lhs = self.rho_block(y, b, bp);
                    let rhs = self.rho_block_via_u(x, b, bp);
                    if lhs.dist(&rhs) > tol {
                        return Err(Error::InvariantViolation(format!(
                            "ρ images disagree between the U and V hypotheses at x = {x}"
                        )));
                    }
                }
            }
        }
        // ρ images form matrix unit systems.
        let mut systems = Vec::with_capacity(self.x_size());
        for y in 0..self.x_size() {
            let mut sys = Vec::with_capacity(a_size * a_size);
            for b in 0..a_size {
                for bp in 0..a_size {
                    sys.push(self.rho_block(y, b, bp));
                }
            }
            systems.push(sys);
        }
        let fam = MatrixUnitSystemFamily {
            x_size: self.x_size(),
            a_size,
            n: self.rep.n,
            systems,
        };
        if fam.relation_residual() > tol {
            return Err(Error::InvariantViolation(
                "ρ images are not matrix units within tolerance".into(),
            ));
        }
        Ok(())
    }

    /// The correlation Γ_{ρ,τ} with τ the normalized trace:
    /// Γ(ε_{x,x} ⊗ ε_{y,y})_{(a,b),(a',b')} = tr_n(e_{x,a,a'} ρ(f_{y,b',b})).
    pub fn strategy(&self) -> Result<QnsCorrelation> {
        self.check_hypothesis(1e-8)?;
        let dims = GameDims::square(self.x_size(), self.a_size());
        let mut corr = QnsCorrelation::from_blocks(dims, |x, xp, y, yp| {
            let mut blk = CMatrix::zeros(dims.out_dim(), dims.out_dim());
            if x != xp || y != yp {
                return blk;
            }
            for a in 0..dims.a {
                for b in 0..dims.b {
                    for ap in 0..dims.a {
                        for bp in 0..dims.b {
                            let val = self
                                .rep
                                .unit(x, a, ap)
                                .matmul(&self.rho_block(y, bp, b))
                                .normalized_trace();
                            blk.set(a * dims.b + b, ap * dims.b + bp, val);
                        }
                    }
                }
            }
            blk
        })?;
        corr.classical_input = true;
        Ok(corr)
    }

    /// Rank-one targets: for every x the matrix λ_x ζ̃_{U_x} ζ̃_{U_x}* with
    /// λ_x = tr_n(e_{x,a,a}), the value of Γ on ε_{x,x} ⊗ ε_{f(x),f(x)}.
    pub fn targets(&self) -> Result<Vec<(usize, CMatrix)>> {
        let mut out = Vec::with_capacity(self.x_size());
        for x in 0..self.x_size() {
            let lambda = self.rep.unit(x, 0, 0).normalized_trace();
            let zt = vectorize(&self.u[x], false)?;
            out.push((x, zt.outer(&zt).scale(lambda)));
        }
        Ok(out)
    }

    /// The mirror game of the construction: rank-one rules ζ_{U_x}ζ_{U_x}*
    /// at (x, f(x)) and ζ_{V_y}ζ_{V_y}* at (g(y), y); all other inputs are
    /// unconstrained.
    pub fn game_rules(&self) -> Result<Vec<(CMatrix, CMatrix)>> {
        let x_size = self.x_size();
        let mut rules = Vec::new();
        for x in 0..x_size {
            let q = kron(
                &CMatrix::matrix_unit(x_size, x, x),
                &CMatrix::matrix_unit(x_size, self.f[x], self.f[x]),
            );
            let z = vectorize(&self.u[x], true)?;
            rules.push((q, z.outer(&z)));
        }
        for y in 0..x_size {
            let q = kron(
                &CMatrix::matrix_unit(x_size, self.g[y], self.g[y]),
                &CMatrix::matrix_unit(x_size, y, y),
            );
            let z = vectorize(&self.v[y], true)?;
            rules.push((q, z.outer(&z)));
        }
        Ok(rules)
    }
}

/// Residual of the tracial-model vector identity
/// (U^x ⊗ I)* E_x (e_a ⊗ ξ) = F_{f(x)}ᵗ (U^x ⊗ I)* (e_a ⊗ ξ)
/// in the finite trace model: H = ℂ^{n²}, ξ = m_n, π₁ acting by left and
/// π₂ by right multiplication. Returns the worst norm over x and a.
pub fn mirror_gns_identity_residual(spec: &MirrorGameSpec) -> Result<f64> {
    spec.check_hypothesis(1e-8)?;
    let n = spec.rep.n;
    let a_size = spec.rep.a_size;
    let (xi, _, _) = entangled_constants::<f64>(n);
    let id_n = CMatrix::identity(n);
    let h_dim = n * n;

    let mut worst = 0.0f64;
    for x in 0..spec.rep.x_size {
        let y = spec.f[x];
        // E_x = Σ_{a,a'} ε_{a,a'} ⊗ (e_{x,a,a'} ⊗ I_n) on ℂ^A ⊗ ℂ^{n²}.
        let mut e_x = CMatrix::zeros(a_size * h_dim, a_size * h_dim);
        let mut f_y_t = CMatrix::zeros(a_size * h_dim, a_size * h_dim);
        for a in 0..a_size {
            for ap in 0..a_size {
                let lift_e = kron(
                    &CMatrix::matrix_unit(a_size, a, ap),
                    &kron(spec.rep.unit(x, a, ap), &id_n),
                );
                e_x = e_x.add(&lift_e);
                // π₂(f_{y,b,b'}) = I_n ⊗ ρ(f_{y,b',b})ᵗ; the block transpose
                // places it at ε_{b',b}.
                let rho_t = spec.rho_block(y, ap, a).transpose();
                let lift_f = kron(&CMatrix::matrix_unit(a_size, ap, a), &kron(&id_n, &rho_t));
                f_y_t = f_y_t.add(&lift_f);
            }
        }
        let u_lift = kron(&spec.u[x], &CMatrix::identity(h_dim)).adjoint();
        for a in 0..a_size {
            let ea_xi = CVec::basis(a_size, a).tensor(&xi);
            let lhs = ea_xi.apply(&e_x).apply(&u_lift);
            let rhs = ea_xi.apply(&u_lift).apply(&f_y_t);
            worst = worst.max(lhs.dist(&rhs));
        }
    }
    Ok(worst)
}
