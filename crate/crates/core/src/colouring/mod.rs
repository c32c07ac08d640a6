//! Quantum colourings of graphs: Kraus-inclusion conditions, the
//! homomorphism/trace-condition equivalences, the explicit K_{d²}
//! construction, game-algebra relation checks, orthogonal-representation
//! search and Lovász-theta rank bounds.

pub mod orthrep;
pub mod theta;

pub use orthrep::{orth_rank_upper, orth_rep_search, OrthRepOptions};
pub use theta::{lovasz_theta, rank_bounds, RankBounds, ThetaResult};

use crate::correlations::MatrixUnitSystemFamily;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::quantum_graphs::KrausFamily;
use crate::random::SeedRng;
use crate::tensor::{hermitian_eig, is_psd, kron};
use crate::{c64, CMatrix};

/// A quantum colouring datum: the unital completely positive map
/// Ψ : M_A → D_X ⊗ M_k through its blocks Ψ(ε_{a,b}) = Σ_x ε_{x,x} ⊗ r_{x,a,b},
/// together with a Kraus family for Ψ.
#[derive(Debug, Clone)]
pub struct QuantumColouring {
    pub graph: Graph,
    pub a_size: usize,
    pub aux_dim: usize,
    /// r_{x,a,b} indexed by (x · A + a) · A + b.
    pub ucp_blocks: Vec<CMatrix>,
    /// Kraus operators in channel direction ℂ^{X·k} → ℂ^A; the unital
    /// side uses their adjoints.
    pub kraus: KrausFamily,
}

impl QuantumColouring {
    pub fn block(&self, x: usize, a: usize, b: usize) -> &CMatrix {
        &self.ucp_blocks[(x * self.a_size + a) * self.a_size + b]
    }

    /// Builds the colouring from its UCP blocks, deriving a Kraus family
    /// from the Choi eigendecomposition of Ψ.
    pub fn from_blocks(
        graph: Graph,
        a_size: usize,
        aux_dim: usize,
        ucp_blocks: Vec<CMatrix>,
    ) -> Result<Self> {
        let x_size = graph.n;
        if ucp_blocks.len() != x_size * a_size * a_size {
            return Err(Error::dims(x_size * a_size * a_size, ucp_blocks.len()));
        }
        for b in &ucp_blocks {
            if b.rows != aux_dim || b.cols != aux_dim {
                return Err(Error::dims(aux_dim, b.rows));
            }
        }
        // Unitality: Σ_a r_{x,a,a} = I_k for every x.
        for x in 0..x_size {
            let mut acc = CMatrix::zeros(aux_dim, aux_dim);
            for a in 0..a_size {
                acc = acc.add(&ucp_blocks[(x * a_size + a) * a_size + a]);
            }
            if !acc.is_identity(1e-9 * aux_dim as f64) {
                return Err(Error::InvariantViolation(format!(
                    "Ψ is not unital at input label {x}"
                )));
            }
        }
        // Complete positivity via the Choi matrix of Ψ: composite output
        // index (x, κ), composite Choi index (a, x, κ).
        let out_dim = x_size * aux_dim;
        let side = a_size * out_dim;
        let mut choi = CMatrix::zeros(side, side);
        for a in 0..a_size {
            for b in 0..a_size {
                for x in 0..x_size {
                    let blk = &ucp_blocks[(x * a_size + a) * a_size + b];
                    for i in 0..aux_dim {
                        for j in 0..aux_dim {
                            choi.set(
                                a * out_dim + x * aux_dim + i,
                                b * out_dim + x * aux_dim + j,
                                blk.get(i, j),
                            );
                        }
                    }
                }
            }
        }
        if !is_psd(&choi, 1e-9) {
            return Err(Error::InvariantViolation(
                "Ψ is not completely positive (Choi has a negative eigenvalue)".into(),
            ));
        }
        // Kraus operators M_i : ℂ^A → ℂ^{X·k} from the Choi eigenvectors;
        // stored in channel direction N_i = M_i*.
        let eig = hermitian_eig(&choi)?;
        let lam_max = eig.values.last().copied().unwrap_or(0.0).max(0.0);
        let cut = lam_max * 1e-14;
        let mut ops = Vec::new();
        for idx in 0..side {
            let lam = eig.values[idx];
            if lam <= cut {
                continue;
            }
            let v = eig.vectors.column(idx);
            let scale = c64(lam.sqrt(), 0.0);
            let m_i = CMatrix::from_fn(out_dim, a_size, |w, a| v.data[a * out_dim + w] * scale);
            ops.push(m_i.adjoint());
        }
        let kraus = KrausFamily::new(out_dim, a_size, ops)?;
        let colouring = Self {
            graph,
            a_size,
            aux_dim,
            ucp_blocks,
            kraus,
        };
        colouring.cross_validate(1e-8)?;
        Ok(colouring)
    }

    /// Builds the colouring of a matrix unit system family, one system
    /// per vertex (𝒩 = M_n with n the family's representation size).
    pub fn from_mus_family(graph: Graph, fam: &MatrixUnitSystemFamily) -> Result<Self> {
        if fam.x_size != graph.n {
            return Err(Error::dims(graph.n, fam.x_size));
        }
        let mut blocks = Vec::with_capacity(fam.x_size * fam.a_size * fam.a_size);
        for x in 0..fam.x_size {
            for a in 0..fam.a_size {
                for b in 0..fam.a_size {
                    blocks.push(fam.unit(x, a, b).clone());
                }
            }
        }
        Self::from_blocks(graph, fam.a_size, fam.n, blocks)
    }

    /// Verifies that the stored Kraus family reproduces the UCP blocks:
    /// Σ_i M_i ε_{a,b} M_i* = Ψ(ε_{a,b}).
    pub fn cross_validate(&self, tol: f64) -> Result<()> {
        let x_size = self.graph.n;
        for a in 0..self.a_size {
            for b in 0..self.a_size {
                let psi = self
                    .kraus
                    .apply_adjoint(&CMatrix::matrix_unit(self.a_size, a, b))?;
                for x in 0..x_size {
                    for xp in 0..x_size {
                        let got = CMatrix::from_fn(self.aux_dim, self.aux_dim, |i, j| {
                            psi.get(x * self.aux_dim + i, xp * self.aux_dim + j)
                        });
                        let expect = if x == xp {
                            self.block(x, a, b).clone()
                        } else {
                            CMatrix::zeros(self.aux_dim, self.aux_dim)
                        };
                        if got.dist(&expect) > tol {
                            return Err(Error::InvariantViolation(format!(
                                "Kraus family does not reproduce Ψ at (x, x') = ({x}, {xp})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Verdicts of the two colouring inclusion conditions.
#[derive(Debug, Clone, Copy)]
pub struct ColouringCheck {
    pub scalar_condition: bool,
    pub edge_condition: bool,
    pub scalar_residual: f64,
    pub edge_residual: f64,
}

/// Evaluates the inclusion conditions: every compression
/// M_i*(ε_{x,x} ⊗ 1)M_j lies in ℂ I_A, and every edge compression
/// M_i*(ε_{v,w} ⊗ 1)M_j is trace-orthogonal to I_A.
pub fn colouring_check(c: &QuantumColouring, tol: f64) -> Result<ColouringCheck> {
    let k = c.aux_dim;
    let x_size = c.graph.n;
    let id_k = CMatrix::identity(k);
    let mut scalar_residual = 0.0f64;
    for x in 0..x_size {
        let lifted = kron(&CMatrix::matrix_unit(x_size, x, x), &id_k);
        for ni in &c.kraus.ops {
            let left = ni.matmul(&lifted);
            for nj in &c.kraus.ops {
                let t = left.matmul(&nj.adjoint());
                let mean = t.trace() / c64(c.a_size as f64, 0.0);
                let dist = t.dist(&CMatrix::scalar_multiple_of_identity(c.a_size, mean));
                scalar_residual = scalar_residual.max(dist);
            }
        }
    }
    let mut edge_residual = 0.0f64;
    for (v, w) in c.graph.directed_edges() {
        let lifted = kron(&CMatrix::matrix_unit(x_size, v, w), &id_k);
        for ni in &c.kraus.ops {
            let left = ni.matmul(&lifted);
            for nj in &c.kraus.ops {
                let tr = left.matmul(&nj.adjoint()).trace().norm();
                edge_residual = edge_residual.max(tr);
            }
        }
    }
    Ok(ColouringCheck {
        scalar_condition: scalar_residual <= tol,
        edge_condition: edge_residual <= tol,
        scalar_residual,
        edge_residual,
    })
}

/// Multiplicativity of Ψ on matrix units:
/// Ψ(ε_{a,b})Ψ(ε_{c,d}) = δ_{b,c} Ψ(ε_{a,d}), blockwise.
pub fn ucp_homomorphism_residual(c: &QuantumColouring) -> f64 {
    let mut worst = 0.0f64;
    for x in 0..c.graph.n {
        for a in 0..c.a_size {
            for b in 0..c.a_size {
                for cc in 0..c.a_size {
                    for d in 0..c.a_size {
                        let prod = c.block(x, a, b).matmul(c.block(x, cc, d));
                        let expect = if b == cc {
                            c.block(x, a, d).clone()
                        } else {
                            CMatrix::zeros(c.aux_dim, c.aux_dim)
                        };
                        worst = worst.max(prod.dist(&expect));
                    }
                }
            }
        }
    }
    worst
}

pub fn ucp_homomorphism_check(c: &QuantumColouring, tol: f64) -> bool {
    ucp_homomorphism_residual(c) <= tol
}

/// Report of one equivalence probe: both sides of the proposition on a
/// concrete instance.
#[derive(Debug, Clone, Copy)]
pub struct ProbeReport {
    pub lhs: bool,
    pub rhs: bool,
}

impl ProbeReport {
    pub fn agree(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Evaluates both sides of the automatic-homomorphism equivalence:
/// Ψ multiplicative ⟺ the scalar compression condition.
pub fn equivalence_probe_dx(c: &QuantumColouring, tol: f64) -> Result<ProbeReport> {
    let check = colouring_check(c, tol)?;
    Ok(ProbeReport {
        lhs: ucp_homomorphism_check(c, tol),
        rhs: check.scalar_condition,
    })
}

/// The edge trace condition Σ_{a,b} r_{v,a,b} r_{w,b,a} = 0 on every
/// edge; requires Ψ to be multiplicative (the proposition's hypothesis).
pub fn edge_trace_condition(c: &QuantumColouring, tol: f64) -> Result<bool> {
    let res = ucp_homomorphism_residual(c);
    if res > 1e-8 {
        return Err(Error::NotHomomorphism { residual: res });
    }
    Ok(edge_trace_residual(c) <= tol)
}

pub fn edge_trace_residual(c: &QuantumColouring) -> f64 {
    let mut worst = 0.0f64;
    for (v, w) in c.graph.directed_edges() {
        let mut acc = CMatrix::zeros(c.aux_dim, c.aux_dim);
        for a in 0..c.a_size {
            for b in 0..c.a_size {
                acc = acc.add(&c.block(v, a, b).matmul(c.block(w, b, a)));
            }
        }
        // Operator norm bound via the Frobenius norm is enough here.
        worst = worst.max(acc.frobenius_norm());
    }
    worst
}

/// Evaluates both sides of the edge equivalence: the blockwise edge sums
/// vanish ⟺ the edge compressions are trace-orthogonal to I_A.
pub fn equivalence_probe_sg(c: &QuantumColouring, tol: f64) -> Result<ProbeReport> {
    let lhs = edge_trace_condition(c, tol)?;
    let check = colouring_check(c, tol)?;
    Ok(ProbeReport {
        lhs,
        rhs: check.edge_condition,
    })
}

/// A finite-dimensional representation of the colouring game algebra:
/// matrix unit systems indexed by the vertices, subject to the edge
/// relations Σ_{a,b} e_{x,a,b} e_{y,b,a} = 0 for x ∼ y.
#[derive(Debug, Clone)]
pub struct GameAlgebraRep {
    pub rep: MatrixUnitSystemFamily,
    pub graph: Graph,
}

impl GameAlgebraRep {
    pub fn edge_relation_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (x, y) in self.graph.directed_edges() {
            let mut acc = CMatrix::zeros(self.rep.n, self.rep.n);
            for a in 0..self.rep.a_size {
                for b in 0..self.rep.a_size {
                    acc = acc.add(&self.rep.unit(x, a, b).matmul(self.rep.unit(y, b, a)));
                }
            }
            worst = worst.max(acc.frobenius_norm());
        }
        worst
    }
}

/// Verifies the game-algebra relations of a representation.
pub fn game_algebra_rep_check(rep: &GameAlgebraRep, tol: f64) -> bool {
    rep.rep.relation_residual() <= tol && rep.edge_relation_residual() <= tol
}

/// The explicit K_{d²} construction: for x = (a', b') ∈ Z_d × Z_d and a
/// primitive d-th root of unity ζ,
/// E_{x,z,z'} = ζ^{(z'−z) b'} ε_{z−a', z'−a'} (indices mod d).
pub fn kd2_generators(d: usize) -> Result<GameAlgebraRep> {
    if d < 2 {
        return Err(Error::invalid("the construction needs d >= 2"));
    }
    let graph = Graph::complete(d * d);
    let mut systems = Vec::with_capacity(d * d);
    for ap in 0..d {
        for bp in 0..d {
            let mut sys = Vec::with_capacity(d * d);
            for z in 0..d {
                for zp in 0..d {
                    let expo = ((zp as i64 - z as i64) * bp as i64).rem_euclid(d as i64);
                    let angle = 2.0 * std::f64::consts::PI * expo as f64 / d as f64;
                    let phase = c64(angle.cos(), angle.sin());
                    let row = (z + d - ap % d) % d;
                    let col = (zp + d - ap % d) % d;
                    sys.push(CMatrix::matrix_unit(d, row, col).scale(phase));
                }
            }
            systems.push(sys);
        }
    }
    let rep = MatrixUnitSystemFamily::new(d * d, d, d, systems)?;
    Ok(GameAlgebraRep { rep, graph })
}

/// Kind of instance generated by `sample_colouring_instance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColouringInstanceKind {
    /// Vertex-wise conjugated matrix unit systems (multiplicative Ψ).
    Homomorphic,
    /// Stinespring-sampled unital CP blocks (generically not multiplicative).
    GenericUcp,
    /// Convex mixture of two homomorphic instances.
    Mixture,
}

/// Seeded instance generator for the equivalence probes.
pub fn sample_colouring_instance(
    graph: &Graph,
    a_size: usize,
    aux: usize,
    kind: ColouringInstanceKind,
    seed: u64,
) -> Result<QuantumColouring> {
    match kind {
        ColouringInstanceKind::Homomorphic => {
            let fam = crate::correlations::sample_matrix_unit_family(graph.n, a_size, aux, seed);
            QuantumColouring::from_mus_family(graph.clone(), &fam)
        }
        ColouringInstanceKind::GenericUcp => {
            let som = crate::correlations::sample_semiclassical_som(graph.n, a_size, aux, seed);
            let mut blocks = Vec::with_capacity(graph.n * a_size * a_size);
            for x in 0..graph.n {
                for a in 0..a_size {
                    for b in 0..a_size {
                        blocks.push(som.sc_block(x, a, b).clone());
                    }
                }
            }
            QuantumColouring::from_blocks(graph.clone(), a_size, aux, blocks)
        }
        ColouringInstanceKind::Mixture => {
            let mut rng = SeedRng::new(seed);
            let lam = 0.25 + 0.5 * (rng.next_u64() % 1000) as f64 / 1000.0;
            let f1 =
                crate::correlations::sample_matrix_unit_family(graph.n, a_size, aux, seed ^ 0x11);
            let f2 =
                crate::correlations::sample_matrix_unit_family(graph.n, a_size, aux, seed ^ 0x22);
            let mut blocks = Vec::with_capacity(graph.n * a_size * a_size);
            for x in 0..graph.n {
                for a in 0..a_size {
                    for b in 0..a_size {
                        let m = f1
                            .unit(x, a, b)
                            .scale(c64(lam, 0.0))
                            .add(&f2.unit(x, a, b).scale(c64(1.0 - lam, 0.0)));
                        blocks.push(m);
                    }
                }
            }
            QuantumColouring::from_blocks(graph.clone(), a_size, a_size * aux, blocks)
        }
    }
}
