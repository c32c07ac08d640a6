//! Quantum no-signalling correlations: Choi calculus, channel and
//! no-signalling verification, and the tracial constructions that turn
//! explicit matrix data into perfect strategies.

pub mod mirror;
pub mod som;

pub use mirror::{mirror_gns_identity_residual, MirrorGameSpec};
pub use som::{
    sample_brown_rep, sample_matrix_unit_family, sample_semiclassical_som, BrownRep,
    MatrixUnitSystemFamily, StochasticOperatorMatrix,
};

use crate::error::{Error, Result};
use crate::tensor::{kron, min_eigenvalue, partial_trace, Leg};
use crate::{c64, CMatrix, CVec};

/// Input/output alphabet sizes (|X|, |Y|, |A|, |B|).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameDims {
    pub x: usize,
    pub y: usize,
    pub a: usize,
    pub b: usize,
}

impl GameDims {
    pub fn new(x: usize, y: usize, a: usize, b: usize) -> Self {
        Self { x, y, a, b }
    }

    pub fn square(x: usize, a: usize) -> Self {
        Self { x, y: x, a, b: a }
    }

    pub fn in_dim(&self) -> usize {
        self.x * self.y
    }

    pub fn out_dim(&self) -> usize {
        self.a * self.b
    }

    pub fn choi_dim(&self) -> usize {
        self.in_dim() * self.out_dim()
    }
}

/// A channel M_XY → M_AB stored as its Choi matrix, with the composite
/// row/column index ordered (x, y, a, b).
#[derive(Debug, Clone)]
pub struct QnsCorrelation {
    pub dims: GameDims,
    pub choi: CMatrix,
    /// Marks correlations that arose with classical (diagonal) inputs;
    /// their Choi matrices carry only diagonal input blocks.
    pub classical_input: bool,
}

/// Channel diagnostics: minimum Choi eigenvalue, trace-preservation
/// deviation, and (for classical-input correlations) the mass found in
/// off-diagonal input blocks, which must vanish.
#[derive(Debug, Clone)]
pub struct ChannelReport {
    pub min_choi_eigenvalue: f64,
    pub tp_deviation: f64,
    pub structure_deviation: f64,
    pub ok: bool,
}

/// A no-signalling violation witness: which side signals, the traceless
/// input that exposes it, and the mass left in the forbidden marginal.
#[derive(Debug, Clone)]
pub struct NsViolation {
    pub side_alice: bool,
    pub traceless_basis_index: usize,
    pub partner_basis_index: usize,
    pub marginal_norm: f64,
}

#[derive(Debug, Clone)]
pub struct NsReport {
    pub max_violation: f64,
    pub worst: Option<NsViolation>,
    pub ok: bool,
}

impl QnsCorrelation {
    pub fn from_choi(dims: GameDims, choi: CMatrix) -> Result<Self> {
        if choi.rows != dims.choi_dim() || choi.cols != dims.choi_dim() {
            return Err(Error::dims(dims.choi_dim(), choi.rows));
        }
        Ok(Self {
            dims,
            choi,
            classical_input: false,
        })
    }

    #[inline]
    fn row_index(&self, x: usize, y: usize, a: usize, b: usize) -> usize {
        ((x * self.dims.y + y) * self.dims.a + a) * self.dims.b + b
    }

    /// Γ(ε_{x,x'} ⊗ ε_{y,y'}) read off the Choi blocks.
    pub fn block(&self, x: usize, xp: usize, y: usize, yp: usize) -> CMatrix {
        let out = self.dims.out_dim();
        let mut m = CMatrix::zeros(out, out);
        for a in 0..self.dims.a {
            for b in 0..self.dims.b {
                for ap in 0..self.dims.a {
                    for bp in 0..self.dims.b {
                        m.set(
                            a * self.dims.b + b,
                            ap * self.dims.b + bp,
                            self.choi
                                .get(self.row_index(x, y, a, b), self.row_index(xp, yp, ap, bp)),
                        );
                    }
                }
            }
        }
        m
    }

    /// Assembles a correlation from its blocks Γ(ε_{x,x'} ⊗ ε_{y,y'}).
    pub fn from_blocks(
        dims: GameDims,
        mut block: impl FnMut(usize, usize, usize, usize) -> CMatrix,
    ) -> Result<Self> {
        let side = dims.choi_dim();
        let mut choi = CMatrix::zeros(side, side);
        for x in 0..dims.x {
            for xp in 0..dims.x {
                for y in 0..dims.y {
                    for yp in 0..dims.y {
                        let blk = block(x, xp, y, yp);
                        if blk.rows != dims.out_dim() {
                            return Err(Error::dims(dims.out_dim(), blk.rows));
                        }
                        for a in 0..dims.a {
                            for b in 0..dims.b {
                                for ap in 0..dims.a {
                                    for bp in 0..dims.b {
                                        choi.set(
                                            ((x * dims.y + y) * dims.a + a) * dims.b + b,
                                            ((xp * dims.y + yp) * dims.a + ap) * dims.b + bp,
                                            blk.get(a * dims.b + b, ap * dims.b + bp),
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Self::from_choi(dims, choi)
    }

    /// Applies the channel to an operator on M_XY.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        let ind = self.dims.in_dim();
        if rho.rows != ind || rho.cols != ind {
            return Err(Error::dims(ind, rho.rows));
        }
        let out = self.dims.out_dim();
        let mut res = CMatrix::zeros(out, out);
        for xy in 0..ind {
            for xyp in 0..ind {
                let w = rho.get(xy, xyp);
                if w.norm_sqr() == 0.0 {
                    continue;
                }
                for ab in 0..out {
                    for abp in 0..out {
                        res.add_at(ab, abp, w * self.choi.get(xy * out + ab, xyp * out + abp));
                    }
                }
            }
        }
        Ok(res)
    }

    /// The identity channel on M_XY (A = X, B = Y).
    pub fn identity_channel(x: usize, y: usize) -> Self {
        let dims = GameDims::new(x, y, x, y);
        Self::from_blocks(dims, |xx, xxp, yy, yyp| {
            let mut blk = CMatrix::zeros(dims.out_dim(), dims.out_dim());
            blk.set(xx * y + yy, xxp * y + yyp, c64(1.0, 0.0));
            blk
        })
        .expect("identity channel dims are consistent")
    }

    /// The replacement channel ρ ↦ Tr(ρ) I_AB / |AB|.
    pub fn replacement_channel(dims: GameDims) -> Self {
        let out = dims.out_dim() as f64;
        Self::from_blocks(dims, |x, xp, y, yp| {
            if x == xp && y == yp {
                CMatrix::identity(dims.out_dim()).scale(c64(1.0 / out, 0.0))
            } else {
                CMatrix::zeros(dims.out_dim(), dims.out_dim())
            }
        })
        .expect("replacement channel dims are consistent")
    }

    pub fn channel_report(&self, tol: f64) -> ChannelReport {
        let ind = self.dims.in_dim();
        let out = self.dims.out_dim();
        // Classical-input Choi matrices are block-diagonal over the input
        // pairs, so positivity reduces to the diagonal blocks; verify the
        // structure and exploit it.
        let (min_eig, structure_deviation) = if self.classical_input {
            let mut offdiag_sq = 0.0f64;
            for xy in 0..ind {
                for xyp in 0..ind {
                    if xy == xyp {
                        continue;
                    }
                    for ab in 0..out {
                        for abp in 0..out {
                            offdiag_sq += self.choi.get(xy * out + ab, xyp * out + abp).norm_sqr();
                        }
                    }
                }
            }
            let mut min = f64::INFINITY;
            for xy in 0..ind {
                let block = CMatrix::from_fn(out, out, |ab, abp| {
                    self.choi.get(xy * out + ab, xy * out + abp)
                });
                min = min.min(min_eigenvalue(&block).unwrap_or(f64::NEG_INFINITY));
            }
            (min, offdiag_sq.sqrt())
        } else {
            (min_eigenvalue(&self.choi).unwrap_or(f64::NEG_INFINITY), 0.0)
        };
        let marg =
            partial_trace(&self.choi, Leg::Second, (ind, out)).expect("choi dims are consistent");
        let tp_dev = marg.dist(&CMatrix::identity(ind));
        let herm_dev = self.choi.dist(&self.choi.adjoint());
        ChannelReport {
            min_choi_eigenvalue: min_eig,
            tp_deviation: tp_dev,
            structure_deviation,
            ok: min_eig >= -tol
                && tp_dev <= tol * (ind as f64)
                && herm_dev <= tol
                && structure_deviation <= tol,
        }
    }

    /// Complete positivity (PSD Choi) plus trace preservation.
    pub fn is_channel(&self, tol: f64) -> bool {
        self.channel_report(tol).ok
    }

    /// Traceless basis of M_n: ε_{i,j} (i ≠ j) followed by
    /// ε_{i,i} − ε_{i+1,i+1}. Indexing matches `NsViolation`.
    pub fn traceless_basis(n: usize) -> Vec<CMatrix> {
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    out.push(CMatrix::matrix_unit(n, i, j));
                }
            }
        }
        for i in 0..n.saturating_sub(1) {
            out.push(CMatrix::matrix_unit(n, i, i).sub(&CMatrix::matrix_unit(n, i + 1, i + 1)));
        }
        out
    }

    /// Full matrix-unit basis of M_n. Indexing matches `NsViolation`.
    pub fn full_basis(n: usize) -> Vec<CMatrix> {
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(CMatrix::matrix_unit(n, i, j));
            }
        }
        out
    }

    /// No-signalling check by exhausting a traceless basis on one side
    /// against a full basis on the other; the condition is linear, so
    /// basis coverage is complete.
    pub fn ns_report(&self, tol: f64) -> NsReport {
        let mut max_violation = 0.0f64;
        let mut worst = None;
        let (da, db) = (self.dims.a, self.dims.b);

        // First marginal condition: Tr_A Γ(ρ_X ⊗ ρ_Y) = 0 for traceless ρ_X.
        for (ti, rho_x) in Self::traceless_basis(self.dims.x).iter().enumerate() {
            for (fi, rho_y) in Self::full_basis(self.dims.y).iter().enumerate() {
                let img = self
                    .apply(&kron(rho_x, rho_y))
                    .expect("basis dims are consistent");
                let marg = partial_trace(&img, Leg::First, (da, db)).unwrap();
                let v = marg.frobenius_norm();
                if v > max_violation {
                    max_violation = v;
                    worst = Some(NsViolation {
                        side_alice: true,
                        traceless_basis_index: ti,
                        partner_basis_index: fi,
                        marginal_norm: v,
                    });
                }
            }
        }
        // Second marginal condition: Tr_B Γ(ρ_X ⊗ ρ_Y) = 0 for traceless ρ_Y.
        for (ti, rho_y) in Self::traceless_basis(self.dims.y).iter().enumerate() {
            for (fi, rho_x) in Self::full_basis(self.dims.x).iter().enumerate() {
                let img = self
                    .apply(&kron(rho_x, rho_y))
                    .expect("basis dims are consistent");
                let marg = partial_trace(&img, Leg::Second, (da, db)).unwrap();
                let v = marg.frobenius_norm();
                if v > max_violation {
                    max_violation = v;
                    worst = Some(NsViolation {
                        side_alice: false,
                        traceless_basis_index: ti,
                        partner_basis_index: fi,
                        marginal_norm: v,
                    });
                }
            }
        }
        NsReport {
            max_violation,
            worst: if max_violation > tol { worst } else { None },
            ok: max_violation <= tol,
        }
    }

    pub fn is_no_signalling(&self, tol: f64) -> bool {
        self.ns_report(tol).ok
    }

    /// Precomposition with Δ_XY: keeps diagonal input blocks, kills the
    /// rest. Classical-input correlations are their own extension.
    pub fn extend_cq_to_q(&self) -> Self {
        let dims = self.dims;
        let mut ext = Self::from_blocks(dims, |x, xp, y, yp| {
            if x == xp && y == yp {
                self.block(x, xp, y, yp)
            } else {
                CMatrix::zeros(dims.out_dim(), dims.out_dim())
            }
        })
        .expect("dims preserved");
        ext.classical_input = true;
        ext
    }

    /// Quantum-class correlation from a pair of stochastic operator
    /// matrices and a shared unit vector ξ on ℂ^{k_E} ⊗ ℂ^{k_F}.
    pub fn from_som_pair(
        e: &StochasticOperatorMatrix,
        f: &StochasticOperatorMatrix,
        xi: &CVec,
    ) -> Result<Self> {
        if xi.dim() != e.aux_dim * f.aux_dim {
            return Err(Error::dims(e.aux_dim * f.aux_dim, xi.dim()));
        }
        if (xi.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::invalid("shared state ξ must be a unit vector"));
        }
        let dims = GameDims::new(e.x_size, f.x_size, e.a_size, f.a_size);
        let mut corr = Self::from_blocks(dims, |x, xp, y, yp| {
            let mut blk = CMatrix::zeros(dims.out_dim(), dims.out_dim());
            for a in 0..dims.a {
                for b in 0..dims.b {
                    for ap in 0..dims.a {
                        for bp in 0..dims.b {
                            let op = kron(e.block(x, xp, a, ap), f.block(y, yp, b, bp));
                            let val = xi.apply(&op).inner(xi);
                            blk.set(a * dims.b + b, ap * dims.b + bp, val);
                        }
                    }
                }
            }
            blk
        })?;
        corr.classical_input = e.semi_classical && f.semi_classical;
        Ok(corr)
    }

    /// Tracial QNS correlation of a stochastic operator matrix over the
    /// normalized trace: Γ(ε_{x,x'} ⊗ ε_{y,y'})_{(a,b),(a',b')} =
    /// tr_k(E_{x,x',a,a'} E_{y',y,b',b}).
    pub fn tracial_qns_from_som(e: &StochasticOperatorMatrix) -> Result<Self> {
        let dims = GameDims::square(e.x_size, e.a_size);
        let mut corr = Self::from_blocks(dims, |x, xp, y, yp| {
            let mut blk = CMatrix::zeros(dims.out_dim(), dims.out_dim());
            for a in 0..dims.a {
                for b in 0..dims.b {
                    for ap in 0..dims.a {
                        for bp in 0..dims.b {
                            let val = e
                                .block(x, xp, a, ap)
                                .matmul(e.block(yp, y, bp, b))
                                .normalized_trace();
                            blk.set(a * dims.b + b, ap * dims.b + bp, val);
                        }
                    }
                }
            }
            blk
        })?;
        corr.classical_input = e.semi_classical;
        Ok(corr)
    }

    /// Concurrent QNS correlation of a Brown-type block unitary
    /// (Γ(J_X) = J_A and τ(w_{a,b}) = δ_{a,b} hold for every valid input).
    pub fn tracial_from_brown_rep(rep: &BrownRep) -> Result<Self> {
        Self::tracial_qns_from_som(&rep.as_som()?)
    }

    /// Concurrent classical-input correlation of a matrix unit system
    /// family: Γ(ε_{x,x} ⊗ ε_{y,y})_{(a,b),(a',b')} = tr_n(e_{x,a,a'} e_{y,b',b}).
    pub fn tracial_cqns_from_mus(rep: &MatrixUnitSystemFamily) -> Result<Self> {
        Self::tracial_qns_from_som(&rep.as_som()?)
    }

    /// Convex combination of product channels Σ λ_i Φ_i ⊗ Ψ_i.
    pub fn local_from_channels(pairs: &[(LocalChannel, LocalChannel, f64)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::invalid("at least one channel pair is required"));
        }
        let total: f64 = pairs.iter().map(|(_, _, w)| *w).sum();
        if pairs.iter().any(|(_, _, w)| *w < -1e-12) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid("weights must be nonnegative and sum to one"));
        }
        let dims = GameDims::new(
            pairs[0].0.in_dim,
            pairs[0].1.in_dim,
            pairs[0].0.out_dim,
            pairs[0].1.out_dim,
        );
        for (phi, psi, _) in pairs {
            if phi.in_dim != dims.x
                || psi.in_dim != dims.y
                || phi.out_dim != dims.a
                || psi.out_dim != dims.b
            {
                return Err(Error::invalid("channel pair dimensions disagree"));
            }
        }
        Self::from_blocks(dims, |x, xp, y, yp| {
            let mut blk = CMatrix::zeros(dims.out_dim(), dims.out_dim());
            for (phi, psi, w) in pairs {
                let pa = phi.block(x, xp);
                let pb = psi.block(y, yp);
                blk = blk.add(&kron(&pa, &pb).scale(c64(*w, 0.0)));
            }
            blk
        })
    }

    /// Local classical-input strategy of an orthogonal-representation
    /// family: Γ(ε_{x,x} ⊗ ε_{y,y}) = (ξ_x ξ_x*) ⊗ (ξ̄_y ξ̄_y*), whose
    /// pairing with J_A is |⟨ξ_x, ξ_y⟩|² / |A|.
    pub fn local_from_orthogonal_rep(vectors: &[CVec]) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::invalid("need at least one vector"));
        }
        let a = vectors[0].dim();
        for v in vectors {
            if v.dim() != a {
                return Err(Error::dims(a, v.dim()));
            }
            if (v.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::invalid(
                    "orthogonal representation vectors must be unit",
                ));
            }
        }
        let n = vectors.len();
        let dims = GameDims::new(n, n, a, a);
        let mut corr = Self::from_blocks(dims, |x, xp, y, yp| {
            if x == xp && y == yp {
                let u = &vectors[x];
                let vbar = vectors[y].conj();
                kron(&u.outer(u), &vbar.outer(&vbar))
            } else {
                CMatrix::zeros(dims.out_dim(), dims.out_dim())
            }
        })?;
        corr.classical_input = true;
        Ok(corr)
    }
}

/// A single-party channel M_in → M_out stored as a Choi matrix with
/// composite index (input, output).
#[derive(Debug, Clone)]
pub struct LocalChannel {
    pub in_dim: usize,
    pub out_dim: usize,
    pub choi: CMatrix,
}

impl LocalChannel {
    pub fn from_blocks(
        in_dim: usize,
        out_dim: usize,
        mut block: impl FnMut(usize, usize) -> CMatrix,
    ) -> Self {
        let side = in_dim * out_dim;
        let mut choi = CMatrix::zeros(side, side);
        for x in 0..in_dim {
            for xp in 0..in_dim {
                let blk = block(x, xp);
                for a in 0..out_dim {
                    for ap in 0..out_dim {
                        choi.set(x * out_dim + a, xp * out_dim + ap, blk.get(a, ap));
                    }
                }
            }
        }
        Self {
            in_dim,
            out_dim,
            choi,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_blocks(dim, dim, |x, xp| {
            let mut blk = CMatrix::zeros(dim, dim);
            blk.set(x, xp, c64(1.0, 0.0));
            blk
        })
    }

    /// Channel value on the matrix unit ε_{x,x'}.
    pub fn block(&self, x: usize, xp: usize) -> CMatrix {
        CMatrix::from_fn(self.out_dim, self.out_dim, |a, ap| {
            self.choi.get(x * self.out_dim + a, xp * self.out_dim + ap)
        })
    }

    /// Deterministic classical channel x ↦ f(x) on diagonal inputs.
    pub fn deterministic(in_dim: usize, out_dim: usize, f: &[usize]) -> Result<Self> {
        if f.len() != in_dim {
            return Err(Error::dims(in_dim, f.len()));
        }
        Ok(Self::from_blocks(in_dim, out_dim, |x, xp| {
            let mut blk = CMatrix::zeros(out_dim, out_dim);
            if x == xp {
                blk.set(f[x], f[x], c64(1.0, 0.0));
            }
            blk
        }))
    }
}
