//! Support-rule games, their classifiers (synchronous / mirror /
//! concurrent), bijective projections and the universal perfect-strategy
//! check.
//!
//! A game is a finite list of rules (Q, R): every nonzero input
//! projection P ≤ Q must be mapped inside R. Complete positivity of a
//! strategy makes checking the rule generators sound for all P ≤ Q.

use crate::correlations::{GameDims, QnsCorrelation};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::quantum_graphs::SymmetricSkewSubspace;
use crate::tensor::{diag_expectation, entangled_constants, hermitian_eig, kron, vectorize};
use crate::{c64, CMatrix};

/// Projection tolerance applied to rule data.
pub const RULE_TOL: f64 = 1e-10;

/// One support rule: inputs under `q` must produce outputs under `r`.
#[derive(Debug, Clone)]
pub struct Rule {
    pub q: CMatrix,
    pub r: CMatrix,
}

/// A game encoded as finitely many (input projection, output support
/// projection) rules.
#[derive(Debug, Clone)]
pub struct SupportRuleGame {
    pub dims: GameDims,
    pub rules: Vec<Rule>,
    pub classical_inputs: bool,
}

impl SupportRuleGame {
    pub fn new(dims: GameDims, rules: Vec<Rule>, classical_inputs: bool) -> Result<Self> {
        for (i, rule) in rules.iter().enumerate() {
            if rule.q.rows != dims.in_dim() || rule.r.rows != dims.out_dim() {
                return Err(Error::dims(dims.in_dim(), rule.q.rows));
            }
            if !rule.q.is_projection(RULE_TOL) || !rule.r.is_projection(RULE_TOL) {
                return Err(Error::InvariantViolation(format!(
                    "rule {i} is not a pair of projections"
                )));
            }
            if classical_inputs {
                let diag = diag_expectation(&rule.q)?;
                if rule.q.dist(&diag) > RULE_TOL {
                    return Err(Error::InvariantViolation(format!(
                        "rule {i}: classical-input game needs diagonal input projections"
                    )));
                }
            }
        }
        Ok(Self {
            dims,
            rules,
            classical_inputs,
        })
    }

    /// Rules applicable to an input projection P (those with P ≤ Q).
    fn applicable(&self, p: &CMatrix, tol: f64) -> Vec<usize> {
        self.rules
            .iter()
            .enumerate()
            .filter(|(_, rule)| rule.q.matmul(p).dist(p) <= tol)
            .map(|(i, _)| i)
            .collect()
    }

    /// Meet of the output constraints over all rules applicable to P;
    /// the identity when no rule applies.
    pub fn effective_output(&self, p: &CMatrix, tol: f64) -> Result<CMatrix> {
        let idx = self.applicable(p, tol);
        let rs: Vec<&CMatrix> = idx.iter().map(|&i| &self.rules[i].r).collect();
        intersection_projector(self.dims.out_dim(), &rs)
    }

    /// Effective output on the classical input pair (x, y).
    pub fn effective_output_at(&self, x: usize, y: usize, tol: f64) -> Result<CMatrix> {
        let q = kron(
            &CMatrix::matrix_unit(self.dims.x, x, x),
            &CMatrix::matrix_unit(self.dims.y, y, y),
        );
        self.effective_output(&q, tol)
    }
}

/// Projector onto the intersection of the ranges of projections
/// (the identity for an empty list): the kernel of Σ (I − P_i).
pub fn intersection_projector(dim: usize, projections: &[&CMatrix]) -> Result<CMatrix> {
    if projections.is_empty() {
        return Ok(CMatrix::identity(dim));
    }
    let mut m = CMatrix::zeros(dim, dim);
    let id = CMatrix::identity(dim);
    for p in projections {
        if p.rows != dim {
            return Err(Error::dims(dim, p.rows));
        }
        m = m.add(&id.sub(p));
    }
    let eig = hermitian_eig(&m)?;
    let cut = 1e-9 * (1.0 + eig.values.last().copied().unwrap_or(0.0).abs());
    let mut proj = CMatrix::zeros(dim, dim);
    for (k, &lam) in eig.values.iter().enumerate() {
        if lam.abs() <= cut {
            let v = eig.vectors.column(k);
            proj = proj.add(&v.outer(&v));
        }
    }
    Ok(proj)
}

/// Classical game from a boolean rule table λ over X × Y × A × B: one
/// rule per input pair with R = Σ{ε_{a,a} ⊗ ε_{b,b} : λ(x,y,a,b) = 1}.
pub fn game_from_rule_function(
    dims: GameDims,
    lambda: impl Fn(usize, usize, usize, usize) -> bool,
) -> Result<SupportRuleGame> {
    let mut rules = Vec::with_capacity(dims.in_dim());
    for x in 0..dims.x {
        for y in 0..dims.y {
            let q = kron(
                &CMatrix::matrix_unit(dims.x, x, x),
                &CMatrix::matrix_unit(dims.y, y, y),
            );
            let mut r = CMatrix::zeros(dims.out_dim(), dims.out_dim());
            for a in 0..dims.a {
                for b in 0..dims.b {
                    if lambda(x, y, a, b) {
                        r.set(a * dims.b + b, a * dims.b + b, c64(1.0, 0.0));
                    }
                }
            }
            rules.push(Rule { q, r });
        }
    }
    SupportRuleGame::new(dims, rules, true)
}

/// The rule function of the (G, H)-homomorphism game: forbidden iff
/// (x = y and a ≠ b) or (x ∼ y and a ≁ b).
pub fn homomorphism_rule_function<'a>(
    g: &'a Graph,
    h: &'a Graph,
) -> impl Fn(usize, usize, usize, usize) -> bool + 'a {
    move |x, y, a, b| {
        if x == y && a != b {
            return false;
        }
        if g.adjacent(x, y) && !h.adjacent(a, b) {
            return false;
        }
        true
    }
}

/// Synchronicity: for every x the effective diagonal rule satisfies
/// R ≤ J_A^cl (projection ordering tested as J_A^cl R = R).
pub fn is_synchronous(game: &SupportRuleGame) -> Result<bool> {
    if !game.classical_inputs {
        return Err(Error::invalid(
            "synchronicity is defined for classical inputs",
        ));
    }
    if game.dims.x != game.dims.y || game.dims.a != game.dims.b {
        return Err(Error::invalid("synchronicity needs X = Y and A = B"));
    }
    let (_, _, jcl) = entangled_constants::<f64>(game.dims.a);
    for x in 0..game.dims.x {
        let r = game.effective_output_at(x, x, RULE_TOL)?;
        if jcl.matmul(&r).dist(&r) > 1e-8 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The mirror functions (f, g) discovered by `is_mirror`.
pub type MirrorMaps = (Vec<usize>, Vec<usize>);

/// Mirror classification: searches for f : X → Y and g : Y → X whose
/// designated rules are permutation projections P_α, returning the first
/// functions found.
pub fn is_mirror(game: &SupportRuleGame) -> Result<(bool, Option<MirrorMaps>)> {
    if !game.classical_inputs {
        return Err(Error::invalid(
            "the mirror test is defined for classical inputs",
        ));
    }
    if game.dims.a != game.dims.b {
        return Ok((false, None));
    }
    let mut f = Vec::with_capacity(game.dims.x);
    for x in 0..game.dims.x {
        let found = (0..game.dims.y).find(|&y| {
            game.effective_output_at(x, y, RULE_TOL)
                .map(|r| is_permutation_projection(&r, game.dims.a, 1e-8))
                .unwrap_or(false)
        });
        match found {
            Some(y) => f.push(y),
            None => return Ok((false, None)),
        }
    }
    let mut g = Vec::with_capacity(game.dims.y);
    for y in 0..game.dims.y {
        let found = (0..game.dims.x).find(|&x| {
            game.effective_output_at(x, y, RULE_TOL)
                .map(|r| is_permutation_projection(&r, game.dims.a, 1e-8))
                .unwrap_or(false)
        });
        match found {
            Some(x) => g.push(x),
            None => return Ok((false, None)),
        }
    }
    Ok((true, Some((f, g))))
}

/// Tests whether a projection on ℂ^A ⊗ ℂ^A is P_α for a bijection α:
/// diagonal, 0/1, and supported on the graph of a bijection.
fn is_permutation_projection(r: &CMatrix, a_size: usize, tol: f64) -> bool {
    let diag = diag_expectation(r).expect("square");
    if r.dist(&diag) > tol {
        return false;
    }
    let mut row_hits = vec![0usize; a_size];
    let mut col_hits = vec![0usize; a_size];
    for (a, row) in row_hits.iter_mut().enumerate() {
        for (b, col) in col_hits.iter_mut().enumerate() {
            let v = r.get(a * a_size + b, a * a_size + b);
            if (v - c64(1.0, 0.0)).norm() <= tol {
                *row += 1;
                *col += 1;
            } else if v.norm() > tol {
                return false;
            }
        }
    }
    row_hits.iter().all(|&h| h == 1) && col_hits.iter().all(|&h| h == 1)
}

/// Witness for a rank-r bijective projection: partial isometries with
/// Σ U_i U_i* = Σ U_i* U_i = I and P = Σ ζ_{U_i} ζ_{U_i}*.
#[derive(Debug, Clone)]
pub struct BijectivityWitness {
    pub partial_isometries: Vec<CMatrix>,
}

impl BijectivityWitness {
    pub fn validate(&self, dim: usize, tol: f64) -> Result<()> {
        if self.partial_isometries.is_empty() {
            return Err(Error::invalid(
                "witness needs at least one partial isometry",
            ));
        }
        let mut left = CMatrix::zeros(dim, dim);
        let mut right = CMatrix::zeros(dim, dim);
        for u in &self.partial_isometries {
            if u.rows != dim || u.cols != dim {
                return Err(Error::dims(dim, u.rows));
            }
            if !u.is_partial_isometry(tol) {
                return Err(Error::InvariantViolation(
                    "witness entry is not a partial isometry".into(),
                ));
            }
            left = left.add(&u.matmul(&u.adjoint()));
            right = right.add(&u.adjoint().matmul(u));
        }
        if !left.is_identity(tol * dim as f64) || !right.is_identity(tol * dim as f64) {
            return Err(Error::InvariantViolation(
                "witness partial isometries do not resolve the identity".into(),
            ));
        }
        Ok(())
    }
}

/// Decides bijectivity of a projection on ℂ^A ⊗ ℂ^A. The rank-one case
/// is decided constructively (devectorize and test T T* ∝ I); higher
/// rank is verified against a supplied witness and is otherwise an
/// `UndecidableWithoutWitness` error, not `false`.
pub fn is_bijective_projection(p: &CMatrix, witness: Option<&BijectivityWitness>) -> Result<bool> {
    p.check_square()?;
    if !p.is_projection(1e-8) {
        return Err(Error::invalid("input is not a projection"));
    }
    let a2 = p.rows;
    let rank = p.trace().re.round() as usize;
    if rank == 0 {
        return Ok(false);
    }
    if rank == 1 {
        let eig = hermitian_eig(p)?;
        let zeta = eig.vectors.column(a2 - 1); // top eigenvector
        let t = crate::tensor::devectorize(&zeta)?;
        let tt = t.matmul(&t.adjoint());
        let a_size = t.rows;
        let mean = tt.trace() / c64(a_size as f64, 0.0);
        let dist = tt.dist(&CMatrix::scalar_multiple_of_identity(a_size, mean));
        return Ok(dist <= 1e-8);
    }
    let witness = witness.ok_or(Error::UndecidableWithoutWitness)?;
    let t0 = &witness.partial_isometries[0];
    witness.validate(t0.rows, 1e-10)?;
    let mut sum = CMatrix::zeros(a2, a2);
    for u in &witness.partial_isometries {
        let z = vectorize(u, true)?;
        sum = sum.add(&z.outer(&z));
    }
    Ok(sum.dist(p) <= 1e-8)
}

/// The classical-to-quantum concurrency game: diagonal inputs must land
/// in J_A; off-diagonal pairs are unconstrained.
pub fn concurrency_game(x_size: usize, a_size: usize) -> SupportRuleGame {
    let dims = GameDims::square(x_size, a_size);
    let (_, ja, _) = entangled_constants::<f64>(a_size);
    let rules = (0..x_size)
        .map(|x| Rule {
            q: kron(
                &CMatrix::matrix_unit(x_size, x, x),
                &CMatrix::matrix_unit(x_size, x, x),
            ),
            r: ja.clone(),
        })
        .collect();
    SupportRuleGame::new(dims, rules, true).expect("concurrency rules are projections")
}

/// Concurrency of a game: classical inputs require every effective
/// diagonal rule below J_A; quantum inputs require the rule (J_X, J_A)
/// to be present or implied.
pub fn is_concurrent_game(game: &SupportRuleGame) -> Result<bool> {
    if game.dims.a != game.dims.b || game.dims.x != game.dims.y {
        return Ok(false);
    }
    let (_, ja, _) = entangled_constants::<f64>(game.dims.a);
    if game.classical_inputs {
        for x in 0..game.dims.x {
            let r = game.effective_output_at(x, x, RULE_TOL)?;
            if ja.matmul(&r).dist(&r) > 1e-8 {
                return Ok(false);
            }
        }
        Ok(true)
    } else {
        let (_, jx, _) = entangled_constants::<f64>(game.dims.x);
        let r = game.effective_output(&jx, RULE_TOL)?;
        Ok(ja.matmul(&r).dist(&r) <= 1e-8)
    }
}

/// The classical-to-quantum colouring game φ_G^A (J_A on the diagonal,
/// J_A^⊥ on edges); the relaxed variant ψ_G^A omits the diagonal rule.
pub fn colouring_game(g: &Graph, a_size: usize, relaxed: bool) -> Result<SupportRuleGame> {
    let dims = GameDims::square(g.n, a_size);
    let (_, ja, _) = entangled_constants::<f64>(a_size);
    let ja_perp = CMatrix::identity(dims.out_dim()).sub(&ja);
    let mut rules = Vec::new();
    if !relaxed {
        for x in 0..g.n {
            rules.push(Rule {
                q: kron(
                    &CMatrix::matrix_unit(g.n, x, x),
                    &CMatrix::matrix_unit(g.n, x, x),
                ),
                r: ja.clone(),
            });
        }
    }
    for (u, v) in g.directed_edges() {
        rules.push(Rule {
            q: kron(
                &CMatrix::matrix_unit(g.n, u, u),
                &CMatrix::matrix_unit(g.n, v, v),
            ),
            r: ja_perp.clone(),
        });
    }
    SupportRuleGame::new(dims, rules, true)
}

/// The quantum graph homomorphism game 𝒰 → 𝒱: the single rule
/// (P_𝒰, P_𝒱) with quantum inputs.
pub fn homomorphism_game(
    u: &SymmetricSkewSubspace,
    v: &SymmetricSkewSubspace,
) -> Result<SupportRuleGame> {
    let dims = GameDims::square(u.label_size, v.label_size);
    let rules = vec![Rule {
        q: u.basis.projector(),
        r: v.basis.projector(),
    }];
    SupportRuleGame::new(dims, rules, false)
}

/// Direct rule evaluation of the tracial classical-input strategy of a
/// matrix unit family, without materializing the Choi matrix: for every
/// rule, Tr(Γ(Q)(I − R)) is assembled from the blocks
/// Γ(ε_{x,x} ⊗ ε_{y,y})_{(a,b),(a',b')} = tr_n(e_{x,a,a'} e_{y,b',b}).
/// The numbers agree with `check_perfect_strategy` on the materialized
/// correlation; this path scales to large input alphabets.
pub fn check_cq_tracial_strategy(
    fam: &crate::correlations::MatrixUnitSystemFamily,
    game: &SupportRuleGame,
    tol: f64,
) -> Result<PerfectStrategyReport> {
    if !game.classical_inputs {
        return Err(Error::invalid("direct evaluation needs classical inputs"));
    }
    if game.dims.x != fam.x_size || game.dims.a != fam.a_size {
        return Err(Error::dims(game.dims.x, fam.x_size));
    }
    let db = game.dims.b;
    let out = game.dims.out_dim();
    let mut violations = Vec::with_capacity(game.rules.len());
    let mut block_cache: std::collections::BTreeMap<(usize, usize), CMatrix> =
        std::collections::BTreeMap::new();
    for rule in &game.rules {
        let mut v = 0.0f64;
        for i in 0..game.dims.in_dim() {
            let w = rule.q.get(i, i).re;
            if w.abs() < 1e-14 {
                continue;
            }
            let (x, y) = (i / game.dims.y, i % game.dims.y);
            let block = block_cache.entry((x, y)).or_insert_with(|| {
                CMatrix::from_fn(out, out, |rw, cl| {
                    let (a, b) = (rw / db, rw % db);
                    let (ap, bp) = (cl / db, cl % db);
                    fam.unit(x, a, ap)
                        .matmul(fam.unit(y, bp, b))
                        .normalized_trace()
                })
            });
            v += w * (block.trace().re - block.pairing(&rule.r).re);
        }
        violations.push(v);
    }
    let mut max_violation = 0.0f64;
    let mut worst_rule = None;
    for (i, &v) in violations.iter().enumerate() {
        if worst_rule.is_none() || v > max_violation {
            max_violation = v;
            worst_rule = Some(i);
        }
    }
    Ok(PerfectStrategyReport {
        verdict: max_violation <= tol,
        max_violation,
        worst_rule,
        violations,
    })
}

/// Outcome of a perfect-strategy check: per-rule violations
/// Tr(Γ(Q)(I − R)) and their maximum.
#[derive(Debug, Clone)]
pub struct PerfectStrategyReport {
    pub verdict: bool,
    pub max_violation: f64,
    pub worst_rule: Option<usize>,
    pub violations: Vec<f64>,
}

/// Checks a correlation against every rule of a game. Soundness for all
/// P ≤ Q follows from complete positivity: Γ(P) ≤ Γ(Q) makes the rule
/// violations dominate. Refuses when Γ fails the channel check.
pub fn check_perfect_strategy(
    corr: &QnsCorrelation,
    game: &SupportRuleGame,
    tol: f64,
) -> Result<PerfectStrategyReport> {
    check_perfect_strategy_par(corr, game, tol, 1)
}

/// Parallel variant: rules are evaluated in `threads` chunks with a
/// deterministic reduction in rule order.
pub fn check_perfect_strategy_par(
    corr: &QnsCorrelation,
    game: &SupportRuleGame,
    tol: f64,
    threads: usize,
) -> Result<PerfectStrategyReport> {
    if corr.dims != game.dims {
        return Err(Error::dims(game.dims.choi_dim(), corr.dims.choi_dim()));
    }
    let report = corr.channel_report(tol.max(1e-9));
    if !report.ok {
        return Err(Error::NotAChannel(format!(
            "min Choi eigenvalue {:.3e}, trace-preservation deviation {:.3e}",
            report.min_choi_eigenvalue, report.tp_deviation
        )));
    }
    let out_id = CMatrix::identity(game.dims.out_dim());
    let eval = |rule: &Rule| -> f64 {
        let image = corr.apply(&rule.q).expect("dims checked");
        image.pairing(&out_id.sub(&rule.r)).re
    };
    let violations: Vec<f64> = if threads <= 1 || game.rules.len() < 2 {
        game.rules.iter().map(eval).collect()
    } else {
        let chunk = game.rules.len().div_ceil(threads);
        let mut out = vec![0.0; game.rules.len()];
        std::thread::scope(|scope| {
            let handles: Vec<_> = game
                .rules
                .chunks(chunk)
                .map(|rules| scope.spawn(move || rules.iter().map(eval).collect::<Vec<_>>()))
                .collect();
            let mut pos = 0usize;
            for h in handles {
                for v in h.join().expect("rule evaluation does not panic") {
                    out[pos] = v;
                    pos += 1;
                }
            }
        });
        out
    };
    let mut max_violation = f64::NEG_INFINITY;
    let mut worst_rule = None;
    for (i, &v) in violations.iter().enumerate() {
        if v > max_violation {
            max_violation = v;
            worst_rule = Some(i);
        }
    }
    if violations.is_empty() {
        max_violation = 0.0;
    }
    Ok(PerfectStrategyReport {
        verdict: max_violation <= tol,
        max_violation,
        worst_rule,
        violations,
    })
}
