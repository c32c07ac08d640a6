//! Orthogonal-representation search: projected gradient descent over
//! products of unit spheres with seeded random restarts and a cyclic
//! orthogonalization polish.

use crate::graph::Graph;
use crate::random::SeedRng;
use crate::{c64, CVec};

/// Search budget; restarts are seeded sequentially from the base seed and
/// the first success is returned.
#[derive(Debug, Clone, Copy)]
pub struct OrthRepOptions {
    pub restarts: usize,
    pub gradient_iters: usize,
    pub polish_rounds: usize,
}

impl Default for OrthRepOptions {
    fn default() -> Self {
        Self {
            restarts: 200,
            gradient_iters: 400,
            polish_rounds: 120,
        }
    }
}

/// Success threshold on the edge objective Σ_{x∼y} |⟨ξ_x, ξ_y⟩|².
pub const ORTH_OBJECTIVE_TOL: f64 = 1e-12;

fn objective(g: &Graph, xs: &[CVec]) -> f64 {
    g.edges
        .iter()
        .map(|&(u, v)| xs[u].inner(&xs[v]).norm_sqr())
        .sum()
}

fn gradient_pass(g: &Graph, xs: &mut [CVec], step: f64) {
    let grads: Vec<CVec> = (0..g.n)
        .map(|x| {
            let mut acc = CVec::zeros(xs[x].dim());
            for y in g.neighbours(x) {
                acc = acc.add(&xs[y].scale(xs[x].inner(&xs[y])));
            }
            acc
        })
        .collect();
    for x in 0..g.n {
        let moved = xs[x].sub(&grads[x].scale(c64(step, 0.0)));
        if let Ok(unit) = moved.normalized() {
            xs[x] = unit;
        }
    }
}

/// Gauss-Seidel polish: cyclically replace ξ_x by its unit-normalized
/// component orthogonal to the current neighbours.
fn polish_pass(g: &Graph, xs: &mut [CVec]) {
    for x in 0..g.n {
        let mut v = xs[x].clone();
        // Two orthogonalization sweeps against an on-the-fly
        // orthonormalized neighbour frame.
        let mut frame: Vec<CVec> = Vec::new();
        for y in g.neighbours(x) {
            let mut w = xs[y].clone();
            for f in &frame {
                w = w.sub(&f.scale(w.inner(f)));
            }
            if w.norm() > 1e-12 {
                frame.push(w.scale(c64(1.0 / w.norm(), 0.0)));
            }
        }
        for _ in 0..2 {
            for f in &frame {
                v = v.sub(&f.scale(v.inner(f)));
            }
        }
        if v.norm() > 1e-9 {
            xs[x] = v.scale(c64(1.0 / v.norm(), 0.0));
        }
    }
}

/// Searches for unit vectors (ξ_x) in ℂ^k orthogonal across the edges of
/// `g`. Deterministic in `seed`; returns `None` when no restart reaches
/// the success threshold.
pub fn orth_rep_search(g: &Graph, k: usize, seed: u64, opts: OrthRepOptions) -> Option<Vec<CVec>> {
    assert!(k >= 1);
    if g.edges.is_empty() {
        // Any family works; return a deterministic one.
        return Some((0..g.n).map(|_| CVec::basis(k, 0)).collect());
    }
    for restart in 0..opts.restarts {
        let mut rng = SeedRng::new(seed.wrapping_add(restart as u64));
        let mut xs: Vec<CVec> = (0..g.n).map(|_| rng.unit_vector(k)).collect();
        let mut step = 0.5;
        let mut best = objective(g, &xs);
        for _ in 0..opts.gradient_iters {
            gradient_pass(g, &mut xs, step);
            let now = objective(g, &xs);
            if now > best {
                step *= 0.5;
                if step < 1e-6 {
                    break;
                }
            }
            best = now.min(best);
            if best < 1e-6 {
                break;
            }
        }
        for _ in 0..opts.polish_rounds {
            polish_pass(g, &mut xs);
            if objective(g, &xs) <= ORTH_OBJECTIVE_TOL {
                return Some(xs);
            }
        }
        if objective(g, &xs) <= ORTH_OBJECTIVE_TOL {
            return Some(xs);
        }
    }
    None
}

/// Smallest k ≤ k_max admitting a found representation, or `None`.
pub fn orth_rank_upper(g: &Graph, k_max: usize, seed: u64, opts: OrthRepOptions) -> Option<usize> {
    (1..=k_max).find(|&k| orth_rep_search(g, k, seed, opts).is_some())
}
