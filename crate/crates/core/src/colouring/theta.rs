//! Lovász theta by a first-order splitting method: ADMM alternating the
//! projection onto the affine constraints (unit trace, zeros on edges)
//! with the projection onto the PSD cone.
//!
//! θ(G) = max ⟨J, Z⟩ over Z ⪰ 0, Tr Z = 1, Z_{uv} = 0 for uv ∈ E(G).

use crate::error::Result;
use crate::graph::Graph;
use crate::tensor::psd_project;
use crate::{c64, CMatrix};

/// Solver outcome: the theta value, the final splitting residual and the
/// iteration count.
#[derive(Debug, Clone, Copy)]
pub struct ThetaResult {
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn project_affine(m: &CMatrix, g: &Graph) -> CMatrix {
    let n = g.n;
    // Hermitize, zero the edge entries, then shift the diagonal to unit
    // trace; the two constraint sets are orthogonal because G is loopless.
    let mut out = m.add(&m.adjoint()).scale(c64(0.5, 0.0));
    for &(u, v) in &g.edges {
        out.set(u, v, c64(0.0, 0.0));
        out.set(v, u, c64(0.0, 0.0));
    }
    let shift = (1.0 - out.trace().re) / n as f64;
    for i in 0..n {
        let d = out.get(i, i);
        out.set(i, i, c64(d.re + shift, 0.0));
    }
    out
}

/// Solves the theta SDP to splitting residual `tol` (duality mediated by
/// the ADMM residuals); non-convergence reports the achieved residual.
pub fn lovasz_theta(g: &Graph, tol: f64) -> Result<ThetaResult> {
    let n = g.n;
    if n == 0 || n > 64 {
        return Err(crate::error::Error::invalid(format!(
            "dense theta SDP needs 1 <= |X| <= 64, got {n}"
        )));
    }
    if n == 1 {
        return Ok(ThetaResult {
            value: 1.0,
            residual: 0.0,
            iterations: 0,
            converged: true,
        });
    }
    let ones = CMatrix::from_fn(n, n, |_, _| c64(1.0, 0.0));
    let rho = 1.0 / n as f64;
    let max_iter = 50_000usize;

    // Start from the maximally mixed feasible point.
    let mut z = CMatrix::identity(n).scale(c64(1.0 / n as f64, 0.0));
    let mut w = z.clone();
    let mut u = CMatrix::zeros(n, n);

    let mut residual = f64::INFINITY;
    let mut iterations = 0usize;
    for it in 0..max_iter {
        iterations = it + 1;
        // Z-step: argmin over the affine set of ⟨-J, Z⟩ + (ρ/2)‖Z - W + U‖².
        let target = w.sub(&u).add(&ones.scale(c64(1.0 / rho, 0.0)));
        z = project_affine(&target, g);
        // W-step: PSD projection.
        let w_prev = w.clone();
        w = psd_project(&z.add(&u))?;
        // Dual update.
        u = u.add(&z.sub(&w));

        let primal = z.sub(&w).frobenius_norm();
        let dual = w.sub(&w_prev).frobenius_norm() * rho;
        residual = primal.max(dual);
        if residual <= tol && it > 10 {
            break;
        }
    }
    let value = ones.hs_inner(&z).re;
    Ok(ThetaResult {
        value,
        residual,
        iterations,
        converged: residual <= tol,
    })
}

/// Lower bounds on the orthogonal rank parameters:
/// ξ_q(G) ≥ √θ(Ḡ) and ξ_{C*}(G) ≥ √(|X| / θ(G)).
#[derive(Debug, Clone, Copy)]
pub struct RankBounds {
    pub theta: f64,
    pub theta_complement: f64,
    pub xi_q_lower: f64,
    pub xi_cstar_lower: f64,
}

pub fn rank_bounds(g: &Graph, tol: f64) -> Result<RankBounds> {
    let theta = lovasz_theta(g, tol)?;
    let theta_c = lovasz_theta(&g.complement(), tol)?;
    Ok(RankBounds {
        theta: theta.value,
        theta_complement: theta_c.value,
        xi_q_lower: theta_c.value.max(0.0).sqrt(),
        xi_cstar_lower: (g.n as f64 / theta.value.max(f64::MIN_POSITIVE)).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_of_complete_graphs() {
        // Feasible-point certificate: any feasible Z for K_n is diagonal
        // with unit trace, so ⟨J, Z⟩ = 1 exactly.
        for n in 3..=6usize {
            let r = lovasz_theta(&Graph::complete(n), 1e-9).unwrap();
            assert!(r.converged);
            assert!((r.value - 1.0).abs() <= 1e-6, "n = {n}: {}", r.value);
        }
    }

    #[test]
    fn theta_of_empty_graphs() {
        // The identity-feasible extreme: Z = J/n gives ⟨J, Z⟩ = n.
        for n in 2..=5usize {
            let r = lovasz_theta(&Graph::empty(n), 1e-9).unwrap();
            assert!(r.converged);
            assert!((r.value - n as f64).abs() <= 1e-6, "n = {n}: {}", r.value);
        }
    }

    #[test]
    fn theta_of_c5_is_sqrt5() {
        let r = lovasz_theta(&Graph::cycle(5), 1e-9).unwrap();
        assert!(r.converged);
        assert!((r.value - 5f64.sqrt()).abs() <= 1e-3, "{}", r.value);
    }
}
