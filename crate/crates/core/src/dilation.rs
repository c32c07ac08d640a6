//! Dilation of semi-classical stochastic operator matrices to genuine
//! matrix unit systems compressed by a single isometry, by induction on
//! the input label: factorize, pad the distinguished answer with the
//! complement projection, conjugate earlier systems, and complete the
//! complement with a fixed matrix-unit structure.

use crate::correlations::{MatrixUnitSystemFamily, QnsCorrelation, StochasticOperatorMatrix};
use crate::error::{Error, Result};
use crate::tensor::{hermitian_eig, kron};
use crate::{c64, CMatrix, CVec};

/// Relative eigenvalue threshold for rank decisions during factorization.
const DILATION_RANK_TOL: f64 = 1e-10;

/// Output of a dilation: a tall isometry V and matrix unit systems on the
/// dilated space with V* Ẽ_{x,a,a'} V = E_{x,a,a'}.
#[derive(Debug, Clone)]
pub struct DilationResult {
    pub isometry: CMatrix,
    pub systems: MatrixUnitSystemFamily,
}

impl DilationResult {
    /// Largest compression error ‖V* Ẽ_{x,a,a'} V − E_{x,a,a'}‖ over all
    /// blocks.
    pub fn compression_error(&self, e: &StochasticOperatorMatrix) -> f64 {
        let v = &self.isometry;
        let mut worst = 0.0f64;
        for x in 0..e.x_size {
            for a in 0..e.a_size {
                for ap in 0..e.a_size {
                    let compressed = v.adjoint().matmul(self.systems.unit(x, a, ap)).matmul(v);
                    worst = worst.max(compressed.dist(e.sc_block(x, a, ap)));
                }
            }
        }
        worst
    }

    pub fn validate(
        &self,
        e: &StochasticOperatorMatrix,
        tol_compress: f64,
        tol_units: f64,
    ) -> Result<()> {
        let v = &self.isometry;
        if !v.adjoint().matmul(v).is_identity(1e-9) {
            return Err(Error::InvariantViolation("V is not an isometry".into()));
        }
        let res = self.systems.relation_residual();
        if res > tol_units {
            return Err(Error::InvariantViolation(format!(
                "dilated systems violate matrix-unit relations by {res:.3e}"
            )));
        }
        let ce = self.compression_error(e);
        if ce > tol_compress {
            return Err(Error::InvariantViolation(format!(
                "compression identity fails by {ce:.3e}"
            )));
        }
        Ok(())
    }
}

/// Factorizes a PSD block matrix (F_{a,a'}) over M_m with unital diagonal
/// sum into V_a = F^{1/2}(e_a ⊗ ·) restricted to the range, so that
/// V_a* V_{a'} = F_{a,a'} and the stacked column operator is an isometry.
/// Returns the per-answer operators V_a : ℂ^m → ℂ^r with r = rank(F).
pub fn column_isometry_factorization(
    f_blocks: &[CMatrix],
    a_size: usize,
    m: usize,
) -> Result<Vec<CMatrix>> {
    if f_blocks.len() != a_size * a_size {
        return Err(Error::dims(a_size * a_size, f_blocks.len()));
    }
    let side = a_size * m;
    let mut big = CMatrix::zeros(side, side);
    for a in 0..a_size {
        for ap in 0..a_size {
            let blk = &f_blocks[a * a_size + ap];
            if blk.rows != m || blk.cols != m {
                return Err(Error::dims(m, blk.rows));
            }
            for i in 0..m {
                for j in 0..m {
                    big.set(a * m + i, ap * m + j, blk.get(i, j));
                }
            }
        }
    }
    // Unital diagonal sum.
    let mut diag_sum = CMatrix::zeros(m, m);
    for a in 0..a_size {
        diag_sum = diag_sum.add(&f_blocks[a * a_size + a]);
    }
    if diag_sum.dist(&CMatrix::identity(m)) > 1e-8 * (m as f64) {
        return Err(Error::InvariantViolation(
            "diagonal blocks do not sum to the identity".into(),
        ));
    }
    let eig = hermitian_eig(&big)?;
    let lam_min = eig.values.first().copied().unwrap_or(0.0);
    if lam_min < -1e-9 {
        return Err(Error::NotPsd { min_eig: lam_min });
    }
    let lam_max = eig.values.last().copied().unwrap_or(0.0);
    let cut =
        lam_max * (DILATION_RANK_TOL * DILATION_RANK_TOL).max(4.0 * side as f64 * f64::EPSILON);
    let kept: Vec<usize> = (0..side).filter(|&i| eig.values[i] > cut).collect();
    let r = kept.len();
    // S = Λ^{1/2} U* on the kept rows: S* S = F.
    let mut s = CMatrix::zeros(r, side);
    for (row, &i) in kept.iter().enumerate() {
        let scale = eig.values[i].max(0.0).sqrt();
        for colm in 0..side {
            s.set(row, colm, eig.vectors.get(colm, i).conj() * c64(scale, 0.0));
        }
    }
    Ok((0..a_size).map(|a| s.column_block(a * m, m)).collect())
}

/// Stacks per-answer operators V_a : ℂ^m → ℂ^r into the column isometry
/// ℂ^m → ℂ^r ⊗ ℂ^A (first leg major).
pub fn stack_column_operators(vas: &[CMatrix]) -> CMatrix {
    let a_size = vas.len();
    let r = vas[0].rows;
    let m = vas[0].cols;
    CMatrix::from_fn(r * a_size, m, |row, colm| {
        let kappa = row / a_size;
        let a = row % a_size;
        vas[a].get(kappa, colm)
    })
}

/// Dilates a semi-classical stochastic operator matrix to matrix unit
/// systems. The dilated dimension grows by the rank recursion of the
/// padded factorizations; for inputs whose per-label block matrices have
/// rank k it equals k · |A|^|X|.
pub fn dilate_semiclassical(e: &StochasticOperatorMatrix) -> Result<DilationResult> {
    if !e.semi_classical {
        return Err(Error::invalid(
            "dilation is defined for semi-classical stochastic operator matrices",
        ));
    }
    e.validate(1e-9)?;
    let a_size = e.a_size;
    let k = e.aux_dim;

    // Accumulated isometry from the original space and the systems built
    // so far, both living on the current dilated space.
    let mut v_acc = CMatrix::identity(k);
    let mut systems: Vec<Vec<CMatrix>> = Vec::with_capacity(e.x_size);
    let mut cur_dim = k;

    for x in 0..e.x_size {
        // Compress the current label forward: F'_{a,a'} = V E_{x,a,a'} V*.
        let mut f_blocks: Vec<CMatrix> = Vec::with_capacity(a_size * a_size);
        for a in 0..a_size {
            for ap in 0..a_size {
                f_blocks.push(v_acc.matmul(e.sc_block(x, a, ap)).matmul(&v_acc.adjoint()));
            }
        }
        // Pad the distinguished answer a_0 = 0 with P^⊥ so the diagonal
        // sums to the identity of the current space.
        let p = v_acc.matmul(&v_acc.adjoint());
        let p_perp = CMatrix::identity(cur_dim).sub(&p);
        f_blocks[0] = f_blocks[0].add(&p_perp);

        let vas = column_isometry_factorization(&f_blocks, a_size, cur_dim)?;
        let r = vas[0].rows;
        let vx = stack_column_operators(&vas);
        let new_dim = r * a_size;

        // New system for this label: I_K ⊗ ε_{a,a'}.
        let id_r = CMatrix::identity(r);
        let mut new_sys = Vec::with_capacity(a_size * a_size);
        for a in 0..a_size {
            for ap in 0..a_size {
                new_sys.push(kron(&id_r, &CMatrix::matrix_unit(a_size, a, ap)));
            }
        }

        // Conjugate earlier systems and complete them on the complement
        // ran(P_new)^⊥ ≅ K_0 ⊗ ℂ^A through one fixed identification. At
        // the first step there is nothing to extend, so no identification
        // is needed.
        let comp_dim = new_dim - cur_dim;
        if !systems.is_empty() && !comp_dim.is_multiple_of(a_size) {
            return Err(Error::RankBookkeeping(format!(
                "complement dimension {comp_dim} is not divisible by |A| = {a_size}"
            )));
        }
        let pad = if comp_dim > 0 && !systems.is_empty() {
            let p_new = vx.matmul(&vx.adjoint());
            let eig = hermitian_eig(&p_new)?;
            // Ascending eigenvalues: the first comp_dim belong to the kernel.
            let w: Vec<CVec> = (0..comp_dim).map(|i| eig.vectors.column(i)).collect();
            for i in 0..comp_dim {
                let lam = eig.values[i];
                if lam > 0.5 {
                    return Err(Error::RankBookkeeping(format!(
                        "expected a {comp_dim}-dimensional complement, found eigenvalue {lam}"
                    )));
                }
            }
            // u(e_j ⊗ e_a) = w_{j·|A| + a}; pad_{a,a'} = Σ_j w_{j|A|+a} w_{j|A|+a'}*.
            let k0 = comp_dim / a_size;
            let mut pads = Vec::with_capacity(a_size * a_size);
            for a in 0..a_size {
                for ap in 0..a_size {
                    let mut acc = CMatrix::zeros(new_dim, new_dim);
                    for j in 0..k0 {
                        acc = acc.add(&w[j * a_size + a].outer(&w[j * a_size + ap]));
                    }
                    pads.push(acc);
                }
            }
            Some(pads)
        } else {
            None
        };

        for sys in systems.iter_mut() {
            for (idx, unit) in sys.iter_mut().enumerate() {
                let mut lifted = vx.matmul(unit).matmul(&vx.adjoint());
                if let Some(pads) = &pad {
                    lifted = lifted.add(&pads[idx]);
                }
                *unit = lifted;
            }
        }
        systems.push(new_sys);
        v_acc = vx.matmul(&v_acc);
        cur_dim = new_dim;
    }

    let systems = MatrixUnitSystemFamily {
        x_size: e.x_size,
        a_size,
        n: cur_dim,
        systems,
    };
    let result = DilationResult {
        isometry: v_acc,
        systems,
    };
    result.validate(e, 1e-8, 1e-9)?;
    Ok(result)
}

/// Realizes a quantum CQNS correlation through genuine representations:
/// dilates both sides, transports the shared state by V ⊗ W, and returns
/// the dilated systems, the new state and the correlation they generate
/// (equal to `from_som_pair(E, F, ξ)`).
pub fn quantum_cqns_via_reps(
    e: &StochasticOperatorMatrix,
    f: &StochasticOperatorMatrix,
    xi: &CVec,
) -> Result<(
    MatrixUnitSystemFamily,
    MatrixUnitSystemFamily,
    CVec,
    QnsCorrelation,
)> {
    let de = dilate_semiclassical(e)?;
    let df = dilate_semiclassical(f)?;
    let lift = kron(&de.isometry, &df.isometry);
    let xi_lifted = xi.apply(&lift);
    let som_e = de.systems.as_som()?;
    let som_f = df.systems.as_som()?;
    let corr = QnsCorrelation::from_som_pair(&som_e, &som_f, &xi_lifted)?;
    Ok((de.systems, df.systems, xi_lifted, corr))
}
