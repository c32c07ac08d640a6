//! Dilation of semi-classical stochastic operator matrices.

use qns_core::correlations::{
    sample_semiclassical_som, MatrixUnitSystemFamily, QnsCorrelation, StochasticOperatorMatrix,
};
use qns_core::dilation::{
    column_isometry_factorization, dilate_semiclassical, quantum_cqns_via_reps,
    stack_column_operators,
};
use qns_core::{c64, CMatrix, CVec, SeedRng};

#[test]
fn factorization_of_matrix_units() {
    // F already factored: the canonical matrix units of M_A.
    let a = 3usize;
    let blocks: Vec<CMatrix> = (0..a * a)
        .map(|idx| CMatrix::matrix_unit(a, idx / a, idx % a))
        .collect();
    let vas = column_isometry_factorization(&blocks, a, a).unwrap();
    // Rank of Σ ε_{a,a'} ⊗ ε_{a,a'} is 1, so each V_a is 1 x a.
    assert_eq!(vas[0].rows, 1);
    for x in 0..a {
        for y in 0..a {
            let got = vas[x].adjoint().matmul(&vas[y]);
            assert!(got.dist(&blocks[x * a + y]) < 1e-10);
        }
    }
    let stacked = stack_column_operators(&vas);
    assert!(stacked.adjoint().matmul(&stacked).is_identity(1e-10));
}

#[test]
fn factorization_rank_deficient_explicit() {
    // F = [[1/2, 1/2], [1/2, 1/2]] with |A| = 2, k = 1: the explicit 2x2
    // square root is F itself, so V_a* V_{a'} = 1/2 for all a, a'.
    let half = CMatrix::identity(1).scale(c64(0.5, 0.0));
    let blocks = vec![half.clone(), half.clone(), half.clone(), half];
    let vas = column_isometry_factorization(&blocks, 2, 1).unwrap();
    assert_eq!(vas[0].rows, 1); // rank one
    for a in 0..2 {
        for ap in 0..2 {
            let got = vas[a].adjoint().matmul(&vas[ap]).get(0, 0);
            assert!((got - c64(0.5, 0.0)).norm() < 1e-12);
        }
    }
}

#[test]
fn factorization_random_unital_psd() {
    // Random PSD unital F, |A| = 3, k = 2: reconstruction within 1e-9.
    for seed in 0..10u64 {
        let som = sample_semiclassical_som(1, 3, 2, 4000 + seed);
        let blocks: Vec<CMatrix> = (0..9)
            .map(|idx| som.sc_block(0, idx / 3, idx % 3).clone())
            .collect();
        let vas = column_isometry_factorization(&blocks, 3, 2).unwrap();
        for a in 0..3 {
            for ap in 0..3 {
                let got = vas[a].adjoint().matmul(&vas[ap]);
                assert!(got.dist(&blocks[a * 3 + ap]) <= 1e-9, "seed {seed}");
            }
        }
    }
}

#[test]
fn dilating_matrix_units_is_a_unitary_change() {
    // E already a matrix-unit family: no dimension growth, compression
    // exact up to rounding.
    let fam = MatrixUnitSystemFamily::canonical(2, 2);
    let som = fam.as_som().unwrap();
    let result = dilate_semiclassical(&som).unwrap();
    assert_eq!(result.systems.n, 2); // no growth
    assert_eq!(result.isometry.rows, 2);
    assert!(result.isometry.is_unitary(1e-9));
    assert!(result.compression_error(&som) < 1e-10);
}

#[test]
fn rank_one_povm_dilates_to_a() {
    // |X| = 1, k = 1, E_{a,a'} = ξ_a ξ̄_{a'} for a unit vector ξ: the
    // Stinespring dilation lands in dimension |A|.
    let a_size = 3usize;
    let mut rng = SeedRng::new(9);
    let xi = rng.unit_vector::<f64>(a_size);
    let blocks: Vec<CMatrix> = (0..a_size * a_size)
        .map(|idx| {
            let (a, ap) = (idx / a_size, idx % a_size);
            CMatrix::new(1, 1, vec![xi.data[a] * xi.data[ap].conj()])
        })
        .collect();
    let som = StochasticOperatorMatrix::from_semiclassical_blocks(1, a_size, 1, &blocks).unwrap();
    let result = dilate_semiclassical(&som).unwrap();
    assert_eq!(result.systems.n, a_size);
    assert!(result.compression_error(&som) <= 1e-9);
}

#[test]
fn random_semiclassical_dilations() {
    // Property sample over the dimension profile grid.
    for (x_size, a_size, k) in [(2, 2, 1), (3, 2, 2), (2, 3, 2), (3, 3, 3)] {
        for seed in 0..3u64 {
            let som = sample_semiclassical_som(x_size, a_size, k, 7000 + seed);
            let result = dilate_semiclassical(&som).unwrap();
            assert!(
                result.compression_error(&som) <= 1e-8,
                "profile ({x_size},{a_size},{k}) seed {seed}"
            );
            assert!(result.systems.relation_residual() <= 1e-9);
            // Sampled blocks have rank k, so the dilated dimension is
            // exactly k |A|^|X|.
            assert_eq!(result.systems.n, k * a_size.pow(x_size as u32));
        }
    }
}

#[test]
fn via_reps_matches_direct_som_pair() {
    for seed in 0..3u64 {
        let e = sample_semiclassical_som(2, 2, 2, 8100 + seed);
        let f = sample_semiclassical_som(2, 2, 2, 8200 + seed);
        let mut rng = SeedRng::new(8300 + seed);
        let xi = rng.unit_vector::<f64>(4);
        let direct = QnsCorrelation::from_som_pair(&e, &f, &xi).unwrap();
        let (sys_e, sys_f, xi2, via) = quantum_cqns_via_reps(&e, &f, &xi).unwrap();
        assert!(sys_e.relation_residual() < 1e-9);
        assert!(sys_f.relation_residual() < 1e-9);
        assert!((xi2.norm() - 1.0).abs() < 1e-10);
        assert!(
            via.choi.dist(&direct.choi) <= 1e-8,
            "seed {seed}: {}",
            via.choi.dist(&direct.choi)
        );
    }
}

#[test]
fn via_reps_scalar_case_is_exact() {
    let e = sample_semiclassical_som(2, 2, 1, 8400);
    let f = sample_semiclassical_som(2, 2, 1, 8401);
    let xi = CVec::basis(1, 0);
    let direct = QnsCorrelation::from_som_pair(&e, &f, &xi).unwrap();
    let (_, _, _, via) = quantum_cqns_via_reps(&e, &f, &xi).unwrap();
    assert!(via.choi.dist(&direct.choi) <= 1e-12);
}

#[test]
fn already_units_give_same_correlation_and_state() {
    let fam_e = MatrixUnitSystemFamily::canonical(2, 2);
    let fam_f = MatrixUnitSystemFamily::canonical(2, 2);
    let mut rng = SeedRng::new(8500);
    let xi = rng.unit_vector::<f64>(4);
    let e = fam_e.as_som().unwrap();
    let f = fam_f.as_som().unwrap();
    let direct = QnsCorrelation::from_som_pair(&e, &f, &xi).unwrap();
    let (_, _, xi2, via) = quantum_cqns_via_reps(&e, &f, &xi).unwrap();
    assert_eq!(xi2.dim(), xi.dim());
    assert!(via.choi.dist(&direct.choi) < 1e-10);
}

#[test]
fn non_semiclassical_is_refused() {
    let rep = qns_core::correlations::sample_brown_rep(2, 1, 3);
    let som = rep.as_som().unwrap();
    assert!(dilate_semiclassical(&som).is_err());
}
