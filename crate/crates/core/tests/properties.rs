//! Property tests for the tensor-kernel invariants.

use proptest::prelude::*;
use qns_core::tensor::{
    devectorize, flip, kron, partial_trace, skew_functional, theta_untwist, vectorize, Leg,
};
use qns_core::{c64, CMatrix, CVec};

fn complex_entry() -> impl Strategy<Value = [f64; 2]> {
    (-1.0..1.0f64).prop_flat_map(|re| (-1.0..1.0f64).prop_map(move |im| [re, im]))
}

fn square_matrix(max_dim: usize) -> impl Strategy<Value = CMatrix> {
    (1..=max_dim).prop_flat_map(|n| {
        prop::collection::vec(complex_entry(), n * n).prop_map(move |entries| {
            CMatrix::new(n, n, entries.iter().map(|&[re, im]| c64(re, im)).collect())
        })
    })
}

fn product_matrix(d1_max: usize, d2_max: usize) -> impl Strategy<Value = (CMatrix, usize, usize)> {
    (1..=d1_max, 1..=d2_max).prop_flat_map(|(d1, d2)| {
        let n = d1 * d2;
        prop::collection::vec(complex_entry(), n * n).prop_map(move |entries| {
            (
                CMatrix::new(n, n, entries.iter().map(|&[re, im]| c64(re, im)).collect()),
                d1,
                d2,
            )
        })
    })
}

fn tensor_square_vector(max_side: usize) -> impl Strategy<Value = CVec> {
    (1..=max_side).prop_flat_map(|n| {
        prop::collection::vec(complex_entry(), n * n)
            .prop_map(|entries| CVec::new(entries.iter().map(|&[re, im]| c64(re, im)).collect()))
    })
}

proptest! {
    #[test]
    fn partial_trace_preserves_trace((m, d1, d2) in product_matrix(6, 6)) {
        let t_full = m.trace();
        for leg in [Leg::First, Leg::Second] {
            let reduced = partial_trace(&m, leg, (d1, d2)).unwrap();
            prop_assert!((reduced.trace() - t_full).norm() <= 1e-12);
        }
    }

    #[test]
    fn vectorize_round_trips_exactly(m in square_matrix(6)) {
        let v = vectorize(&m, false).unwrap();
        let back = devectorize(&v).unwrap();
        prop_assert_eq!(m.data, back.data);
    }

    #[test]
    fn vectorize_intertwines_left_right(
        (n, entries) in (1..=3usize).prop_flat_map(|n| {
            (Just(n), prop::collection::vec(complex_entry(), 3 * n * n))
        })
    ) {
        let grab = |k: usize| {
            CMatrix::new(n, n, entries[k * n * n..(k + 1) * n * n]
                .iter()
                .map(|&[re, im]| c64(re, im))
                .collect())
        };
        let (r, s, t) = (grab(0), grab(1), grab(2));
        let lhs = vectorize(&t, false).unwrap().apply(&kron(&r, &s));
        let rhs = vectorize(&r.matmul(&t).matmul(&s.transpose()), false).unwrap();
        prop_assert!(lhs.dist(&rhs) <= 1e-12);
    }

    #[test]
    fn flip_is_involutive(v in tensor_square_vector(6)) {
        let back = flip(&flip(&v).unwrap()).unwrap();
        prop_assert_eq!(v.data, back.data);
    }

    #[test]
    fn skew_functional_is_flip_symmetric(v in tensor_square_vector(6)) {
        let a = skew_functional(&v).unwrap();
        let b = skew_functional(&flip(&v).unwrap()).unwrap();
        prop_assert!((a - b).norm() <= 1e-13);
    }

    #[test]
    fn untwist_of_flip_is_transpose(v in tensor_square_vector(6)) {
        let lhs = theta_untwist(&flip(&v).unwrap()).unwrap();
        let rhs = theta_untwist(&v).unwrap().transpose();
        prop_assert!(lhs.dist(&rhs) <= 1e-13);
    }

    #[test]
    fn kron_respects_trace(a in square_matrix(4), b in square_matrix(4)) {
        let k = kron(&a, &b);
        prop_assert!((k.trace() - a.trace() * b.trace()).norm() <= 1e-11);
    }
}
