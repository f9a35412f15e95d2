//! Property tests for the Jacobi solvers everything else stands on.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use quditfuse::linalg::{
    adjoint, exp_i_hermitian, frobenius_norm, hermitian_eigen, svd, unitarity_error,
};

fn arb_complex_matrix(max_n: usize) -> impl Strategy<Value = Array2<C64>> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n).prop_map(move |entries| {
            Array2::from_shape_vec(
                (n, n),
                entries
                    .into_iter()
                    .map(|(re, im)| C64::new(re, im))
                    .collect(),
            )
            .unwrap()
        })
    })
}

fn arb_rect_matrix() -> impl Strategy<Value = Array2<C64>> {
    (1..=5usize, 1..=5usize).prop_flat_map(|(m, n)| {
        proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), m * n).prop_map(move |entries| {
            Array2::from_shape_vec(
                (m, n),
                entries
                    .into_iter()
                    .map(|(re, im)| C64::new(re, im))
                    .collect(),
            )
            .unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn svd_factors_and_reconstructs(a in arb_rect_matrix()) {
        let (u, s, v) = svd(&a);
        let scale = frobenius_norm(&a).max(1.0);
        // Singular values descending, non-negative.
        prop_assert!(s.iter().all(|x| *x >= 0.0));
        prop_assert!(s.windows(2).into_iter().all(|w| w[0] >= w[1]));
        // Reconstruction.
        let r = s.len();
        let mut rec = Array2::<C64>::zeros((a.nrows(), a.ncols()));
        for k in 0..r {
            for i in 0..a.nrows() {
                for j in 0..a.ncols() {
                    rec[[i, j]] += u[[i, k]] * s[k] * v[[j, k]].conj();
                }
            }
        }
        prop_assert!(frobenius_norm(&(&rec - &a)) < 1e-11 * scale);
        // Columns carrying nonzero singular values are orthonormal.
        for p in 0..r {
            if s[p] == 0.0 {
                continue;
            }
            for q in p..r {
                if s[q] == 0.0 {
                    continue;
                }
                let dot: C64 = (0..a.nrows()).map(|i| u[[i, p]].conj() * u[[i, q]]).sum();
                let expect = if p == q { 1.0 } else { 0.0 };
                prop_assert!((dot.norm() - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn hermitian_eigen_reconstructs(raw in arb_complex_matrix(6)) {
        let h = (&raw + &adjoint(&raw)).mapv(|x| x * 0.5);
        let (w, v) = hermitian_eigen(&h);
        let n = h.nrows();
        prop_assert!(unitarity_error(&v) < 1e-11);
        prop_assert!(w.windows(2).into_iter().all(|p| p[0] <= p[1]));
        let mut rec = Array2::<C64>::zeros((n, n));
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    rec[[i, j]] += v[[i, k]] * w[k] * v[[j, k]].conj();
                }
            }
        }
        let scale = frobenius_norm(&h).max(1.0);
        prop_assert!(frobenius_norm(&(&rec - &h)) < 1e-11 * scale);
    }

    #[test]
    fn exp_of_hermitian_is_unitary_with_unit_determinant_phases(raw in arb_complex_matrix(5)) {
        let h = (&raw + &adjoint(&raw)).mapv(|x| x * 0.5);
        let u = exp_i_hermitian(&h);
        prop_assert!(unitarity_error(&u) < 1e-10);
        // exp(iH)·exp(−iH) = I.
        let minus = exp_i_hermitian(&h.mapv(|x| -x));
        let prod = u.dot(&minus);
        let eye = Array2::<C64>::eye(h.nrows());
        prop_assert!(frobenius_norm(&(&prod - &eye)) < 1e-10);
    }
}
