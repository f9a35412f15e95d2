//! Dense complex linear algebra for small matrices.
//!
//! Everything in this crate operates on matrices of modest size (interferometers,
//! reduced density matrices, Schmidt amplitude matrices), so the solvers here are
//! Jacobi-type iterations: slow asymptotically, but simple, dependency-free and
//! accurate down to tiny singular values, which the Schmidt-rank thresholds rely on.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

/// Convergence floor for Jacobi sweeps, relative to the matrix scale.
const JACOBI_REL_TOL: f64 = 1e-15;
/// Hard cap on Jacobi sweeps; reached only on pathological input.
const JACOBI_MAX_SWEEPS: usize = 60;

pub fn adjoint(m: &Array2<C64>) -> Array2<C64> {
    m.t().mapv(|x| x.conj())
}

pub fn frobenius_norm(m: &Array2<C64>) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entrywise deviation of `U U†` from the identity.
pub fn unitarity_error(u: &Array2<C64>) -> f64 {
    let (r, c) = (u.nrows(), u.ncols());
    if r != c {
        return f64::INFINITY;
    }
    let p = u.dot(&adjoint(u));
    let mut worst = 0.0_f64;
    for i in 0..r {
        for j in 0..r {
            let expect = if i == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            worst = worst.max((p[[i, j]] - expect).norm());
        }
    }
    worst
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Returns eigenvalues in ascending order together with the matching
/// orthonormal eigenvector columns, so `a ≈ V diag(w) V†`.
pub fn hermitian_eigen(a: &Array2<C64>) -> (Array1<f64>, Array2<C64>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "hermitian_eigen needs a square matrix");
    let mut m = a.clone();
    let mut v = Array2::<C64>::eye(n);
    let scale: f64 = frobenius_norm(&m).max(f64::MIN_POSITIVE);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[[p, q]].norm_sqr();
            }
        }
        if off.sqrt() <= JACOBI_REL_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = m[[p, q]];
                let babs = beta.norm();
                if babs <= JACOBI_REL_TOL * scale * 1e-2 {
                    continue;
                }
                let alpha = m[[p, p]].re;
                let gamma = m[[q, q]].re;
                let phase = beta / babs;
                // tan(2θ) = 2|β| / (α − γ), evaluated in the stable form.
                let tau = (alpha - gamma) / (2.0 * babs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sigma = t * c;
                // Column p mixes in e^{-iφ} so the rotated (p,q) entry cancels.
                let s = sigma * phase.conj();

                rotate_right(&mut m, p, q, c, s);
                rotate_left_adjoint(&mut m, p, q, c, s);
                rotate_right(&mut v, p, q, c, s);
                // Clean up the roundoff remainder; Hermiticity keeps it symmetric.
                m[[p, q]] = C64::new(0.0, 0.0);
                m[[q, p]] = C64::new(0.0, 0.0);
            }
        }
    }

    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (m[[i, i]].re, i)).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let w = Array1::from_iter(pairs.iter().map(|&(val, _)| val));
    let mut vec_sorted = Array2::<C64>::zeros((n, n));
    for (dst, &(_, src)) in pairs.iter().enumerate() {
        for r in 0..n {
            vec_sorted[[r, dst]] = v[[r, src]];
        }
    }
    (w, vec_sorted)
}

// m ← m · R with R the (p,q) rotation [[c, -s̄], [s, c]].
fn rotate_right(m: &mut Array2<C64>, p: usize, q: usize, c: f64, s: C64) {
    for r in 0..m.nrows() {
        let mp = m[[r, p]];
        let mq = m[[r, q]];
        m[[r, p]] = c * mp + s * mq;
        m[[r, q]] = -s.conj() * mp + c * mq;
    }
}

// m ← R† · m for the same rotation.
fn rotate_left_adjoint(m: &mut Array2<C64>, p: usize, q: usize, c: f64, s: C64) {
    for col in 0..m.ncols() {
        let mp = m[[p, col]];
        let mq = m[[q, col]];
        m[[p, col]] = c * mp + s.conj() * mq;
        m[[q, col]] = -s * mp + c * mq;
    }
}

/// Thin singular value decomposition `a = U diag(s) V†` via one-sided Jacobi.
///
/// Singular values come back sorted descending. The one-sided iteration keeps
/// full relative accuracy on small singular values, so exact zeros stay at the
/// roundoff floor instead of inflating to √ε like a Gram-matrix approach would.
pub fn svd(a: &Array2<C64>) -> (Array2<C64>, Array1<f64>, Array2<C64>) {
    let (m, n) = (a.nrows(), a.ncols());
    if m < n {
        // A† = V Σ U† with the thin routine, then swap the factors back.
        let (u_t, s, v_t) = svd_tall(&adjoint(a));
        return (v_t, s, u_t);
    }
    svd_tall(a)
}

fn svd_tall(a: &Array2<C64>) -> (Array2<C64>, Array1<f64>, Array2<C64>) {
    let (m, n) = (a.nrows(), a.ncols());
    debug_assert!(m >= n);
    let mut w = a.clone();
    let mut v = Array2::<C64>::eye(n);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0_f64;
                let mut aqq = 0.0_f64;
                let mut apq = C64::new(0.0, 0.0);
                for r in 0..m {
                    let wp = w[[r, p]];
                    let wq = w[[r, q]];
                    app += wp.norm_sqr();
                    aqq += wq.norm_sqr();
                    apq += wp.conj() * wq;
                }
                let gabs = apq.norm();
                if gabs <= JACOBI_REL_TOL * (app.sqrt() * aqq.sqrt()).max(1e-300) {
                    continue;
                }
                rotated = true;
                let phase = apq / gabs;
                let tau = (app - aqq) / (2.0 * gabs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = (t * c) * phase.conj();
                rotate_right(&mut w, p, q, c, s);
                rotate_right(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    // Column norms are the singular values; normalize to get U.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|r| w[[r, j]].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let mut u = Array2::<C64>::zeros((m, n));
    let mut sv = Array1::<f64>::zeros(n);
    let mut vs = Array2::<C64>::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        sv[dst] = norms[src];
        for r in 0..n {
            vs[[r, dst]] = v[[r, src]];
        }
        if norms[src] > 0.0 {
            for r in 0..m {
                u[[r, dst]] = w[[r, src]] / norms[src];
            }
        }
    }
    // Null-space columns of U are left zero; callers drop them with the
    // corresponding singular values.
    (u, sv, vs)
}

/// exp(iH) for Hermitian `h`, through the eigendecomposition.
pub fn exp_i_hermitian(h: &Array2<C64>) -> Array2<C64> {
    let n = h.nrows();
    let (w, v) = hermitian_eigen(h);
    let mut out = Array2::<C64>::zeros((n, n));
    for k in 0..n {
        let ph = C64::from_polar(1.0, w[k]);
        for i in 0..n {
            for j in 0..n {
                out[[i, j]] += v[[i, k]] * ph * v[[j, k]].conj();
            }
        }
    }
    out
}

/// Modified Gram-Schmidt with one re-orthogonalization pass.
///
/// Returns the orthonormal columns that survived (norm above `tol` relative to
/// the input column scale); the count is the numerical column rank.
pub fn orthonormalize_columns(a: &Array2<C64>, tol: f64) -> Array2<C64> {
    let (m, n) = (a.nrows(), a.ncols());
    let scale = frobenius_norm(a).max(f64::MIN_POSITIVE);
    let mut kept: Vec<Array1<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut col = a.column(j).to_owned();
        for _ in 0..2 {
            for q in &kept {
                let proj: C64 = q
                    .iter()
                    .zip(col.iter())
                    .map(|(qi, ci)| qi.conj() * ci)
                    .sum();
                for r in 0..m {
                    col[r] -= proj * q[r];
                }
            }
        }
        let norm = col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > tol * scale {
            col.mapv_inplace(|x| x / norm);
            kept.push(col);
        }
    }
    let mut out = Array2::<C64>::zeros((m, kept.len()));
    for (j, q) in kept.iter().enumerate() {
        for r in 0..m {
            out[[r, j]] = q[r];
        }
    }
    out
}

/// Orthonormal basis of the orthogonal complement of `span`, a `dim × r` matrix.
///
/// Standard basis vectors are projected out against the span and each other;
/// the result has exactly `dim − rank(span)` columns.
pub fn complement_basis(span: &Array2<C64>, dim: usize) -> Array2<C64> {
    assert_eq!(span.nrows(), dim);
    let q = orthonormalize_columns(span, 1e-12);
    let rank = q.ncols();
    let mut cols: Vec<Array1<C64>> = Vec::with_capacity(dim - rank);
    for e in 0..dim {
        if cols.len() == dim - rank {
            break;
        }
        let mut v = Array1::<C64>::zeros(dim);
        v[e] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for j in 0..rank {
                let proj: C64 = (0..dim).map(|r| q[[r, j]].conj() * v[r]).sum();
                for r in 0..dim {
                    v[r] -= proj * q[[r, j]];
                }
            }
            for w in &cols {
                let proj: C64 = w.iter().zip(v.iter()).map(|(wi, vi)| wi.conj() * vi).sum();
                for r in 0..dim {
                    v[r] -= proj * w[r];
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.mapv_inplace(|x| x / norm);
            cols.push(v);
        }
    }
    let mut out = Array2::<C64>::zeros((dim, cols.len()));
    for (j, v) in cols.iter().enumerate() {
        for r in 0..dim {
            out[[r, j]] = v[r];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eigen_diagonal_matrix() {
        let a = array![[c(3.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]];
        let (w, v) = hermitian_eigen(&a);
        assert!((w[0] + 1.0).abs() < 1e-14);
        assert!((w[1] - 3.0).abs() < 1e-14);
        assert!(unitarity_error(&v) < 1e-12);
    }

    #[test]
    fn eigen_reconstructs_hermitian() {
        let a = array![
            [c(2.0, 0.0), c(1.0, 1.0), c(0.5, -0.25)],
            [c(1.0, -1.0), c(0.0, 0.0), c(0.0, 2.0)],
            [c(0.5, 0.25), c(0.0, -2.0), c(-1.5, 0.0)]
        ];
        let (w, v) = hermitian_eigen(&a);
        let mut rec = Array2::<C64>::zeros((3, 3));
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    rec[[i, j]] += v[[i, k]] * w[k] * v[[j, k]].conj();
                }
            }
        }
        let err = frobenius_norm(&(&rec - &a));
        assert!(err < 1e-12, "reconstruction error {err}");
    }

    #[test]
    fn svd_recovers_rank_and_factors() {
        // Rank-1 matrix: second singular value must land at the roundoff floor.
        let a = array![
            [c(1.0, 0.0), c(2.0, 0.0)],
            [c(0.0, 1.0), c(0.0, 2.0)],
            [c(-1.0, 0.5), c(-2.0, 1.0)]
        ];
        let (u, s, v) = svd(&a);
        assert!(
            s[1] < 1e-14 * s[0],
            "tiny singular value must stay tiny: {}",
            s[1]
        );
        let mut rec = Array2::<C64>::zeros((3, 2));
        for k in 0..2 {
            for i in 0..3 {
                for j in 0..2 {
                    rec[[i, j]] += u[[i, k]] * s[k] * v[[j, k]].conj();
                }
            }
        }
        assert!(frobenius_norm(&(&rec - &a)) < 1e-12);
    }

    #[test]
    fn svd_wide_matrix() {
        let a = array![
            [c(0.3, 0.1), c(-0.2, 0.7), c(1.1, 0.0), c(0.0, -0.4)],
            [c(0.9, -0.5), c(0.4, 0.0), c(0.0, 0.2), c(-0.6, 0.3)]
        ];
        let (u, s, v) = svd(&a);
        let mut rec = Array2::<C64>::zeros((2, 4));
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..4 {
                    rec[[i, j]] += u[[i, k]] * s[k] * v[[j, k]].conj();
                }
            }
        }
        assert!(frobenius_norm(&(&rec - &a)) < 1e-12);
        assert!(s[0] >= s[1]);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let h = Array2::<C64>::zeros((4, 4));
        let u = exp_i_hermitian(&h);
        assert!(frobenius_norm(&(&u - &Array2::<C64>::eye(4))) < 1e-14);
        assert!(unitarity_error(&u) < 1e-13);
    }

    #[test]
    fn exp_matches_scalar_phase() {
        let h = array![[c(0.7, 0.0)]];
        let u = exp_i_hermitian(&h);
        assert!((u[[0, 0]] - C64::from_polar(1.0, 0.7)).norm() < 1e-14);
    }

    #[test]
    fn complement_spans_remaining_dims() {
        let mut span = Array2::<C64>::zeros((4, 2));
        span[[0, 0]] = c(1.0, 0.0);
        span[[1, 1]] = c(0.0, 1.0);
        let comp = complement_basis(&span, 4);
        assert_eq!(comp.ncols(), 2);
        for j in 0..2 {
            for sj in 0..2 {
                let dot: C64 = (0..4).map(|r| span[[r, sj]].conj() * comp[[r, j]]).sum();
                assert!(dot.norm() < 1e-12);
            }
        }
    }
}
