//! One-sided (Hestenes) Jacobi SVD.
//!
//! Tall inputs are first reduced with a QR factorization so the rotations act
//! on a square triangular factor; wide inputs are handled through the adjoint.

use crate::error::Result;
use crate::linalg::qr::Householder;
use crate::matrix::{dot_conj, norm2, ComplexMatrix, C64, ZERO};

const MAX_SWEEPS: usize = 80;

/// Thin SVD `M = U diag(sigma) V^H` with `sigma` non-increasing.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    if m.rows() < m.cols() {
        let Svd { u, sigma, v } = svd(&m.adjoint())?;
        return Ok(Svd { u: v, sigma, v: u });
    }
    if m.cols() == 0 {
        return Ok(Svd {
            u: ComplexMatrix::zeros(m.rows(), 0),
            sigma: Vec::new(),
            v: ComplexMatrix::zeros(0, 0),
        });
    }
    let qr = Householder::factor(m)?;
    let (ur, sigma, v) = jacobi(&qr.r());
    let u = &qr.q() * &ur;
    Ok(Svd { u, sigma, v })
}

/// Singular values in non-increasing order; length `min(rows, cols)`.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    let square = if m.rows() >= m.cols() {
        Householder::factor(m)
    } else {
        Householder::factor(&m.adjoint())
    }
    .expect("tall input by construction")
    .r();
    jacobi(&square).1
}

/// Jacobi sweeps on the columns of a square matrix. Returns `(U, sigma, V)`
/// with columns sorted by decreasing singular value.
fn jacobi(a: &ComplexMatrix) -> (ComplexMatrix, Vec<f64>, ComplexMatrix) {
    let n = a.cols();
    let mut cols = a.columns();
    let mut vcols = ComplexMatrix::identity(n).columns();
    let tol = f64::EPSILON * (n as f64).sqrt();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm2(&cols[p]).powi(2);
                let beta = norm2(&cols[q]).powi(2);
                let gamma = dot_conj(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Remove the phase of gamma, then apply a real rotation.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s, phase);
                rotate(&mut vcols, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> = cols.iter().enumerate().map(|(j, c)| (norm2(c), j)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0));

    let sigma: Vec<f64> = order.iter().map(|&(s, _)| s).collect();
    let nrows = a.rows();
    let mut u = ComplexMatrix::zeros(nrows, n);
    let mut v = ComplexMatrix::zeros(n, n);
    for (dst, &(s, src)) in order.iter().enumerate() {
        if s > 0.0 {
            let ucol: Vec<C64> = cols[src].iter().map(|z| z / s).collect();
            u.set_column(dst, &ucol);
        }
        v.set_column(dst, &vcols[src]);
    }
    complete_basis(&mut u, &sigma);
    (u, sigma, v)
}

/// `a_p <- c a_p - s conj(phase) a_q`, `a_q <- s a_p + c conj(phase) a_q`.
fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    let ph = phase.conj();
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yq = *y * ph;
        let xp = *x;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}

/// Replaces the columns of `u` belonging to zero singular values with an
/// orthonormal completion so that `U` always has orthonormal columns.
fn complete_basis(u: &mut ComplexMatrix, sigma: &[f64]) {
    let n = u.rows();
    for j in 0..sigma.len() {
        if sigma[j] > 0.0 {
            continue;
        }
        for e in 0..n {
            let mut cand = vec![ZERO; n];
            cand[e] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                for jj in 0..u.cols() {
                    if jj == j || (jj > j && sigma[jj] == 0.0) {
                        continue;
                    }
                    let col = u.column(jj);
                    let h = dot_conj(&col, &cand);
                    for (ci, qi) in cand.iter_mut().zip(&col) {
                        *ci -= h * qi;
                    }
                }
            }
            let nrm = norm2(&cand);
            if nrm > 0.5 {
                let cand: Vec<C64> = cand.iter().map(|z| z / nrm).collect();
                u.set_column(j, &cand);
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::ComplexNormal;

    #[test]
    fn diagonal_is_sorted() {
        let m = ComplexMatrix::from_real(3, 3, &[3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0]).unwrap();
        let s = singular_values(&m);
        assert_eq!(s.len(), 3);
        for (a, b) in s.iter().zip([3.0, 2.0, 1.0]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn nilpotent_jordan_block() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let s = singular_values(&m);
        assert!((s[0] - 1.0).abs() < 1e-15);
        assert!(s[1].abs() < 1e-15);
    }

    #[test]
    fn full_svd_reconstructs() {
        for (r, c) in [(7, 4), (4, 7), (5, 5)] {
            let m = ComplexNormal::seeded(11).matrix(r, c);
            let Svd { u, sigma, v } = svd(&m).unwrap();
            let p = sigma.len();
            let sig = ComplexMatrix::from_diagonal(&sigma.iter().map(|&s| C64::new(s, 0.0)).collect::<Vec<_>>());
            let rec = &(&u * &sig) * &v.adjoint();
            assert!((&rec - &m).frobenius_norm() < 1e-13 * m.frobenius_norm());
            let uu = &u.adjoint() * &u;
            assert!((&uu - &ComplexMatrix::identity(p)).frobenius_norm() < 1e-13);
            let vv = &v.adjoint() * &v;
            assert!((&vv - &ComplexMatrix::identity(p)).frobenius_norm() < 1e-13);
        }
    }

    #[test]
    fn rank_deficient_u_stays_orthonormal() {
        let x = ComplexNormal::seeded(5).matrix(6, 1);
        let y = ComplexNormal::seeded(6).matrix(1, 4);
        let m = &x * &y;
        let Svd { u, sigma, .. } = svd(&m).unwrap();
        assert!(sigma[1] < 1e-14 * sigma[0]);
        let uu = &u.adjoint() * &u;
        assert!((&uu - &ComplexMatrix::identity(4)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn graded_matrix_small_values_are_accurate() {
        // diag(1, 1e-5, 1e-10, 1e-15) mixed by unitary factors from QR.
        let q1 = crate::linalg::thin_qr(&ComplexNormal::seeded(1).matrix(4, 4)).unwrap().q;
        let q2 = crate::linalg::thin_qr(&ComplexNormal::seeded(2).matrix(4, 4)).unwrap().q;
        let d = ComplexMatrix::from_real(4, 4, &[
            1.0, 0.0, 0.0, 0.0, 0.0, 1e-5, 0.0, 0.0, 0.0, 0.0, 1e-10, 0.0, 0.0, 0.0, 0.0, 1e-15,
        ])
        .unwrap();
        let m = &(&q1 * &d) * &q2.adjoint();
        let s = singular_values(&m);
        assert!((s[1] - 1e-5).abs() < 1e-15);
        assert!((s[2] - 1e-10).abs() < 1e-15);
        assert!(s[3] < 1e-14);
    }

    proptest::proptest! {
        #[test]
        fn adjoint_has_same_singular_values(seed in 0u64..5_000, r in 1usize..30, c in 1usize..30) {
            let m = ComplexNormal::seeded(seed).matrix(r, c);
            let a = singular_values(&m);
            let b = singular_values(&m.adjoint());
            proptest::prop_assert_eq!(a.len(), r.min(c));
            for w in a.windows(2) {
                proptest::prop_assert!(w[0] >= w[1]);
            }
            for (x, y) in a.iter().zip(&b) {
                proptest::prop_assert!((x - y).abs() <= 1e-12 * a[0]);
            }
        }
    }
}
