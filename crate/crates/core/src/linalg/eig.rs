//! Baseline dense eigenvalues: Householder reduction to upper Hessenberg form
//! followed by single-shift complex QR sweeps with Wilkinson shifts.
//!
//! Only eigenvalues are produced, so every sweep is restricted to the active
//! unreduced block.

use crate::error::{Error, Result};
use crate::matrix::{norm2, ComplexMatrix, C64, ONE, ZERO};

/// Reduces a square matrix to upper Hessenberg form by unitary similarity.
pub fn hessenberg(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "Hessenberg reduction needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut h = m.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = norm2(&x);
        if xnorm == 0.0 {
            continue;
        }
        let alpha = x[0];
        let phase = if alpha.norm() == 0.0 { ONE } else { alpha / alpha.norm() };
        let beta = -phase * xnorm;
        let mut v = x;
        v[0] -= beta;
        let vn = norm2(&v);
        let tau = 2.0 / (vn * vn);

        // H <- (I - tau v v^H) H on rows k+1..n.
        for j in 0..n {
            let s: C64 = v.iter().enumerate().map(|(l, vl)| vl.conj() * h[(k + 1 + l, j)]).sum();
            let s = s * tau;
            for (l, vl) in v.iter().enumerate() {
                h[(k + 1 + l, j)] -= s * vl;
            }
        }
        // H <- H (I - tau v v^H) on columns k+1..n.
        for i in 0..n {
            let s: C64 = v.iter().enumerate().map(|(l, vl)| h[(i, k + 1 + l)] * vl).sum();
            let s = s * tau;
            for (l, vl) in v.iter().enumerate() {
                h[(i, k + 1 + l)] -= s * vl.conj();
            }
        }
        h[(k + 1, k)] = beta;
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    Ok(h)
}

/// Eigenvalues of a square matrix, in the order they deflate.
///
/// Fails with `NoConvergence` after `30 n` QR sweeps.
pub fn baseline_eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    let n = m.rows();
    let mut h = hessenberg(m)?;
    let mut eig = vec![ZERO; n];
    if n == 0 {
        return Ok(eig);
    }
    let max_sweeps = 30 * n;
    let mut sweeps = 0;
    let mut since_deflation = 0;
    let hnorm = h.frobenius_norm();
    let small = f64::MIN_POSITIVE * (n as f64) / f64::EPSILON;

    let mut hi = n - 1;
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        // Find the start of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut scale = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if scale == 0.0 {
                scale = hnorm;
            }
            if sub <= f64::EPSILON * scale || sub <= small {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if sweeps >= max_sweeps {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        since_deflation += 1;

        let shift = if since_deflation % 11 == 0 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.25 * h[(hi, hi - 1)].norm())
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep(&mut h, lo, hi, shift);
    }
    Ok(eig)
}

/// Eigenvalue of the trailing 2x2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let center = (a + d) * 0.5;
    let r1 = center + disc;
    let r2 = center - disc;
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

/// One explicit shifted QR step `H - mu I = QR`, `H <- RQ + mu I` on the
/// active block `lo..=hi`.
fn qr_sweep(h: &mut ComplexMatrix, lo: usize, hi: usize, shift: C64) {
    for i in lo..=hi {
        h[(i, i)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..=hi {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = x * c + s * y;
            h[(k + 1, j)] = -s.conj() * x + y * c;
        }
        h[(k + 1, k)] = ZERO;
        rotations.push((c, s));
    }
    for (off, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + off;
        for i in lo..=(k + 1).min(hi) {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + y * s.conj();
            h[(i, k + 1)] = -x * s + y * c;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += shift;
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` with real `c` that maps `(f, g)` to `(r, 0)`.
fn givens(f: C64, g: C64) -> (f64, C64) {
    let fa = f.norm();
    let ga = g.norm();
    if ga == 0.0 {
        return (1.0, ZERO);
    }
    if fa == 0.0 {
        return (0.0, g.conj() / ga);
    }
    let rho = fa.hypot(ga);
    (fa / rho, (f / fa) * g.conj() / rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::ComplexNormal;

    /// Greedy multiset match; returns the largest pairing distance.
    fn match_distance(mut got: Vec<C64>, want: &[C64]) -> f64 {
        let mut worst: f64 = 0.0;
        for w in want {
            let (idx, d) = got
                .iter()
                .enumerate()
                .map(|(i, g)| (i, (g - w).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            worst = worst.max(d);
            got.swap_remove(idx);
        }
        worst
    }

    #[test]
    fn diagonal_matrix() {
        let m = ComplexMatrix::from_real(3, 3, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0]).unwrap();
        let e = baseline_eigenvalues(&m).unwrap();
        let want: Vec<C64> = [1.0, 2.0, 3.0].iter().map(|&x| C64::new(x, 0.0)).collect();
        assert!(match_distance(e, &want) < 1e-14);
    }

    #[test]
    fn rotation_matrix() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]).unwrap();
        let e = baseline_eigenvalues(&m).unwrap();
        assert!(match_distance(e, &[C64::new(0.0, 1.0), C64::new(0.0, -1.0)]) < 1e-14);
    }

    #[test]
    fn hessenberg_is_similar() {
        let m = ComplexNormal::seeded(8).matrix(7, 7);
        let h = hessenberg(&m).unwrap();
        for i in 0..7usize {
            for j in 0..i.saturating_sub(1) {
                assert_eq!(h[(i, j)], ZERO);
            }
        }
        // Similarity preserves the Frobenius norm and the trace.
        assert!((h.frobenius_norm() - m.frobenius_norm()).abs() < 1e-13 * m.frobenius_norm());
        let tr = |a: &ComplexMatrix| a.diagonal().iter().sum::<C64>();
        assert!((tr(&h) - tr(&m)).norm() < 1e-13);
    }

    #[test]
    fn companion_matrix_of_known_roots() {
        // Roots 1, 2, 3, 4 of x^4 - 10x^3 + 35x^2 - 50x + 24.
        let m = ComplexMatrix::from_real(
            4,
            4,
            &[10.0, -35.0, 50.0, -24.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        )
        .unwrap();
        let e = baseline_eigenvalues(&m).unwrap();
        let want: Vec<C64> = (1..=4).map(|x| C64::new(x as f64, 0.0)).collect();
        assert!(match_distance(e, &want) < 1e-11);
    }

    #[test]
    fn jordan_block_is_handled() {
        let mut m = ComplexMatrix::zeros(5, 5);
        for i in 0..4 {
            m[(i, i + 1)] = ONE;
        }
        let e = baseline_eigenvalues(&m).unwrap();
        assert_eq!(e.len(), 5);
        assert!(e.iter().all(|z| z.norm() < 1e-2));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn similarity_with_diagonal(seed in 0u64..10_000, n in 1usize..=12) {
            let mut g = ComplexNormal::seeded(seed);
            let d = g.vector(n);
            // V = I + 0.3 G / sqrt(n): well conditioned.
            let mut v = g.matrix(n, n).scale(C64::new(0.3 / (n as f64).sqrt(), 0.0));
            for i in 0..n { v[(i, i)] += ONE; }
            let vinv = crate::linalg::least_squares(&v, &ComplexMatrix::identity(n)).unwrap();
            let m = &(&v * &ComplexMatrix::from_diagonal(&d)) * &vinv;
            let e = baseline_eigenvalues(&m).unwrap();
            proptest::prop_assert!(match_distance(e, &d) <= 1e-8);
        }
    }
}
