//! The regularizing map
//!
//! ```text
//! g(A, lambda, X) = ( (A - lambda I) X - X S ,  C^H X - T )  in C^{n x k} x C^{m x k}
//! ```
//!
//! and its partial Jacobian with respect to `(lambda, X)`.
//!
//! Vectors in `C x C^{n x k}` are packed as `(y_k, y_{k-1}, ..., y_1, sigma)`
//! and residuals as `[C^H x_j - T_j ; (A - lambda I) x_j - (X S)_j]` for
//! `j = k, ..., 1`. With this ordering the Jacobian is block upper triangular
//! with diagonal blocks `[C^H ; A - lambda I]`.

use crate::error::{Error, Result};
use crate::matrix::{norm2, ComplexMatrix, C64, ONE, ZERO};
use crate::random::ComplexNormal;

/// Geometric multiplicity `m` and Segre anchor `k` of an eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultiplicitySupport {
    pub m: usize,
    pub k: usize,
}

impl MultiplicitySupport {
    pub fn new(m: usize, k: usize, n: usize) -> Result<Self> {
        if m == 0 || k == 0 {
            return Err(Error::InvalidArgument(format!(
                "multiplicity support needs m, k >= 1 (got {m} x {k})"
            )));
        }
        if m > n || k > n {
            return Err(Error::InvalidArgument(format!(
                "multiplicity support {m} x {k} exceeds matrix order {n}"
            )));
        }
        Ok(Self { m, k })
    }
}

/// The parameters `(C, S, T)` of `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct PencilParameters {
    /// `n x m`
    pub c: ComplexMatrix,
    /// `k x k`, strictly upper triangular with nonzero superdiagonal.
    pub s: ComplexMatrix,
    /// `m x k`, equal to `make_t(m, k)`.
    pub t: ComplexMatrix,
}

impl PencilParameters {
    pub fn new(c: ComplexMatrix, s: ComplexMatrix) -> Result<Self> {
        let m = c.cols();
        let k = s.rows();
        if m == 0 || !s.is_square() || k == 0 {
            return Err(Error::Dimension(format!(
                "C is {}x{}, S is {}x{}",
                c.rows(),
                c.cols(),
                s.rows(),
                s.cols()
            )));
        }
        check_nilpotent(&s)?;
        Ok(Self {
            t: make_t(m, k),
            c,
            s,
        })
    }

    pub fn n(&self) -> usize {
        self.c.rows()
    }

    pub fn m(&self) -> usize {
        self.c.cols()
    }

    pub fn k(&self) -> usize {
        self.s.rows()
    }

    pub fn support(&self) -> MultiplicitySupport {
        MultiplicitySupport {
            m: self.m(),
            k: self.k(),
        }
    }
}

/// `S` must be strictly upper triangular with `s_12 s_23 ... s_{k-1,k} != 0`.
pub fn check_nilpotent(s: &ComplexMatrix) -> Result<()> {
    if !s.is_upper_triangular(true) {
        return Err(Error::InvalidArgument("S must be strictly upper triangular".into()));
    }
    for i in 0..s.rows().saturating_sub(1) {
        if s[(i, i + 1)] == ZERO {
            return Err(Error::InvalidArgument(format!(
                "S has a zero superdiagonal entry at ({}, {}); rank would drop below k - 1",
                i + 1,
                i + 2
            )));
        }
    }
    Ok(())
}

/// `m x k` matrix with a single one in the `(1, 1)` position.
pub fn make_t(m: usize, k: usize) -> ComplexMatrix {
    let mut t = ComplexMatrix::zeros(m, k);
    if m > 0 && k > 0 {
        t[(0, 0)] = ONE;
    }
    t
}

/// Seeded `n x m` complex Gaussian matrix with unit 2-norm columns.
pub fn random_c(n: usize, m: usize, seed: u64) -> Result<ComplexMatrix> {
    if m == 0 || n < m {
        return Err(Error::InvalidArgument(format!(
            "random C needs n >= m >= 1 (got n = {n}, m = {m})"
        )));
    }
    let mut c = ComplexNormal::seeded(seed).matrix(n, m);
    for j in 0..m {
        let col = c.column(j);
        let nrm = norm2(&col);
        let col: Vec<C64> = col.iter().map(|z| z / nrm).collect();
        c.set_column(j, &col);
    }
    Ok(c)
}

fn check_shapes(a: &ComplexMatrix, p: &PencilParameters, x: &ComplexMatrix) -> Result<()> {
    let n = a.rows();
    if !a.is_square() {
        return Err(Error::Dimension(format!("A is {}x{}, expected square", a.rows(), a.cols())));
    }
    if p.n() != n || x.rows() != n || x.cols() != p.k() {
        return Err(Error::Dimension(format!(
            "A is {n}x{n}, C is {}x{}, S is {}x{}, X is {}x{}",
            p.c.rows(),
            p.c.cols(),
            p.k(),
            p.k(),
            x.rows(),
            x.cols()
        )));
    }
    Ok(())
}

/// Value of `g`: `(R1, R2) = ((A - lambda I) X - X S, C^H X - T)`.
pub fn eval_g(
    a: &ComplexMatrix,
    p: &PencilParameters,
    lambda: C64,
    x: &ComplexMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_shapes(a, p, x)?;
    let r1 = &a.shift_diagonal(lambda).matmul(x)? - &x.matmul(&p.s)?;
    let r2 = &p.c.adjoint().matmul(x)? - &p.t;
    Ok((r1, r2))
}

/// 2-norm of the stacked entries of both residual blocks.
pub fn residual_norm(r1: &ComplexMatrix, r2: &ComplexMatrix) -> f64 {
    let all: Vec<C64> = r1.as_slice().iter().chain(r2.as_slice()).copied().collect();
    norm2(&all)
}

/// `||g(A, lambda, X)||_2`.
pub fn residual(a: &ComplexMatrix, p: &PencilParameters, lambda: C64, x: &ComplexMatrix) -> Result<f64> {
    let (r1, r2) = eval_g(a, p, lambda, x)?;
    Ok(residual_norm(&r1, &r2))
}

/// Packs `(R1, R2)` in the Jacobian's row order: for `j = k..1`, the `m`
/// entries of `R2[:, j]` followed by the `n` entries of `R1[:, j]`.
pub fn pack_residual(r1: &ComplexMatrix, r2: &ComplexMatrix) -> Vec<C64> {
    let k = r1.cols();
    let mut out = Vec::with_capacity(k * (r1.rows() + r2.rows()));
    for j in (0..k).rev() {
        out.extend(r2.column(j));
        out.extend(r1.column(j));
    }
    out
}

/// Inverse of [`pack_residual`].
pub fn unpack_residual(v: &[C64], n: usize, m: usize, k: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if v.len() != k * (n + m) {
        return Err(Error::LengthMismatch {
            expected: k * (n + m),
            found: v.len(),
        });
    }
    let mut r1 = ComplexMatrix::zeros(n, k);
    let mut r2 = ComplexMatrix::zeros(m, k);
    for (block, j) in (0..k).rev().enumerate() {
        let off = block * (n + m);
        r2.set_column(j, &v[off..off + m]);
        r1.set_column(j, &v[off + m..off + m + n]);
    }
    Ok((r1, r2))
}

/// Packs `(sigma, Y)` as `(y_k, ..., y_1, sigma)`.
pub fn pack(sigma: C64, y: &ComplexMatrix) -> Vec<C64> {
    let k = y.cols();
    let mut out = Vec::with_capacity(y.rows() * k + 1);
    for j in (0..k).rev() {
        out.extend(y.column(j));
    }
    out.push(sigma);
    out
}

/// Inverse of [`pack`] for an `n x k` matrix component.
pub fn unpack(v: &[C64], n: usize, k: usize) -> Result<(C64, ComplexMatrix)> {
    if v.len() != n * k + 1 {
        return Err(Error::LengthMismatch {
            expected: n * k + 1,
            found: v.len(),
        });
    }
    let mut y = ComplexMatrix::zeros(n, k);
    for (block, j) in (0..k).rev().enumerate() {
        y.set_column(j, &v[block * n..(block + 1) * n]);
    }
    Ok((v[n * k], y))
}

/// Image of `(sigma, Y)` under the partial Jacobian at `(lambda, X)`:
/// `(-sigma X + (A - lambda I) Y - Y S, C^H Y)`.
pub fn apply_jacobian(
    a: &ComplexMatrix,
    p: &PencilParameters,
    lambda: C64,
    x: &ComplexMatrix,
    sigma: C64,
    y: &ComplexMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_shapes(a, p, x)?;
    if y.shape() != x.shape() {
        return Err(Error::Dimension(format!("Y is {}x{}, X is {}x{}", y.rows(), y.cols(), x.rows(), x.cols())));
    }
    let top = &(&a.shift_diagonal(lambda).matmul(y)? - &y.matmul(&p.s)?) - &x.scale(sigma);
    let bottom = p.c.adjoint().matmul(y)?;
    Ok((top, bottom))
}

/// Dense `(nk + mk) x (nk + 1)` matrix of the partial Jacobian in the
/// blockwise upper-triangular layout.
pub fn assemble_jacobian(
    a: &ComplexMatrix,
    p: &PencilParameters,
    lambda: C64,
    x: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    check_shapes(a, p, x)?;
    let n = a.rows();
    let m = p.m();
    let k = p.k();
    let block_rows = n + m;
    let mut jac = ComplexMatrix::zeros(k * block_rows, n * k + 1);
    let shifted = a.shift_diagonal(lambda);
    let col_off = |j: usize| (k - 1 - j) * n;
    let row_off = |j: usize| (k - 1 - j) * block_rows;

    for j in 0..k {
        let (r0, c0) = (row_off(j), col_off(j));
        // Diagonal block [C^H ; A - lambda I].
        for i in 0..m {
            for l in 0..n {
                jac[(r0 + i, c0 + l)] = p.c[(l, i)].conj();
            }
        }
        for i in 0..n {
            for l in 0..n {
                jac[(r0 + m + i, c0 + l)] = shifted[(i, l)];
            }
        }
        // -(Y S)_j = -sum_i s_ij y_i.
        for i in 0..k {
            let sij = p.s[(i, j)];
            if sij == ZERO {
                continue;
            }
            let ci = col_off(i);
            for l in 0..n {
                jac[(r0 + m + l, ci + l)] -= sij;
            }
        }
        // sigma column: -x_j.
        for l in 0..n {
            jac[(r0 + m + l, n * k)] = -x[(l, j)];
        }
    }
    Ok(jac)
}

/// Forward-difference approximation of the partial Jacobian, column by column
/// in the packed ordering. Used for debug verification.
pub fn finite_difference_jacobian(
    a: &ComplexMatrix,
    p: &PencilParameters,
    lambda: C64,
    x: &ComplexMatrix,
    h: f64,
) -> Result<ComplexMatrix> {
    let n = a.rows();
    let k = p.k();
    let (r1, r2) = eval_g(a, p, lambda, x)?;
    let base = pack_residual(&r1, &r2);
    let base_point = pack(lambda, x);
    let mut cols = Vec::with_capacity(n * k + 1);
    for idx in 0..n * k + 1 {
        let mut pt = base_point.clone();
        pt[idx] += h;
        let (lam, xx) = unpack(&pt, n, k)?;
        let (q1, q2) = eval_g(a, p, lam, &xx)?;
        let moved = pack_residual(&q1, &q2);
        cols.push(moved.iter().zip(&base).map(|(u, v)| (u - v) / h).collect::<Vec<_>>());
    }
    ComplexMatrix::from_columns(&cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planted::PlantedJordan;

    fn real(rows: usize, cols: usize, v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real(rows, cols, v).unwrap()
    }

    fn random_params(g: &mut ComplexNormal, n: usize, m: usize, k: usize) -> PencilParameters {
        let mut s = ComplexMatrix::zeros(k, k);
        for i in 0..k {
            for j in i + 1..k {
                s[(i, j)] = g.sample();
            }
        }
        PencilParameters::new(g.matrix(n, m), s).unwrap()
    }

    #[test]
    fn t_structure() {
        assert_eq!(make_t(1, 1), real(1, 1, &[1.0]));
        assert_eq!(make_t(2, 3), real(2, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
        assert_eq!(make_t(3, 2), real(3, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn random_c_is_deterministic_and_normalized() {
        let c1 = random_c(5, 2, 42).unwrap();
        assert_eq!(c1, random_c(5, 2, 42).unwrap());
        for j in 0..2 {
            assert!((norm2(&c1.column(j)) - 1.0).abs() <= 1e-15);
        }
        let c2 = random_c(5, 2, 43).unwrap();
        assert!((&c1 - &c2).frobenius_norm() > 0.0);
        assert!(random_c(2, 3, 1).is_err());
        assert!(random_c(2, 0, 1).is_err());
    }

    #[test]
    fn parameters_reject_degenerate_s() {
        let c = random_c(4, 1, 1).unwrap();
        let s = real(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(PencilParameters::new(c.clone(), s).is_err());
        let s = real(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        assert!(PencilParameters::new(c, s).is_err());
    }

    #[test]
    fn exact_jordan_pair_has_zero_residual() {
        let a = real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let p = PencilParameters::new(real(2, 1, &[1.0, 0.0]), real(2, 2, &[0.0, 1.0, 0.0, 0.0])).unwrap();
        let (r1, r2) = eval_g(&a, &p, ZERO, &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(residual_norm(&r1, &r2), 0.0);
    }

    #[test]
    fn zero_x_gives_minus_t() {
        let mut g = ComplexNormal::seeded(3);
        let a = g.matrix(4, 4);
        let p = random_params(&mut g, 4, 2, 3);
        let (r1, r2) = eval_g(&a, &p, g.sample(), &ComplexMatrix::zeros(4, 3)).unwrap();
        assert_eq!(r1, ComplexMatrix::zeros(4, 3));
        assert_eq!(r2, make_t(2, 3).scale(C64::new(-1.0, 0.0)));
        assert_eq!(residual_norm(&r1, &r2), 1.0);
    }

    #[test]
    fn residual_norm_examples() {
        assert_eq!(residual_norm(&ComplexMatrix::zeros(2, 2), &ComplexMatrix::zeros(1, 2)), 0.0);
        assert_eq!(residual_norm(&real(1, 1, &[3.0]), &real(1, 1, &[4.0])), 5.0);
    }

    #[test]
    fn dimension_errors() {
        let mut g = ComplexNormal::seeded(4);
        let p = random_params(&mut g, 4, 1, 2);
        let a = g.matrix(4, 4);
        assert!(eval_g(&a, &p, ZERO, &ComplexMatrix::zeros(3, 2)).is_err());
        assert!(eval_g(&g.matrix(4, 3), &p, ZERO, &ComplexMatrix::zeros(4, 2)).is_err());
        assert!(assemble_jacobian(&a, &p, ZERO, &ComplexMatrix::zeros(4, 3)).is_err());
        assert!(unpack(&[ZERO; 5], 2, 3).is_err());
    }

    #[test]
    fn pack_conventions() {
        let mut g = ComplexNormal::seeded(5);
        let y = g.matrix(3, 2);
        let sigma = g.sample();
        let (s2, y2) = unpack(&pack(sigma, &y), 3, 2).unwrap();
        assert_eq!(s2, sigma);
        assert_eq!(y2, y);
        assert!(pack(ZERO, &ComplexMatrix::zeros(3, 2)).iter().all(|z| *z == ZERO));
        let v = pack(ONE, &ComplexMatrix::zeros(3, 2));
        assert_eq!(v.iter().filter(|z| **z != ZERO).count(), 1);
        assert_eq!(*v.last().unwrap(), ONE);
        // y_k comes first.
        let mut y = ComplexMatrix::zeros(3, 2);
        y[(0, 1)] = ONE;
        assert_eq!(pack(ZERO, &y)[0], ONE);
    }

    #[test]
    fn single_column_jacobian() {
        let mut g = ComplexNormal::seeded(6);
        let (n, m) = (4, 2);
        let a = g.matrix(n, n);
        let c = g.matrix(n, m);
        let p = PencilParameters::new(c.clone(), ComplexMatrix::zeros(1, 1)).unwrap();
        let lambda = g.sample();
        let x = g.matrix(n, 1);
        let j = assemble_jacobian(&a, &p, lambda, &x).unwrap();
        assert_eq!(j.shape(), (n + m, n + 1));
        let shifted = a.shift_diagonal(lambda);
        for i in 0..m {
            for l in 0..n {
                assert_eq!(j[(i, l)], c[(l, i)].conj());
            }
            assert_eq!(j[(i, n)], ZERO);
        }
        for i in 0..n {
            for l in 0..n {
                assert_eq!(j[(m + i, l)], shifted[(i, l)]);
            }
            assert_eq!(j[(m + i, n)], -x[(i, 0)]);
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let mut g = ComplexNormal::seeded(7);
        let (n, m, k) = (6, 2, 3);
        let a = g.matrix(n, n);
        let p = random_params(&mut g, n, m, k);
        let lambda = g.sample();
        let x = g.matrix(n, k);
        let j = assemble_jacobian(&a, &p, lambda, &x).unwrap();
        let fd = finite_difference_jacobian(&a, &p, lambda, &x, 1e-7).unwrap();
        // g is affine in X and the only nonlinearity is the lambda * X cross term,
        // so every column agrees up to roundoff in the difference quotient.
        let err = (&j - &fd).frobenius_norm() / j.frobenius_norm();
        assert!(err < 1e-6, "relative error {err:e}");
    }

    #[test]
    fn blockwise_upper_triangular_layout() {
        let mut g = ComplexNormal::seeded(8);
        let (n, m, k) = (5, 2, 3);
        let a = g.matrix(n, n);
        let p = random_params(&mut g, n, m, k);
        let j = assemble_jacobian(&a, &p, g.sample(), &g.matrix(n, k)).unwrap();
        // Block row b (j = k - b) is zero in block columns before b.
        for b in 0..k {
            for r in b * (n + m)..(b + 1) * (n + m) {
                for c in 0..b * n {
                    assert_eq!(j[(r, c)], ZERO);
                }
            }
            // C^H rows only touch the diagonal block.
            for r in b * (n + m)..b * (n + m) + m {
                for c in (b + 1) * n..n * k + 1 {
                    assert_eq!(j[(r, c)], ZERO);
                }
            }
        }
    }

    #[test]
    fn homogeneous_part_is_linear_in_x() {
        let mut g = ComplexNormal::seeded(9);
        let (n, m, k) = (5, 2, 3);
        let a = g.matrix(n, n);
        let p = random_params(&mut g, n, m, k);
        let lambda = g.sample();
        let (x1, x2) = (g.matrix(n, k), g.matrix(n, k));
        let (al, be) = (g.sample(), g.sample());
        let hom = |x: &ComplexMatrix| {
            let (r1, r2) = eval_g(&a, &p, lambda, x).unwrap();
            let (z1, z2) = eval_g(&a, &p, lambda, &ComplexMatrix::zeros(n, k)).unwrap();
            pack_residual(&(&r1 - &z1), &(&r2 - &z2))
        };
        let combo = &x1.scale(al) + &x2.scale(be);
        let lhs = hom(&combo);
        let rhs: Vec<C64> = hom(&x1).iter().zip(hom(&x2)).map(|(u, v)| u * al + v * be).collect();
        let diff: Vec<C64> = lhs.iter().zip(&rhs).map(|(u, v)| u - v).collect();
        assert!(norm2(&diff) <= 1e-13 * norm2(&lhs));
    }

    #[test]
    fn planted_jordan_pair_is_a_zero() {
        for seed in 0..20 {
            let planted = PlantedJordan::builder(8)
                .eigenvalue(C64::new(1.5, -0.5))
                .blocks(&[3, 2])
                .seed(seed)
                .build()
                .unwrap();
            let (p, x) = planted.exact_parameters(2).unwrap();
            let r = residual(&planted.a, &p, planted.lambda, &x).unwrap();
            assert!(r <= 1e-10 * planted.a.frobenius_norm(), "seed {seed}: {r:e}");
            check_nilpotent(&p.s).unwrap();
        }
    }

    proptest::proptest! {
        #[test]
        fn jacobian_action_matches_direct_image(seed in 0u64..100_000, n in 1usize..=10, m in 1usize..=3, k in 1usize..=4) {
            let m = m.min(n);
            let mut g = ComplexNormal::seeded(seed);
            let a = g.matrix(n, n);
            let p = random_params(&mut g, n, m, k);
            let lambda = g.sample();
            let x = g.matrix(n, k);
            let (sigma, y) = (g.sample(), g.matrix(n, k));
            let jac = assemble_jacobian(&a, &p, lambda, &x).unwrap();
            let lhs = jac.matvec(&pack(sigma, &y)).unwrap();
            let (t1, t2) = apply_jacobian(&a, &p, lambda, &x, sigma, &y).unwrap();
            let rhs = pack_residual(&t1, &t2);
            let diff: Vec<C64> = lhs.iter().zip(&rhs).map(|(u, v)| u - v).collect();
            proptest::prop_assert!(norm2(&diff) <= 1e-13 * norm2(&rhs));
        }

        #[test]
        fn residual_packing_round_trips(seed in 0u64..1000, n in 1usize..6, m in 1usize..3, k in 1usize..4) {
            let mut g = ComplexNormal::seeded(seed);
            let (r1, r2) = (g.matrix(n, k), g.matrix(m, k));
            let v = pack_residual(&r1, &r2);
            let (a1, a2) = unpack_residual(&v, n, m, k).unwrap();
            proptest::prop_assert_eq!(a1, r1);
            proptest::prop_assert_eq!(a2, r2);
        }
    }
}
