//! Minimum-norm least squares.

use crate::error::{Error, Result};
use crate::linalg::qr::{solve_upper, Householder};
use crate::linalg::svd::{singular_values, svd, Svd};
use crate::matrix::{ComplexMatrix, C64, ZERO};

/// Factor-once, solve-many least-squares operator for `min ||M x - b||`.
///
/// Uses Householder QR when `M` is tall with full numerical column rank, and
/// an SVD pseudoinverse otherwise. The rank tolerance is
/// `max(rows, cols) * eps * sigma_max`.
#[derive(Clone, Debug)]
pub enum LeastSquares {
    Qr(Householder),
    Pseudoinverse { svd: Svd, rank: usize },
}

impl LeastSquares {
    pub fn new(m: &ComplexMatrix) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows >= cols && cols > 0 {
            let qr = Householder::factor(m)?;
            let sv = singular_values(&qr.r());
            if sv.last().copied().unwrap_or(0.0) > rank_tolerance(rows, cols, sv[0]) {
                return Ok(LeastSquares::Qr(qr));
            }
        }
        let svd = svd(m)?;
        let smax = svd.sigma.first().copied().unwrap_or(0.0);
        let tol = rank_tolerance(rows, cols, smax);
        let rank = svd.sigma.iter().take_while(|&&s| s > tol).count();
        Ok(LeastSquares::Pseudoinverse { svd, rank })
    }

    pub fn is_full_rank(&self) -> bool {
        matches!(self, LeastSquares::Qr(_))
    }

    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        match self {
            LeastSquares::Qr(qr) => qr.solve_least_squares(b),
            LeastSquares::Pseudoinverse { svd, rank } => {
                let Svd { u, sigma, v } = svd;
                if b.len() != u.rows() {
                    return Err(Error::LengthMismatch {
                        expected: u.rows(),
                        found: b.len(),
                    });
                }
                let utb = u.adjoint_matvec(b)?;
                let mut x = vec![ZERO; v.rows()];
                for j in 0..*rank {
                    let coef = utb[j] / sigma[j];
                    for (i, xi) in x.iter_mut().enumerate() {
                        *xi += v[(i, j)] * coef;
                    }
                }
                Ok(x)
            }
        }
    }

    pub fn solve_matrix(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let cols = b
            .columns()
            .iter()
            .map(|c| self.solve(c))
            .collect::<Result<Vec<_>>>()?;
        if cols.is_empty() {
            return Ok(ComplexMatrix::zeros(self.unknowns(), 0));
        }
        ComplexMatrix::from_columns(&cols)
    }

    fn unknowns(&self) -> usize {
        match self {
            LeastSquares::Qr(qr) => qr.cols(),
            LeastSquares::Pseudoinverse { svd, .. } => svd.v.rows(),
        }
    }
}

pub fn rank_tolerance(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON * sigma_max
}

/// `M^dagger B`: the minimum-norm least-squares solution.
pub fn least_squares(m: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "least squares with {}x{} matrix and {}x{} right-hand side",
            m.rows(),
            m.cols(),
            b.rows(),
            b.cols()
        )));
    }
    LeastSquares::new(m)?.solve_matrix(b)
}

/// Moore-Penrose inverse of a full-column-rank matrix via `R^{-1} Q^H`.
pub fn pseudoinverse_full_rank(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let qr = Householder::factor(m)?;
    let r = qr.r();
    let q = qr.q();
    let cols = q
        .adjoint()
        .columns()
        .iter()
        .map(|c| solve_upper(&r, c))
        .collect::<Result<Vec<_>>>()?;
    ComplexMatrix::from_columns(&cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::ComplexNormal;

    fn rel_err(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        (a - b).frobenius_norm() / b.frobenius_norm()
    }

    #[test]
    fn identity_returns_rhs() {
        let b = ComplexNormal::seeded(1).matrix(3, 2);
        let x = least_squares(&ComplexMatrix::identity(3), &b).unwrap();
        assert!(rel_err(&x, &b) < 1e-15);
    }

    #[test]
    fn mean_of_two_samples() {
        let m = ComplexMatrix::from_real(2, 1, &[1.0, 1.0]).unwrap();
        let b = ComplexMatrix::from_real(2, 1, &[0.0, 2.0]).unwrap();
        let x = least_squares(&m, &b).unwrap();
        assert!((x[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn plant_and_recover() {
        let m = ComplexNormal::seeded(21).matrix(5, 3);
        let x0 = ComplexNormal::seeded(22).matrix(3, 2);
        let x = least_squares(&m, &(&m * &x0)).unwrap();
        assert!(rel_err(&x, &x0) < 1e-12);
    }

    #[test]
    fn rank_deficient_gives_minimum_norm() {
        // Columns 0 and 1 are identical: the minimum-norm solution splits evenly.
        let m = ComplexMatrix::from_real(3, 2, &[1.0, 1.0, 2.0, 2.0, 0.0, 0.0]).unwrap();
        let b = ComplexMatrix::from_real(3, 1, &[1.0, 2.0, 0.0]).unwrap();
        let solver = LeastSquares::new(&m).unwrap();
        assert!(!solver.is_full_rank());
        let x = solver.solve_matrix(&b).unwrap();
        assert!((x[(0, 0)] - C64::new(0.5, 0.0)).norm() < 1e-14);
        assert!((x[(1, 0)] - C64::new(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn wide_system_minimum_norm() {
        let m = ComplexMatrix::from_real(1, 2, &[1.0, 1.0]).unwrap();
        let b = ComplexMatrix::from_real(1, 1, &[2.0]).unwrap();
        let x = least_squares(&m, &b).unwrap();
        assert!((x[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((x[(1, 0)] - C64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn dimension_mismatch() {
        let r = least_squares(&ComplexMatrix::identity(3), &ComplexMatrix::zeros(2, 1));
        assert!(matches!(r, Err(Error::Dimension(_))));
    }

    #[test]
    fn full_rank_pseudoinverse() {
        let m = ComplexNormal::seeded(4).matrix(6, 3);
        let p = pseudoinverse_full_rank(&m).unwrap();
        let pm = &p * &m;
        assert!((&pm - &ComplexMatrix::identity(3)).frobenius_norm() < 1e-13);
    }

    proptest::proptest! {
        #[test]
        fn recovers_planted_solution(seed in 0u64..5_000, rows in 2usize..12, cols in 1usize..6) {
            let cols = cols.min(rows);
            // Well-conditioned by construction: Q (orthonormal) * upper with unit-ish diagonal.
            let mut g = ComplexNormal::seeded(seed);
            let q = crate::linalg::thin_qr(&g.matrix(rows, cols)).unwrap().q;
            let mut r = g.matrix(cols, cols).scale(C64::new(0.1, 0.0));
            for i in 0..cols {
                for j in 0..i { r[(i, j)] = ZERO; }
                r[(i, i)] = C64::new(1.0 + 0.5 * (i as f64 / cols as f64), 0.0);
            }
            let m = &q * &r;
            let x0 = g.matrix(cols, 2);
            let x = least_squares(&m, &(&m * &x0)).unwrap();
            proptest::prop_assert!(rel_err(&x, &x0) <= 1e-10);
        }
    }
}
