//! Dense complex linear algebra used by the solver.

mod condest;
mod eig;
mod lstsq;
mod qr;
mod svd;

pub use condest::{smallest_sv_inverse_iteration, DEFAULT_STEPS};
pub use eig::{baseline_eigenvalues, hessenberg};
pub use lstsq::{least_squares, pseudoinverse_full_rank, rank_tolerance, LeastSquares};
pub use qr::{solve_upper, solve_upper_adjoint, thin_qr, Householder, QrFactors};
pub use svd::{singular_values, svd, Svd};

use crate::matrix::ComplexMatrix;

/// Spectral norm.
pub fn norm2(m: &ComplexMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Number of singular values at or below `tol`.
pub fn nullity_below(m: &ComplexMatrix, tol: f64) -> usize {
    let sv = singular_values(m);
    let deficit = m.cols().saturating_sub(sv.len());
    deficit + sv.iter().filter(|&&s| s <= tol).count()
}
