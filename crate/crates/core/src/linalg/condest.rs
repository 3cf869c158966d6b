//! Smallest singular value of a triangular factor by inverse iteration.
//!
//! Plain inverse iteration on `R^H R`: two triangular solves per step from a
//! fixed pseudo-random start vector.

use crate::error::{Error, Result};
use crate::linalg::qr::{solve_upper, solve_upper_adjoint};
use crate::matrix::{norm2, ComplexMatrix};
use crate::random::ComplexNormal;

const START_SEED: u64 = 0x5eed_c0de;

pub const DEFAULT_STEPS: usize = 3;

/// Estimates `sigma_min(R)` for a square upper-triangular `R`.
///
/// Returns `Error::NumericallySingular` when a pivot of `R` has magnitude
/// below `eps * ||R||_F`; callers report an infinite condition number then.
pub fn smallest_sv_inverse_iteration(r: &ComplexMatrix, steps: usize) -> Result<f64> {
    if !r.is_square() {
        return Err(Error::Dimension(format!(
            "inverse iteration needs a square factor, got {}x{}",
            r.rows(),
            r.cols()
        )));
    }
    let n = r.cols();
    if n == 0 {
        return Ok(0.0);
    }
    let mut x = ComplexNormal::seeded(START_SEED).vector(n);
    let nrm = norm2(&x);
    x.iter_mut().for_each(|z| *z /= nrm);

    for _ in 0..steps.max(1) {
        let y = solve_upper_adjoint(r, &x)?;
        let z = solve_upper(r, &y)?;
        let nz = norm2(&z);
        if nz == 0.0 || !nz.is_finite() {
            return Err(Error::NumericallySingular { index: 0, pivot: 0.0 });
        }
        x = z.into_iter().map(|v| v / nz).collect();
    }
    // ||R x|| for unit x is an upper bound on sigma_min that converges to it.
    Ok(norm2(&r.matvec(&x)?))
}
