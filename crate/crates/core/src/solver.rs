//! Pseudo-eigenvalue computation by Gauss-Newton on `g(A, lambda, X) = 0`.
//!
//! The driver [`pseudoeig`] picks the parameter `C` (see [`CStrategy`]), builds a starting
//! chain `X0` and nilpotent `S` by successive least-squares solves with
//! `[A - lambda0 I ; C^H]`, and then iterates
//!
//! ```text
//! (lambda, X) <- (lambda, X) - J(lambda, X)^dagger g(A, lambda, X)
//! ```
//!
//! until the residual first increases. The QR factorization of the last
//! Jacobian gives the condition estimate `||J^dagger||_2` through a few steps
//! of inverse iteration.

use crate::error::{Error, Result};
use crate::linalg::{
    nullity_below, pseudoinverse_full_rank, singular_values, smallest_sv_inverse_iteration, svd,
    Householder, LeastSquares, DEFAULT_STEPS,
};
use crate::mapping::{
    assemble_jacobian, eval_g, finite_difference_jacobian, pack_residual, random_c, residual_norm,
    unpack, MultiplicitySupport, PencilParameters,
};
use crate::matrix::{norm2, ComplexMatrix, C64, ZERO};

/// Largest order for which the certificate also checks kernel dimensions of
/// powers of `A - E X^dagger - lambda I`.
pub const JORDAN_CHECK_MAX_N: usize = 30;

/// How the bordering parameter `C` is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CStrategy {
    /// Seeded iid complex normal columns, normalized.
    Random,
    /// Right singular vectors of `A - lambda0 I` for the `m` smallest singular
    /// values plus `mix` times a seeded random matrix, columns normalized.
    /// Keeps `[A - lambda I ; C^H]` well conditioned near the cluster, which
    /// gives much smaller condition estimates than a purely random `C`.
    KernelAligned { mix: f64 },
}

impl Default for CStrategy {
    fn default() -> Self {
        CStrategy::KernelAligned { mix: 0.2 }
    }
}

/// Builds `C` for `pseudoeig` according to `strategy`.
pub fn choose_c(a: &ComplexMatrix, lambda0: C64, m: usize, seed: u64, strategy: CStrategy) -> Result<ComplexMatrix> {
    let n = a.rows();
    let r = random_c(n, m, seed)?;
    let CStrategy::KernelAligned { mix } = strategy else {
        return Ok(r);
    };
    if !(mix >= 0.0) || !mix.is_finite() {
        return Err(Error::InvalidArgument(format!("mix must be finite and non-negative, got {mix}")));
    }
    let mut d = svd(&a.shift_diagonal(lambda0))?;
    // When lambda0 is an eigenvalue to working precision the order of the
    // kernel singular vectors is noise. A small shift inside the spectral gap
    // orders them by chain depth again, the longest chain last.
    let roundoff = n as f64 * f64::EPSILON * a.frobenius_norm();
    if m >= 2 && m < n && d.sigma[n - m] <= roundoff {
        let rho = 1e-3 * d.sigma[n - m - 1];
        d = svd(&a.shift_diagonal(lambda0 + C64::new(rho, 0.0)))?;
    }
    let v = d.v.submatrix(0, n, n - m, n);
    let mut c = &v + &r.scale(C64::new(mix, 0.0));
    for j in 0..m {
        let col = c.column(j);
        let nrm = norm2(&col);
        if nrm == 0.0 {
            return Err(Error::InvalidArgument("kernel-aligned C has a zero column".into()));
        }
        let col: Vec<C64> = col.iter().map(|z| z / nrm).collect();
        c.set_column(j, &col);
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub max_iter: usize,
    /// Seed for the random part of `C`.
    pub seed: u64,
    pub c_strategy: CStrategy,
    /// Compare the assembled Jacobian against finite differences before iterating.
    pub fd_check: bool,
    /// Numerical nullity tolerance; `None` means `1e-2 * ||A||_F / n`.
    pub theta: Option<f64>,
    pub inverse_iteration_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iter: 50,
            seed: 42,
            c_strategy: CStrategy::default(),
            fd_check: false,
            theta: None,
            inverse_iteration_steps: DEFAULT_STEPS,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_c_strategy(mut self, strategy: CStrategy) -> Self {
        self.c_strategy = strategy;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = Some(theta);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        if let Some(t) = self.theta {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::InvalidArgument(format!("theta must be positive, got {t}")));
            }
        }
        if let CStrategy::KernelAligned { mix } = self.c_strategy {
            if !(mix >= 0.0) || !mix.is_finite() {
                return Err(Error::InvalidArgument(format!("mix must be finite and non-negative, got {mix}")));
            }
        }
        Ok(())
    }

    /// The nullity tolerance to use for `a`.
    pub fn theta_for(&self, a: &ComplexMatrix) -> f64 {
        self.theta
            .unwrap_or_else(|| 1e-2 * a.frobenius_norm() / a.rows().max(1) as f64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PseudoEigSolution {
    pub lambda_hat: C64,
    pub x_hat: ComplexMatrix,
    pub params: PencilParameters,
    /// `||g(A, lambda_hat, X_hat)||_2`
    pub residual: f64,
    /// `residual * ||X_hat^dagger||_2`
    pub backward_error: f64,
    /// Estimate of `||J^dagger||_2` at the solution; infinite if `J` is
    /// numerically singular.
    pub condition: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Residuals from the first decreasing step to the accepted iterate,
    /// strictly decreasing. Warm-up steps are not recorded.
    pub residual_history: Vec<f64>,
    pub note: Option<String>,
}

impl PseudoEigSolution {
    pub fn support(&self) -> MultiplicitySupport {
        self.params.support()
    }
}

/// Starting chain for the Gauss-Newton iteration.
#[derive(Clone, Debug)]
pub struct Staircase {
    pub x0: ComplexMatrix,
    pub s: ComplexMatrix,
    /// `||g(A, lambda0, X0)||_2`
    pub consistency_residual: f64,
}

/// Builds `x_1 = [A - lambda0 I ; C^H]^dagger (0 ; e_1)` and
/// `x_{j+1} = alpha_j [A - lambda0 I ; C^H]^dagger (x_j ; 0)` with `alpha_j`
/// normalizing each new column; `S` carries `alpha_j` on its superdiagonal.
pub fn init_staircase(a: &ComplexMatrix, lambda0: C64, c: &ComplexMatrix, m: usize, k: usize) -> Result<Staircase> {
    let n = a.rows();
    if !a.is_square() || c.rows() != n || c.cols() != m {
        return Err(Error::Dimension(format!(
            "A is {}x{}, C is {}x{}, m = {m}",
            a.rows(),
            a.cols(),
            c.rows(),
            c.cols()
        )));
    }
    if k == 0 || m == 0 {
        return Err(Error::InvalidArgument("m and k must be at least 1".into()));
    }
    let stacked = a.shift_diagonal(lambda0).vstack(&c.adjoint())?;
    let solver = LeastSquares::new(&stacked)?;

    let mut rhs = vec![ZERO; n + m];
    rhs[n] = C64::new(1.0, 0.0);
    let mut columns = vec![solver.solve(&rhs)?];
    let mut s = ComplexMatrix::zeros(k, k);
    let breakdown = f64::EPSILON * n as f64;
    if norm2(&columns[0]) < breakdown {
        return Err(Error::StaircaseBreakdown {
            column: 1,
            norm: norm2(&columns[0]),
        });
    }

    for j in 0..k - 1 {
        let mut rhs = columns[j].clone();
        rhs.resize(n + m, ZERO);
        let u = solver.solve(&rhs)?;
        let nu = norm2(&u);
        if nu < breakdown || !nu.is_finite() {
            return Err(Error::StaircaseBreakdown { column: j + 2, norm: nu });
        }
        let alpha = 1.0 / nu;
        columns.push(u.iter().map(|z| z * alpha).collect());
        s[(j, j + 1)] = C64::new(alpha, 0.0);
    }

    let x0 = ComplexMatrix::from_columns(&columns)?;
    let params = PencilParameters::new(c.clone(), s.clone())?;
    let (r1, r2) = eval_g(a, &params, lambda0, &x0)?;
    Ok(Staircase {
        x0,
        s,
        consistency_residual: residual_norm(&r1, &r2),
    })
}

/// One Gauss-Newton update and the factorization it used.
#[derive(Clone, Debug)]
pub struct GaussNewtonStep {
    pub lambda: C64,
    pub x: ComplexMatrix,
    /// Residual at the point the step started from.
    pub residual: f64,
    pub jacobian_qr: Householder,
}

/// `(lambda', X') = (lambda, X) - unpack(J^dagger g)`.
pub fn gauss_newton_step(
    a: &ComplexMatrix,
    p: &PencilParameters,
    lambda: C64,
    x: &ComplexMatrix,
) -> Result<GaussNewtonStep> {
    let (r1, r2) = eval_g(a, p, lambda, x)?;
    let residual = residual_norm(&r1, &r2);
    let jac = assemble_jacobian(a, p, lambda, x)?;
    let qr = Householder::factor(&jac)?;
    let rhs = pack_residual(&r1, &r2);
    let threshold = f64::EPSILON * jac.frobenius_norm();
    let delta = qr.solve_least_squares(&rhs).map_err(|e| match e {
        Error::NumericallySingular { pivot, .. } => Error::RankDeficientJacobian { pivot, threshold },
        other => other,
    })?;
    let (sigma, y) = unpack(&delta, x.rows(), x.cols())?;
    Ok(GaussNewtonStep {
        lambda: lambda - sigma,
        x: x - &y,
        residual,
        jacobian_qr: qr,
    })
}

/// Runs the full algorithm: choice of `C`, staircase start, Gauss-Newton.
pub fn pseudoeig(a: &ComplexMatrix, lambda0: C64, m: usize, k: usize, cfg: &SolverConfig) -> Result<PseudoEigSolution> {
    cfg.validate()?;
    if !a.is_square() {
        return Err(Error::Dimension(format!("A is {}x{}, expected square", a.rows(), a.cols())));
    }
    let n = a.rows();
    MultiplicitySupport::new(m, k, n)?;
    let c = choose_c(a, lambda0, m, cfg.seed, cfg.c_strategy)?;
    let start = init_staircase(a, lambda0, &c, m, k)?;
    let params = PencilParameters::new(c, start.s)?;
    if cfg.fd_check {
        verify_jacobian(a, &params, lambda0, &start.x0)?;
    }
    gauss_newton(a, params, lambda0, start.x0, cfg)
}

fn verify_jacobian(a: &ComplexMatrix, p: &PencilParameters, lambda: C64, x: &ComplexMatrix) -> Result<()> {
    let scale = (a.frobenius_norm() + lambda.norm() + x.frobenius_norm()).max(1.0);
    let h = 1e-7 * scale;
    let jac = assemble_jacobian(a, p, lambda, x)?;
    let fd = finite_difference_jacobian(a, p, lambda, x, h)?;
    let relative_error = (&jac - &fd).frobenius_norm() / jac.frobenius_norm().max(f64::MIN_POSITIVE);
    if relative_error > 1e-5 {
        return Err(Error::JacobianMismatch { relative_error });
    }
    Ok(())
}

/// Steps allowed to increase the residual before the first decrease.
pub const WARMUP_STEPS: usize = 10;

/// Gauss-Newton from `(lambda0, X0)` with fixed parameters.
///
/// Stops at the first residual increase (keeping the previous iterate), at
/// an exactly zero residual, or after `max_iter` updates.
/// The increase test is armed by the first residual decrease: from a far
/// starting point the first few steps may raise the residual while the
/// iterate approaches the region of quadratic convergence. If no decrease
/// happens within [`WARMUP_STEPS`] steps the initial iterate is returned
/// unconverged.
pub fn gauss_newton(
    a: &ComplexMatrix,
    params: PencilParameters,
    lambda0: C64,
    x0: ComplexMatrix,
    cfg: &SolverConfig,
) -> Result<PseudoEigSolution> {
    cfg.validate()?;

    let mut lambda = lambda0;
    let mut x = x0.clone();
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut warmup = 0;
    let mut armed = false;
    let mut initial: Option<(Householder, f64)> = None;
    let mut note = None;

    let (converged, qr, residual) = loop {
        let step = gauss_newton_step(a, &params, lambda, &x)?;
        if initial.is_none() {
            initial = Some((step.jacobian_qr.clone(), step.residual));
            history.push(step.residual);
        }
        if step.residual == 0.0 {
            if !armed {
                history = vec![step.residual];
            }
            break (true, step.jacobian_qr, step.residual);
        }
        if iterations >= cfg.max_iter {
            note = Some(format!("max_iter = {} reached", cfg.max_iter));
            break (false, step.jacobian_qr, step.residual);
        }
        let next = residual_after(a, &params, step.lambda, &step.x)?;
        if armed {
            if !(next < step.residual) {
                break (true, step.jacobian_qr, step.residual);
            }
            history.push(next);
        } else if next < step.residual {
            armed = true;
            history = vec![step.residual, next];
        } else {
            warmup += 1;
            if warmup > WARMUP_STEPS || !next.is_finite() {
                let (qr0, res0) = initial.take().expect("set on the first step");
                lambda = lambda0;
                x = x0;
                iterations = 0;
                history = vec![res0];
                note = Some("the residual never decreased; returning the initial iterate".into());
                break (false, qr0, res0);
            }
        }
        lambda = step.lambda;
        x = step.x;
        iterations += 1;
    };

    let condition = match smallest_sv_inverse_iteration(&qr.r(), cfg.inverse_iteration_steps) {
        Ok(s) if s > 0.0 => 1.0 / s,
        Ok(_) | Err(Error::NumericallySingular { .. }) => f64::INFINITY,
        Err(e) => return Err(e),
    };

    let (x, params) = fix_phase(x, params);
    let sigma_min_x = singular_values(&x).last().copied().unwrap_or(0.0);
    let backward_error = if sigma_min_x > 0.0 {
        residual / sigma_min_x
    } else {
        f64::INFINITY
    };

    Ok(PseudoEigSolution {
        lambda_hat: lambda,
        x_hat: x,
        params,
        residual,
        backward_error,
        condition,
        iterations,
        converged,
        residual_history: history,
        note,
    })
}

fn residual_after(a: &ComplexMatrix, p: &PencilParameters, lambda: C64, x: &ComplexMatrix) -> Result<f64> {
    let (r1, r2) = eval_g(a, p, lambda, x)?;
    Ok(residual_norm(&r1, &r2))
}

/// Rotates `X` (and `C` with it, so `C^H X` is unchanged) to make `X[0, 0]`
/// real and non-negative.
fn fix_phase(mut x: ComplexMatrix, mut params: PencilParameters) -> (ComplexMatrix, PencilParameters) {
    let pivot = x[(0, 0)];
    if pivot.norm() <= f64::EPSILON {
        return (x, params);
    }
    let rot = pivot.conj() / pivot.norm();
    x = x.scale(rot);
    x[(0, 0)] = C64::new(x[(0, 0)].re, 0.0);
    params.c = params.c.scale(rot);
    (x, params)
}

/// Perturbation that makes `lambda_hat` an exact eigenvalue with a Jordan
/// block of size at least `k`.
#[derive(Clone, Debug)]
pub struct BackwardCertificate {
    /// `(A - lambda_hat I) X_hat - X_hat S`
    pub e: ComplexMatrix,
    /// `E X_hat^dagger`
    pub perturbation: ComplexMatrix,
    /// `A - E X_hat^dagger`
    pub perturbed_matrix: ComplexMatrix,
    /// Frobenius norm of `perturbation`.
    pub perturbation_norm: f64,
    /// `||(M - lambda_hat I) X_hat - X_hat S||_F` for the perturbed matrix `M`.
    pub relation_residual: f64,
    pub relation_verified: bool,
    /// `sigma_min(M - lambda_hat I)`.
    pub eigen_residual: f64,
    /// Kernel dimensions of `(M - lambda_hat I)^j` for `j = 1..k`; empty when
    /// `n` exceeds [`JORDAN_CHECK_MAX_N`].
    pub kernel_dimensions: Vec<usize>,
    pub jordan_block_verified: bool,
}

pub fn certify(a: &ComplexMatrix, sol: &PseudoEigSolution) -> Result<BackwardCertificate> {
    let n = a.rows();
    let k = sol.params.k();
    let x = &sol.x_hat;
    let sigma_min = singular_values(x).last().copied().unwrap_or(0.0);
    if sigma_min < f64::EPSILON * n as f64 {
        return Err(Error::RankDeficientX { sigma_min });
    }
    let lambda = sol.lambda_hat;
    let e = &a.shift_diagonal(lambda).matmul(x)? - &x.matmul(&sol.params.s)?;
    let x_pinv = pseudoinverse_full_rank(x)?;
    let perturbation = e.matmul(&x_pinv)?;
    let perturbed = a - &perturbation;
    let shifted = perturbed.shift_diagonal(lambda);

    let relation = &shifted.matmul(x)? - &x.matmul(&sol.params.s)?;
    let relation_residual = relation.frobenius_norm();
    let relation_verified = relation_residual <= 1e-12 * a.frobenius_norm();
    let eigen_residual = singular_values(&shifted).last().copied().unwrap_or(0.0);

    let kernel_dimensions = if n <= JORDAN_CHECK_MAX_N {
        power_kernel_dimensions(&shifted, k)
    } else {
        Vec::new()
    };
    let staircase_ok = !kernel_dimensions.is_empty()
        && kernel_dimensions[0] > 0
        && kernel_dimensions.windows(2).all(|w| w[1] > w[0]);

    Ok(BackwardCertificate {
        perturbation_norm: perturbation.frobenius_norm(),
        e,
        perturbation,
        perturbed_matrix: perturbed,
        relation_residual,
        relation_verified,
        eigen_residual,
        kernel_dimensions,
        jordan_block_verified: relation_verified && staircase_ok,
    })
}

/// `dim K(N^j)` for `j = 1..=k`, where singular values of the computed power
/// at or below `100 n eps ||N||_2 ||N^{j-1}||_2` count as zero (the rounding
/// level of forming `N^j = N N^{j-1}`).
pub fn power_kernel_dimensions(nmat: &ComplexMatrix, k: usize) -> Vec<usize> {
    let n = nmat.rows();
    let n_norm = crate::linalg::norm2(nmat);
    let mut prev = ComplexMatrix::identity(n);
    let mut prev_norm = 1.0;
    let mut dims = Vec::with_capacity(k);
    for _ in 0..k {
        let power = nmat * &prev;
        let tol = 100.0 * n as f64 * f64::EPSILON * n_norm * prev_norm;
        dims.push(nullity_below(&power, tol));
        prev_norm = crate::linalg::norm2(&power);
        prev = power;
    }
    dims
}
