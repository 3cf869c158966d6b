//! Orthonormalization of a converged chain followed by a second Gauss-Newton
//! pass. With orthonormal columns `||X^dagger||_2 = 1`, so the reported
//! backward error equals the residual.

use crate::error::{Error, Result};
use crate::linalg::{singular_values, solve_upper_adjoint, thin_qr, QrFactors};
use crate::mapping::PencilParameters;
use crate::matrix::{norm2, ComplexMatrix, C64, ZERO};
use crate::solver::{gauss_newton, PseudoEigSolution, SolverConfig};

/// Transformed parameters and starting point for the second pass.
#[derive(Clone, Debug)]
pub struct Orthonormalized {
    pub params: PencilParameters,
    pub lambda0: C64,
    /// `Q` with orthonormal columns.
    pub x0: ComplexMatrix,
    /// 2-norm condition number of the triangular factor `R` of the projected `X`.
    pub r_condition: f64,
}

pub fn orthonormalize(sol: &PseudoEigSolution) -> Result<Orthonormalized> {
    let n = sol.x_hat.rows();
    let k = sol.x_hat.cols();
    let mut x = sol.x_hat.clone();
    let mut s = sol.params.s.clone();
    let mut c = sol.params.c.clone();

    // Normalize x_1 so its largest entry is real positive; row 1 of S absorbs the scalar.
    let x1 = x.column(0);
    let nx1 = norm2(&x1);
    if nx1 < f64::EPSILON * k as f64 {
        return Err(Error::RankDeficientX { sigma_min: nx1 });
    }
    let big = x1
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(ZERO);
    let beta = big / big.norm() * nx1;
    let x1: Vec<C64> = x1.iter().map(|z| z / beta).collect();
    x.set_column(0, &x1);
    for j in 0..k {
        s[(0, j)] *= beta;
    }
    c.set_column(0, &x1);

    // Project x_2..x_k against x_1 and compensate in row 1 of S.
    if k > 1 {
        let h: Vec<C64> = (1..k)
            .map(|j| (0..n).map(|i| x1[i].conj() * x[(i, j)]).sum())
            .collect();
        for (jj, hj) in h.iter().enumerate() {
            for i in 0..n {
                let v = x[(i, jj + 1)] - x1[i] * hj;
                x[(i, jj + 1)] = v;
            }
        }
        for j in 1..k {
            let add: C64 = (1..k).map(|l| h[l - 1] * s[(l, j)]).sum();
            s[(0, j)] += add;
        }
    }

    let QrFactors { mut q, mut r } = thin_qr(&x)?;
    // Make diag(R) real positive so the first column of Q is x_1 itself.
    for i in 0..k {
        let d = r[(i, i)];
        if d.norm() < f64::EPSILON * k as f64 {
            return Err(Error::RankDeficientX { sigma_min: d.norm() });
        }
        let ph = d / d.norm();
        for j in 0..k {
            r[(i, j)] /= ph;
        }
        for row in 0..n {
            q[(row, i)] *= ph;
        }
    }

    // S <- R S R^{-1}, row by row from R^H y = (R S)^H.
    let rs = &r * &s;
    let mut s_new = ComplexMatrix::zeros(k, k);
    for i in 0..k {
        let b: Vec<C64> = (0..k).map(|j| rs[(i, j)].conj()).collect();
        let y = solve_upper_adjoint(&r, &b)?;
        for j in i + 1..k {
            s_new[(i, j)] = y[j].conj();
        }
    }

    let sv = singular_values(&r);
    let r_condition = sv[0] / sv[k - 1];
    Ok(Orthonormalized {
        params: PencilParameters::new(c, s_new)?,
        lambda0: sol.lambda_hat,
        x0: q,
        r_condition,
    })
}

/// Orthonormalizes and reruns Gauss-Newton from `(lambda_hat, Q)`.
pub fn refine(a: &ComplexMatrix, sol: &PseudoEigSolution, cfg: &SolverConfig) -> Result<PseudoEigSolution> {
    let o = orthonormalize(sol)?;
    gauss_newton(a, o.params, o.lambda0, o.x0, cfg)
}
