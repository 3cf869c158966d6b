//! Householder QR for tall complex matrices.

use crate::error::{Error, Result};
use crate::matrix::{norm2, ComplexMatrix, C64, ONE, ZERO};

/// Thin QR factors `M = Q R` with `Q` having orthonormal columns and `R`
/// upper triangular with a non-negative real diagonal.
#[derive(Clone, Debug)]
pub struct QrFactors {
    pub q: ComplexMatrix,
    pub r: ComplexMatrix,
}

/// Compact Householder factorization. Reflectors are kept so that `Q^H b`
/// can be applied without forming `Q`.
#[derive(Clone, Debug)]
pub struct Householder {
    rows: usize,
    cols: usize,
    /// Reflector vectors `v_j` (length `rows - j`), with `H_j = I - tau_j v_j v_j^H`.
    reflectors: Vec<Vec<C64>>,
    taus: Vec<C64>,
    /// Upper-triangular factor before the diagonal phase fix.
    r: ComplexMatrix,
    /// Unit phases `d_j` with `R_final = diag(d) * r`, making the diagonal real non-negative.
    phases: Vec<C64>,
}

impl Householder {
    pub fn factor(m: &ComplexMatrix) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows < cols {
            return Err(Error::Dimension(format!(
                "QR requires rows >= cols, got {rows}x{cols}"
            )));
        }
        // Column-major working copy keeps the reflector updates contiguous.
        let mut work: Vec<Vec<C64>> = m.columns();
        let mut reflectors = Vec::with_capacity(cols);
        let mut taus = Vec::with_capacity(cols);

        for j in 0..cols {
            let x = &work[j][j..];
            let alpha = x[0];
            let xnorm = norm2(x);
            let (v, tau, beta) = if xnorm == 0.0 {
                (vec![ZERO; rows - j], ZERO, ZERO)
            } else {
                // beta = -e^{i arg(alpha)} ||x||, v = x - beta e_1, tau = 2 / (v^H v).
                let phase = if alpha.norm() == 0.0 { ONE } else { alpha / alpha.norm() };
                let beta = -phase * xnorm;
                let mut v = x.to_vec();
                v[0] -= beta;
                let vnorm = norm2(&v);
                let tau = C64::new(2.0 / (vnorm * vnorm), 0.0);
                (v, tau, beta)
            };
            work[j][j] = beta;
            for w in work[j][j + 1..].iter_mut() {
                *w = ZERO;
            }
            if tau != ZERO {
                for col in work.iter_mut().skip(j + 1) {
                    apply_reflector(&v, tau, &mut col[j..]);
                }
            }
            reflectors.push(v);
            taus.push(tau);
        }

        let r = ComplexMatrix::from_fn(cols, cols, |i, j| if i <= j { work[j][i] } else { ZERO });
        let phases = (0..cols)
            .map(|i| {
                let d = r[(i, i)];
                if d.norm() == 0.0 {
                    ONE
                } else {
                    d.conj() / d.norm()
                }
            })
            .collect();
        Ok(Self {
            rows,
            cols,
            reflectors,
            taus,
            r,
            phases,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `R` with non-negative real diagonal.
    pub fn r(&self) -> ComplexMatrix {
        let mut r = self.r.clone();
        for i in 0..self.cols {
            for j in i..self.cols {
                r[(i, j)] *= self.phases[i];
            }
            r[(i, i)] = C64::new(r[(i, i)].re, 0.0);
        }
        r
    }

    /// Full product `Q^H b` (length `rows`); the first `cols` entries pair with `R`.
    pub fn apply_qh(&self, b: &[C64]) -> Result<Vec<C64>> {
        if b.len() != self.rows {
            return Err(Error::LengthMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut y = b.to_vec();
        for (j, (v, &tau)) in self.reflectors.iter().zip(&self.taus).enumerate() {
            if tau != ZERO {
                apply_reflector(v, tau, &mut y[j..]);
            }
        }
        for (yi, d) in y.iter_mut().zip(&self.phases) {
            *yi *= d;
        }
        Ok(y)
    }

    /// Thin `Q` (rows x cols).
    pub fn q(&self) -> ComplexMatrix {
        let mut q = ComplexMatrix::zeros(self.rows, self.cols);
        for j in 0..self.cols {
            let mut e = vec![ZERO; self.rows];
            // Q e_j = H_0 ... H_{n-1} (conj(d_j) e_j)
            e[j] = self.phases[j].conj();
            for jj in (0..self.cols).rev() {
                if self.taus[jj] != ZERO {
                    apply_reflector(&self.reflectors[jj], self.taus[jj], &mut e[jj..]);
                }
            }
            q.set_column(j, &e);
        }
        q
    }

    pub fn factors(&self) -> QrFactors {
        QrFactors {
            q: self.q(),
            r: self.r(),
        }
    }

    /// Least-squares solution of `M x = b` for full column rank `M`.
    pub fn solve_least_squares(&self, b: &[C64]) -> Result<Vec<C64>> {
        let y = self.apply_qh(b)?;
        solve_upper(&self.r(), &y[..self.cols])
    }
}

/// Applies `I - tau v v^H` to `x` in place.
fn apply_reflector(v: &[C64], tau: C64, x: &mut [C64]) {
    let s: C64 = v.iter().zip(x.iter()).map(|(a, b)| a.conj() * b).sum();
    let s = s * tau;
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= s * vi;
    }
}

pub fn thin_qr(m: &ComplexMatrix) -> Result<QrFactors> {
    Ok(Householder::factor(m)?.factors())
}

/// Back substitution with an upper-triangular `R`.
///
/// Fails with `NumericallySingular` when a pivot falls below `eps * ||R||_F`.
pub fn solve_upper(r: &ComplexMatrix, b: &[C64]) -> Result<Vec<C64>> {
    let n = r.cols();
    if b.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let tol = f64::EPSILON * r.frobenius_norm();
    let mut x = b.to_vec();
    for i in (0..n).rev() {
        let pivot = r[(i, i)];
        if pivot.norm() <= tol {
            return Err(Error::NumericallySingular {
                index: i,
                pivot: pivot.norm(),
            });
        }
        let mut s = x[i];
        for j in i + 1..n {
            s -= r[(i, j)] * x[j];
        }
        x[i] = s / pivot;
    }
    Ok(x)
}

/// Solves `R^H x = b` (forward substitution) for upper-triangular `R`.
pub fn solve_upper_adjoint(r: &ComplexMatrix, b: &[C64]) -> Result<Vec<C64>> {
    let n = r.cols();
    if b.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let tol = f64::EPSILON * r.frobenius_norm();
    let mut x = b.to_vec();
    for i in 0..n {
        let pivot = r[(i, i)].conj();
        if pivot.norm() <= tol {
            return Err(Error::NumericallySingular {
                index: i,
                pivot: pivot.norm(),
            });
        }
        let mut s = x[i];
        for j in 0..i {
            s -= r[(j, i)].conj() * x[j];
        }
        x[i] = s / pivot;
    }
    Ok(x)
}
