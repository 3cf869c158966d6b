//! Multiplicity support identification.
//!
//! The geometric multiplicity is the numerical nullity of `A - lambda0 I`.
//! The Segre anchor is found by solving for `k = 1, 2, ...`: while `k` is too
//! small the Jacobian is (nearly) rank deficient and the condition estimate
//! is huge, and once `k` is too large no nearby matrix has the structure so
//! the residual jumps. The accepted `k` sits in between.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::singular_values;
use crate::matrix::{ComplexMatrix, C64};
use crate::solver::{pseudoeig, SolverConfig};

/// `max { j : sigma_{n-j+1}(A - lambda0 I) < theta }`.
pub fn numerical_nullity(a: &ComplexMatrix, lambda0: C64, theta: f64) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("A is {}x{}, expected square", a.rows(), a.cols())));
    }
    if !(theta > 0.0) {
        return Err(Error::InvalidArgument(format!("theta must be positive, got {theta}")));
    }
    Ok(singular_values(&a.shift_diagonal(lambda0))
        .iter()
        .filter(|&&s| s < theta)
        .count())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnchorThresholds {
    /// Condition estimates above this mark `k` as underestimated.
    pub cond_threshold: f64,
    /// Residuals at or below this count as zero.
    pub resid_floor: f64,
    /// A residual growth by more than this factor from one `k` to the next
    /// marks `k` as overestimated.
    pub jump_factor: f64,
}

impl AnchorThresholds {
    pub fn for_matrix(a: &ComplexMatrix) -> Self {
        Self {
            cond_threshold: 1e5,
            resid_floor: 1e3 * f64::EPSILON * a.frobenius_norm(),
            jump_factor: 1e6,
        }
    }

    pub fn with_resid_floor(mut self, floor: f64) -> Self {
        self.resid_floor = floor;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Underestimated,
    Accepted,
    Overestimated,
    Failed,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Underestimated => "underestimated",
            Verdict::Accepted => "accepted",
            Verdict::Overestimated => "overestimated",
            Verdict::Failed => "failed",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One solve of the sweep. The numeric fields are `None` for failed rows.
#[derive(Clone, Debug, PartialEq)]
pub struct AnchorRow {
    pub k: usize,
    pub lambda: Option<C64>,
    pub condition: Option<f64>,
    pub residual: Option<f64>,
    pub verdict: Verdict,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnchorDiagnostics {
    pub m: usize,
    pub rows: Vec<AnchorRow>,
    pub thresholds: AnchorThresholds,
}

impl AnchorDiagnostics {
    pub fn accepted(&self) -> Option<&AnchorRow> {
        self.rows.iter().find(|r| r.verdict == Verdict::Accepted)
    }

    pub fn row(&self, k: usize) -> Option<&AnchorRow> {
        self.rows.iter().find(|r| r.k == k)
    }
}

/// Sweeps `k = 1..=k_max` with the default thresholds.
pub fn anchor_search(
    a: &ComplexMatrix,
    lambda0: C64,
    m: usize,
    k_max: usize,
    cfg: &SolverConfig,
) -> Result<(Option<usize>, AnchorDiagnostics)> {
    anchor_search_with(a, lambda0, m, k_max, cfg, &AnchorThresholds::for_matrix(a))
}

pub fn anchor_search_with(
    a: &ComplexMatrix,
    lambda0: C64,
    m: usize,
    k_max: usize,
    cfg: &SolverConfig,
    thresholds: &AnchorThresholds,
) -> Result<(Option<usize>, AnchorDiagnostics)> {
    if m == 0 || k_max == 0 {
        return Err(Error::InvalidArgument(format!("need m >= 1 and k_max >= 1, got m = {m}, k_max = {k_max}")));
    }
    cfg.validate()?;

    let mut rows: Vec<AnchorRow> = (1..=k_max)
        .map(|k| match pseudoeig(a, lambda0, m, k, cfg) {
            Ok(sol) => AnchorRow {
                k,
                lambda: Some(sol.lambda_hat),
                condition: Some(sol.condition),
                residual: Some(sol.residual),
                verdict: Verdict::Failed,
                error: None,
            },
            Err(e) => AnchorRow {
                k,
                lambda: None,
                condition: None,
                residual: None,
                verdict: Verdict::Failed,
                error: Some(e.to_string()),
            },
        })
        .collect();

    // First pass: per-row verdicts, with `Accepted` meaning "candidate".
    let mut previous: Option<f64> = None;
    for row in rows.iter_mut() {
        let (Some(res), Some(cond)) = (row.residual, row.condition) else {
            previous = None;
            continue;
        };
        let ill = !(cond <= thresholds.cond_threshold);
        row.verdict = if res <= thresholds.resid_floor {
            if ill {
                Verdict::Underestimated
            } else {
                Verdict::Accepted
            }
        } else if previous.is_some_and(|p| res > thresholds.jump_factor * p) {
            Verdict::Overestimated
        } else if ill {
            Verdict::Underestimated
        } else {
            Verdict::Overestimated
        };
        previous = Some(res);
    }

    // Keep the largest candidate before the first overestimated row.
    let cutoff = rows
        .iter()
        .position(|r| r.verdict == Verdict::Overestimated)
        .unwrap_or(rows.len());
    let accepted = rows[..cutoff]
        .iter()
        .rposition(|r| r.verdict == Verdict::Accepted);
    for (i, row) in rows.iter_mut().enumerate() {
        if row.verdict == Verdict::Accepted && Some(i) != accepted {
            row.verdict = if i < cutoff {
                Verdict::Underestimated
            } else {
                Verdict::Overestimated
            };
        }
    }

    let k_accepted = accepted.map(|i| rows[i].k);
    Ok((
        k_accepted,
        AnchorDiagnostics {
            m,
            rows,
            thresholds: *thresholds,
        },
    ))
}
