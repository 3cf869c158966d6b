//! JSON reports. Complex numbers are `{"re": .., "im": ..}`, matrices are
//! row-major nested arrays of those, and non-finite reals become `null`.

use pseudoeig::{AnchorDiagnostics, BackwardCertificate, ComplexMatrix, PseudoEigSolution, C64};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for JsonComplex {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<JsonComplex> for C64 {
    fn from(z: JsonComplex) -> Self {
        C64::new(z.re, z.im)
    }
}

pub type JsonMatrix = Vec<Vec<JsonComplex>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|&z| z.into()).collect())
        .collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> Option<ComplexMatrix> {
    let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|&z| z.into()).collect()).collect();
    ComplexMatrix::from_rows(&rows).ok()
}

/// `None` for infinities and NaN, which JSON cannot carry.
pub fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub source: String,
    pub rows: usize,
    pub cols: usize,
    /// SHA-256 of the input file bytes, hex encoded.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sha256: Option<String>,
    pub lambda0: JsonComplex,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    pub seed: u64,
    pub theta: f64,
    pub c_choice: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub lambda_hat: JsonComplex,
    pub residual: f64,
    pub backward_error: Option<f64>,
    pub condition: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub residual_history: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
    #[serde(rename = "X")]
    pub x: JsonMatrix,
    #[serde(rename = "S")]
    pub s: JsonMatrix,
    #[serde(rename = "C")]
    pub c: JsonMatrix,
}

impl From<&PseudoEigSolution> for SolutionReport {
    fn from(sol: &PseudoEigSolution) -> Self {
        Self {
            lambda_hat: sol.lambda_hat.into(),
            residual: sol.residual,
            backward_error: finite(sol.backward_error),
            condition: finite(sol.condition),
            iterations: sol.iterations,
            converged: sol.converged,
            residual_history: sol.residual_history.clone(),
            note: sol.note.clone(),
            x: matrix_to_json(&sol.x_hat),
            s: matrix_to_json(&sol.params.s),
            c: matrix_to_json(&sol.params.c),
        }
    }
}

/// Short form of a solution, used for the pass before orthonormalization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionSummary {
    pub lambda_hat: JsonComplex,
    pub residual: f64,
    pub backward_error: Option<f64>,
    pub condition: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl From<&PseudoEigSolution> for SolutionSummary {
    fn from(sol: &PseudoEigSolution) -> Self {
        Self {
            lambda_hat: sol.lambda_hat.into(),
            residual: sol.residual,
            backward_error: finite(sol.backward_error),
            condition: finite(sol.condition),
            iterations: sol.iterations,
            converged: sol.converged,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub perturbation_norm: f64,
    pub relation_residual: f64,
    pub relation_verified: bool,
    pub eigen_residual: f64,
    pub kernel_dimensions: Vec<usize>,
    pub jordan_block_verified: bool,
}

impl From<&BackwardCertificate> for CertificateSummary {
    fn from(c: &BackwardCertificate) -> Self {
        Self {
            perturbation_norm: c.perturbation_norm,
            relation_residual: c.relation_residual,
            relation_verified: c.relation_verified,
            eigen_residual: c.eigen_residual,
            kernel_dimensions: c.kernel_dimensions.clone(),
            jordan_block_verified: c.jordan_block_verified,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRow {
    pub k: usize,
    pub lambda: Option<JsonComplex>,
    pub condition: Option<f64>,
    pub residual: Option<f64>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub m: usize,
    pub k_accepted: Option<usize>,
    pub cond_threshold: f64,
    pub resid_floor: f64,
    pub jump_factor: f64,
    pub rows: Vec<DiagnosticsRow>,
}

impl Diagnostics {
    pub fn new(k_accepted: Option<usize>, d: &AnchorDiagnostics) -> Self {
        Self {
            m: d.m,
            k_accepted,
            cond_threshold: d.thresholds.cond_threshold,
            resid_floor: d.thresholds.resid_floor,
            jump_factor: d.thresholds.jump_factor,
            rows: d
                .rows
                .iter()
                .map(|r| DiagnosticsRow {
                    k: r.k,
                    lambda: r.lambda.map(Into::into),
                    condition: r.condition.and_then(finite),
                    residual: r.residual,
                    verdict: r.verdict.as_str().to_string(),
                    error: r.error.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
}

/// Output of `solve`, `refine` and `identify`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub input: Option<InputDigest>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub solution: Option<SolutionReport>,
    /// The first Gauss-Newton pass when the reported solution was refined.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unrefined: Option<SolutionSummary>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<CertificateSummary>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub diagnostics: Option<Diagnostics>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<ErrorReport>,
}

impl SolveReport {
    pub fn from_error(kind: &str, message: impl Into<String>) -> Self {
        Self {
            error: Some(ErrorReport {
                kind: kind.to_string(),
                message: message.into(),
            }),
            ..Self::default()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report types serialize")
    }
}
