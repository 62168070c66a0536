//! JSON views of core results and the plain-text check summary.

use std::fmt::Write as _;

use qpt_core::{ConstraintReport, FitResult, FitStatus, LeakageDiagnosis};
use serde::{Deserialize, Serialize};

use crate::document::{Kind, MatrixDocument};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TpResidualsJson {
    pub trace: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Flags {
    pub tp_satisfied: bool,
    pub general_satisfied: bool,
    pub psd: bool,
    pub hermitian: bool,
    pub physical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub trace_chi: f64,
    pub f_value: f64,
    pub p_matrix: MatrixDocument,
    pub p_eigenvalues: [f64; 2],
    pub tp_residuals: TpResidualsJson,
    /// `[Tr χ + F, Tr χ - F]`.
    pub general_lhs: [f64; 2],
    pub chi_eigenvalues: [f64; 4],
    pub negative_eigenvalues: Vec<f64>,
    pub flags: Flags,
    pub tol: f64,
}

impl ReportJson {
    pub fn new(r: &ConstraintReport) -> Self {
        ReportJson {
            trace_chi: r.trace_chi,
            f_value: r.f_value,
            p_matrix: MatrixDocument::from_matrix(Kind::Hermitian, r.p_matrix.matrix()),
            p_eigenvalues: r.p_eigenvalues,
            tp_residuals: TpResidualsJson {
                trace: r.tp_residuals.trace,
                r1: r.tp_residuals.r1,
                r2: r.tp_residuals.r2,
                r3: r.tp_residuals.r3,
            },
            general_lhs: [r.general.upper, r.general.lower],
            chi_eigenvalues: r.chi_eigenvalues,
            negative_eigenvalues: r.chi_eigenvalues.iter().copied().filter(|&e| e < -r.tol).collect(),
            flags: Flags {
                tp_satisfied: r.tp_satisfied,
                general_satisfied: r.general_satisfied,
                psd: r.psd,
                hermitian: r.hermitian,
                physical: r.physical(),
            },
            tol: r.tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatusJson {
    Converged,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitJson {
    pub chi_fit: MatrixDocument,
    pub objective: f64,
    pub iterations: usize,
    pub status: StatusJson,
    pub symmetrized_input: bool,
    pub report: ReportJson,
}

impl FitJson {
    pub fn new(r: &FitResult, chi_fit: MatrixDocument) -> Self {
        FitJson {
            chi_fit,
            objective: r.objective,
            iterations: r.iterations,
            status: match r.status {
                FitStatus::Converged => StatusJson::Converged,
                FitStatus::MaxIterations => StatusJson::MaxIterations,
            },
            symmetrized_input: r.symmetrized_input,
            report: ReportJson::new(&r.report),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosisJson {
    pub classification: String,
    pub p_est: f64,
    pub epsilon_est: f64,
    pub axis_est: Option<[f64; 3]>,
}

impl From<&LeakageDiagnosis> for DiagnosisJson {
    fn from(d: &LeakageDiagnosis) -> Self {
        DiagnosisJson {
            classification: d.classification.as_str().to_owned(),
            p_est: d.p_est,
            epsilon_est: d.epsilon_est,
            axis_est: d.axis_est,
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "VIOLATED"
    }
}

/// Human-readable constraint summary.
pub fn text_summary(r: &ConstraintReport) -> String {
    let t = &r.tp_residuals;
    let tp_ok = |x: f64| verdict(x.abs() <= r.tol);
    let mut s = String::new();
    let _ = writeln!(s, "Tr(chi) = {:.6}   F = {:.6}   tol = {:e}", r.trace_chi, r.f_value, r.tol);
    let _ = writeln!(s, "trace-preserving residuals:");
    let _ = writeln!(s, "  Tr(chi) - 1             {:>+12.6e}  {}", t.trace, tp_ok(t.trace));
    let _ = writeln!(s, "  Im chi34 + Re chi12     {:>+12.6e}  {}", t.r1, tp_ok(t.r1));
    let _ = writeln!(s, "  Im chi24 - Re chi13     {:>+12.6e}  {}", t.r2, tp_ok(t.r2));
    let _ = writeln!(s, "  Im chi23 + Re chi14     {:>+12.6e}  {}", t.r3, tp_ok(t.r3));
    let _ = writeln!(s, "general bounds:");
    let _ = writeln!(s, "  Tr(chi) + F <= 1        {:>12.6}  {}", r.general.upper, verdict(r.general.upper_ok));
    let _ = writeln!(s, "  Tr(chi) - F >= 0        {:>12.6}  {}", r.general.lower, verdict(r.general.lower_ok));
    let eig: Vec<String> = r.chi_eigenvalues.iter().map(|e| format!("{e:.6}")).collect();
    let _ = writeln!(s, "chi eigenvalues: [{}]", eig.join(", "));
    let negatives = r.chi_eigenvalues.iter().filter(|&&e| e < -r.tol).count();
    let above_one = r.chi_eigenvalues.iter().filter(|&&e| e > 1.0 + r.tol).count();
    let _ = writeln!(s, "  negative: {negatives}   greater than one: {above_one}");
    let _ = writeln!(s, "positive semidefinite: {}   hermitian: {}   physical: {}", r.psd, r.hermitian, r.physical());
    s
}
