//! The P matrix, `F`, the trace-preserving identities, the general bounds
//! `Tr(χ) + F ≤ 1` and `Tr(χ) - F ≥ 0`, and a leakage-pattern classifier.
//!
//! With σ₁..σ₄ = I, σx, σy, σz the P matrix of any Hermitian χ has the form
//!
//! ```text
//! P = Σ χ_mn σ_n σ_m = Tr(χ) I + 2 (r1, -r2, r3) · σ
//! r1 = Im χ₃₄ + Re χ₁₂,  r2 = Im χ₂₄ - Re χ₁₃,  r3 = Im χ₂₃ + Re χ₁₄
//! ```
//!
//! so its eigenvalues are `Tr(χ) ± F` with `F = 2 ‖(r1, r2, r3)‖`, and the
//! process is trace preserving exactly when `Tr(χ) = 1` and `r1 = r2 = r3 = 0`.

use libm::sqrt;

use crate::channels::{leakage_family_matrix, ProcessMatrix};
use crate::linalg::{Hermitian, HermitianOperator2, Matrix, C64, PAULI};

/// `(Tr(χ) - 1, r1, r2, r3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TpResiduals {
    pub trace: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl TpResiduals {
    pub fn as_array(&self) -> [f64; 4] {
        [self.trace, self.r1, self.r2, self.r3]
    }

    pub fn max_abs(&self) -> f64 {
        self.as_array().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Bloch-vector part of P, halved: `(r1, -r2, r3)`.
    pub fn p_axis(&self) -> [f64; 3] {
        [self.r1, -self.r2, self.r3]
    }
}

/// `Tr(χ) + F` and `Tr(χ) - F` with their pass flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralConstraints {
    pub upper: f64,
    pub lower: f64,
    pub upper_ok: bool,
    pub lower_ok: bool,
}

impl GeneralConstraints {
    pub fn satisfied(&self) -> bool {
        self.upper_ok && self.lower_ok
    }
}

pub(crate) fn p_matrix_raw(chi: &Matrix<4>) -> Matrix<2> {
    let mut p = Matrix::<2>::zeros();
    for m in 0..4 {
        for n in 0..4 {
            let c = chi.0[m][n];
            if c != C64::new(0.0, 0.0) {
                p = p + (PAULI[n] * PAULI[m]).scale_complex(c);
            }
        }
    }
    p
}

/// Adjoint of `χ ↦ P(χ)` under the Frobenius inner product:
/// `P*(Q)_mn = Tr(σ_m σ_n Q)`. `P(P*(Q)) = 8 Q` for every Q.
pub(crate) fn p_adjoint(q: &Matrix<2>) -> Matrix<4> {
    let mut out = Matrix::<4>::zeros();
    for m in 0..4 {
        for n in 0..4 {
            out.0[m][n] = (PAULI[m] * PAULI[n] * *q).trace();
        }
    }
    out
}

pub(crate) fn tp_residuals_raw(chi: &Matrix<4>) -> TpResiduals {
    let c = &chi.0;
    TpResiduals {
        trace: chi.trace().re - 1.0,
        r1: c[2][3].im + c[0][1].re,
        r2: c[1][3].im - c[0][2].re,
        r3: c[1][2].im + c[0][3].re,
    }
}

pub(crate) fn f_value_raw(chi: &Matrix<4>) -> f64 {
    let r = tp_residuals_raw(chi);
    2.0 * sqrt(r.r1 * r.r1 + r.r2 * r.r2 + r.r3 * r.r3)
}

pub(crate) fn general_values_raw(chi: &Matrix<4>) -> GeneralConstraints {
    general_values_with_tol(chi, 0.0)
}

fn general_values_with_tol(chi: &Matrix<4>, tol: f64) -> GeneralConstraints {
    let tr = chi.trace().re;
    let f = f_value_raw(chi);
    let (upper, lower) = (tr + f, tr - f);
    GeneralConstraints { upper, lower, upper_ok: upper <= 1.0 + tol, lower_ok: lower >= -tol }
}

/// `P = Σ_mn χ_mn σ_n† σ_m`.
pub fn p_matrix(chi: &ProcessMatrix) -> HermitianOperator2 {
    Hermitian::symmetrize(p_matrix_raw(chi.matrix()))
}

pub fn f_value(chi: &ProcessMatrix) -> f64 {
    f_value_raw(chi.matrix())
}

pub fn tp_residuals(chi: &ProcessMatrix) -> TpResiduals {
    tp_residuals_raw(chi.matrix())
}

pub fn general_constraint_values(chi: &ProcessMatrix, tol: f64) -> GeneralConstraints {
    general_values_with_tol(chi.matrix(), tol)
}

/// Every constraint quantity for one candidate χ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintReport {
    pub trace_chi: f64,
    pub f_value: f64,
    pub p_matrix: HermitianOperator2,
    pub p_eigenvalues: [f64; 2],
    pub tp_residuals: TpResiduals,
    pub general: GeneralConstraints,
    pub chi_eigenvalues: [f64; 4],
    pub tp_satisfied: bool,
    pub general_satisfied: bool,
    pub psd: bool,
    /// Input was conjugate-symmetric to 1e-9. When false the other fields
    /// describe `(χ + χ†)/2`.
    pub hermitian: bool,
    pub tol: f64,
}

impl ConstraintReport {
    /// PSD and both general bounds hold.
    pub fn physical(&self) -> bool {
        self.psd && self.general_satisfied
    }
}

const REPORT_HERMITIAN_TOL: f64 = 1e-9;

pub fn constraint_report(chi: &Matrix<4>, tol: f64) -> ConstraintReport {
    let hermitian = chi.hermitian_deviation() <= REPORT_HERMITIAN_TOL;
    let h = Hermitian::symmetrize(*chi);
    let m = h.matrix();
    let p = Hermitian::symmetrize(p_matrix_raw(m));
    let residuals = tp_residuals_raw(m);
    let general = general_values_with_tol(m, tol);
    let chi_eigenvalues = h.eigenvalues();
    ConstraintReport {
        trace_chi: h.trace(),
        f_value: f_value_raw(m),
        p_matrix: p,
        p_eigenvalues: p.eigenvalues(),
        tp_residuals: residuals,
        general,
        chi_eigenvalues,
        tp_satisfied: residuals.max_abs() <= tol,
        general_satisfied: general.satisfied(),
        psd: chi_eigenvalues[0] >= -tol,
        hermitian,
        tol,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LeakageClass {
    TracePreserving,
    /// Loss of the state `-n` only (`ε = 0`).
    AxisLeakage,
    /// Loss from both `±n` states (`ε > 0`).
    ExtendedLeakage,
    /// Not trace preserving, but not a member of the loss-model family.
    Unclassified,
}

impl LeakageClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            LeakageClass::TracePreserving => "trace_preserving",
            LeakageClass::AxisLeakage => "axis_leakage",
            LeakageClass::ExtendedLeakage => "extended_leakage",
            LeakageClass::Unclassified => "unclassified",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageDiagnosis {
    pub classification: LeakageClass,
    pub p_est: f64,
    pub epsilon_est: f64,
    pub axis_est: Option<[f64; 3]>,
}

/// Reads `(p, ε, n)` of the loss model off the violation pattern.
///
/// `p = 2(1 - Tr χ)`, `ε = 1 - (Tr χ + F)` clamped at zero, and `n` is the
/// direction of `(r1, -r2, r3)`. The estimate is accepted only when the
/// model rebuilt from it reproduces χ to within `tol` (max entry); inputs
/// with a singular P (some state fully absorbed, as for a polarizer) are
/// reported as unclassified.
pub fn diagnose_leakage(chi: &ProcessMatrix, tol: f64) -> LeakageDiagnosis {
    let m = chi.matrix();
    let r = tp_residuals_raw(m);
    if r.max_abs() <= tol {
        return LeakageDiagnosis {
            classification: LeakageClass::TracePreserving,
            p_est: 0.0,
            epsilon_est: 0.0,
            axis_est: None,
        };
    }

    let tr = m.trace().re;
    let f = f_value_raw(m);
    let p_est = 2.0 * (1.0 - tr);
    let epsilon_est = (1.0 - (tr + f)).max(0.0);
    let v = r.p_axis();
    let v_norm = sqrt(v.iter().map(|x| x * x).sum());
    let axis_est = (v_norm > tol).then(|| v.map(|x| x / v_norm));

    let unclassified = LeakageDiagnosis { classification: LeakageClass::Unclassified, p_est, epsilon_est, axis_est };

    if tr - f <= tol || !(-tol..=1.0 + tol).contains(&p_est) || epsilon_est > p_est / 2.0 + tol {
        return unclassified;
    }
    // ε = p/2 leaves no linear term; the axis (up to sign) sits in the
    // lower 3×3 block, which is (p/4) n nᵀ.
    let model_axis = match axis_est {
        Some(n) => n,
        None => match block_axis(m) {
            Some(n) => n,
            None => return unclassified,
        },
    };
    let model = leakage_family_matrix(p_est, epsilon_est, model_axis);
    if model.max_abs_diff(m) > tol {
        return unclassified;
    }

    let classification = if epsilon_est > tol {
        LeakageClass::ExtendedLeakage
    } else if axis_est.is_some() {
        LeakageClass::AxisLeakage
    } else {
        LeakageClass::Unclassified
    };
    LeakageDiagnosis { classification, ..unclassified }
}

fn block_axis(m: &Matrix<4>) -> Option<[f64; 3]> {
    let diag = [m.0[1][1].re, m.0[2][2].re, m.0[3][3].re];
    let (k, &dk) = diag.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1))?;
    if dk <= 0.0 {
        return None;
    }
    let col = [m.0[1][k + 1].re, m.0[2][k + 1].re, m.0[3][k + 1].re];
    let norm = sqrt(col.iter().map(|x| x * x).sum());
    Some(col.map(|x| x / norm))
}
