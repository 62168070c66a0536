//! Nearest physical process matrix in Frobenius norm.
//!
//! Both modes minimize `‖χ - A‖_F` over Hermitian χ ⪰ 0 intersected with a
//! second convex set defined through the P matrix:
//!
//! * trace preserving: `P(χ) = I`;
//! * general: `0 ⪯ P(χ) ⪯ I`, i.e. `Tr(χ) + F ≤ 1` and `Tr(χ) - F ≥ 0`.
//!
//! The linear map `χ ↦ P(χ)` satisfies `P P* = 8·Id`, so the Frobenius
//! projection onto `{χ : P(χ) ∈ K}` is `χ + P*(Π_K(P(χ)) - P(χ)) / 8`
//! where `Π_K` is the projection of a 2×2 Hermitian matrix onto `K`
//! (the identity, or eigenvalue clipping to `[0, 1]`). The PSD projection
//! clips the eigenvalues of χ at zero. Dykstra's alternating projections
//! between the two sets converge to the projection onto their intersection.

use alloc::vec;
use alloc::vec::Vec;

use crate::channels::ProcessMatrix;
use crate::constraints::{constraint_report, p_adjoint, p_matrix_raw, tp_residuals_raw, ConstraintReport};
use crate::error::{Error, Result};
use crate::linalg::{Hermitian, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FitMode {
    /// `P(χ) = I`.
    TracePreserving,
    /// `0 ⪯ P(χ) ⪯ I`.
    General,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Stop once successive iterates move less than this (Frobenius).
    pub convergence_tol: f64,
    /// Feasibility required of a result reported as converged.
    pub constraint_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { max_iterations: 50_000, convergence_tol: 1e-10, constraint_tol: 1e-9 }
    }
}

impl FitOptions {
    fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be positive"));
        }
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.convergence_tol) || !positive(self.constraint_tol) {
            return Err(Error::InvalidArgument("tolerances must be positive and finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FitStatus {
    Converged,
    MaxIterations,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub chi_fit: ProcessMatrix,
    /// `‖χ_fit - A‖_F` against the (symmetrized, if needed) input.
    pub objective: f64,
    pub iterations: usize,
    pub status: FitStatus,
    pub report: ConstraintReport,
    /// The input was not Hermitian to 1e-9 and `(A + A†)/2` was fitted.
    pub symmetrized_input: bool,
}

const INPUT_HERMITIAN_TOL: f64 = 1e-9;

fn prepare_input(noisy: &Matrix<4>) -> Result<(Matrix<4>, bool)> {
    if !noisy.is_finite() {
        return Err(Error::NonFinite);
    }
    let symmetrized = noisy.hermitian_deviation() > INPUT_HERMITIAN_TOL;
    Ok((noisy.symmetrized(), symmetrized))
}

fn project_psd(x: &Matrix<4>) -> Matrix<4> {
    let e = Hermitian::symmetrize(*x).eigensystem();
    e.map_spectrum(|l| l.max(0.0)).symmetrized()
}

fn project_p_set(x: &Matrix<4>, mode: FitMode) -> Matrix<4> {
    let p = p_matrix_raw(x).symmetrized();
    let target = match mode {
        FitMode::TracePreserving => Matrix::identity(),
        FitMode::General => Hermitian::symmetrize(p).eigensystem().map_spectrum(|l| l.clamp(0.0, 1.0)),
    };
    (*x + p_adjoint(&(target - p)).scale(0.125)).symmetrized()
}

/// Violation magnitudes of the mode's constraints on P(χ).
///
/// Trace preserving: the signed residuals `(Tr χ - 1, r1, r2, r3)`.
/// General: `(max(0, -λmin(χ)), max(0, -λmin(P)), max(0, λmax(P) - 1))`.
pub fn constraint_residuals(chi: &Matrix<4>, mode: FitMode) -> Vec<f64> {
    match mode {
        FitMode::TracePreserving => tp_residuals_raw(chi).as_array().to_vec(),
        FitMode::General => {
            let h = Hermitian::symmetrize(*chi);
            let p = Hermitian::symmetrize(p_matrix_raw(h.matrix())).eigenvalues();
            vec![(-h.min_eigenvalue()).max(0.0), (-p[0]).max(0.0), (p[1] - 1.0).max(0.0)]
        }
    }
}

fn feasible(x: &Matrix<4>, mode: FitMode, tol: f64) -> bool {
    let within = constraint_residuals(x, mode).iter().all(|r| r.abs() <= tol);
    within && Hermitian::symmetrize(*x).min_eigenvalue() >= -tol
}

pub fn fit(noisy: &Matrix<4>, mode: FitMode, opts: &FitOptions) -> Result<FitResult> {
    opts.validate()?;
    let (target, symmetrized_input) = prepare_input(noisy)?;

    let mut x = target;
    let mut psd_correction = Matrix::<4>::zeros();
    let mut set_correction = Matrix::<4>::zeros();
    let mut status = FitStatus::MaxIterations;
    let mut iterations = 0;

    for it in 1..=opts.max_iterations {
        iterations = it;
        let y = project_psd(&(x + psd_correction));
        psd_correction = x + psd_correction - y;
        let next = project_p_set(&(y + set_correction), mode);
        if mode == FitMode::General {
            set_correction = y + set_correction - next;
        }
        let moved = (next - x).frobenius_norm();
        x = next;
        let gap = (x - y).frobenius_norm();
        if moved <= opts.convergence_tol && gap <= 0.1 * opts.constraint_tol && feasible(&x, mode, opts.constraint_tol)
        {
            status = FitStatus::Converged;
            break;
        }
    }

    let chi_fit = ProcessMatrix::assessed(Hermitian::symmetrize(x));
    Ok(FitResult {
        objective: (*chi_fit.matrix() - target).frobenius_norm(),
        report: constraint_report(chi_fit.matrix(), opts.constraint_tol),
        chi_fit,
        iterations,
        status,
        symmetrized_input,
    })
}

/// Projection onto `{χ ⪰ 0, Tr χ ≤ 1}` only, without the P-matrix bounds.
///
/// This weaker constraint set admits matrices whose P has an eigenvalue
/// above one; it exists to demonstrate that failure mode.
pub fn fit_trace_bounded(noisy: &Matrix<4>) -> Result<FitResult> {
    let (target, symmetrized_input) = prepare_input(noisy)?;
    let e = Hermitian::symmetrize(target).eigensystem();
    let shift = capped_simplex_shift(&e.values);
    let chi_fit = ProcessMatrix::assessed(Hermitian::symmetrize(e.map_spectrum(|l| (l - shift).max(0.0))));
    Ok(FitResult {
        objective: (*chi_fit.matrix() - target).frobenius_norm(),
        report: constraint_report(chi_fit.matrix(), crate::DEFAULT_TOL),
        chi_fit,
        iterations: 1,
        status: FitStatus::Converged,
        symmetrized_input,
    })
}

// Smallest τ ≥ 0 with Σ max(λ - τ, 0) ≤ 1.
fn capped_simplex_shift(values: &[f64; 4]) -> f64 {
    if values.iter().map(|l| l.max(0.0)).sum::<f64>() <= 1.0 {
        return 0.0;
    }
    let mut sorted = *values;
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut prefix = 0.0;
    let mut shift = 0.0;
    for (k, &l) in sorted.iter().enumerate() {
        prefix += l;
        let tau = (prefix - 1.0) / (k + 1) as f64;
        if l - tau > 0.0 {
            shift = tau;
        }
    }
    shift
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{hadamard_chi, leakage_chi, polarizer_chi, LeakageModelParams};
    use crate::testdata;

    #[test]
    fn printed_fits() {
        let opts = FitOptions::default();
        let cases = [
            (testdata::eq_m1(), FitMode::TracePreserving, testdata::eq_m2()),
            (testdata::eq_m1(), FitMode::General, testdata::eq_m3()),
            (testdata::eq_m4(), FitMode::General, testdata::eq_m5()),
        ];
        for (input, mode, printed) in cases {
            let r = fit(&input, mode, &opts).unwrap();
            assert_eq!(r.status, FitStatus::Converged);
            assert!(r.chi_fit.matrix().max_abs_diff(&printed) < 2e-3);
            assert!(!r.symmetrized_input);
        }
    }

    #[test]
    fn feasible_inputs_are_fixed_points() {
        let opts = FitOptions::default();
        let general = [
            hadamard_chi(),
            polarizer_chi(0.3),
            leakage_chi(&LeakageModelParams::z(0.05, 0.0).unwrap()).unwrap(),
            leakage_chi(&LeakageModelParams::new(0.05, 0.0, [1.0, 0.0, 0.0]).unwrap()).unwrap(),
        ];
        for chi in general {
            let r = fit(chi.matrix(), FitMode::General, &opts).unwrap();
            assert!(r.chi_fit.matrix().max_abs_diff(chi.matrix()) < 1e-8);
        }
        let r = fit(hadamard_chi().matrix(), FitMode::TracePreserving, &opts).unwrap();
        assert!(r.chi_fit.matrix().max_abs_diff(hadamard_chi().matrix()) < 1e-8);
    }

    #[test]
    fn residuals() {
        let zeros = constraint_residuals(hadamard_chi().matrix(), FitMode::TracePreserving);
        assert_eq!(zeros, vec![0.0; 4]);
        let g = constraint_residuals(&testdata::eq_m4(), FitMode::General);
        // P-eigenvalue excess equals Tr(χ) + F - 1 of the printed entries.
        assert!((g[2] - 0.003_544_335_243_676).abs() < 1e-12);
        assert!(g[0] > 0.0);
    }

    #[test]
    fn input_symmetrization_is_recorded() {
        let mut m = testdata::eq_m1();
        m.0[0][1].re += 1e-6;
        let r = fit(&m, FitMode::General, &FitOptions::default()).unwrap();
        assert!(r.symmetrized_input);
    }

    #[test]
    fn options_validation() {
        let bad = FitOptions { max_iterations: 0, ..FitOptions::default() };
        assert!(fit(&testdata::eq_m1(), FitMode::General, &bad).is_err());
        let bad = FitOptions { constraint_tol: 0.0, ..FitOptions::default() };
        assert!(fit(&testdata::eq_m1(), FitMode::General, &bad).is_err());
    }

    #[test]
    fn iteration_cap_reports_max_iter() {
        let opts = FitOptions { max_iterations: 1, ..FitOptions::default() };
        let r = fit(&testdata::eq_m1(), FitMode::TracePreserving, &opts).unwrap();
        assert_eq!(r.status, FitStatus::MaxIterations);
    }

    #[test]
    fn trace_bounded_projection() {
        let r = fit_trace_bounded(&testdata::eq_m1()).unwrap();
        assert!((r.chi_fit.trace() - 1.0).abs() < 1e-12);
        assert!(r.chi_fit.chi().min_eigenvalue() >= -1e-12);
        assert!(capped_simplex_shift(&[0.1, 0.2, 0.0, -0.5]) == 0.0);
        let shift = capped_simplex_shift(&[0.7, 0.6, 0.1, 0.0]);
        assert!((shift - 0.15).abs() < 1e-15);
    }
}
