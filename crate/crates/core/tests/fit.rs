use qpt_core::sample::{random_kraus_set, random_pure_state};
use qpt_core::*;

fn noisy(chi: &ProcessMatrix, seed: u64, scale: f64) -> Matrix<4> {
    perturb(chi.chi(), &NoiseSpec::new(seed, scale).unwrap()).into_matrix()
}

// Moves 1e-4 from the fit toward random feasible points (convex
// combinations stay feasible) and checks the distance never drops.
fn assert_locally_optimal(input: &Matrix<4>, result: &FitResult, mode: FitMode, seed: u64) {
    let mut src = GaussianSource::new(seed);
    let fitted = *result.chi_fit.matrix();
    for _ in 0..50 {
        let z = *chi_from_kraus(&random_kraus_set(&mut src, mode == FitMode::TracePreserving)).matrix();
        let dir = z - fitted;
        let step = dir.scale(1e-4 / dir.frobenius_norm());
        let moved = (fitted + step - *input).frobenius_norm();
        assert!(moved >= result.objective - 1e-9, "{moved} < {}", result.objective);
    }
}

fn canonical() -> Vec<ProcessMatrix> {
    vec![
        hadamard_chi(),
        polarizer_chi(std::f64::consts::PI / 8.0),
        leakage_chi(&LeakageModelParams::z(0.01, 0.0).unwrap()).unwrap(),
        leakage_chi(&LeakageModelParams::new(0.01, 0.0, [1.0, 0.0, 0.0]).unwrap()).unwrap(),
        leakage_chi(&LeakageModelParams::z(0.01, 0.003).unwrap()).unwrap(),
    ]
}

#[test]
fn general_fits_are_feasible_and_optimal() {
    let opts = FitOptions::default();
    for (c, chi) in canonical().iter().enumerate() {
        for scale in [1e-4, 1e-3, 1e-2, 1e-1] {
            for seed in 0..5 {
                let input = noisy(chi, seed, scale);
                let r = fit(&input, FitMode::General, &opts).unwrap();
                assert_eq!(r.status, FitStatus::Converged);
                let report = constraint_report(r.chi_fit.matrix(), 1e-8);
                assert!(report.psd && report.general_satisfied);
                assert!(constraint_residuals(r.chi_fit.matrix(), FitMode::General).iter().all(|&x| x <= 1e-9));
                assert_locally_optimal(&input, &r, FitMode::General, 1000 + seed + c as u64);
            }
        }
    }
}

#[test]
fn tp_fits_are_feasible_and_optimal() {
    let opts = FitOptions::default();
    let mut src = GaussianSource::new(12);
    for seed in 0..20 {
        let chi = chi_from_kraus(&random_kraus_set(&mut src, true));
        let input = noisy(&chi, seed, 1e-2);
        let r = fit(&input, FitMode::TracePreserving, &opts).unwrap();
        assert_eq!(r.status, FitStatus::Converged);
        let report = constraint_report(r.chi_fit.matrix(), 1e-8);
        assert!(report.psd && report.tp_satisfied);
        assert!((r.chi_fit.trace() - 1.0).abs() <= 1e-8);
        assert_locally_optimal(&input, &r, FitMode::TracePreserving, 77 + seed);
    }
}

#[test]
fn random_tp_channels_are_fixed_points() {
    let opts = FitOptions::default();
    let mut src = GaussianSource::new(3);
    for _ in 0..20 {
        let chi = chi_from_kraus(&random_kraus_set(&mut src, true));
        for mode in [FitMode::TracePreserving, FitMode::General] {
            let r = fit(chi.matrix(), mode, &opts).unwrap();
            assert!(r.chi_fit.matrix().max_abs_diff(chi.matrix()) <= 1e-8);
        }
    }
}

#[test]
fn general_mode_never_farther_than_tp() {
    let opts = FitOptions::default();
    for seed in 0..20 {
        let input = noisy(&hadamard_chi(), seed, 1e-2);
        let tp = fit(&input, FitMode::TracePreserving, &opts).unwrap();
        let general = fit(&input, FitMode::General, &opts).unwrap();
        assert!(general.objective <= tp.objective + 1e-9);
    }
}

#[test]
fn trace_bound_alone_allows_unphysical_outputs() {
    let m1 = Matrix(
        [
            [(-0.0009, 0.0), (-0.0005, -0.0007), (-0.0012, -0.0002), (-0.0003, 0.0015)],
            [(-0.0005, 0.0007), (0.4998, 0.0), (-0.0011, 0.0016), (0.5012, -0.0002)],
            [(-0.0012, 0.0002), (-0.0011, -0.0016), (-0.0015, 0.0), (-0.0004, -0.0002)],
            [(-0.0003, -0.0015), (0.5012, 0.0002), (-0.0004, 0.0002), (0.5003, 0.0)],
        ]
        .map(|row| row.map(|(re, im)| C64::new(re, im))),
    );
    let r = fit_trace_bounded(&m1).unwrap();
    assert!(r.chi_fit.chi().min_eigenvalue() >= -1e-12);
    assert!(r.chi_fit.trace() <= 1.0 + 1e-12);
    assert!(!r.report.general_satisfied);

    let mut src = GaussianSource::new(100);
    let bad = (0..100)
        .map(|_| random_pure_state(&mut src))
        .filter(|rho| {
            let out = apply_channel_unchecked(r.chi_fit.chi(), rho.matrix());
            let e = out.eigenvalues();
            e[0] < -1e-9 || e[1] > 1.0 + 1e-9
        })
        .count();
    assert!(bad >= 1);

    // the complete constraint set does not show the failure
    let full = fit(&m1, FitMode::General, &FitOptions::default()).unwrap();
    let mut src = GaussianSource::new(100);
    for _ in 0..100 {
        let rho = random_pure_state(&mut src);
        let e = apply_channel_unchecked(full.chi_fit.chi(), rho.matrix()).eigenvalues();
        assert!(e[0] >= -1e-9 && e[1] <= 1.0 + 1e-9);
    }
}
