//! Single-qubit quantum process matrices in the Pauli basis.
//!
//! The crate covers the whole life cycle of a 4×4 process (χ) matrix:
//! building it from Kraus operators or closed-form channel models,
//! evaluating the trace-preserving identities and the general
//! `Tr(χ) ± F` bounds, perturbing it with seeded Hermitian Gaussian noise,
//! projecting noisy estimates back onto the physical set, and recovering χ
//! from probe input/output state pairs.
//!
//! Everything here is `no_std` (with `alloc`); file formats and the
//! command-line front end live in the companion `qpt-cli` crate.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod channels;
pub mod constraints;
pub mod error;
pub mod fit;
pub mod linalg;
pub mod noise;
pub mod reconstruct;
pub mod sample;
#[cfg(test)]
mod testdata;

pub use crate::channels::{
    apply_channel, apply_channel_unchecked, apply_kraus, chi_from_kraus, hadamard_chi, leakage_chi, output_trace,
    polarizer_chi, DensityMatrix, KrausSet, LeakageModelParams, ProcessMatrix,
};
pub use crate::constraints::{
    constraint_report, diagnose_leakage, f_value, general_constraint_values, p_matrix, tp_residuals, ConstraintReport,
    GeneralConstraints, LeakageClass, LeakageDiagnosis, TpResiduals,
};
pub use crate::error::{Error, Result};
pub use crate::fit::{constraint_residuals, fit, fit_trace_bounded, FitMode, FitOptions, FitResult, FitStatus};
pub use crate::linalg::{
    frobenius_distance, hermitian_eigensystem, is_psd, pauli, Eigensystem, Hermitian, HermitianOperator2,
    HermitianOperator4, Matrix, Operator2, C64,
};
pub use crate::noise::{hermitian_gaussian_noise, perturb, GaussianSource, NoiseSpec};
pub use crate::reconstruct::{linear_inversion, probe_states, Inversion, StatePair};

/// Default tolerance for physicality checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Absolute tolerance on `|a_jk - conj(a_kj)|` accepted by [`Hermitian::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;
