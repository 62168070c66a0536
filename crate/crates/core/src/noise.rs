//! Seeded Hermitian Gaussian noise.
//!
//! Uniform variates come from ChaCha20 (`rand_chacha`), which produces the
//! same stream on every platform for a given seed. Normal variates use the
//! Box–Muller transform on pairs of uniforms: with `u1 ∈ (0, 1]` and
//! `u2 ∈ [0, 1)`, `r = sqrt(-2 ln u1)` yields `r cos 2πu2` and then
//! `r sin 2πu2` on the following call.
//!
//! The noise matrix is `N = scale · (G + G†)/2` where `G` is 4×4 with
//! independent standard normal real and imaginary parts, drawn row-major,
//! real part before imaginary part. Off-diagonal real and imaginary parts
//! of `N` therefore have variance `scale²/2`; diagonal entries are real
//! with variance `scale²`.

use core::f64::consts::TAU;

use libm::{cos, log, sin, sqrt};
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::linalg::{Hermitian, HermitianOperator4, Matrix, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    seed: u64,
    scale: f64,
}

impl NoiseSpec {
    pub fn new(seed: u64, scale: f64) -> Result<Self> {
        if !scale.is_finite() || scale < 0.0 {
            return Err(Error::InvalidArgument("noise scale must be finite and non-negative"));
        }
        Ok(NoiseSpec { seed, scale })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

/// Standard normal variates from a seeded ChaCha20 stream.
#[derive(Debug, Clone)]
pub struct GaussianSource {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl GaussianSource {
    pub fn new(seed: u64) -> Self {
        GaussianSource { rng: ChaCha20Rng::seed_from_u64(seed), spare: None }
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.next_uniform();
        let u2 = self.next_uniform();
        let r = sqrt(-2.0 * log(u1));
        let angle = TAU * u2;
        self.spare = Some(r * sin(angle));
        r * cos(angle)
    }
}

pub fn hermitian_gaussian_noise(spec: &NoiseSpec) -> HermitianOperator4 {
    if spec.scale == 0.0 {
        return Hermitian::zeros();
    }
    let mut src = GaussianSource::new(spec.seed);
    let mut g = Matrix::<4>::zeros();
    for z in g.0.iter_mut().flatten() {
        let re = src.next_normal();
        let im = src.next_normal();
        *z = C64::new(re, im);
    }
    let mut n = Matrix::<4>::zeros();
    for j in 0..4 {
        n.0[j][j] = C64::new(spec.scale * g.0[j][j].re, 0.0);
        for k in j + 1..4 {
            let z = (g.0[j][k] + g.0[k][j].conj()) * (0.5 * spec.scale);
            n.0[j][k] = z;
            n.0[k][j] = z.conj();
        }
    }
    Hermitian::new(n).expect("noise is conjugate-symmetric by construction")
}

/// `χ + N`; the sum is Hermitian but in general not physical.
pub fn perturb(chi: &HermitianOperator4, spec: &NoiseSpec) -> HermitianOperator4 {
    if spec.scale == 0.0 {
        return *chi;
    }
    let noise = hermitian_gaussian_noise(spec);
    let mut sum = *chi.matrix() + *noise.matrix();
    // keep exact conjugate symmetry when χ itself is only symmetric to rounding
    for j in 0..4 {
        sum.0[j][j].im = 0.0;
        for k in j + 1..4 {
            sum.0[k][j] = sum.0[j][k].conj();
        }
    }
    Hermitian::new(sum).expect("sum of Hermitian matrices")
}
