//! Random channels and states for simulation studies.

use alloc::vec::Vec;

use libm::sqrt;

use crate::channels::{DensityMatrix, KrausSet};
use crate::linalg::{Hermitian, Matrix, Operator2, C64};
use crate::noise::GaussianSource;

fn gaussian_operator(src: &mut GaussianSource) -> Operator2 {
    let mut m = Matrix::zeros();
    for z in m.0.iter_mut().flatten() {
        *z = C64::new(src.next_normal(), src.next_normal());
    }
    m
}

/// Haar-distributed 2×2 unitary (polar part of a Ginibre matrix).
pub fn random_unitary(src: &mut GaussianSource) -> Operator2 {
    let g = gaussian_operator(src);
    g * inverse_sqrt(&(g.adjoint() * g))
}

/// Between one and four Kraus operators. Trace preserving when requested;
/// otherwise `Σ E†E` is rescaled to a random largest eigenvalue in `(0.5, 1]`.
pub fn random_kraus_set(src: &mut GaussianSource, trace_preserving: bool) -> KrausSet {
    let count = 1 + (src.next_uniform() * 4.0) as usize;
    let ops: Vec<Operator2> = (0..count.min(4)).map(|_| gaussian_operator(src)).collect();
    let s = Hermitian::symmetrize(ops.iter().fold(Matrix::zeros(), |acc, k| acc + k.adjoint() * *k));
    let ops = if trace_preserving {
        let w = inverse_sqrt(s.matrix());
        ops.into_iter().map(|k| k * w).collect()
    } else {
        let target = 1.0 - 0.5 * src.next_uniform();
        let factor = sqrt(target / s.max_eigenvalue());
        ops.into_iter().map(|k| k.scale(factor)).collect()
    };
    KrausSet::new(ops).expect("normalized Kraus set")
}

/// Uniformly distributed pure state.
pub fn random_pure_state(src: &mut GaussianSource) -> DensityMatrix {
    let v = [src.next_normal(), src.next_normal(), src.next_normal()];
    let n = sqrt(v.iter().map(|x| x * x).sum());
    DensityMatrix::from_bloch(v.map(|x| x / n)).expect("unit Bloch vector")
}

/// Random (generally mixed) state: Bloch vector of length `u^(1/3)`.
pub fn random_state(src: &mut GaussianSource) -> DensityMatrix {
    let pure = random_pure_state(src);
    let r = libm::cbrt(src.next_uniform());
    let m = *pure.matrix();
    let half = Matrix::<2>::identity().scale(0.5);
    DensityMatrix::new(Hermitian::symmetrize(half + (m - half).scale(r))).expect("valid state")
}

fn inverse_sqrt(m: &Matrix<2>) -> Matrix<2> {
    Hermitian::symmetrize(*m).eigensystem().map_spectrum(|l| 1.0 / sqrt(l))
}
