//! Linear-inversion estimate of χ from probe input/output state pairs.

use alloc::boxed::Box;

use libm::sqrt;

use crate::channels::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{Hermitian, HermitianOperator4, Matrix, C64, PAULI};

const INPUT_TRACE_TOL: f64 = 1e-10;
const PIVOT_RTOL: f64 = 1e-12;

/// A unit-trace input state and the (possibly subnormalized) output it
/// produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatePair {
    pub input: DensityMatrix,
    pub output: DensityMatrix,
}

impl StatePair {
    pub fn new(input: DensityMatrix, output: DensityMatrix) -> Result<Self> {
        if (input.trace() - 1.0).abs() > INPUT_TRACE_TOL {
            return Err(Error::InvalidDensity("probe input must have unit trace"));
        }
        Ok(StatePair { input, output })
    }
}

/// |0⟩⟨0|, |1⟩⟨1|, |+⟩⟨+|, |+i⟩⟨+i|.
pub fn probe_states() -> [DensityMatrix; 4] {
    let half = 0.5;
    let plus = Matrix::from_real([[half, half], [half, half]]);
    let mut plus_i = Matrix::<2>::diagonal([half, half]);
    plus_i.0[0][1] = C64::new(0.0, -half);
    plus_i.0[1][0] = C64::new(0.0, half);
    [
        DensityMatrix::ground(),
        DensityMatrix::excited(),
        DensityMatrix::from_matrix(plus).expect("valid state"),
        DensityMatrix::from_matrix(plus_i).expect("valid state"),
    ]
}

/// Raw linear-inversion estimate and diagnostics of the solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion {
    /// `(X + X†)/2` of the solution X; not necessarily physical.
    pub chi: HermitianOperator4,
    /// `max |X_mn - conj(X_nm)|` before symmetrization.
    pub asymmetry: f64,
    /// Smallest over largest pivot magnitude in the elimination.
    pub pivot_ratio: f64,
}

/// Solves `ρ'_i = Σ χ_mn σ_m ρ_i σ_n` (i = 1..4) for the 16 entries of χ.
pub fn linear_inversion(pairs: &[StatePair; 4]) -> Result<Inversion> {
    // unknown u = 4m + n, equation row = 4i + 2j + k
    let mut a = [[C64::new(0.0, 0.0); 16]; 16];
    let mut b = [C64::new(0.0, 0.0); 16];
    for (i, pair) in pairs.iter().enumerate() {
        let rho = pair.input.matrix();
        for m in 0..4 {
            for n in 0..4 {
                let term = PAULI[m] * *rho * PAULI[n];
                for j in 0..2 {
                    for k in 0..2 {
                        a[4 * i + 2 * j + k][4 * m + n] = term.0[j][k];
                    }
                }
            }
        }
        for j in 0..2 {
            for k in 0..2 {
                b[4 * i + 2 * j + k] = pair.output.matrix().0[j][k];
            }
        }
    }

    let (x, pivot_ratio) = solve(a, b)
        .map_err(|rank| Error::RankDeficient { rank, inputs: Box::new(pairs.map(|p| *p.input.matrix())) })?;

    let mut raw = Matrix::<4>::zeros();
    for m in 0..4 {
        for n in 0..4 {
            raw.0[m][n] = x[4 * m + n];
        }
    }
    Ok(Inversion { asymmetry: raw.hermitian_deviation(), chi: Hermitian::from_symmetrized(&raw)?, pivot_ratio })
}

// Gaussian elimination with partial pivoting. On a singular system returns
// the numerical rank.
fn solve(mut a: [[C64; 16]; 16], mut b: [C64; 16]) -> core::result::Result<([C64; 16], f64), usize> {
    let scale = a.iter().flatten().fold(0.0_f64, |m, z| m.max(z.norm()));
    let threshold = PIVOT_RTOL * scale.max(f64::MIN_POSITIVE);
    let (mut min_pivot, mut max_pivot) = (f64::INFINITY, 0.0_f64);

    for col in 0..16 {
        let (pivot_row, pivot_abs) =
            (col..16).map(|r| (r, a[r][col].norm())).max_by(|x, y| x.1.total_cmp(&y.1)).expect("non-empty range");
        if pivot_abs <= threshold {
            return Err(rank(a));
        }
        min_pivot = min_pivot.min(pivot_abs);
        max_pivot = max_pivot.max(pivot_abs);
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for r in col + 1..16 {
            let factor = a[r][col] / a[col][col];
            if factor == C64::new(0.0, 0.0) {
                continue;
            }
            for c in col..16 {
                let v = a[col][c];
                a[r][c] -= factor * v;
            }
            let v = b[col];
            b[r] -= factor * v;
        }
    }

    let mut x = [C64::new(0.0, 0.0); 16];
    for r in (0..16).rev() {
        let mut acc = b[r];
        for c in r + 1..16 {
            acc -= a[r][c] * x[c];
        }
        x[r] = acc / a[r][r];
    }
    Ok((x, min_pivot / max_pivot))
}

// Numerical rank of the original system, via column-pivoted elimination
// from scratch on a copy.
fn rank(mut a: [[C64; 16]; 16]) -> usize {
    let norm = sqrt(a.iter().flatten().map(|z| z.norm_sqr()).sum());
    let threshold = PIVOT_RTOL * norm.max(f64::MIN_POSITIVE);
    let mut rank = 0;
    for col in 0..16 {
        if rank == 16 {
            break;
        }
        let (pivot_row, pivot_abs) =
            (rank..16).map(|r| (r, a[r][col].norm())).max_by(|x, y| x.1.total_cmp(&y.1)).expect("non-empty range");
        if pivot_abs <= threshold {
            continue;
        }
        a.swap(rank, pivot_row);
        for r in rank + 1..16 {
            let factor = a[r][col] / a[rank][col];
            for c in col..16 {
                let v = a[rank][c];
                a[r][c] -= factor * v;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{apply_channel, hadamard_chi, polarizer_chi, ProcessMatrix};

    fn forward(chi: &ProcessMatrix) -> [StatePair; 4] {
        probe_states().map(|rho| StatePair::new(rho, apply_channel(chi, &rho).unwrap()).unwrap())
    }

    // Determinant of the 4×4 Gram matrix of vectorized probes.
    fn gram_determinant(states: &[DensityMatrix; 4]) -> C64 {
        let vecs = states.map(|s| {
            let m = s.matrix().0;
            [m[0][0], m[0][1], m[1][0], m[1][1]]
        });
        let mut g = Matrix::<4>::zeros();
        for i in 0..4 {
            for j in 0..4 {
                g.0[i][j] = (0..4).map(|k| vecs[i][k].conj() * vecs[j][k]).sum();
            }
        }
        // cofactor expansion is fine at 4×4
        fn det3(m: [[C64; 3]; 3]) -> C64 {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        (0..4)
            .map(|c| {
                let mut minor = [[C64::new(0.0, 0.0); 3]; 3];
                for r in 1..4 {
                    let mut cc = 0;
                    for k in 0..4 {
                        if k != c {
                            minor[r - 1][cc] = g.0[r][k];
                            cc += 1;
                        }
                    }
                }
                let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                g.0[0][c] * det3(minor) * sign
            })
            .sum()
    }

    #[test]
    fn probe_set() {
        let probes = probe_states();
        assert_eq!(*probes[0].matrix(), Matrix::diagonal([1.0, 0.0]));
        assert_eq!(*probes[2].matrix(), Matrix::from_real([[0.5, 0.5], [0.5, 0.5]]));
        assert!(gram_determinant(&probes).norm() > 1e-3);
        let singular = [probes[0], probes[1], probes[2], probes[2]];
        assert!(gram_determinant(&singular).norm() < 1e-15);
    }

    #[test]
    fn inverts_canonical_channels() {
        let inv = linear_inversion(&forward(&hadamard_chi())).unwrap();
        assert!(inv.chi.matrix().max_abs_diff(hadamard_chi().matrix()) < 1e-10);
        assert!(inv.asymmetry < 1e-10);

        let id = ProcessMatrix::assessed(Hermitian::diagonal([1.0, 0.0, 0.0, 0.0]));
        let inv = linear_inversion(&forward(&id)).unwrap();
        assert!(inv.chi.matrix().max_abs_diff(id.matrix()) < 1e-10);

        let pol = polarizer_chi(core::f64::consts::PI / 6.0);
        let inv = linear_inversion(&forward(&pol)).unwrap();
        assert!(inv.chi.matrix().max_abs_diff(pol.matrix()) < 1e-10);
        assert!((inv.chi.trace() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn singular_probe_set() {
        let p = probe_states();
        let pairs = [p[0], p[1], p[2], p[2]].map(|rho| StatePair::new(rho, rho).unwrap());
        match linear_inversion(&pairs) {
            Err(Error::RankDeficient { rank, inputs }) => {
                assert_eq!(rank, 12);
                assert_eq!(inputs[3], *p[2].matrix());
            }
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn input_must_be_normalized() {
        let half = DensityMatrix::new(Hermitian::diagonal([0.25, 0.25])).unwrap();
        assert!(StatePair::new(half, half).is_err());
    }
}
