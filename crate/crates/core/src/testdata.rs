//! Printed 4-decimal matrices used as regression inputs and targets.

use crate::linalg::{Matrix, C64};

fn build(rows: [[(f64, f64); 4]; 4]) -> Matrix<4> {
    Matrix(rows.map(|row| row.map(|(re, im)| C64::new(re, im))))
}

/// Noisy Hadamard process.
pub fn eq_m1() -> Matrix<4> {
    build([
        [(-0.0009, 0.0000), (-0.0005, -0.0007), (-0.0012, -0.0002), (-0.0003, 0.0015)],
        [(-0.0005, 0.0007), (0.4998, 0.0000), (-0.0011, 0.0016), (0.5012, -0.0002)],
        [(-0.0012, 0.0002), (-0.0011, -0.0016), (-0.0015, 0.0000), (-0.0004, -0.0002)],
        [(-0.0003, -0.0015), (0.5012, 0.0002), (-0.0004, 0.0002), (0.5003, 0.0000)],
    ])
}

/// Trace-preserving fit of [`eq_m1`].
pub fn eq_m2() -> Matrix<4> {
    build([
        [(0.0000, 0.0000), (0.0000, 0.0004), (-0.0000, -0.0000), (-0.0000, 0.0004)],
        [(0.0000, -0.0004), (0.4997, 0.0000), (-0.0008, 0.0000), (0.5000, -0.0000)],
        [(-0.0000, 0.0000), (-0.0008, -0.0000), (0.0000, 0.0000), (-0.0008, -0.0000)],
        [(-0.0000, -0.0004), (0.5000, 0.0000), (-0.0008, 0.0000), (0.5003, 0.0000)],
    ])
}

/// General-constraint fit of [`eq_m1`].
pub fn eq_m3() -> Matrix<4> {
    build([
        [(0.0000, 0.0000), (-0.0000, 0.0004), (-0.0000, -0.0000), (-0.0000, 0.0004)],
        [(-0.0000, -0.0004), (0.4997, 0.0000), (-0.0008, 0.0000), (0.5000, -0.0000)],
        [(-0.0000, 0.0000), (-0.0008, -0.0000), (0.0000, 0.0000), (-0.0008, -0.0000)],
        [(-0.0000, -0.0004), (0.5000, 0.0000), (-0.0008, 0.0000), (0.5002, 0.0000)],
    ])
}

/// Noisy loss model, p = 1e-2 and ε = 3e-3.
pub fn eq_m4() -> Matrix<4> {
    build([
        [(0.9921, 0.0000), (0.0012, -0.0012), (-0.0032, -0.0011), (0.0013, 0.0006)],
        [(0.0012, 0.0012), (0.0004, 0.0000), (0.0001, -0.0002), (-0.0016, 0.0008)],
        [(-0.0032, 0.0011), (0.0001, 0.0002), (-0.0022, 0.0000), (0.0013, 0.0006)],
        [(0.0013, -0.0006), (-0.0016, -0.0008), (0.0013, -0.0006), (0.0042, 0.0000)],
    ])
}

/// General-constraint fit of [`eq_m4`].
pub fn eq_m5() -> Matrix<4> {
    build([
        [(0.9911, 0.0000), (0.0009, -0.0012), (-0.0023, -0.0011), (0.0009, 0.0006)],
        [(0.0009, 0.0012), (0.0004, 0.0000), (-0.0002, -0.0000), (-0.0012, -0.0002)],
        [(-0.0023, 0.0011), (-0.0002, 0.0000), (0.0001, 0.0000), (0.0006, 0.0000)],
        [(0.0009, -0.0006), (-0.0012, 0.0002), (0.0006, -0.0000), (0.0034, 0.0000)],
    ])
}
