//! Dense complex matrices of size 2 and 4, the Pauli basis, and a cyclic
//! complex Jacobi eigensolver for Hermitian input.

use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use libm::sqrt;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::HERMITIAN_TOL;

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Square complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix<const N: usize>(pub [[C64; N]; N]);

pub type Operator2 = Matrix<2>;

impl<const N: usize> Default for Matrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Matrix<N> {
    pub const fn zeros() -> Self {
        Matrix([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for k in 0..N {
            m.0[k][k] = ONE;
        }
        m
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros();
        for (j, row) in rows.iter().enumerate() {
            for (k, &x) in row.iter().enumerate() {
                m.0[j][k] = C64::new(x, 0.0);
            }
        }
        m
    }

    pub fn diagonal(values: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for (k, &x) in values.iter().enumerate() {
            m.0[k][k] = C64::new(x, 0.0);
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for j in 0..N {
            for k in 0..N {
                m.0[k][j] = self.0[j][k].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|k| self.0[k][k]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        sqrt(self.0.iter().flatten().map(|z| z.norm_sqr()).sum())
    }

    /// Real Frobenius inner product `Re Tr(self† other)`.
    pub fn inner(&self, other: &Self) -> f64 {
        self.0.iter().flatten().zip(other.0.iter().flatten()).map(|(a, b)| a.re * b.re + a.im * b.im).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.iter().flatten().zip(other.0.iter().flatten()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest `|a_jk - conj(a_kj)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev = 0.0_f64;
        for j in 0..N {
            for k in j..N {
                dev = dev.max((self.0[j][k] - self.0[k][j].conj()).norm());
            }
        }
        dev
    }

    /// `(A + A†) / 2`, exactly conjugate-symmetric.
    pub fn symmetrized(&self) -> Self {
        let mut m = Self::zeros();
        for j in 0..N {
            m.0[j][j] = C64::new(self.0[j][j].re, 0.0);
            for k in j + 1..N {
                let z = (self.0[j][k] + self.0[k][j].conj()) * 0.5;
                m.0[j][k] = z;
                m.0[k][j] = z.conj();
            }
        }
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }
}

impl<const N: usize> Index<(usize, usize)> for Matrix<N> {
    type Output = C64;
    fn index(&self, (j, k): (usize, usize)) -> &C64 {
        &self.0[j][k]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Matrix<N> {
    fn index_mut(&mut self, (j, k): (usize, usize)) -> &mut C64 {
        &mut self.0[j][k]
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a -= b;
        }
        self
    }
}

impl<const N: usize> Neg for Matrix<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for j in 0..N {
            for k in 0..N {
                let mut acc = ZERO;
                for l in 0..N {
                    acc += self.0[j][l] * rhs.0[l][k];
                }
                m.0[j][k] = acc;
            }
        }
        m
    }
}

/// The fixed operator basis σ₁ = I, σ₂ = σx, σ₃ = σy, σ₄ = σz.
pub const PAULI: [Operator2; 4] = [
    Matrix([[ONE, ZERO], [ZERO, ONE]]),
    Matrix([[ZERO, ONE], [ONE, ZERO]]),
    Matrix([[ZERO, C64::new(0.0, -1.0)], [I, ZERO]]),
    Matrix([[ONE, ZERO], [ZERO, C64::new(-1.0, 0.0)]]),
];

/// Pauli matrix by 1-based index in the order I, σx, σy, σz.
pub fn pauli(index: usize) -> Result<Operator2> {
    match index {
        1..=4 => Ok(PAULI[index - 1]),
        _ => Err(Error::InvalidArgument("Pauli index must be in 1..=4")),
    }
}

/// A matrix known to be conjugate-symmetric to within [`HERMITIAN_TOL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hermitian<const N: usize>(Matrix<N>);

pub type HermitianOperator2 = Hermitian<2>;
pub type HermitianOperator4 = Hermitian<4>;

impl<const N: usize> Hermitian<N> {
    pub fn new(m: Matrix<N>) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let deviation = m.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Hermitian(m))
    }

    /// Wraps `(m + m†) / 2`. Callers opt into this explicitly.
    pub fn from_symmetrized(m: &Matrix<N>) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Hermitian(m.symmetrized()))
    }

    pub fn zeros() -> Self {
        Hermitian(Matrix::zeros())
    }

    pub fn identity() -> Self {
        Hermitian(Matrix::identity())
    }

    pub fn diagonal(values: [f64; N]) -> Self {
        Hermitian(Matrix::diagonal(values))
    }

    // Internal results that are Hermitian by construction up to rounding.
    pub(crate) fn symmetrize(m: Matrix<N>) -> Self {
        Hermitian(m.symmetrized())
    }

    pub fn matrix(&self) -> &Matrix<N> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<N> {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn eigensystem(&self) -> Eigensystem<N> {
        hermitian_eigensystem(self)
    }

    pub fn eigenvalues(&self) -> [f64; N] {
        hermitian_eigensystem(self).values
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues()[N - 1]
    }
}

impl<const N: usize> AsRef<Matrix<N>> for Hermitian<N> {
    fn as_ref(&self) -> &Matrix<N> {
        &self.0
    }
}

impl<const N: usize> TryFrom<Matrix<N>> for Hermitian<N> {
    type Error = Error;
    fn try_from(m: Matrix<N>) -> Result<Self> {
        Hermitian::new(m)
    }
}

/// Eigenvalues in ascending order with the matching orthonormal
/// eigenvectors stored as the columns of `vectors`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigensystem<const N: usize> {
    pub values: [f64; N],
    pub vectors: Matrix<N>,
}

impl<const N: usize> Eigensystem<N> {
    /// `V f(Λ) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Matrix<N> {
        let mut out = Matrix::zeros();
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for j in 0..N {
                let vj = self.vectors.0[j][k] * w;
                for l in 0..N {
                    out.0[j][l] += vj * self.vectors.0[l][k].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix<N> {
        self.map_spectrum(|x| x)
    }

    pub fn vector(&self, k: usize) -> [C64; N] {
        let mut v = [ZERO; N];
        for (j, slot) in v.iter_mut().enumerate() {
            *slot = self.vectors.0[j][k];
        }
        v
    }
}

const MAX_SWEEPS: usize = 64;
const OFF_DIAGONAL_RTOL: f64 = 1e-14;

/// Cyclic complex Jacobi diagonalization.
pub fn hermitian_eigensystem<const N: usize>(a: &Hermitian<N>) -> Eigensystem<N> {
    let mut m = a.0;
    let mut v = Matrix::<N>::identity();
    let norm = m.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|p| (0..N).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| m.0[p][q].norm_sqr())
            .sum();
        if sqrt(off) <= OFF_DIAGONAL_RTOL * norm {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order = [0usize; N];
    for (k, slot) in order.iter_mut().enumerate() {
        *slot = k;
    }
    order.sort_by(|&x, &y| m.0[x][x].re.total_cmp(&m.0[y][y].re));

    let mut values = [0.0; N];
    let mut vectors = Matrix::zeros();
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = m.0[src][src].re;
        for j in 0..N {
            vectors.0[j][dst] = v.0[j][src];
        }
    }
    Eigensystem { values, vectors }
}

// Annihilates m[p][q] with the unitary J = D R, where D removes the phase of
// m[p][q] and R is the real symmetric Jacobi rotation; m <- J† m J, v <- v J.
fn rotate<const N: usize>(m: &mut Matrix<N>, v: &mut Matrix<N>, p: usize, q: usize) {
    let apq = m.0[p][q];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let phase = apq / g;
    let theta = (m.0[q][q].re - m.0[p][p].re) / (2.0 * g);
    let t = if theta >= 0.0 {
        1.0 / (theta + sqrt(theta * theta + 1.0))
    } else {
        -1.0 / (-theta + sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / sqrt(t * t + 1.0);
    let s = t * c;
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    for row in 0..N {
        let (xp, xq) = (m.0[row][p], m.0[row][q]);
        m.0[row][p] = xp * c + xq * jqp;
        m.0[row][q] = xp * s + xq * jqq;
        let (yp, yq) = (v.0[row][p], v.0[row][q]);
        v.0[row][p] = yp * c + yq * jqp;
        v.0[row][q] = yp * s + yq * jqq;
    }
    for col in 0..N {
        let (xp, xq) = (m.0[p][col], m.0[q][col]);
        m.0[p][col] = xp * c + xq * jqp.conj();
        m.0[q][col] = xp * s + xq * jqq.conj();
    }
    m.0[p][q] = ZERO;
    m.0[q][p] = ZERO;
    m.0[p][p].im = 0.0;
    m.0[q][q].im = 0.0;
}

pub fn frobenius_distance<const N: usize>(a: &Hermitian<N>, b: &Hermitian<N>) -> f64 {
    (a.0 - b.0).frobenius_norm()
}

/// True iff the smallest eigenvalue is at least `-tol`.
pub fn is_psd<const N: usize>(a: &Hermitian<N>, tol: f64) -> bool {
    a.min_eigenvalue() >= -tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::GaussianSource;

    fn random_hermitian<const N: usize>(src: &mut GaussianSource, scale: f64) -> Hermitian<N> {
        let mut m = Matrix::<N>::zeros();
        for j in 0..N {
            for k in 0..N {
                m.0[j][k] = C64::new(src.next_normal(), src.next_normal()) * scale;
            }
        }
        Hermitian::from_symmetrized(&m).unwrap()
    }

    #[test]
    fn pauli_matrices() {
        assert_eq!(pauli(1).unwrap(), Matrix::from_real([[1.0, 0.0], [0.0, 1.0]]));
        assert_eq!(pauli(2).unwrap(), Matrix::from_real([[0.0, 1.0], [1.0, 0.0]]));
        assert_eq!(pauli(4).unwrap(), Matrix::from_real([[1.0, 0.0], [0.0, -1.0]]));
        let y = pauli(3).unwrap();
        assert_eq!(y[(0, 1)], C64::new(0.0, -1.0));
        assert_eq!(y[(1, 0)], C64::new(0.0, 1.0));
        assert!(pauli(0).is_err());
        assert!(pauli(5).is_err());
    }

    #[test]
    fn pauli_squares_to_identity() {
        for s in PAULI {
            assert_eq!(s * s, Matrix::identity());
        }
    }

    #[test]
    fn small_eigensystems() {
        let e = hermitian_eigensystem(&Hermitian::<2>::identity());
        assert_eq!(e.values, [1.0, 1.0]);
        let e = hermitian_eigensystem(&Hermitian::new(PAULI[1]).unwrap());
        assert!((e.values[0] + 1.0).abs() < 1e-15 && (e.values[1] - 1.0).abs() < 1e-15);
        let e = hermitian_eigensystem(&Hermitian::new(PAULI[2]).unwrap());
        assert!((e.values[0] + 1.0).abs() < 1e-15 && (e.values[1] - 1.0).abs() < 1e-15);
        let e = hermitian_eigensystem(&Hermitian::<4>::zeros());
        assert_eq!(e.values, [0.0; 4]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = Matrix::<4>::identity();
        m.0[0][1] = C64::new(1e-6, 0.0);
        assert!(matches!(Hermitian::new(m), Err(Error::NotHermitian { .. })));
        let mut m = Matrix::<2>::identity();
        m.0[1][1] = C64::new(1.0, 1e-9);
        assert!(Hermitian::new(m).is_err());
        m.0[1][1] = C64::new(f64::NAN, 0.0);
        assert_eq!(Hermitian::new(m), Err(Error::NonFinite));
    }

    #[test]
    fn random_eigensystems_reconstruct() {
        let mut src = GaussianSource::new(7);
        for sample in 0..100 {
            let scale = [1e-3, 1.0, 1e3][sample % 3];
            let a: Hermitian<4> = random_hermitian(&mut src, scale);
            let e = a.eigensystem();
            let bound = 1e-10 * a.matrix().frobenius_norm().max(1.0);
            assert!(e.reconstruct().max_abs_diff(a.matrix()) <= bound);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let vtv = e.vectors.adjoint() * e.vectors;
            assert!(vtv.max_abs_diff(&Matrix::identity()) <= 1e-10);
            let sum: f64 = e.values.iter().sum();
            assert!((sum - a.trace()).abs() <= 1e-10 * scale.max(1.0));

            let b: Hermitian<2> = random_hermitian(&mut src, scale);
            let e = b.eigensystem();
            let bound = 1e-10 * b.matrix().frobenius_norm().max(1.0);
            assert!(e.reconstruct().max_abs_diff(b.matrix()) <= bound);
            assert!(e.values[0] <= e.values[1]);
        }
    }

    #[test]
    fn degenerate_spectrum() {
        // diag(1,1,2,2) in a rotated basis
        let mut src = GaussianSource::new(3);
        let h: Hermitian<4> = random_hermitian(&mut src, 1.0);
        let u = h.eigensystem().vectors;
        let a = Hermitian::from_symmetrized(&(u * Matrix::diagonal([1.0, 1.0, 2.0, 2.0]) * u.adjoint())).unwrap();
        let vals = a.eigenvalues();
        for (got, want) in vals.iter().zip([1.0, 1.0, 2.0, 2.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn frobenius_distance_values() {
        let a = Hermitian::<4>::identity();
        assert_eq!(frobenius_distance(&a, &a), 0.0);
        assert_eq!(frobenius_distance(&Hermitian::zeros(), &a), 2.0);
    }

    #[test]
    fn frobenius_triangle_inequality() {
        let mut src = GaussianSource::new(11);
        for _ in 0..200 {
            let a: Hermitian<4> = random_hermitian(&mut src, 1.0);
            let b: Hermitian<4> = random_hermitian(&mut src, 1.0);
            let c: Hermitian<4> = random_hermitian(&mut src, 1.0);
            assert!(frobenius_distance(&a, &c) <= frobenius_distance(&a, &b) + frobenius_distance(&b, &c) + 1e-12);
        }
    }

    #[test]
    fn psd_checks() {
        assert!(is_psd(&Hermitian::<4>::identity(), 0.0));
        assert!(!is_psd(&Hermitian::diagonal([1.0, -1e-3]), 1e-6));
        assert!(is_psd(&Hermitian::diagonal([1.0, -1e-7]), 1e-6));
    }
}
