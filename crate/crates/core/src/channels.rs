//! Process matrices from Kraus operators and closed-form channel models,
//! and their action on qubit states.

use alloc::vec::Vec;

use libm::{cos, sin, sqrt};

use crate::constraints;
use crate::error::{Error, Result};
use crate::linalg::{is_psd, Hermitian, HermitianOperator2, HermitianOperator4, Matrix, Operator2, C64, PAULI};
use crate::DEFAULT_TOL;

const KRAUS_TOL: f64 = 1e-10;
const DENSITY_TOL: f64 = 1e-10;

/// One to four 2×2 operators with `Σ E†E ⪯ I`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    operators: Vec<Operator2>,
}

impl KrausSet {
    pub fn new(operators: Vec<Operator2>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::InvalidKraus("at least one operator is required"));
        }
        if operators.len() > 4 {
            return Err(Error::InvalidKraus("at most four operators are allowed"));
        }
        if !operators.iter().all(Matrix::is_finite) {
            return Err(Error::NonFinite);
        }
        let set = KrausSet { operators };
        let slack = Hermitian::symmetrize(Matrix::identity() - *set.p_matrix().matrix());
        if !is_psd(&slack, KRAUS_TOL) {
            return Err(Error::InvalidKraus("sum of E†E exceeds the identity"));
        }
        Ok(set)
    }

    pub fn single(op: Operator2) -> Result<Self> {
        Self::new(alloc::vec![op])
    }

    pub fn operators(&self) -> &[Operator2] {
        &self.operators
    }

    /// Σ E†E.
    pub fn p_matrix(&self) -> HermitianOperator2 {
        let sum = self.operators.iter().fold(Matrix::zeros(), |acc, e| acc + e.adjoint() * *e);
        Hermitian::symmetrize(sum)
    }

    /// Pauli expansion coefficients `e_m = Tr(σ_m† E) / 2` of each operator.
    pub fn pauli_coefficients(&self) -> Vec<[C64; 4]> {
        self.operators.iter().map(pauli_coefficients).collect()
    }
}

pub(crate) fn pauli_coefficients(e: &Operator2) -> [C64; 4] {
    let mut c = [C64::new(0.0, 0.0); 4];
    for (slot, s) in c.iter_mut().zip(PAULI.iter()) {
        *slot = (s.adjoint() * *e).trace() * 0.5;
    }
    c
}

/// Candidate χ in the Pauli basis. Physicality is not assumed; `physical`
/// caches the outcome of a check at [`DEFAULT_TOL`] when one has been made.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessMatrix {
    chi: HermitianOperator4,
    physical: Option<bool>,
}

impl ProcessMatrix {
    pub fn new(chi: HermitianOperator4) -> Self {
        ProcessMatrix { chi, physical: None }
    }

    /// Wraps `chi` and records whether it is physical at [`DEFAULT_TOL`].
    pub fn assessed(chi: HermitianOperator4) -> Self {
        let physical = Some(is_physical(&chi, DEFAULT_TOL));
        ProcessMatrix { chi, physical }
    }

    /// Fails with [`Error::Unphysical`] unless `chi` is physical at `tol`.
    pub fn validated(chi: HermitianOperator4, tol: f64) -> Result<Self> {
        if is_physical(&chi, tol) {
            Ok(ProcessMatrix { chi, physical: Some(true) })
        } else {
            Err(Error::Unphysical { tol })
        }
    }

    pub fn chi(&self) -> &HermitianOperator4 {
        &self.chi
    }

    pub fn matrix(&self) -> &Matrix<4> {
        self.chi.matrix()
    }

    pub fn physical(&self) -> Option<bool> {
        self.physical
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        is_physical(&self.chi, tol)
    }

    pub fn trace(&self) -> f64 {
        self.chi.trace()
    }
}

impl From<HermitianOperator4> for ProcessMatrix {
    fn from(chi: HermitianOperator4) -> Self {
        ProcessMatrix::new(chi)
    }
}

/// χ ⪰ 0 and `0 ≤ Tr(χ) ± F ≤ 1`, each at `tol`.
fn is_physical(chi: &HermitianOperator4, tol: f64) -> bool {
    let g = constraints::general_values_raw(chi.matrix());
    is_psd(chi, tol) && g.upper <= 1.0 + tol && g.lower >= -tol
}

/// Positive semidefinite 2×2 state with trace in `[0, 1]`; traces below one
/// describe loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    rho: HermitianOperator2,
}

impl DensityMatrix {
    pub fn new(rho: HermitianOperator2) -> Result<Self> {
        if !is_psd(&rho, DENSITY_TOL) {
            return Err(Error::InvalidDensity("not positive semidefinite"));
        }
        let tr = rho.trace();
        if !(-DENSITY_TOL..=1.0 + DENSITY_TOL).contains(&tr) {
            return Err(Error::InvalidDensity("trace outside [0, 1]"));
        }
        Ok(DensityMatrix { rho })
    }

    pub fn from_matrix(m: Matrix<2>) -> Result<Self> {
        Self::new(Hermitian::new(m)?)
    }

    /// `|ψ⟩⟨ψ|` for a normalized `ψ`.
    pub fn pure(psi: [C64; 2]) -> Result<Self> {
        let norm = sqrt(psi[0].norm_sqr() + psi[1].norm_sqr());
        if !(norm - 1.0).abs().le(&1e-12) {
            return Err(Error::InvalidDensity("state vector is not normalized"));
        }
        let mut m = Matrix::zeros();
        for j in 0..2 {
            for k in 0..2 {
                m.0[j][k] = psi[j] * psi[k].conj();
            }
        }
        Ok(DensityMatrix { rho: Hermitian::symmetrize(m) })
    }

    /// Pure state with Bloch vector `b` (‖b‖ = 1), or mixed when ‖b‖ < 1.
    pub fn from_bloch(b: [f64; 3]) -> Result<Self> {
        let mut m = PAULI[0];
        for (k, &bk) in b.iter().enumerate() {
            m = m + PAULI[k + 1].scale(bk);
        }
        Self::new(Hermitian::symmetrize(m.scale(0.5)))
    }

    pub fn ground() -> Self {
        DensityMatrix { rho: Hermitian::diagonal([1.0, 0.0]) }
    }

    pub fn excited() -> Self {
        DensityMatrix { rho: Hermitian::diagonal([0.0, 1.0]) }
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix { rho: Hermitian::diagonal([0.5, 0.5]) }
    }

    pub fn rho(&self) -> &HermitianOperator2 {
        &self.rho
    }

    pub fn matrix(&self) -> &Matrix<2> {
        self.rho.matrix()
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace()
    }
}

/// χ_mn = Σ_i e_im conj(e_in).
pub fn chi_from_kraus(k: &KrausSet) -> ProcessMatrix {
    let mut chi = Matrix::<4>::zeros();
    for e in k.pauli_coefficients() {
        for m in 0..4 {
            for n in 0..4 {
                chi.0[m][n] += e[m] * e[n].conj();
            }
        }
    }
    ProcessMatrix::assessed(Hermitian::symmetrize(chi))
}

/// Σ E ρ E†.
pub fn apply_kraus(k: &KrausSet, rho: &DensityMatrix) -> DensityMatrix {
    let out = k.operators.iter().fold(Matrix::zeros(), |acc, e| acc + *e * *rho.matrix() * e.adjoint());
    DensityMatrix { rho: Hermitian::symmetrize(out) }
}

/// Σ χ_mn σ_m ρ σ_n, refusing process matrices that are not physical.
pub fn apply_channel(chi: &ProcessMatrix, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let physical = chi.physical.unwrap_or_else(|| chi.is_physical(DEFAULT_TOL));
    if !physical {
        return Err(Error::Unphysical { tol: DEFAULT_TOL });
    }
    let out = apply_channel_unchecked(chi.chi(), rho.matrix());
    DensityMatrix::new(out)
}

/// Σ χ_mn σ_m ρ σ_n for any Hermitian χ and ρ; the result need not be a
/// valid state.
pub fn apply_channel_unchecked(chi: &HermitianOperator4, rho: &Matrix<2>) -> HermitianOperator2 {
    let mut out = Matrix::<2>::zeros();
    for m in 0..4 {
        let left = PAULI[m] * *rho;
        for n in 0..4 {
            let c = chi.matrix().0[m][n];
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            out = out + (left * PAULI[n]).scale_complex(c);
        }
    }
    Hermitian::symmetrize(out)
}

/// `Tr(E(ρ)) = Tr(P ρ)`.
pub fn output_trace(chi: &ProcessMatrix, rho: &DensityMatrix) -> f64 {
    let p = constraints::p_matrix(chi);
    (*p.matrix() * *rho.matrix()).trace().re
}

pub fn hadamard_chi() -> ProcessMatrix {
    let mut chi = Matrix::<4>::zeros();
    for (j, k) in [(1, 1), (1, 3), (3, 1), (3, 3)] {
        chi.0[j][k] = C64::new(0.5, 0.0);
    }
    ProcessMatrix::assessed(Hermitian::symmetrize(chi))
}

/// Polarizer passing `cos θ |0⟩ + sin θ |1⟩`.
pub fn polarizer_chi(theta: f64) -> ProcessMatrix {
    let (s2, c2) = (sin(2.0 * theta), cos(2.0 * theta));
    let s4 = sin(4.0 * theta);
    let chi = Matrix::from_real([
        [0.25, s2 / 4.0, 0.0, c2 / 4.0],
        [s2 / 4.0, s2 * s2 / 4.0, 0.0, s4 / 8.0],
        [0.0, 0.0, 0.0, 0.0],
        [c2 / 4.0, s4 / 8.0, 0.0, c2 * c2 / 4.0],
    ]);
    ProcessMatrix::assessed(Hermitian::symmetrize(chi))
}

/// Loss model `(1-p)ρ + (p/4)(I+σ·n)ρ(I+σ·n) - (ε/2)(ρ σ·n + σ·n ρ)`.
///
/// `epsilon` is the loss probability of the state aligned with `axis`; the
/// opposite state is lost with probability `p - epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageModelParams {
    p: f64,
    epsilon: f64,
    axis: [f64; 3],
}

impl LeakageModelParams {
    pub fn new(p: f64, epsilon: f64, axis: [f64; 3]) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument("leakage probability p must lie in [0, 1]"));
        }
        if !(0.0..=p / 2.0).contains(&epsilon) {
            return Err(Error::InvalidArgument("epsilon must lie in [0, p/2]"));
        }
        if !axis.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = sqrt(axis.iter().map(|x| x * x).sum());
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument("leakage axis must be a unit vector"));
        }
        Ok(LeakageModelParams { p, epsilon, axis })
    }

    pub fn z(p: f64, epsilon: f64) -> Result<Self> {
        Self::new(p, epsilon, [0.0, 0.0, 1.0])
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn axis(&self) -> [f64; 3] {
        self.axis
    }

    fn along_z(&self) -> bool {
        self.axis[0].abs() <= 1e-12 && self.axis[1].abs() <= 1e-12
    }
}

pub fn leakage_chi(params: &LeakageModelParams) -> Result<ProcessMatrix> {
    if params.epsilon > 0.0 && !params.along_z() {
        return Err(Error::UnsupportedCombination("ground-state leakage (epsilon > 0) is only defined for the z axis"));
    }
    let chi = leakage_family_matrix(params.p, params.epsilon, params.axis);
    Ok(ProcessMatrix::assessed(Hermitian::symmetrize(chi)))
}

// Closed form of the loss model for any (p, ε, n): χ₁₁ = 1 - 3p/4,
// χ₁,ₖ₊₁ = (p - 2ε)/4 · nₖ, χⱼ₊₁,ₖ₊₁ = (p/4) nⱼ nₖ.
pub(crate) fn leakage_family_matrix(p: f64, epsilon: f64, axis: [f64; 3]) -> Matrix<4> {
    let mut chi = Matrix::<4>::zeros();
    chi.0[0][0] = C64::new(1.0 - 3.0 * p / 4.0, 0.0);
    let linear = (p - 2.0 * epsilon) / 4.0;
    for j in 0..3 {
        let v = C64::new(linear * axis[j], 0.0);
        chi.0[0][j + 1] = v;
        chi.0[j + 1][0] = v;
        for k in 0..3 {
            chi.0[j + 1][k + 1] = C64::new(p / 4.0 * axis[j] * axis[k], 0.0);
        }
    }
    chi
}
