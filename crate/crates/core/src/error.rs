use alloc::boxed::Box;

use crate::linalg::Matrix;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max |a_jk - conj(a_kj)| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid Kraus set: {0}")]
    InvalidKraus(&'static str),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(&'static str),

    #[error("process matrix is unphysical at tolerance {tol:e}")]
    Unphysical { tol: f64 },

    #[error("unsupported parameter combination: {0}")]
    UnsupportedCombination(&'static str),

    #[error("probe inputs do not determine the process (rank {rank} of 16): {inputs:?}")]
    RankDeficient { rank: usize, inputs: Box<[Matrix<2>; 4]> },
}
