use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("pair-conjugation symmetry violated (max deviation {deviation:e})")]
    PairSymmetry { deviation: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("mode index {index} out of range for a {n_modes}-mode state")]
    ModeOutOfRange { index: usize, n_modes: usize },

    #[error("block of mode {mode} is singular (|det| = {det:e})")]
    SingularBlock { mode: usize, det: f64 },

    #[error("state is unphysical: min eigenvalue of V + E/2 is {min_eig:e}")]
    Unphysical { min_eig: f64 },

    #[error("state is not symmetric (|I1 - I2| = {0:e}); entanglement of formation is only available for I1 = I2")]
    Asymmetric(f64),

    #[error("inconsistent reconstruction inputs: det(V1 - Gamma) = {0:e}")]
    Inconsistent(f64),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("Fock truncation overflow: population {0:e} pushed past the cutoff")]
    Truncation(f64),

    #[error("operator has zero trace")]
    ZeroTrace,

    #[error("input is not pure (purity {0})")]
    NotPure(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
