use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chain size {n}: at least 2 dots are required")]
    InvalidSize { n: usize },

    #[error("center detuning requires an odd number of dots, got {n}")]
    InvalidDetuning { n: usize },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("energy {omega} lies outside the lead band |ω| < 2·t0 (t0 = {t0})")]
    OmegaOutsideBand { omega: f64, t0: f64 },

    #[error("matrix is singular (pivot magnitude {pivot:e})")]
    SingularMatrix { pivot: f64 },

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    EigenFailure { iterations: usize },

    #[error("molecular couplings require all four chain-lead magnitudes to be equal")]
    UnsupportedCouplingPattern,

    #[error("a chain of {n} dots has no inner sub-chain")]
    NoInnerChain { n: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::OmegaOutsideBand { .. }
            | Error::SingularMatrix { .. }
            | Error::EigenFailure { .. } => 3,
            _ => 2,
        }
    }
}
