use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid constellation: {0}")]
    InvalidConstellation(String),

    #[error("matrix is not Hermitian (max asymmetry {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("Gram matrix has eigenvalue {value:.3e} below the clamp threshold; not a state Gram")]
    NegativeEigenvalue { value: f64 },

    #[error("square-root measurement undefined: constellation is fully degenerate")]
    DegenerateSrm,

    #[error("channel matrix is not row-stochastic (row {row} sums to {sum})")]
    NotStochastic { row: usize, sum: f64 },

    #[error("outcome {outcome} has zero probability under every input; log undefined")]
    ZeroColumn { outcome: usize },

    #[error("mean photon number {got} exceeds the Fock oracle scale limit {limit}")]
    FockScale { got: f64, limit: f64 },

    #[error("rate not supported: exponent {exponent:.3e} is not positive at this rate")]
    RateNotSupported { exponent: f64 },

    #[error("transform is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("LFSR seed must be nonzero in the register bits")]
    ZeroSeed,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported scenario: {0}")]
    Unsupported(String),
}
