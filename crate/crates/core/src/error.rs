use thiserror::Error;

/// Errors raised by symbol, oracle, entropy and channel operations.
///
/// Numeric payloads are reported in double precision regardless of the
/// scalar type the computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("symbol spectrum leaves [0, 1] (eigenvalue {eigenvalue:.6e})")]
    SpectrumOutOfRange { eigenvalue: f64 },

    #[error("mixture is not quasi-free: difference of symbols has rank {rank}")]
    NotQuasiFreeMixture { rank: usize },

    #[error("mixing weight {0} is outside (0, 1)")]
    InvalidWeight(f64),

    #[error("vectors are not orthonormal (max Gram deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    #[error("zero vector")]
    ZeroVector,

    #[error("vector has weight outside particle sector {sector}")]
    NotInSector { sector: usize },

    #[error("dense oracle refuses {modes} modes (cap {cap})")]
    DimensionCap { modes: usize, cap: usize },

    #[error("state is not even (max commutator with parity {deviation:.3e})")]
    NotEvenState { deviation: f64 },

    #[error("invalid entropy order p = {0}")]
    InvalidOrder(f64),

    #[error("kernel inclusion violated: relative entropy is infinite")]
    KernelConditionViolated,

    #[error("channel is not completely positive (violating eigenvalue {eigenvalue:.6e})")]
    NotCompletelyPositive { eigenvalue: f64 },

    #[error("closed form needs an invertible pivot (condition number {condition:.3e})")]
    SingularPivot { condition: f64 },

    #[error("B is singular (condition number {condition:.3e}); closed Choi form does not apply")]
    SingularB { condition: f64 },

    #[error("no environment symbol reproduces B (residual {residual:.3e})")]
    InconsistentB { residual: f64 },

    #[error("non-finite value in input")]
    NonFinite,

    #[error("linear algebra backend failed: {0}")]
    Backend(String),
}

pub type Result<T> = std::result::Result<T, Error>;
