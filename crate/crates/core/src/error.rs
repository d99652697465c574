use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("Jacobi diagonalisation did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("eigenvalue {eigenvalue} is outside the domain of the spectral function")]
    DomainViolation { eigenvalue: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("test functions live on different lattices")]
    LatticeMismatch,
    #[error("shift window exceeds the lattice: {needed} cells needed, {cells} available")]
    LatticeOverflow { needed: usize, cells: usize },
    #[error("symbol is not admissible: {0}")]
    SymbolNotAdmissible(String),
    #[error("support violation: {0}")]
    SupportViolation(String),
    #[error("truncation bound {bound:.3e} exceeds tolerance {tolerance:.3e}")]
    TruncationBudgetExceeded { bound: f64, tolerance: f64 },
    #[error("operator is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("vector has non-real coefficients")]
    NotReal,
    #[error("symbol is not diagonal")]
    NotDiagonal,
    #[error("too many fermionic modes: {modes} (limit {limit})")]
    TooManyModes { modes: usize, limit: usize },
    #[error("operator is not positive definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("operator is not block-Toeplitz (deviation {deviation:.3e})")]
    NotToeplitz { deviation: f64 },
    #[error("value {value} is out of domain: {reason}")]
    OutOfDomain { value: f64, reason: &'static str },
    #[error("symbol spectrum is empty")]
    EmptySpectrum,
    #[error("cannot compare a finite-rank symbol with an infinite-rank one")]
    IncomparableSpecs,
    #[error("operator is not symplectic (residual {residual:.3e})")]
    NotSymplectic { residual: f64 },
    #[error("relation R1 = Z*R2Z violated (residual {residual:.3e})")]
    RelationViolated { residual: f64 },
    #[error("generators do not lie in the ambient algebra (residual {residual:.3e})")]
    NotSubalgebra { residual: f64 },
    #[error("invalid symbol spec: {0}")]
    InvalidSpec(String),
}
