use crate::funcexpr::ParseError;

/// Errors raised by the calculus and its numerical kernel.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian (‖A − A*‖_F = {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not normal (‖A*A − AA*‖_F = {residual:e})")]
    NotNormal { residual: f64 },
    #[error("matrix is not self-adjoint over the reals (residual {residual:e})")]
    NotSelfAdjoint { residual: f64 },
    #[error("inputs {first} and {second} do not commute (‖[A,B]‖_F = {residual:e})")]
    NotCommuting {
        first: usize,
        second: usize,
        residual: f64,
    },
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("coordinate z{index} out of range for arity {arity}")]
    CoordinateOutOfRange { index: usize, arity: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("eigenvalue clustering is ambiguous: cluster diameter {diameter:e} exceeds 3·{delta:e}")]
    ClusterAmbiguity { diameter: f64, delta: f64 },
    #[error("subspace is not invariant: projection fails to commute with atom {atom} (residual {residual:e})")]
    NotInvariant { atom: usize, residual: f64 },
    #[error("matrix is not an orthogonal projection (residual {residual:e})")]
    NotProjection { residual: f64 },
    #[error("matrix is numerically singular")]
    NotInvertible,
    #[error("regularizer vanishes at positive-weight atom {index}")]
    RegularizerVanishes { index: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("atom {atom} has t-coordinate {t:e} outside (0, 1]")]
    BadAtom { atom: usize, t: f64 },
    #[error("Chebyshev degree too small: grid error {error:e} exceeds target {target:e}")]
    DegreeTooSmall { error: f64, target: f64 },
    #[error("invalid input: {0}")]
    Invalid(&'static str),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
