use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Library-wide error type. Every variant names the invariant it violates.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid mismatch: operands must share the same lattice (L, p, q)")]
    GridMismatch,

    #[error("invalid lattice: L, p and q must all be positive")]
    InvalidLattice,

    #[error("incompatible dilation {num}/{den}: L*den/num must be a positive integer")]
    IncompatibleDilation { num: i64, den: i64 },

    #[error("expected a real-valued periodic function, max |Im| = {max_imag:.3e}")]
    NotRealValued { max_imag: f64 },

    #[error("input {0} is a-dependent on its predecessors (residual a-norm below tolerance)")]
    ADependent(usize),

    #[error("window signal is identically zero")]
    ZeroWindow,

    #[error("operator is not a-factorable: modulation commutation residual {residual:.3e} > {tol:.3e}")]
    NotFactorable { residual: f64, tol: f64 },

    #[error("family is not a-orthonormal: residual {residual:.3e} > {tol:.3e}")]
    NotOrthonormal { residual: f64, tol: f64 },

    #[error("modulation index {m} outside the grid-distinct range 0..{q}")]
    IndexOutOfRange { m: i64, q: i64 },

    #[error("critical-density analysis requires ab = 1 exactly (p == q); got p = {p}, q = {q}")]
    LatticeNotCritical { p: i64, q: i64 },

    #[error("iteration did not converge within {0} steps")]
    NotConverged(usize),

    #[error("frame operator is numerically singular (lambda_min estimate {lambda_min:.3e})")]
    SingularFrameOperator { lambda_min: f64 },

    #[error("probe set is empty")]
    EmptyProbeSet,

    #[error("invalid signal JSON: {0}")]
    BadSignalJson(String),
}
