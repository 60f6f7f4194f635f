//! Normal completions and normal-defect bounds for complex matrices.
//!
//! A square matrix `A` is *normal* when it commutes with its adjoint,
//! `AA* = A*A`. Every non-normal `A` embeds as the leading principal block of
//! some larger normal matrix; the smallest possible size increase is the
//! *normal defect* `nd(A)`. This crate computes the classical bracket
//!
//! ```text
//! max(i+[A,A*], i-[A,A*])  <=  nd(A)  <=  rank(‖A‖² I - A*A)
//! ```
//!
//! (where `i±` count positive/negative eigenvalues of the commutator
//! `[A,A*] = AA* - A*A`), and it constructs completions:
//!
//! * [`superdiag`] — closed-form minimal completions for 4x4 matrices whose
//!   only nonzero entries sit on the superdiagonal, classified into the
//!   ε = 0, 1, 2, 3 cases, plus three n×n generalizations.
//! * [`cyclic`] — the two-level characterization of cyclic weighted shifts
//!   with `nd = ε = 1`, its certificate data, and the (n+1)-size completion.
//! * [`blockdiag`] — defect composition for block-diagonal matrices.
//! * [`search`] — multi-restart Levenberg–Marquardt search for size-(n+k)
//!   completions by driving the commutator residual to zero.
//! * [`defect`] — bounds, normality residuals, the universal `[[A,A*],[A*,A]]`
//!   completion, and a scaled-unitary completion realizing the rank upper
//!   bound.
//!
//! Matrices travel as [`matrix::ComplexMatrix`] (dense, row-major, binary64
//! components). The `normdefect` binary exposes the same operations over JSON
//! matrix files; the `examples/` directory shows one runnable program per
//! capability.

pub mod blockdiag;
pub mod cli;
pub mod completion;
pub mod cyclic;
pub mod defect;
pub mod fixtures;
pub mod io;
pub mod matrix;
pub mod report;
pub mod search;
pub mod superdiag;

#[cfg(test)]
pub(crate) mod testkit;

pub use completion::{CompletionResult, ExtensionBlocks};
pub use matrix::{ComplexMatrix, Inertia};

use thiserror::Error;

/// Default relative tolerance for classification and boolean checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("entry count {found} does not match {rows}x{cols}")]
    BadLength {
        rows: usize,
        cols: usize,
        found: usize,
    },
    #[error("negative tolerance {0}")]
    NegativeTolerance(f64),
    #[error("matrix is not Hermitian within tolerance (relative asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("case mismatch: constructor for {expected} got a {found} triple")]
    CaseMismatch { expected: String, found: String },
    #[error("construction precondition violated: {0}")]
    ConditionViolated(String),
    #[error("cyclic shift requires size >= 4 (got {0})")]
    ShiftTooSmall(usize),
    #[error("verdict does not certify a defect-one completion ({0})")]
    VerdictDoesNotHold(String),
    #[error("normal defect of block {index} is not derivable: {reason}")]
    UnderivableBlock { index: usize, reason: String },
    #[error("input completion {index} is not normal (residual {residual:.3e})")]
    NotNormal { index: usize, residual: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("method not applicable: {0}")]
    MethodInapplicable(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
