//! Exact computer algebra for quadratically enriched intersection counts.
//!
//! The library computes, over prime fields, their extensions, and the
//! rationals:
//!
//! - Grothendieck-Witt classes of symmetric bilinear forms: congruence
//!   diagonalization, rank/discriminant invariants, Witt reduction, and
//!   transfers along finite field extensions ([`gw`], [`linalg`]);
//! - the Euler number of the excess bundle for `n` quadrics in projective
//!   n-space containing a fixed plane, as an explicit bilinear form built from
//!   a matrix of linear forms and a socle trace functional ([`excess`]);
//! - an independent verification of that number by exhaustive enumeration of
//!   the isolated intersection points over small finite fields, with local
//!   Jacobian indices and trace-form transfers ([`oracle`]);
//! - residual-intersection data for homogeneous ideals: saturations, ideal
//!   quotients, modified Koszul homology, and the multiplication form
//!   `I/J x I/J -> I^2/JI` ([`ideals`], [`residual`]).
//!
//! Everything is exact; there is no floating point anywhere. See the crate's
//! `examples/` directory for runnable entry points, and the `gw-excess` binary
//! for a batch CLI over the same functionality.

pub mod excess;
pub mod field;
pub mod gw;
pub mod ideals;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod report;
pub mod residual;


pub use excess::{ExcessInput, ExcessReport};
pub use field::{Elem, Field, FieldKind};
pub use gw::{Equality, GwClass, GwInvariants};
pub use linalg::DenseMatrix;
pub use oracle::{ClosedPoint, OracleStatus, OracleVerdict};
pub use poly::{GradedBasis, Monomial, Poly, PolyMatrix};

/// Library-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero input to {0}")]
    ZeroInput(&'static str),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported for bilinear forms")]
    CharacteristicTwo,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("inadmissible input: {0}")]
    Inadmissible(String),
    #[error("saturation did not stabilize within {0} colon steps")]
    NoStabilization(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
