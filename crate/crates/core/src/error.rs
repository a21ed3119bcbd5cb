use thiserror::Error;

use crate::algebra::AlgebraId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot combine elements of the {left} and the {right}")]
    MixedAlgebra { left: AlgebraId, right: AlgebraId },

    #[error("rank mismatch: expected {expected}, got {actual}")]
    RankMismatch { expected: usize, actual: usize },

    #[error("hermitian form is not hermitian at entry ({row}, {col})")]
    NotHermitianForm { row: usize, col: usize },

    #[error("not a pseudo-inverse: {0}")]
    NotPseudoInverse(String),

    #[error("element {0} is not in the certified set of regular elements")]
    IrregularDenominator(String),

    #[error("Koszul equation fails for (a, b, c) = ({a}, {b}, {c}): residual {residual}")]
    KoszulUnsatisfied { a: usize, b: usize, c: usize, residual: String },

    #[error("{0} has no representative in the base algebra")]
    NotLiftable(String),

    #[error("not divisible by {divisor}: {witness}")]
    NotDivisible { divisor: &'static str, witness: String },

    #[error("element is not in the tangent module")]
    NotInTangentModule,

    #[error("cannot expand element in the frame: {0}")]
    NotExpandable(String),

    #[error("derivation brackets are not closed on the basis: [{a}, {b}]")]
    NotClosed { a: String, b: String },

    #[error("localization is only defined over the sphere")]
    UnsupportedAlgebra,

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown target `{0}` (expected `torus` or `sphere`)")]
    UnknownTarget(String),

    #[error("invalid matrix representation: {0}")]
    InvalidRepresentation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
