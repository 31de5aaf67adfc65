use thiserror::Error;

use crate::Q;

/// Every failure the library can report.
///
/// Verification failures (degree mismatch, oracle residual below floor) are
/// *not* errors: they are carried inside reports so that callers always get
/// the full diagnostics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable x{index} out of range for n = {n} (position {pos})")]
    VariableOutOfRange { index: usize, n: usize, pos: usize },
    #[error("coefficient not in field: {0}")]
    NotInField(String),
    #[error("face is not a face of this polynomial's Newton polyhedron")]
    ForeignFace,
    #[error("negative exponent in specialized coordinate x{0}")]
    NegativeExponent(usize),
    #[error("pole in affine coordinate x{0}")]
    PoleInAffine(usize),
    #[error("axis index {0} out of range")]
    AxisOutOfRange(usize),
    #[error("support spans only the origin")]
    DegenerateGeometry,
    #[error("polytope has dimension {dim} < {n}")]
    LowerDimensional { dim: usize, n: usize },
    #[error("vector is outside the cone")]
    OutsideCone,
    #[error("no weight-additive decomposition over the semigroup generators")]
    NoDecomposition,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("enumeration of {points} points exceeds cap {cap}")]
    EnumerationCap { points: u128, cap: u128 },
    #[error("p^N too large for 63-bit residues (p = {p}, N = {prec})")]
    PrecisionTooLarge { p: u64, prec: u32 },
    #[error("element is not a unit")]
    NotUnit,
    #[error("division not exact at current precision")]
    InexactDivision,
    #[error("iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("splitting coefficients up to index {requested} requested, only {available} available")]
    InsufficientCoefficients { requested: usize, available: usize },
    #[error("weight cutoff {given} too small; certification needs W >= {required}")]
    Certification { given: Q, required: Q },
    #[error("cutoff mismatch: {0}")]
    CutoffMismatch(String),
    #[error("exp requires zero constant term and positive decay")]
    ExpDomain,
    #[error("non-integral L-series coefficient at t^{0}")]
    NonIntegral(usize),
    #[error("stratum {stratum:?}: {source}")]
    Stratum { stratum: Vec<usize>, source: Box<Error> },
    #[error("i/o: {0}")]
    Io(String),
    #[error("bad matrix dump: {0}")]
    BadDump(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
