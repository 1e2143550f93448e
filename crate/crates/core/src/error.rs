use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure carries a witness that reproduces it.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("image row {row} is not contained in the kernel span (d o d != 0 upstream)")]
    ContainmentViolation { row: usize },

    #[error("variable specifications do not match")]
    VarSpecMismatch,
    #[error("divided powers undefined: image of {var} has a unit constant term")]
    SubstitutionOutsideIdeal { var: String },
    #[error("not divisible at monomial {monomial}")]
    NotDivisible { monomial: String },

    #[error("simplicial identity violated: {0}")]
    IdentityViolation(String),
    #[error("boundary kernel mismatch at level {m}: witness {witness}")]
    KernelMismatch { m: usize, witness: String },
    #[error("regularity failure for {element}: witness {witness}")]
    RegularityFailure { element: String, witness: String },
    #[error("incompatible faces: {0}")]
    IncompatibleFaces(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("jacobian witness is not invertible: {0}")]
    WitnessNotInvertible(String),
    #[error("Newton iteration stalled: {0}")]
    NewtonStall(String),
    #[error("morphisms are not congruent mod p: generator {generator}")]
    NotCongruent { generator: String },

    #[error("caps too small: {0}")]
    CapsTooSmall(String),
    #[error("cohomology mismatch in degree {degree}, graded piece {graded}: {left} vs {right}")]
    MismatchWitness { degree: i64, graded: String, left: String, right: String },
    #[error("pi-torsion witness in form degree {degree}: {witness}")]
    TorsionWitness { degree: usize, witness: String },
    #[error("base change mismatch: {0}")]
    BaseChangeMismatch(String),
    #[error("not a cover: {0}")]
    NotACover(String),

    #[error("total differential does not square to zero in degree {0}")]
    SignConventionViolation(i64),
    #[error("comparison failure in degree {degree}, graded degree {graded}: {left} vs {right}")]
    ComparisonFailure { degree: i64, graded: i64, left: String, right: String },
    #[error("catalog mismatch for {algebra} in degree {degree}, graded degree {graded}: expected {expected}, got {got}")]
    CatalogMismatch { algebra: String, degree: i64, graded: i64, expected: String, got: String },
}
