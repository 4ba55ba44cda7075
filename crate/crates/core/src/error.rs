use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("form is not negative definite")]
    NotDefinite,
    #[error("form is not unimodular")]
    NotUnimodular,
    #[error("group has a free part; expected a torsion group")]
    NotTorsion,
    #[error("lattice has rank 0")]
    EmptyLattice,
    #[error("class has non-negative square {0}")]
    NonNegativeSquare(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("P~_l has odd cardinality {0}; it must be closed under negation")]
    OddTildeCount(usize),
    #[error("cardinality identity violated: {0}")]
    IdentityViolation(String),
    #[error("boundary maps do not compose to zero in degree {degree}")]
    NotAComplex { degree: usize },
    #[error("exactness violated: {0}")]
    ExactnessViolation(String),
    #[error("unknown model {0:?}")]
    UnknownModel(String),
    #[error("local system {0:?} is trivial")]
    TrivialSystem(String),
    #[error("unknown local system {0:?}")]
    UnknownSystem(String),
    #[error("surgery circle is zero in H_1(-; Z/2)")]
    ZeroMod2Class,
    #[error("delta = {0} is positive; nothing to reduce")]
    PositiveDelta(i64),
    #[error("record {0:?} has boundary; a closed manifold is required")]
    BoundaryRecord(String),
    #[error("invalid record: {0}")]
    InvalidRecord(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
