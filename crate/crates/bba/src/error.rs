use crate::blackbox::Op;
use crate::element::CryptoElement;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("signature does not declare {0:?}")]
    MissingOperation(Op),

    #[error("{op:?} takes {expected} arguments, got {got}")]
    Arity { op: Op, expected: usize, got: usize },

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("inverse is undefined at zero")]
    UndefinedInverse,

    #[error("element does not belong to this box")]
    ForeignElement,

    #[error("element order exceeds bound {0}")]
    OrderBoundExceeded(u64),

    #[error("closure exceeds cap {cap} ({} elements collected)", partial.len())]
    CapExceeded {
        cap: u64,
        partial: Vec<CryptoElement>,
    },

    #[error("generator list is empty")]
    EmptyGenerators,

    #[error("redefined equality is not a congruence: {0}")]
    CongruenceViolation(String),

    #[error("action is not by automorphisms: {0}")]
    ActionViolation(String),

    #[error("proto-involution system is inconsistent")]
    InconsistentSystem,

    #[error("proto-involution is not conjugation by an element of the box")]
    NotInner,

    #[error("claimed characteristic {0} does not annihilate the unit")]
    CharacteristicMismatch(u64),

    #[error("discrete logarithm of zero is undefined")]
    DiscreteLogOfZero,

    #[error("no discrete logarithm found; the base may not generate")]
    NoDiscreteLog,

    #[error("sampler produced no element of degree {degree} in {attempts} attempts")]
    DegenerateSampler { degree: u32, attempts: u32 },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("the box does not encrypt the expected structure: {0}")]
    WrongStructure(String),

    #[error("known plaintexts leave {} candidate automorphisms: {}", survivors.len(), survivors.join(", "))]
    InsufficientPlaintext { survivors: Vec<String> },

    #[error("recognition inconsistent with every candidate automorphism")]
    RecognitionInconsistency,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
