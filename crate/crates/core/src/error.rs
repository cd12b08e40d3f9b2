use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("defining polynomial is not irreducible")]
    NotIrreducible,
    #[error("moduli are not pairwise coprime")]
    NonCoprimeModuli,
    #[error("element is not in the subgroup generated by the base")]
    NotInSubgroup,
    #[error("points belong to different backends or fields")]
    BackendMismatch,
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("singular curve")]
    SingularCurve,
    #[error("torsion field too large; pick another l' (l' = {0})")]
    TorsionFieldTooLarge(u64),
    #[error("l' = {0} equals the characteristic")]
    CharacteristicPrime(u64),
    #[error("sampling budget exhausted: {0}")]
    SamplingExhausted(String),
    #[error("point is not {0}-torsion")]
    NotTorsion(u64),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{0}` is not defined over this field; extend the field")]
    GeneratorUndefined(String),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("heuristic bound exceeded: {0}")]
    HeuristicBound(String),
    #[error("backend cannot instantiate noncommuting setup")]
    SetupExhausted,
    #[error("instance not in class: {0}")]
    NotInClass(String),
    #[error("degenerate; retry with new samples: {0}")]
    Degenerate(String),
    #[error("element not in center")]
    NotInCenter,
    #[error("description insufficient or instance not in class")]
    DescriptionInsufficient,
    #[error("need more samples")]
    NeedMoreSamples,
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("pairing support collision persisted after retries")]
    SupportCollision,
    #[error("i/o: {0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidData(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
