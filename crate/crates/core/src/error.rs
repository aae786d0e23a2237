use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed cycle notation: {0}")]
    MalformedCycles(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("the pair (h, v) does not act transitively")]
    RequiresTransitive,
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("degenerate surface: {0}")]
    DegenerateSurface(String),
    #[error("degenerate skew form")]
    DegenerateForm,
    #[error("origami is not fixed by {0} up to relabeling")]
    NotInVeechGroup(char),
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("galois group undecided, candidate orders {candidates:?}")]
    Undecided { candidates: Vec<u64> },
    #[error("matrix does not preserve the form: {0}")]
    FormViolation(String),
    #[error("waist classes are not pairwise orthogonal")]
    NotParallel,
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("no witness found up to word length {depth}")]
    NoWitnessFound { depth: usize },
    #[error("form admits no invariant unimodular overlattice: divisors {0:?}")]
    NotUnimodularizable(Vec<String>),
    #[error("i/o: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
