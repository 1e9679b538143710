use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty word")]
    EmptyWord,
    #[error("invalid letter {0:?} at position {1} (expected 'a' or 'b')")]
    InvalidLetter(char, usize),
    #[error("invalid line parameters: {0}")]
    InvalidParams(String),
    #[error("word has {got_a} a's and {got_b} b's, instance needs {want_a} and {want_b}")]
    LetterCounts {
        got_a: usize,
        got_b: usize,
        want_a: usize,
        want_b: usize,
    },
    #[error("site index {index} out of range for {topology} of length {tot}")]
    IndexOutOfRange {
        index: usize,
        tot: usize,
        topology: &'static str,
    },
    #[error("cannot flip at {0}: adjacent letters are equal")]
    EqualLetters(usize),
    #[error("sight must be at least 2, got {0}")]
    SightTooSmall(usize),
    #[error("energy undefined: h_max(c0) = {h_max} is below per = {per}")]
    EnergyHypothesis { h_max: i64, per: i64 },
    #[error("expected drift undefined for a configuration with zero energy")]
    ZeroEnergy,
    #[error("instance has {states} configurations, above the enumeration cap {cap}")]
    EnumerationCap { states: u128, cap: usize },
    #[error("configuration does not belong to this instance")]
    ForeignConfiguration,
    #[error("snapshot for step {0} not present in trace")]
    MissingSnapshot(u64),
    #[error("instance too large to render: {0}")]
    RenderSize(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("trace format: {0}")]
    TraceFormat(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
