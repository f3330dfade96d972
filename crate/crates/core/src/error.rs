use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid strand count {0}: need n >= 2")]
    InvalidStrandCount(usize),
    #[error("alphabet mismatch: B_{left} vs B_{right}")]
    AlphabetMismatch { left: u16, right: u16 },
    #[error("generator out of range: {letter} not in 1..={max}")]
    GeneratorOutOfRange { letter: i64, max: u16 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a permutation braid")]
    NotPermutationBraid,
    #[error("unsupported complement shape: {0}")]
    UnsupportedComplementShape(String),
    #[error("cache invalid: {0}")]
    CacheInvalid(String),
    #[error("m out of supported range: m={m}, last letter {last}, n={n}")]
    MOutOfRange { m: usize, last: u16, n: u16 },
    #[error("malformed forbidden set: {0}")]
    MalformedForbiddenSet(String),
    #[error("too many forbidden prefixes for reference path: {count} > {bound}")]
    TooManyForbiddenPrefixes { count: usize, bound: usize },
    #[error("rank out of range")]
    RankOutOfRange,
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("not a lex-representative")]
    NotLexRepresentative,
    #[error("word too long for oracle: length {len} > {bound}")]
    WordTooLongForOracle { len: usize, bound: usize },
    #[error("oracle bound exceeded: {0}")]
    OracleBoundExceeded(String),
    #[error("witness bound exceeded: n={n} > {bound}")]
    WitnessBoundExceeded { n: u16, bound: u16 },
    #[error(
        "automaton for n={n} exceeds the ceiling {ceiling}; the state count grows exponentially in n"
    )]
    AutomatonTooLarge { n: u16, ceiling: u16 },
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("growth tables cover n={n}, k<={k_max}; requested n={req_n}, k={req_k}")]
    TablesTooSmall {
        n: u16,
        k_max: usize,
        req_n: u16,
        req_k: usize,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
