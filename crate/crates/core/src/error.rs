use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("n = {n} is outside the supported range {min}..={max}")]
    SizeOutOfRange { n: usize, min: usize, max: usize },

    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),

    #[error("generator b_{index} does not exist for n = {n}")]
    GeneratorOutOfRange { index: usize, n: usize },

    #[error("rank {rank} is out of range for n = {n}")]
    RankOutOfRange { rank: u64, n: usize },

    #[error("permutations of different sizes: {0} and {1}")]
    SizeMismatch(usize, usize),

    #[error("malformed form: {0}")]
    MalformedForm(String),

    #[error("malformed cycle: {0}")]
    MalformedCycle(String),

    #[error("unsupported cycle length {0}; only 4 and 6 are enumerated")]
    UnsupportedLength(usize),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("endpoints {0} and {1} have the same parity")]
    SameParity(String, String),

    #[error("vertex {vertex} is not in prism {prism}")]
    NotInPrism { vertex: String, prism: String },

    #[error("prisms {0} and {1} are not adjacent in the factor graph")]
    NotAdjacent(String, String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("base cycle rejected: {0}")]
    BadBase(String),

    #[error("construction failed in prism #{index}: {source}")]
    InPrism {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
