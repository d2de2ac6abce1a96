use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UsdError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalised (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("tensor power too large: {dim}^{copies} exceeds 2^24 amplitudes")]
    TensorTooLarge { dim: usize, copies: usize },

    #[error("integer overflow computing {0}")]
    Overflow(&'static str),

    #[error("states are linearly dependent (rank {rank} < {n})")]
    LinearlyDependent { rank: usize, n: usize },

    #[error("lemma premise violated: {0}")]
    LemmaPremise(LemmaPremise),

    #[error("witness construction gave up after {attempts} attempts: {reason}")]
    WitnessFailed { attempts: usize, reason: String },

    #[error("invalid measurement: {0}")]
    InvalidPovm(String),

    #[error("pairwise identifications disagree: pair said {first}, another pair said {second}")]
    InconsistentPairs { first: usize, second: usize },

    #[error("internal check failed: {0}")]
    Postcondition(String),
}

/// Which premise of the tensor-product independence lemma failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaPremise {
    CardinalityMismatch,
    PhisDependent,
    ChisNotDistinct,
    ChiNotDistinct,
    DimensionMismatch,
    Empty,
}

impl std::fmt::Display for LemmaPremise {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::CardinalityMismatch => "the two families have different cardinalities",
            Self::PhisDependent => "the first family is linearly dependent",
            Self::ChisNotDistinct => "the second family contains indistinct states",
            Self::ChiNotDistinct => "the extra state coincides with a member of the second family",
            Self::DimensionMismatch => "states of one family differ in dimension",
            Self::Empty => "families are empty",
        };
        f.write_str(s)
    }
}

pub type Result<T, E = UsdError> = std::result::Result<T, E>;
