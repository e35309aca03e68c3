use crate::sequence::Case;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime below 2^31")]
    InvalidModulus(u64),

    #[error("zero has no multiplicative order")]
    ZeroHasNoOrder,

    #[error("element is not a root of unity of order {group_order}; wrong group order")]
    WrongGroupOrder { group_order: u64 },

    #[error("operation needs {expected}, parameters are in case {actual:?}")]
    WrongCase {
        expected: &'static str,
        actual: Case,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("period matrix has {entries} entries, above the cap of {cap}")]
    MatrixTooLarge { entries: u64, cap: u64 },

    #[error(
        "fast verdict ({fast}) disagrees with scan verdict ({scan}) for [{p_coef},{q_coef}] mod {modulus}"
    )]
    Disagreement {
        p_coef: i64,
        q_coef: i64,
        modulus: u64,
        fast: bool,
        scan: bool,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
