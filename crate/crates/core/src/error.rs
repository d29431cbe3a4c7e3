use thiserror::Error;

use crate::lie::Sign;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no valid phi for n={n}, l={l}, epsilon={epsilon}")]
    InvalidConfig { n: usize, l: usize, epsilon: Sign },

    #[error("index {index} is not in the index set of size {size}")]
    IndexOutOfRange { index: i32, size: usize },

    #[error("operands belong to different algebras")]
    MismatchedAlgebra,

    #[error("degree of the zero element is undefined")]
    ZeroElement,

    #[error("element is not supported on {0}")]
    OutsideSubalgebra(&'static str),

    #[error("homomorphism has no image for generator f_{{{0},{1}}}")]
    OutsideDomain(i32, i32),

    #[error("labeling violates pyramid constraints: {0}")]
    InvalidLabeling(String),

    #[error("character table disagrees with the trace formula on f_{{{a},{b}}}: table {table}, trace {trace}")]
    ChiMismatch {
        a: i32,
        b: i32,
        table: String,
        trace: String,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("lemma hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("unknown suite {0:?}")]
    UnknownSuite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
