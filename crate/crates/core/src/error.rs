use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("loop at vertex {0}: loops are not allowed")]
    Loop(usize),

    #[error("graphs have different vertex counts ({left} vs {right})")]
    VertexCountMismatch { left: usize, right: usize },

    #[error("cannot remove a copy of ({tail}, {head}): no copies left")]
    Underflow { tail: usize, head: usize },

    #[error("vertex {vertex} has odd degree {degree}")]
    OddDegree { vertex: usize, degree: usize },

    #[error("graph is not regular")]
    NotRegular,

    #[error("pair ({tail}, {head}) has multiplicity {found}, above the bound {bound}")]
    MultiplicityExceeded {
        tail: usize,
        head: usize,
        found: u32,
        bound: u32,
    },

    #[error("operation requires a simple graph, found multiplicity {0}")]
    NotSimple(u32),

    #[error("vertex {vertex} has degree {degree}, below the required {required}")]
    DegreeTooLow {
        vertex: usize,
        degree: usize,
        required: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph on {n} vertices exceeds the search limit of {max}")]
    TooLarge { n: usize, max: usize },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
