use thiserror::Error;

use crate::complex::CellId;

pub type Result<T> = std::result::Result<T, Error>;

/// Why a set of pairs fails to be a discrete vector field.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("cell {cell} occurs in more than one pair")]
    NotAMatching { cell: CellId },
    #[error("{lower} is not an immediate face of {upper}")]
    NotIncidence { lower: CellId, upper: CellId },
    /// The cycle alternates k- and (k+1)-cells and repeats its first cell at the end.
    #[error("closed V-path through {} cells", .cycle.len().saturating_sub(1))]
    ClosedVPath { cycle: Vec<CellId> },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("complex has no facets")]
    EmptyComplex,
    #[error("facet {facet} is empty")]
    EmptyFacet { facet: usize },
    #[error("facet {facet} repeats vertex `{label}`")]
    DuplicateVertex { facet: usize, label: String },
    #[error("invalid vertex label `{0}`")]
    InvalidLabel(String),
    #[error("complex exceeds the limit of {limit} cells")]
    TooManyCells { limit: usize },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown catalog complex `{0}`")]
    UnknownCatalog(String),
    #[error("boundary dimension {k} out of range 1..={max}")]
    DimensionOutOfRange { k: usize, max: usize },
    #[error("operation needs dimension at most {max}, complex has dimension {dim}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("cells have different dimensions ({0} and {1})")]
    DimensionMismatch(usize, usize),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("not a combinatorial Morse function at cell {cell}")]
    NotMorse { cell: CellId },
    #[error("no value given for cell `{0}`")]
    MissingValue(String),
    #[error("brute force limited to {limit} cells, complex has {cells}")]
    TooLarge { cells: usize, limit: usize },
    #[error("bound {bound} is below the cell count {cells}")]
    BoundTooSmall { bound: u32, cells: usize },
    #[error("more than {0} gradient paths")]
    PathCap(usize),
    #[error("complex is not connected")]
    NotConnected,
    #[error("complex is not collapsible")]
    NotCollapsible,
    #[error("hypotheses fail: {0}")]
    HypothesesFail(String),
    #[error("field has a single critical cell, the complex is collapsible")]
    NoCollapsibilityObstruction,
    #[error("no complete matching: {} critical triangles meet only {} critical edges", .set.len(), .neighbours.len())]
    HallViolation {
        set: Vec<CellId>,
        neighbours: Vec<CellId>,
    },
    #[error("search budget of {0} nodes exhausted without a verdict")]
    BudgetExceeded(u64),
    #[error("subdivision depth {depth} exceeds the maximum {max}")]
    DepthTooLarge { depth: usize, max: usize },
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
