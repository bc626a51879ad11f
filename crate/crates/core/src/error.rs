use std::fmt;

/// Which bound a pair of elements failed to have.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Meet,
    Join,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Meet => f.write_str("greatest lower bound"),
            Bound::Join => f.write_str("least upper bound"),
        }
    }
}

/// Lattice operation that broke compatibility of a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Meet,
    Join,
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Meet => f.write_str("meet"),
            Op::Join => f.write_str("join"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("element {element} is out of range for {n} elements")]
    OutOfRange { element: usize, n: usize },
    #[error("relation is not a partial order: cycle through {a} and {b}")]
    NotAPoset { a: usize, b: usize },
    #[error("not a lattice: {x} and {y} have no unique {bound}")]
    NotALattice { x: usize, y: usize, bound: Bound },
    #[error("indices are not a linear extension: {lo} <= {hi} in the order but {lo} > {hi}")]
    BadIndexing { lo: usize, hi: usize },
    #[error("empty interval: {a} is not below {b}")]
    EmptyInterval { a: usize, b: usize },
    #[error("a chain needs at least one element")]
    EmptyChain,
    #[error("horizontal sum needs at least two summands, got {0}")]
    TooFewSummands(usize),
    #[error("horizontal-sum summand {index} has {size} elements; summands need more than 2")]
    SummandTooSmall { index: usize, size: usize },
    #[error("empty operand list")]
    EmptyOperands,
    #[error("unknown lattice name `{0}`")]
    UnknownName(String),
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("not a partition of the {n} elements: {msg}")]
    BadPartition { n: usize, msg: String },
    #[error("partition is not compatible: {x} ~ {y} but not their {op}s with {c}")]
    NotCompatible { x: usize, y: usize, c: usize, op: Op },
    #[error("congruence is for {found} elements, lattice has {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("the one-element lattice has no congruence atoms")]
    TrivialLattice,
    #[error("size {n} exceeds the supported bound {bound}")]
    SizeBound { n: usize, bound: usize },
    #[error("malformed lattice json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
