use thiserror::Error;

/// Errors raised by the labelling engine, the cycle builders and the lattice verifier.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("inconsistent relations: {0}")]
    InconsistentRelations(String),

    /// A family constraint on `p`, `r` or the weights does not hold.
    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("enumeration refused: n = {n} exceeds the bound of {bound} vertices")]
    OverBound { n: usize, bound: usize },

    #[error("degenerate period vectors ({u:?}, {v:?}): they must be non-zero and non-collinear")]
    DegeneratePeriods { u: (i64, i64), v: (i64, i64) },

    #[error("coloring is not invariant under period vector {vector:?} at cell {cell:?}")]
    NotPeriodic {
        vector: (i64, i64),
        cell: (i64, i64),
    },

    #[error("parse error: {0}")]
    Parse(String),

    /// A preset coloring is not a constant 2-labelling of the folded cycle.
    #[error(
        "preset rejected: coloring {coloring} is not a constant 2-labelling{}",
        describe_witness(.witness)
    )]
    PresetRejected {
        coloring: String,
        witness: Option<(usize, usize)>,
    },
}

fn describe_witness(witness: &Option<(usize, usize)>) -> String {
    match witness {
        Some((i, j)) => format!(" (automorphisms {i} and {j} give different sums)"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
