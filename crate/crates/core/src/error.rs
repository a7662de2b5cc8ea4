use std::fmt;

use thiserror::Error;

use crate::relational::GroundAtom;

/// Source position of a parse error, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arity mismatch for predicate `{predicate}`: expected {expected}, found {found}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
    },

    #[error("atom {0} is tagged both endogenous and exogenous")]
    ConflictingTag(GroundAtom),

    #[error("syntax error at {position}: {message}")]
    Syntax { position: Position, message: String },

    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),

    #[error("query has free variables; a boolean query is required")]
    NotBoolean,

    #[error("tuple {0} is not endogenous")]
    NotEndogenous(GroundAtom),

    #[error("tuple {0} is not in the instance")]
    NotInInstance(GroundAtom),

    #[error("the query is not satisfied by the instance")]
    QueryNotSatisfied,

    #[error("the instance does not satisfy the query, so there is no observation to diagnose")]
    ObservationAbsent,

    #[error("enumeration exceeded the budget of {limit} explored nodes")]
    ResourceExceeded { limit: u64 },

    #[error("oracle universe of {size} tuples exceeds the budget of {budget}")]
    BudgetExceeded { size: usize, budget: usize },

    #[error("inconsistent cause package: {0}")]
    InconsistentPackage(String),

    #[error("repairs from causes require an instance with no exogenous tuples")]
    PartitionedInstance,

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Stable identifier for structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ArityMismatch { .. } => "arity_mismatch",
            Error::ConflictingTag(_) => "conflicting_tag",
            Error::Syntax { .. } => "syntax",
            Error::UnknownPredicate(_) => "unknown_predicate",
            Error::NotBoolean => "not_boolean",
            Error::NotEndogenous(_) => "not_endogenous",
            Error::NotInInstance(_) => "not_in_instance",
            Error::QueryNotSatisfied => "query_not_satisfied",
            Error::ObservationAbsent => "observation_absent",
            Error::ResourceExceeded { .. } => "resource_exceeded",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::InconsistentPackage(_) => "inconsistent_package",
            Error::PartitionedInstance => "partitioned_instance",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            position: Position { line, column },
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
