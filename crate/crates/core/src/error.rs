use thiserror::Error;

use crate::criteria::CriterionReport;

#[derive(Debug, Error)]
pub enum SepError {
    /// A party index (reported 1-based, as in the usual a_{i1...in} notation) is out of range.
    #[error("index {index} out of range for party {party} of dimension {dim} (1-based: party {}, index {})", .party + 1, .index + 1)]
    Index {
        party: usize,
        index: usize,
        dim: usize,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: String, found: String },

    #[error("degenerate state: {0}")]
    Degenerate(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("logic error: {0}")]
    Logic(String),

    #[error("numerical failure: {message}")]
    Numerical {
        message: String,
        fidelity: Option<f64>,
    },

    #[error("criteria conflict: {} says {}, {} says {}",
        .first.criterion, verdict_word(.first.separable),
        .second.criterion, verdict_word(.second.separable))]
    Conflict {
        first: Box<CriterionReport>,
        second: Box<CriterionReport>,
    },
}

fn verdict_word(separable: bool) -> &'static str {
    if separable {
        "separable"
    } else {
        "entangled"
    }
}

impl SepError {
    /// Process exit status for this error: 2 for bad input or usage, 3 for
    /// numerical trouble and criteria conflicts.
    pub fn exit_code(&self) -> i32 {
        match self {
            SepError::Numerical { .. } | SepError::Conflict { .. } | SepError::Logic(_) => 3,
            _ => 2,
        }
    }

    pub(crate) fn numerical(message: impl Into<String>) -> Self {
        SepError::Numerical {
            message: message.into(),
            fidelity: None,
        }
    }
}

pub type Result<T> = std::result::Result<T, SepError>;
