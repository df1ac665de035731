use thiserror::Error;

/// Errors raised anywhere in the workbench.
///
/// The variants fall into three families that the CLI maps onto exit codes:
/// structural and validation problems (bad input, mismatched rings), resource
/// exhaustion (step budgets and combinatorial caps), and numerical failures
/// from the sampling estimator.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("degree of the zero polynomial is undefined")]
    UndefinedDegree,

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("step budget of {limit} exhausted ({basis_len} basis elements, {pending_pairs} pairs pending)")]
    Budget {
        limit: u64,
        basis_len: usize,
        pending_pairs: usize,
        /// The basis as it stood when the budget ran out, in printed form.
        partial_basis: Vec<String>,
    },

    #[error("resource cap exceeded: {0}")]
    Cap(String),

    #[error("sampling error: {0}")]
    Sampling(String),

    #[error("estimation error: {0}")]
    Estimation(String),
}

impl Error {
    /// True for the variants that signal an exhausted resource rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Budget { .. } | Error::Cap(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Structural(_) => "structural",
            Error::Validation(_) => "validation",
            Error::UndefinedDegree => "validation",
            Error::Parse { .. } => "parse",
            Error::Budget { .. } => "budget",
            Error::Cap(_) => "cap",
            Error::Sampling(_) => "sampling",
            Error::Estimation(_) => "estimation",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Step counter shared by the Gröbner and syzygy kernels.
///
/// Every reduction step and every processed pair costs one unit.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub const DEFAULT_LIMIT: u64 = 2_000_000;

    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    /// Consumes one step. Returns `false` once the limit is reached.
    #[inline]
    pub fn tick(&mut self) -> bool {
        if self.used >= self.limit {
            return false;
        }
        self.used += 1;
        true
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Self::DEFAULT_LIMIT)
    }
}
