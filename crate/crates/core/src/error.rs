use thiserror::Error;

/// Errors shared across the lab's budgeted and configuration-facing operations.
///
/// Dimension mismatches and contract violations on the plain linear-algebra
/// operations panic instead (see the `# Panics` notes on each method); this
/// enum covers the cases a caller is expected to handle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    /// An enumeration would exceed the configured budget. Raised before any
    /// large allocation happens; never silently truncated.
    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    /// A numeric argument fell outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A matrix or vector fixture could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub(crate) fn budget_err(what: &'static str, needed: u128, budget: u128) -> LabError {
    LabError::BudgetExceeded {
        what,
        needed,
        budget,
    }
}
