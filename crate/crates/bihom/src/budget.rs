//! Enumeration budget for exhaustive scans and cochain-space solves.

use thiserror::Error;

/// Cap on the number of tensor entries (or basis tuples) a single
/// computation may enumerate. Overridable through the `BIHOM_BUDGET`
/// environment variable or per call site.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    entries: usize,
}

pub const DEFAULT_BUDGET_ENTRIES: usize = 200_000;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("budget exceeded: {context} needs {needed} entries, cap is {cap}")]
pub struct BudgetExceeded {
    pub needed: usize,
    pub cap: usize,
    pub context: String,
}

impl Budget {
    pub fn new(entries: usize) -> Self {
        Budget { entries }
    }

    /// Default cap, honoring `BIHOM_BUDGET` when set to a valid integer.
    pub fn from_env() -> Self {
        let entries = std::env::var("BIHOM_BUDGET")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_BUDGET_ENTRIES);
        Budget { entries }
    }

    pub fn entries(&self) -> usize {
        self.entries
    }

    pub fn check(&self, needed: usize, context: &str) -> Result<(), BudgetExceeded> {
        if needed > self.entries {
            Err(BudgetExceeded {
                needed,
                cap: self.entries,
                context: context.to_string(),
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET_ENTRIES)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps() {
        let b = Budget::new(10);
        assert!(b.check(10, "x").is_ok());
        let err = b.check(11, "scan").unwrap_err();
        assert_eq!(err.needed, 11);
        assert_eq!(err.cap, 10);
    }
}
