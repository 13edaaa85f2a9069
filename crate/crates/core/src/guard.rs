//! Size guards for exhaustive enumerations.
//!
//! Every guarded routine compares `m * p` against a limit. The limits can
//! be overridden as a whole through the `CAUCHON_GUARD` environment
//! variable, which holds a single integer applied to all kinds.

use crate::error::{Error, Result};

pub const ENV_VAR: &str = "CAUCHON_GUARD";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GuardKind {
    /// Symbolic vanishing families with the exact backend.
    Exact,
    /// Vanishing families with the mod-p pre-filter.
    Prefiltered,
    /// Plain enumeration of diagrams, permutations or raw fillings.
    Enumeration,
}

impl GuardKind {
    pub fn default_limit(self) -> usize {
        match self {
            GuardKind::Exact => 12,
            GuardKind::Prefiltered => 16,
            GuardKind::Enumeration => 20,
        }
    }
}

/// Current limit on `m * p` for `kind`.
pub fn limit(kind: GuardKind) -> usize {
    std::env::var(ENV_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or_else(|| kind.default_limit())
}

pub fn check(kind: GuardKind, m: usize, p: usize) -> Result<()> {
    let lim = limit(kind);
    if m * p > lim {
        return Err(Error::Resource(format!(
            "{m}x{p} exceeds the {kind:?} guard (m*p <= {lim}); set {ENV_VAR} to raise it"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_ordered() {
        assert!(GuardKind::Exact.default_limit() < GuardKind::Prefiltered.default_limit());
        assert!(GuardKind::Prefiltered.default_limit() < GuardKind::Enumeration.default_limit());
    }

    #[test]
    fn small_sizes_pass() {
        if std::env::var(ENV_VAR).is_err() {
            assert!(check(GuardKind::Exact, 3, 4).is_ok());
            assert!(matches!(check(GuardKind::Exact, 4, 4), Err(Error::Resource(_))));
        }
    }
}
