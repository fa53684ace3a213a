//! Deterministic work budgets, measured in backtracking node expansions.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Environment variable overriding the default node budget.
pub const BUDGET_ENV: &str = "REMOVAL_LAB_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
}

impl Budget {
    pub const DEFAULT_NODES: u64 = 1_000_000_000;

    pub const fn nodes(max_nodes: u64) -> Self {
        Self { max_nodes }
    }

    pub const fn unlimited() -> Self {
        Self {
            max_nodes: u64::MAX,
        }
    }

    /// Default budget, overridden by `REMOVAL_LAB_BUDGET` when it parses.
    pub fn from_env() -> Self {
        let max_nodes = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
            .unwrap_or(Self::DEFAULT_NODES);
        Self { max_nodes }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::from_env()
    }
}

/// Shared expansion counter. Workers charge in batches so the atomic stays cold.
pub(crate) struct Meter {
    used: AtomicU64,
    limit: u64,
    what: &'static str,
}

pub(crate) const BATCH: u64 = 1024;

impl Meter {
    pub fn new(budget: Budget, what: &'static str) -> Self {
        Self {
            used: AtomicU64::new(0),
            limit: budget.max_nodes,
            what,
        }
    }

    pub fn charge(&self, nodes: u64) -> Result<()> {
        let prev = self.used.fetch_add(nodes, Ordering::Relaxed);
        if prev.saturating_add(nodes) > self.limit {
            Err(self.exceeded())
        } else {
            Ok(())
        }
    }

    pub fn exceeded(&self) -> Error {
        Error::BudgetExceeded {
            what: self.what,
            limit: self.limit,
        }
    }
}

/// Per-worker batching front end for a [`Meter`].
pub(crate) struct Ticker<'a> {
    meter: &'a Meter,
    local: u64,
    batch: u64,
}

impl<'a> Ticker<'a> {
    pub fn new(meter: &'a Meter) -> Self {
        Self {
            meter,
            local: 0,
            batch: BATCH.min(meter.limit.max(1)),
        }
    }

    #[inline]
    pub fn tick(&mut self) -> Result<()> {
        self.local += 1;
        if self.local >= self.batch {
            let n = std::mem::take(&mut self.local);
            self.meter.charge(n)?;
        }
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        let n = std::mem::take(&mut self.local);
        self.meter.charge(n)
    }
}
