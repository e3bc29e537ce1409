//! Budgeted objective evaluation and the per-run outcome shared by every
//! algorithm.

use std::cell::Cell;

use crate::error::{Error, Result};
use crate::model::{ProblemInstance, Schedule};
use crate::pareto::{Archive, ArchiveEntry, ConstraintMode};

/// Wraps an instance and counts `evaluate` calls against a hard budget.
#[derive(Debug)]
pub struct CountingEvaluator<'a> {
    instance: &'a ProblemInstance,
    budget: u64,
    used: Cell<u64>,
}

impl<'a> CountingEvaluator<'a> {
    pub fn new(instance: &'a ProblemInstance, budget: u64) -> Self {
        CountingEvaluator { instance, budget, used: Cell::new(0) }
    }

    pub fn instance(&self) -> &'a ProblemInstance {
        self.instance
    }

    pub fn evaluate(&self, schedule: Schedule) -> Result<ArchiveEntry> {
        let used = self.used.get() + 1;
        if used > self.budget {
            return Err(Error::BudgetExceeded { used, budget: self.budget });
        }
        self.used.set(used);
        let point = self.instance.evaluate(&schedule)?;
        Ok(ArchiveEntry::new(schedule, point))
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }
}

/// What one algorithm run hands back.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub archive: Archive,
    pub evaluations: u64,
    pub seconds: f64,
    pub seed: u64,
    pub constraint_mode: ConstraintMode,
}

impl RunOutcome {
    pub fn mean_energy(&self) -> f64 {
        mean(self.archive.entries().iter().map(|e| e.point.energy))
    }

    pub fn mean_makespan(&self) -> f64 {
        mean(self.archive.entries().iter().map(|e| e.point.makespan))
    }

    /// Equality on everything but wall-clock time.
    pub fn same_result(&self, other: &RunOutcome) -> bool {
        self.archive == other.archive
            && self.evaluations == other.evaluations
            && self.seed == other.seed
            && self.constraint_mode == other.constraint_mode
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}
