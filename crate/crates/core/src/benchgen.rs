//! Seeded generator for the benchmark problem classes.
//!
//! Processor speeds lie in [1000, 10000] MIPS with the fastest exactly ten
//! times the slowest, energy rates grow quadratically with speed from 0.3 KW
//! to 30 KW, and task sizes lie in [5000, 15000] MI.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{GeneratorInfo, ProblemInstance};
use crate::rng::rng_from_seed;

pub const MIN_SPEED: f64 = 1000.0;
pub const MAX_SPEED: f64 = 10000.0;
pub const MIN_TASK_SIZE: f64 = 5000.0;
pub const MAX_TASK_SIZE: f64 = 15000.0;
pub const DEFAULT_DEADLINE: f64 = 30.0;

const ENERGY_MODEL: &str = "quadratic: 0.3 * (speed / 1000)^2";

/// Energy rate (KW per unit time) of a processor running at `speed` MIPS.
pub fn energy_rate(speed: f64) -> f64 {
    let r = speed / 1000.0;
    0.3 * r * r
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub n_tasks: usize,
    pub n_cpus: usize,
    #[serde(default = "default_deadline")]
    pub deadline: f64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

fn default_deadline() -> f64 {
    DEFAULT_DEADLINE
}

impl BenchmarkSpec {
    pub fn new(n_tasks: usize, n_cpus: usize, seed: u64) -> Self {
        BenchmarkSpec { n_tasks, n_cpus, deadline: DEFAULT_DEADLINE, seed, name: None }
    }

    /// 20 tasks on 5 processors.
    pub fn small(seed: u64) -> Self {
        Self::new(20, 5, seed).named("small")
    }

    /// 50 tasks on 10 processors.
    pub fn medium(seed: u64) -> Self {
        Self::new(50, 10, seed).named("medium")
    }

    /// 100 tasks on 20 processors.
    pub fn large(seed: u64) -> Self {
        Self::new(100, 20, seed).named("large")
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_deadline(mut self, deadline: f64) -> Self {
        self.deadline = deadline;
        self
    }

    pub fn instance_name(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("bench-{}x{}-s{}", self.n_tasks, self.n_cpus, self.seed))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_tasks < 1 {
            return Err(Error::arg("benchmark needs at least one task"));
        }
        if self.n_cpus < 2 {
            return Err(Error::arg("benchmark needs at least two processors for the 10x speed ratio"));
        }
        if !(self.deadline.is_finite() && self.deadline > 0.0) {
            return Err(Error::arg("deadline must be finite and > 0"));
        }
        Ok(())
    }
}

/// Builds the instance described by `spec`. Pure in `spec`.
pub fn generate(spec: &BenchmarkSpec) -> Result<ProblemInstance> {
    spec.validate()?;
    let mut rng = rng_from_seed(spec.seed);

    let mut speeds: Vec<f64> =
        (0..spec.n_cpus).map(|_| rng.random_range(MIN_SPEED..=MAX_SPEED)).collect();
    // One processor pinned at each end of the range fixes the 10x ratio.
    let pinned = sample(&mut rng, spec.n_cpus, 2);
    speeds[pinned.index(0)] = MAX_SPEED;
    speeds[pinned.index(1)] = MIN_SPEED;

    let energies = speeds.iter().map(|&s| energy_rate(s)).collect();
    let tasks = (0..spec.n_tasks)
        .map(|_| rng.random_range(MIN_TASK_SIZE..=MAX_TASK_SIZE))
        .collect();

    Ok(ProblemInstance::new(spec.instance_name(), tasks, speeds, energies, spec.deadline)?
        .with_generator(GeneratorInfo { seed: spec.seed, energy_model: ENERGY_MODEL.to_string() }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_endpoints() {
        assert!((energy_rate(1000.0) - 0.3).abs() < 1e-15);
        assert!((energy_rate(10000.0) - 30.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_single_cpu() {
        assert!(generate(&BenchmarkSpec::new(10, 1, 0)).is_err());
        assert!(generate(&BenchmarkSpec::new(0, 3, 0)).is_err());
        assert!(generate(&BenchmarkSpec::new(3, 3, 0).with_deadline(0.0)).is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate(&BenchmarkSpec::medium(9)).unwrap();
        let b = generate(&BenchmarkSpec::medium(9)).unwrap();
        let c = generate(&BenchmarkSpec::medium(10)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.task_sizes(), c.task_sizes());
        assert_eq!(a.name(), "medium");
        assert_eq!(a.n_tasks(), 50);
        assert_eq!(a.n_cpus(), 10);
        assert_eq!(a.deadline(), 30.0);
    }

    #[test]
    fn two_cpu_instance_is_exactly_the_endpoints() {
        let inst = generate(&BenchmarkSpec::new(4, 2, 123)).unwrap();
        let mut s = inst.cpu_speeds().to_vec();
        s.sort_by(f64::total_cmp);
        assert_eq!(s, vec![1000.0, 10000.0]);
    }

    #[test]
    fn ranges_hold_for_many_seeds() {
        for seed in 0..300 {
            let inst = generate(&BenchmarkSpec::new(30, 2 + (seed as usize % 19), seed)).unwrap();
            let speeds = inst.cpu_speeds();
            let lo = speeds.iter().copied().fold(f64::MAX, f64::min);
            let hi = speeds.iter().copied().fold(f64::MIN, f64::max);
            assert!(lo >= MIN_SPEED && hi <= MAX_SPEED);
            assert!((hi / lo - 10.0).abs() < 1e-9);
            for (&s, &e) in speeds.iter().zip(inst.cpu_energies()) {
                assert!((0.3..=30.0).contains(&e));
                for (&s2, &e2) in speeds.iter().zip(inst.cpu_energies()) {
                    if s < s2 {
                        assert!(e < e2);
                    }
                }
            }
            assert!(inst.task_sizes().iter().all(|t| (MIN_TASK_SIZE..=MAX_TASK_SIZE).contains(t)));
        }
    }
}
