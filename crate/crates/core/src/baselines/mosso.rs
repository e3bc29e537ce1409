use std::cell::RefCell;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bsso::check_sizes;
use crate::error::{Error, Result};
use crate::eval::{CountingEvaluator, RunOutcome};
use crate::model::{ProblemInstance, Schedule};
use crate::pareto::{dominates, Archive, ArchiveEntry, ConstraintMode};
use crate::rng::rng_from_seed;

/// `start + slope * t / n_gen`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearThreshold {
    pub start: f64,
    pub slope: f64,
}

impl LinearThreshold {
    pub fn at(&self, t: usize, n_gen: usize) -> f64 {
        self.start + self.slope * t as f64 / n_gen as f64
    }
}

/// Cumulative cut points of the classic SSO update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsoThresholds {
    pub global: f64,
    pub personal: f64,
    pub keep: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SsoBranch {
    Global,
    Personal,
    Keep,
    Reset,
}

pub fn sso_branch(rho: f64, th: SsoThresholds) -> SsoBranch {
    if rho < th.global {
        SsoBranch::Global
    } else if rho < th.personal {
        SsoBranch::Personal
    } else if rho < th.keep {
        SsoBranch::Keep
    } else {
        SsoBranch::Reset
    }
}

/// Classic SSO stepwise update from explicit draw sources.
pub fn sso_update_with(
    current: &Schedule,
    personal: &Schedule,
    global: &Schedule,
    th: SsoThresholds,
    mut rho: impl FnMut() -> f64,
    mut fresh: impl FnMut() -> usize,
) -> Schedule {
    let next = (0..current.len())
        .map(|j| match sso_branch(rho(), th) {
            SsoBranch::Global => global.as_slice()[j],
            SsoBranch::Personal => personal.as_slice()[j],
            SsoBranch::Keep => current.as_slice()[j],
            SsoBranch::Reset => fresh(),
        })
        .collect();
    Schedule::from_zero_based(next)
}

/// Multi-objective SSO with time-varying thresholds; the global-best role is
/// played by a repository member drawn once per solution per generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MossoParams {
    pub global: LinearThreshold,
    pub personal: LinearThreshold,
    pub keep: LinearThreshold,
    pub n_sol: usize,
    pub n_gen: usize,
    pub n_non: usize,
    pub constraint_mode: ConstraintMode,
    pub seed: u64,
}

impl MossoParams {
    pub fn new(n_sol: usize, n_gen: usize, seed: u64) -> Self {
        MossoParams {
            global: LinearThreshold { start: 0.1, slope: 0.3 },
            personal: LinearThreshold { start: 0.3, slope: 0.4 },
            keep: LinearThreshold { start: 0.4, slope: 0.5 },
            n_sol,
            n_gen,
            n_non: n_sol,
            constraint_mode: ConstraintMode::default(),
            seed,
        }
    }

    pub fn with_mode(mut self, mode: ConstraintMode) -> Self {
        self.constraint_mode = mode;
        self
    }

    pub fn thresholds_at(&self, t: usize) -> SsoThresholds {
        SsoThresholds {
            global: self.global.at(t, self.n_gen),
            personal: self.personal.at(t, self.n_gen),
            keep: self.keep.at(t, self.n_gen),
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_sizes(self.n_sol, self.n_gen, self.n_non)?;
        for t in [0, self.n_gen] {
            let th = self.thresholds_at(t);
            if !(0.0 <= th.global && th.global <= th.personal && th.personal <= th.keep && th.keep <= 1.0) {
                return Err(Error::arg(format!(
                    "thresholds must satisfy 0 <= C_g <= C_p <= C_w <= 1 at t = {t}"
                )));
            }
        }
        Ok(())
    }
}

pub fn run_mosso(instance: &ProblemInstance, params: &MossoParams) -> Result<RunOutcome> {
    params.validate()?;
    let started = Instant::now();
    let mode = params.constraint_mode;
    let n_cpus = instance.n_cpus();
    let mut rng = rng_from_seed(params.seed);
    let eval = CountingEvaluator::new(instance, (params.n_sol * params.n_gen) as u64);

    let mut current = (0..params.n_sol)
        .map(|_| eval.evaluate(instance.random_schedule(&mut rng)))
        .collect::<Result<Vec<_>>>()?;
    let mut personal = current.clone();
    let mut repository = Archive::from_entries(&current, params.n_non, mode)?;

    for t in 2..=params.n_gen {
        let th = params.thresholds_at(t);
        let mut updated: Vec<ArchiveEntry> = Vec::with_capacity(current.len());
        for (x, p) in current.iter().zip(personal.iter_mut()) {
            let global = &repository.entries()[rng.random_range(0..repository.len())].schedule;
            let next = {
                let rng = RefCell::new(&mut rng);
                sso_update_with(
                    &x.schedule,
                    &p.schedule,
                    global,
                    th,
                    || rng.borrow_mut().random(),
                    || rng.borrow_mut().random_range(0..n_cpus),
                )
            };
            let child = eval.evaluate(next)?;
            if dominates(&child.point, &p.point, mode) {
                *p = child.clone();
            }
            updated.push(child);
        }
        repository.merge(&updated, mode);
        debug_assert!(repository.check_invariants(mode).is_ok());
        current = updated;
    }

    Ok(RunOutcome {
        archive: repository,
        evaluations: eval.used(),
        seconds: started.elapsed().as_secs_f64(),
        seed: params.seed,
        constraint_mode: mode,
    })
}
