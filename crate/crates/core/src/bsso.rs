//! Bi-objective simplified swarm optimization (BSSO).
//!
//! Every generation each parent produces one offspring with the stepwise
//! update: per coordinate, copy the value of an exemplar drawn from the
//! current nondominated front, keep the parent's value, or reset to a random
//! processor. The front is refreshed by group comparison, and the next
//! parents come from hybrid elite selection: the whole front (crowding
//! truncated when too large), topped up at random from the remaining parents
//! and offspring when too small.

use std::cell::RefCell;
use std::time::Instant;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{CountingEvaluator, RunOutcome};
use crate::model::{ProblemInstance, Schedule};
use crate::pareto::{
    group_compare, nondominated_filter, truncate_by_crowding, Archive, ArchiveEntry,
    ConstraintMode,
};
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BssoParams {
    /// Probability of copying the exemplar's value.
    pub c_p: f64,
    /// Probability of keeping the current value.
    pub c_w: f64,
    pub n_sol: usize,
    pub n_gen: usize,
    pub n_non: usize,
    pub constraint_mode: ConstraintMode,
    pub seed: u64,
}

impl BssoParams {
    /// Archive capacity defaults to the population size.
    pub fn new(c_p: f64, c_w: f64, n_sol: usize, n_gen: usize, seed: u64) -> Self {
        BssoParams {
            c_p,
            c_w,
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

    pub fn with_n_non(mut self, n_non: usize) -> Self {
        self.n_non = n_non;
        self
    }

    /// Probability of a fresh random value.
    pub fn c_r(&self) -> f64 {
        1.0 - self.c_p - self.c_w
    }

    pub fn thresholds(&self) -> Thresholds {
        Thresholds { copy: self.c_p, keep: self.c_p + self.c_w }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !unit(self.c_p) || !unit(self.c_w) {
            return Err(Error::arg("c_p and c_w must lie in [0, 1]"));
        }
        if self.c_p + self.c_w > 1.0 + 1e-12 {
            return Err(Error::arg(format!(
                "c_p + c_w = {} exceeds 1",
                self.c_p + self.c_w
            )));
        }
        check_sizes(self.n_sol, self.n_gen, self.n_non)
    }
}

pub(crate) fn check_sizes(n_sol: usize, n_gen: usize, n_non: usize) -> Result<()> {
    if n_sol == 0 || n_gen == 0 || n_non == 0 {
        return Err(Error::arg("n_sol, n_gen and n_non must all be >= 1"));
    }
    Ok(())
}

/// Cumulative cut points of the stepwise update: `rho < copy` copies the
/// exemplar, `copy <= rho < keep` keeps the current value, anything else
/// resets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub copy: f64,
    pub keep: f64,
}

/// Stepwise update with explicit draw sources. `rho` is consulted once per
/// coordinate; `fresh` yields a 0-based processor only when the reset branch
/// fires.
pub fn update_solution_with(
    current: &Schedule,
    exemplar: &Schedule,
    thresholds: Thresholds,
    mut rho: impl FnMut() -> f64,
    mut fresh: impl FnMut() -> usize,
) -> Schedule {
    debug_assert_eq!(current.len(), exemplar.len());
    let next = current
        .as_slice()
        .iter()
        .zip(exemplar.as_slice())
        .map(|(&own, &best)| {
            let r = rho();
            if r < thresholds.copy {
                best
            } else if r < thresholds.keep {
                own
            } else {
                fresh()
            }
        })
        .collect();
    Schedule::from_zero_based(next)
}

pub fn update_solution<R: Rng + ?Sized>(
    current: &Schedule,
    exemplar: &Schedule,
    thresholds: Thresholds,
    n_cpus: usize,
    rng: &mut R,
) -> Schedule {
    let rng = RefCell::new(rng);
    update_solution_with(
        current,
        exemplar,
        thresholds,
        || rng.borrow_mut().random::<f64>(),
        || rng.borrow_mut().random_range(0..n_cpus),
    )
}

/// Uniformly chosen front member.
pub fn select_exemplar<'a, R: Rng + ?Sized>(
    front: &'a [ArchiveEntry],
    rng: &mut R,
) -> Result<&'a Schedule> {
    if front.is_empty() {
        return Err(Error::Contract("exemplar requested from an empty front".into()));
    }
    Ok(&front[rng.random_range(0..front.len())].schedule)
}

/// Next generation's parents: the front first (crowding truncated to `n_sol`
/// when larger), then random picks without replacement from `pool` minus the
/// front until there are exactly `n_sol`.
pub fn hybrid_elite_select<R: Rng + ?Sized>(
    front: Vec<ArchiveEntry>,
    pool: &[ArchiveEntry],
    n_sol: usize,
    rng: &mut R,
) -> Result<Vec<ArchiveEntry>> {
    if pool.len() < n_sol {
        return Err(Error::arg(format!(
            "selection pool of {} cannot supply {n_sol} parents",
            pool.len()
        )));
    }
    if front.len() >= n_sol {
        return Ok(truncate_by_crowding(front, n_sol));
    }

    // Multiset difference: each front entry cancels one matching pool entry.
    let mut taken = vec![false; pool.len()];
    for f in &front {
        if let Some(i) = (0..pool.len()).find(|&i| !taken[i] && pool[i] == *f) {
            taken[i] = true;
        }
    }
    let rest: Vec<&ArchiveEntry> =
        pool.iter().zip(&taken).filter(|(_, &t)| !t).map(|(e, _)| e).collect();

    let missing = n_sol - front.len();
    let mut parents = front;
    parents.extend(sample(rng, rest.len(), missing).into_iter().map(|i| rest[i].clone()));
    Ok(parents)
}

/// State handed to an observer after each update round.
pub struct GenerationView<'a> {
    pub generation: usize,
    pub previous_front: &'a [ArchiveEntry],
    pub parents: &'a [ArchiveEntry],
    pub offspring: &'a [ArchiveEntry],
    pub front: &'a [ArchiveEntry],
    pub next_parents: &'a [ArchiveEntry],
}

pub fn run_bsso(instance: &ProblemInstance, params: &BssoParams) -> Result<RunOutcome> {
    run_bsso_observed(instance, params, |_| {})
}

/// [`run_bsso`] with a callback after every generation.
pub fn run_bsso_observed(
    instance: &ProblemInstance,
    params: &BssoParams,
    mut observe: impl FnMut(&GenerationView<'_>),
) -> Result<RunOutcome> {
    params.validate()?;
    let started = Instant::now();
    let mode = params.constraint_mode;
    let n_sol = params.n_sol;
    let n_cpus = instance.n_cpus();
    let thresholds = params.thresholds();
    let mut rng = rng_from_seed(params.seed);
    let eval = CountingEvaluator::new(instance, (n_sol * params.n_gen) as u64);

    // The initial population is generation 1 and spends n_sol evaluations.
    let mut parents = (0..n_sol)
        .map(|_| eval.evaluate(instance.random_schedule(&mut rng)))
        .collect::<Result<Vec<_>>>()?;
    let mut front = nondominated_filter(&parents, mode);

    for generation in 2..=params.n_gen {
        let mut offspring = Vec::with_capacity(n_sol);
        for parent in &parents {
            let exemplar = select_exemplar(&front, &mut rng)?;
            let child = update_solution(&parent.schedule, exemplar, thresholds, n_cpus, &mut rng);
            offspring.push(eval.evaluate(child)?);
        }

        let next_front = group_compare(&front, &offspring, mode);
        let front_len = next_front.len().min(n_sol);
        let mut pool = parents.clone();
        pool.extend_from_slice(&offspring);
        let next_parents = hybrid_elite_select(next_front.clone(), &pool, n_sol, &mut rng)?;

        observe(&GenerationView {
            generation,
            previous_front: &front,
            parents: &parents,
            offspring: &offspring,
            front: &next_front,
            next_parents: &next_parents,
        });

        // Front members not selected as parents are dropped.
        front = next_parents[..front_len].to_vec();
        parents = next_parents;
    }

    Ok(RunOutcome {
        archive: Archive::from_entries(&front, params.n_non, mode)?,
        evaluations: eval.used(),
        seconds: started.elapsed().as_secs_f64(),
        seed: params.seed,
        constraint_mode: mode,
    })
}
