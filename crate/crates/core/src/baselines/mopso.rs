use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bsso::check_sizes;
use crate::error::{Error, Result};
use crate::eval::{CountingEvaluator, RunOutcome};
use crate::model::{ProblemInstance, Schedule};
use crate::pareto::{dominates, Archive, ArchiveEntry, ConstraintMode};
use crate::rng::rng_from_seed;

/// Multi-objective PSO over integer positions. The external repository is
/// bounded by crowding truncation instead of an adaptive grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MopsoParams {
    pub inertia: f64,
    pub c1: f64,
    pub c2: f64,
    pub n_sol: usize,
    pub n_gen: usize,
    pub n_non: usize,
    pub constraint_mode: ConstraintMode,
    pub seed: u64,
}

impl MopsoParams {
    pub fn new(n_sol: usize, n_gen: usize, seed: u64) -> Self {
        MopsoParams {
            inertia: 0.871111,
            c1: 1.496180,
            c2: 1.496180,
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

    pub fn validate(&self) -> Result<()> {
        // Zero coefficients are allowed: they freeze the swarm.
        if [self.inertia, self.c1, self.c2].iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::arg("inertia, c1 and c2 must be finite and >= 0"));
        }
        check_sizes(self.n_sol, self.n_gen, self.n_non)
    }
}

struct Particle {
    current: ArchiveEntry,
    velocity: Vec<f64>,
    best: ArchiveEntry,
}

pub fn run_mopso(instance: &ProblemInstance, params: &MopsoParams) -> Result<RunOutcome> {
    params.validate()?;
    let started = Instant::now();
    let mode = params.constraint_mode;
    let max_cpu = (instance.n_cpus() - 1) as f64;
    let mut rng = rng_from_seed(params.seed);
    let eval = CountingEvaluator::new(instance, (params.n_sol * params.n_gen) as u64);

    let mut swarm = (0..params.n_sol)
        .map(|_| {
            let current = eval.evaluate(instance.random_schedule(&mut rng))?;
            Ok(Particle {
                velocity: vec![0.0; instance.n_tasks()],
                best: current.clone(),
                current,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let initial: Vec<ArchiveEntry> = swarm.iter().map(|p| p.current.clone()).collect();
    let mut repository = Archive::from_entries(&initial, params.n_non, mode)?;

    for _ in 2..=params.n_gen {
        let mut moved = Vec::with_capacity(swarm.len());
        for particle in swarm.iter_mut() {
            let leader = &repository.entries()[rng.random_range(0..repository.len())].schedule;
            let position = particle
                .current
                .schedule
                .as_slice()
                .iter()
                .zip(particle.best.schedule.as_slice())
                .zip(leader.as_slice())
                .zip(particle.velocity.iter_mut())
                .map(|(((&x, &pb), &ld), v)| {
                    let x = x as f64;
                    let (r1, r2): (f64, f64) = (rng.random(), rng.random());
                    *v = params.inertia * *v + params.c1 * r1 * (pb as f64 - x) + params.c2 * r2 * (ld as f64 - x);
                    (x + *v).round().clamp(0.0, max_cpu) as usize
                })
                .collect();
            let next = eval.evaluate(Schedule::from_zero_based(position))?;

            let replace = if dominates(&next.point, &particle.best.point, mode) {
                true
            } else if dominates(&particle.best.point, &next.point, mode) {
                false
            } else {
                rng.random::<bool>()
            };
            if replace {
                particle.best = next.clone();
            }
            particle.current = next.clone();
            moved.push(next);
        }
        repository.merge(&moved, mode);
        debug_assert!(repository.check_invariants(mode).is_ok());
    }

    Ok(RunOutcome {
        archive: repository,
        evaluations: eval.used(),
        seconds: started.elapsed().as_secs_f64(),
        seed: params.seed,
        constraint_mode: mode,
    })
}
