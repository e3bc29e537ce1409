//! Batch experiments: plans over (instance × algorithm × population size ×
//! run), seeded parallel execution, JSON-lines persistence, scoring and
//! Avg/Std summaries.
//!
//! Algorithm ids follow the usual numbering: 0–8 are the BSSO `(c_p, c_w)`
//! grid, 9 is MOSSO, 10 MOPSO and 11 NSGA-II.

mod plot;
mod record;
mod summary;

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{run_mopso, run_mosso, run_nsga2, MopsoParams, MossoParams, NsgaParams};
use crate::benchgen::{generate, BenchmarkSpec};
use crate::bsso::{run_bsso, BssoParams};
use crate::error::{Error, Result};
use crate::eval::RunOutcome;
use crate::model::ProblemInstance;
use crate::pareto::ConstraintMode;
use crate::rng::derive_seed;

pub use plot::{render_archive_svg, render_metric_bars_svg, write_plots};
pub use record::{cell_file_name, read_results_dir, RecordWriter, RunRecord};
pub use summary::{
    mark_best, read_summary_csv, render_table, score_and_summarize, write_summary_csv,
    FrontPolicy, Metric, ScoredRun, Stat, Summary, SummaryRow, SUMMARY_COLUMNS,
};

/// Env var that overrides the default worker count.
pub const WORKERS_ENV: &str = "PARETO_SCHED_WORKERS";

/// `(c_p, c_w)` for BSSO ids 0–8.
pub const BSSO_GRID: [(f64, f64); 9] = [
    (0.1, 0.1),
    (0.1, 0.3),
    (0.1, 0.5),
    (0.3, 0.1),
    (0.3, 0.3),
    (0.3, 0.5),
    (0.5, 0.1),
    (0.5, 0.3),
    (0.5, 0.5),
];
pub const MOSSO_ID: u8 = 9;
pub const MOPSO_ID: u8 = 10;
pub const NSGA2_ID: u8 = 11;
pub const ALL_ALGORITHMS: [u8; 12] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];

#[derive(Debug, Clone, PartialEq)]
pub enum Algorithm {
    Bsso { c_p: f64, c_w: f64 },
    Mosso,
    Mopso { inertia: f64, c1: f64, c2: f64 },
    Nsga2 { crossover_rate: f64, mutation_rate: f64 },
}

/// Per-algorithm parameter overrides accepted in plan files.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverride {
    pub c_p: Option<f64>,
    pub c_w: Option<f64>,
    pub inertia: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub crossover_rate: Option<f64>,
    pub mutation_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmConfig {
    pub id: u8,
    pub algorithm: Algorithm,
}

impl AlgorithmConfig {
    /// Default parameters for `id`.
    pub fn by_id(id: u8) -> Result<Self> {
        let algorithm = match id {
            0..=8 => {
                let (c_p, c_w) = BSSO_GRID[id as usize];
                Algorithm::Bsso { c_p, c_w }
            }
            MOSSO_ID => Algorithm::Mosso,
            MOPSO_ID => {
                let d = MopsoParams::new(1, 1, 0);
                Algorithm::Mopso { inertia: d.inertia, c1: d.c1, c2: d.c2 }
            }
            NSGA2_ID => {
                let d = NsgaParams::new(1, 1, 0);
                Algorithm::Nsga2 { crossover_rate: d.crossover_rate, mutation_rate: d.mutation_rate }
            }
            other => return Err(Error::arg(format!("unknown algorithm id {other} (expected 0..=11)"))),
        };
        Ok(AlgorithmConfig { id, algorithm })
    }

    pub fn with_override(mut self, o: &ParamOverride) -> Result<Self> {
        let mismatch = |field: &str| {
            Err(Error::arg(format!("parameter {field} does not apply to algorithm {}", self.id)))
        };
        match &mut self.algorithm {
            Algorithm::Bsso { c_p, c_w } => {
                if o.inertia.is_some() || o.c1.is_some() || o.c2.is_some() || o.crossover_rate.is_some() || o.mutation_rate.is_some() {
                    return mismatch("other than c_p/c_w");
                }
                *c_p = o.c_p.unwrap_or(*c_p);
                *c_w = o.c_w.unwrap_or(*c_w);
            }
            Algorithm::Mosso => {
                if *o != ParamOverride::default() {
                    return mismatch("override");
                }
            }
            Algorithm::Mopso { inertia, c1, c2 } => {
                if o.c_p.is_some() || o.c_w.is_some() || o.crossover_rate.is_some() || o.mutation_rate.is_some() {
                    return mismatch("other than inertia/c1/c2");
                }
                *inertia = o.inertia.unwrap_or(*inertia);
                *c1 = o.c1.unwrap_or(*c1);
                *c2 = o.c2.unwrap_or(*c2);
            }
            Algorithm::Nsga2 { crossover_rate, mutation_rate } => {
                if o.c_p.is_some() || o.c_w.is_some() || o.inertia.is_some() || o.c1.is_some() || o.c2.is_some() {
                    return mismatch("other than crossover_rate/mutation_rate");
                }
                *crossover_rate = o.crossover_rate.unwrap_or(*crossover_rate);
                *mutation_rate = o.mutation_rate.unwrap_or(*mutation_rate);
            }
        }
        Ok(self)
    }

    pub fn name(&self) -> String {
        match &self.algorithm {
            Algorithm::Bsso { c_p, c_w } => format!("BSSO(c_p={c_p}, c_w={c_w})"),
            Algorithm::Mosso => "MOSSO".into(),
            Algorithm::Mopso { .. } => "MOPSO".into(),
            Algorithm::Nsga2 { .. } => "NSGA-II".into(),
        }
    }

    /// One run; the archive capacity equals `n_sol`.
    pub fn run(
        &self,
        instance: &ProblemInstance,
        n_sol: usize,
        n_gen: usize,
        seed: u64,
        mode: ConstraintMode,
    ) -> Result<RunOutcome> {
        match self.algorithm {
            Algorithm::Bsso { c_p, c_w } => {
                run_bsso(instance, &BssoParams::new(c_p, c_w, n_sol, n_gen, seed).with_mode(mode))
            }
            Algorithm::Mosso => run_mosso(instance, &MossoParams::new(n_sol, n_gen, seed).with_mode(mode)),
            Algorithm::Mopso { inertia, c1, c2 } => {
                let mut p = MopsoParams::new(n_sol, n_gen, seed).with_mode(mode);
                p.inertia = inertia;
                p.c1 = c1;
                p.c2 = c2;
                run_mopso(instance, &p)
            }
            Algorithm::Nsga2 { crossover_rate, mutation_rate } => {
                let mut p = NsgaParams::new(n_sol, n_gen, seed).with_mode(mode);
                p.crossover_rate = crossover_rate;
                p.mutation_rate = mutation_rate;
                run_nsga2(instance, &p)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSource {
    Generated(BenchmarkSpec),
    Inline(ProblemInstance),
}

impl InstanceSource {
    pub fn resolve(&self) -> Result<ProblemInstance> {
        match self {
            InstanceSource::Generated(spec) => generate(spec),
            InstanceSource::Inline(instance) => Ok(instance.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgorithmChoice {
    Id(u8),
    Custom {
        id: u8,
        #[serde(default)]
        params: ParamOverride,
    },
}

impl AlgorithmChoice {
    pub fn resolve(&self) -> Result<AlgorithmConfig> {
        match self {
            AlgorithmChoice::Id(id) => AlgorithmConfig::by_id(*id),
            AlgorithmChoice::Custom { id, params } => AlgorithmConfig::by_id(*id)?.with_override(params),
        }
    }
}

/// Plan file layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub instances: Vec<InstanceSource>,
    pub algorithms: Vec<AlgorithmChoice>,
    pub nsol: Vec<usize>,
    pub ngen: usize,
    pub nrun: usize,
    pub seed: u64,
    #[serde(default)]
    pub constraint_mode: ConstraintMode,
}

impl ExperimentPlan {
    /// All three benchmark sizes, all twelve algorithms, `n_sol = 50`,
    /// `n_gen = 200`, 30 runs.
    pub fn desk_scale(seed: u64) -> Self {
        ExperimentPlan {
            instances: vec![
                InstanceSource::Generated(BenchmarkSpec::small(seed)),
                InstanceSource::Generated(BenchmarkSpec::medium(seed)),
                InstanceSource::Generated(BenchmarkSpec::large(seed)),
            ],
            algorithms: ALL_ALGORITHMS.iter().map(|&id| AlgorithmChoice::Id(id)).collect(),
            nsol: vec![50],
            ngen: 200,
            nrun: 30,
            seed,
            constraint_mode: ConstraintMode::default(),
        }
    }

    /// Full grid: `n_sol ∈ {50, 100, 150}`, 1000 generations, 500 runs.
    pub fn full_scale(seed: u64) -> Self {
        ExperimentPlan { nsol: vec![50, 100, 150], ngen: 1000, nrun: 500, ..Self::desk_scale(seed) }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let plan: ExperimentPlan = serde_json::from_str(text)?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.instances.is_empty() || self.algorithms.is_empty() || self.nsol.is_empty() {
            return Err(Error::arg("plan needs instances, algorithms and nsol values"));
        }
        if self.nrun == 0 || self.ngen == 0 || self.nsol.contains(&0) {
            return Err(Error::arg("nrun, ngen and every nsol must be >= 1"));
        }
        for a in &self.algorithms {
            a.resolve()?;
        }
        Ok(())
    }

    pub fn resolve_instances(&self) -> Result<Vec<ProblemInstance>> {
        let instances = self.instances.iter().map(InstanceSource::resolve).collect::<Result<Vec<_>>>()?;
        for (i, a) in instances.iter().enumerate() {
            if instances[..i].iter().any(|b| b.name() == a.name()) {
                return Err(Error::arg(format!("instance name {:?} appears twice in the plan", a.name())));
            }
        }
        Ok(instances)
    }

    /// Every run of the plan in a fixed order.
    pub fn run_specs(&self) -> Result<Vec<RunSpec>> {
        self.validate()?;
        let mut specs = Vec::new();
        for instance_index in 0..self.instances.len() {
            for choice in &self.algorithms {
                let algorithm = choice.resolve()?;
                for &n_sol in &self.nsol {
                    for run in 0..self.nrun {
                        specs.push(RunSpec {
                            instance_index,
                            seed: run_seed(self.seed, instance_index, algorithm.id, n_sol, run),
                            algorithm: algorithm.clone(),
                            n_sol,
                            n_gen: self.ngen,
                            run,
                            constraint_mode: self.constraint_mode,
                        });
                    }
                }
            }
        }
        Ok(specs)
    }
}

/// Seed of one run; a pure function of its coordinates in the plan.
pub fn run_seed(base: u64, instance_index: usize, algorithm: u8, n_sol: usize, run: usize) -> u64 {
    derive_seed(base, &[instance_index as u64, algorithm as u64, n_sol as u64, run as u64])
}

/// A single run, executable on its own.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub instance_index: usize,
    pub algorithm: AlgorithmConfig,
    pub n_sol: usize,
    pub n_gen: usize,
    pub run: usize,
    pub seed: u64,
    pub constraint_mode: ConstraintMode,
}

impl RunSpec {
    pub fn execute(&self, instance: &ProblemInstance) -> Result<RunRecord> {
        let outcome = self.algorithm.run(instance, self.n_sol, self.n_gen, self.seed, self.constraint_mode)?;
        let budget = (self.n_sol * self.n_gen) as u64;
        if outcome.evaluations != budget {
            return Err(Error::Contract(format!(
                "algorithm {} used {} evaluations, budget is {budget}",
                self.algorithm.id, outcome.evaluations
            )));
        }
        Ok(RunRecord::from_outcome(self, instance.name(), &outcome))
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Results directory; `None` keeps everything in memory.
    pub out_dir: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl RunOptions {
    pub fn worker_count(&self) -> usize {
        self.workers
            .or_else(|| std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse().ok()))
            .filter(|&n| n > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
    }
}

/// Executes every run of `plan`, in parallel, returning records in plan
/// order. With an output directory each record is appended to its cell file
/// as soon as it finishes; cell files of this plan are truncated first.
pub fn run_plan(plan: &ExperimentPlan, options: &RunOptions) -> Result<Vec<RunRecord>> {
    let instances = plan.resolve_instances()?;
    let specs = plan.run_specs()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.worker_count())
        .build()
        .map_err(|e| Error::arg(format!("cannot start worker pool: {e}")))?;

    let mut writer = match &options.out_dir {
        Some(dir) => Some(RecordWriter::create(dir, specs.iter().map(|s| {
            cell_file_name(instances[s.instance_index].name(), s.algorithm.id, s.n_sol)
        }))?),
        None => None,
    };

    let abort = AtomicBool::new(false);
    let mut slots: Vec<Option<RunRecord>> = vec![None; specs.len()];
    let mut first_error = None;

    std::thread::scope(|scope| {
        let (tx, rx) = mpsc::channel::<(usize, Result<RunRecord>)>();
        let specs = &specs;
        let instances = &instances;
        let abort = &abort;
        scope.spawn(move || {
            pool.install(|| {
                specs.par_iter().enumerate().for_each_with(tx, |tx, (i, spec)| {
                    if abort.load(Ordering::Relaxed) {
                        return;
                    }
                    let _ = tx.send((i, spec.execute(&instances[spec.instance_index])));
                });
            });
        });

        for (i, result) in rx {
            let stored = result.and_then(|record| {
                if let Some(w) = writer.as_mut() {
                    w.append(&record)?;
                }
                Ok(record)
            });
            match stored {
                Ok(record) => slots[i] = Some(record),
                Err(e) => {
                    abort.store(true, Ordering::Relaxed);
                    first_error.get_or_insert(e);
                }
            }
        }
    });

    if let Some(e) = first_error {
        return Err(e);
    }
    Ok(slots.into_iter().map(|r| r.expect("every run reported")).collect())
}
