//! Bi-objective, deadline-constrained task scheduling for heterogeneous
//! cloud processors.
//!
//! A schedule assigns every task to one processor. Two objectives are
//! minimized at once: total energy (processing time times the energy rate of
//! the assigned processor, summed over tasks) and makespan (the busiest
//! processor's total processing time). A deadline bounds the makespan.
//!
//! The crate provides:
//!
//! * [`model`]: problem instances, schedules, and the objective evaluation.
//! * [`benchgen`]: seeded generation of the small/medium/large benchmark classes.
//! * [`pareto`]: dominance, nondominated filtering, the sorted-sweep group
//!   comparison, crowding distance and the bounded archive.
//! * [`bsso`]: the bi-objective simplified swarm optimizer with hybrid elite
//!   selection.
//! * [`baselines`]: NSGA-II, MOPSO and MOSSO under the same evaluation budget.
//! * [`metrics`]: simulated reference fronts, GD, SP and front-membership counts.
//! * [`harness`]: experiment plans, parallel seeded execution, persistence,
//!   summary tables and plots.
//!
//! ```no_run
//! use pareto_sched::benchgen::{generate, BenchmarkSpec};
//! use pareto_sched::bsso::{run_bsso, BssoParams};
//! use pareto_sched::pareto::ConstraintMode;
//!
//! let instance = generate(&BenchmarkSpec::new(20, 5, 42)).unwrap();
//! let params = BssoParams::new(0.5, 0.3, 50, 200, 42).with_mode(ConstraintMode::Ignore);
//! let outcome = run_bsso(&instance, &params).unwrap();
//! println!("{} nondominated schedules", outcome.archive.len());
//! ```

pub mod baselines;
pub mod benchgen;
pub mod bsso;
pub mod cli;
mod error;
pub mod eval;
pub mod harness;
pub mod metrics;
pub mod model;
pub mod pareto;
pub mod rng;

pub use error::{Error, Result};
pub use eval::{CountingEvaluator, RunOutcome};
pub use model::{ObjectivePoint, ProblemInstance, Schedule};
pub use pareto::{Archive, ArchiveEntry, ConstraintMode};
