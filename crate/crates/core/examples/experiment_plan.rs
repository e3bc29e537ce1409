//! A reduced desk-scale experiment: every algorithm on the small benchmark,
//! scored against the pooled front and printed as a table.
//!
//! `cargo run --release --example experiment_plan -- [n_run] [n_gen]`

use pareto_sched::harness::{render_table, run_plan, score_and_summarize, ExperimentPlan, FrontPolicy, RunOptions};
use pareto_sched::ConstraintMode;

fn main() -> pareto_sched::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().ok());
    let n_run = args.next().flatten().unwrap_or(5);
    let n_gen = args.next().flatten().unwrap_or(100);

    let mut plan = ExperimentPlan::desk_scale(2024);
    plan.instances.truncate(1);
    plan.nrun = n_run;
    plan.ngen = n_gen;
    plan.constraint_mode = ConstraintMode::Ignore;

    let records = run_plan(&plan, &RunOptions::default())?;
    let summary = score_and_summarize(&records, &FrontPolicy::Pooled)?;
    print!("{}", render_table(&summary.rows));
    Ok(())
}
