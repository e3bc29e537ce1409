//! Runs BSSO and the three baselines with the same budget and compares
//! them against their pooled front.

use pareto_sched::baselines::{run_mopso, run_mosso, run_nsga2, MopsoParams, MossoParams, NsgaParams};
use pareto_sched::benchgen::{generate, BenchmarkSpec};
use pareto_sched::bsso::{run_bsso, BssoParams};
use pareto_sched::metrics::{build_simulated_front, count_stats, gd, sp, DEFAULT_MEMBERSHIP_TOL};
use pareto_sched::ConstraintMode;

fn main() -> pareto_sched::Result<()> {
    let instance = generate(&BenchmarkSpec::small(3))?;
    let (n_sol, n_gen, seed, mode) = (50, 200, 11, ConstraintMode::Ignore);
    let outcomes = [
        ("BSSO 0.5/0.5", run_bsso(&instance, &BssoParams::new(0.5, 0.5, n_sol, n_gen, seed).with_mode(mode))?),
        ("MOSSO", run_mosso(&instance, &MossoParams::new(n_sol, n_gen, seed).with_mode(mode))?),
        ("MOPSO", run_mopso(&instance, &MopsoParams::new(n_sol, n_gen, seed).with_mode(mode))?),
        ("NSGA-II", run_nsga2(&instance, &NsgaParams::new(n_sol, n_gen, seed).with_mode(mode))?),
    ];
    let front = build_simulated_front(outcomes.iter().map(|(_, o)| &o.archive))?;
    println!("pooled front: {} points", front.len());
    println!("{:<13} {:>4} {:>4} {:>9} {:>9}", "algorithm", "N_n", "N_p", "GD", "SP");
    for (name, o) in &outcomes {
        let entries = o.archive.entries();
        let counts = count_stats(entries, &front, DEFAULT_MEMBERSHIP_TOL);
        println!(
            "{name:<13} {:>4} {:>4} {:>9.4} {:>9.4}",
            counts.n_n,
            counts.n_p,
            gd(entries, &front)?,
            sp(entries, &front).value
        );
    }
    Ok(())
}
