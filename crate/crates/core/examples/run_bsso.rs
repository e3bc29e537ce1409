//! One BSSO run on the small benchmark, printing the front every 50
//! generations.

use pareto_sched::benchgen::{generate, BenchmarkSpec};
use pareto_sched::bsso::{run_bsso_observed, BssoParams};
use pareto_sched::ConstraintMode;

fn main() -> pareto_sched::Result<()> {
    let instance = generate(&BenchmarkSpec::small(1))?;
    let params = BssoParams::new(0.5, 0.5, 50, 200, 7).with_mode(ConstraintMode::Ignore);
    let outcome = run_bsso_observed(&instance, &params, |view| {
        if view.generation % 50 == 0 {
            println!(
                "generation {:>3}: {} nondominated before truncation, {} parents",
                view.generation,
                view.front.len(),
                view.next_parents.len()
            );
        }
    })?;
    println!("{} evaluations in {:.3}s", outcome.evaluations, outcome.seconds);
    for e in outcome.archive.entries().iter().take(10) {
        println!("  energy {:>9.3}  makespan {:>7.3}  {}", e.point.energy, e.point.makespan, e.schedule);
    }
    Ok(())
}
