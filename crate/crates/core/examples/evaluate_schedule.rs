//! Builds a two-processor instance by hand and evaluates one schedule.

use pareto_sched::{ProblemInstance, Schedule};

fn main() -> pareto_sched::Result<()> {
    let instance = ProblemInstance::new(
        "hand-made",
        vec![5000.0, 6000.0, 4000.0],
        vec![1000.0, 2000.0],
        vec![0.3, 1.2],
        30.0,
    )?;
    for text in ["1;1;1", "1;2;2", "2;2;2"] {
        let schedule: Schedule = text.parse()?;
        let point = instance.evaluate(&schedule)?;
        println!(
            "{text}: energy {:.3}, makespan {:.3}, {}",
            point.energy,
            point.makespan,
            if point.feasible { "meets the deadline" } else { "misses the deadline" }
        );
    }
    Ok(())
}
