//! Generates the three benchmark sizes and prints a short profile of each.

use pareto_sched::benchgen::{generate, BenchmarkSpec};

fn main() -> pareto_sched::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    for spec in [BenchmarkSpec::small(seed), BenchmarkSpec::medium(seed), BenchmarkSpec::large(seed)] {
        let inst = generate(&spec)?;
        let work: f64 = inst.task_sizes().iter().sum();
        println!(
            "{:<22} {:>3} tasks {:>2} cpus  total work {:>9.0} MI  speeds {:?}",
            inst.name(),
            inst.n_tasks(),
            inst.n_cpus(),
            work,
            inst.cpu_speeds().iter().map(|s| s.round() as u64).collect::<Vec<_>>()
        );
    }
    println!("\n{}", generate(&BenchmarkSpec::new(3, 2, seed))?.to_json_pretty()?);
    Ok(())
}
