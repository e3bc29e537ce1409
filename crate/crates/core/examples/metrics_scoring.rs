//! GD, SP and front membership for an archive scored against a small front.

use pareto_sched::metrics::{count_stats, gd, sp, ReferenceFront, DEFAULT_MEMBERSHIP_TOL};
use pareto_sched::ObjectivePoint;

fn main() -> pareto_sched::Result<()> {
    let pt = |e, m| ObjectivePoint::with_feasibility(e, m, true);
    let front = ReferenceFront::from_points(&[pt(0.0, 10.0), pt(5.0, 5.0), pt(10.0, 0.0)])?;
    let archives = [
        ("on the front", vec![pt(0.0, 10.0), pt(10.0, 0.0)]),
        ("shifted by (3, 4)", vec![pt(3.0, 14.0), pt(13.0, 4.0)]),
        ("mixed", vec![pt(5.0, 5.0), pt(8.0, 9.0)]),
    ];
    for (name, archive) in &archives {
        let counts = count_stats(archive, &front, DEFAULT_MEMBERSHIP_TOL);
        let spacing = sp(archive, &front);
        println!(
            "{name:<18} GD {:.4}  SP {:.4}  N_n {}  N_p {}",
            gd(archive, &front)?,
            spacing.value,
            counts.n_n,
            counts.n_p
        );
    }
    let mut csv = Vec::new();
    front.write_csv(&mut csv)?;
    print!("\n{}", String::from_utf8_lossy(&csv));
    Ok(())
}
