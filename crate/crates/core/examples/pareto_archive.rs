//! Dominance, group comparison and crowding truncation on a handful of
//! points.

use pareto_sched::pareto::{crowding_distance, group_compare, nondominated_filter, truncate_by_crowding};
use pareto_sched::{Archive, ArchiveEntry, ConstraintMode, ObjectivePoint, Schedule};

fn main() -> pareto_sched::Result<()> {
    let deadline = 8.0;
    let pts: Vec<ObjectivePoint> = [(1.0, 9.0), (2.0, 7.0), (3.0, 7.5), (4.0, 4.0), (6.0, 3.0), (9.0, 1.0)]
        .iter()
        .map(|&(e, m)| ObjectivePoint::new(e, m, deadline))
        .collect();

    for mode in [ConstraintMode::Ignore, ConstraintMode::FeasibilityFirst] {
        let front = nondominated_filter(&pts, mode);
        println!("{}: {:?}", mode.as_str(), front.iter().map(|p| (p.energy, p.makespan)).collect::<Vec<_>>());
    }

    let previous = nondominated_filter(&pts[..3], ConstraintMode::Ignore);
    let merged = group_compare(&previous, &pts[3..], ConstraintMode::Ignore);
    println!("crowding: {:?}", crowding_distance(&merged)?);
    let kept = truncate_by_crowding(merged, 3);
    println!("kept 3:   {:?}", kept.iter().map(|p| (p.energy, p.makespan)).collect::<Vec<_>>());

    let mut archive = Archive::new(4)?;
    let entries: Vec<ArchiveEntry> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| ArchiveEntry::new(Schedule::from_zero_based(vec![i % 2]), *p))
        .collect();
    archive.merge(&entries, ConstraintMode::Ignore);
    println!("archive holds {} of capacity {}", archive.len(), archive.capacity());
    Ok(())
}
