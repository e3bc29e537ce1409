//! Archive quality against a reference front: generational distance (GD),
//! spacing (SP) and front-membership counts.
//!
//! Every metric uses the same per-point distance `d_i`: the Euclidean
//! distance, in raw objective units, from archive point `i` to the nearest
//! reference-front point.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ObjectivePoint;
use crate::pareto::{sweep_filter, Archive, ConstraintMode, HasObjectives};

/// Mutually nondominated points in strictly ascending energy order. The front
/// lives in objective space; the deadline plays no part in it.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceFront {
    points: Vec<ObjectivePoint>,
}

impl ReferenceFront {
    /// Nondominated, deduplicated and sorted subset of `points`.
    pub fn from_points(points: &[ObjectivePoint]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::arg("reference front needs at least one point"));
        }
        Ok(ReferenceFront { points: sweep_filter(points, ConstraintMode::Ignore) })
    }

    pub fn points(&self) -> &[ObjectivePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest objective range across the front, the scale for relative
    /// tolerances. Falls back to 1 for a single-point front.
    pub fn scale(&self) -> f64 {
        let first = self.points[0];
        let last = self.points[self.points.len() - 1];
        let span = (last.energy - first.energy).max(first.makespan - last.makespan);
        if span > 0.0 {
            span
        } else {
            1.0
        }
    }

    /// Distance from `p` to the nearest front point.
    pub fn distance(&self, p: &ObjectivePoint) -> f64 {
        self.points.iter().map(|q| p.distance(q)).fold(f64::INFINITY, f64::min)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        for p in &self.points {
            out.serialize(FrontRow { energy: p.energy, makespan: p.makespan })?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads `energy,makespan` rows. The file must already be a valid front.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut input = csv::Reader::from_reader(reader);
        let points = input
            .deserialize::<FrontRow>()
            .map(|row| row.map(|r| ObjectivePoint::with_feasibility(r.energy, r.makespan, true)))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let front = ReferenceFront::from_points(&points)?;
        if front.points.len() != points.len() {
            return Err(Error::arg(
                "front file contains dominated, repeated or unsorted points",
            ));
        }
        if front.points.iter().zip(&points).any(|(a, b)| !a.same_objectives(b)) {
            return Err(Error::arg("front file rows are not in ascending energy order"));
        }
        Ok(front)
    }
}

#[derive(Serialize, Deserialize)]
struct FrontRow {
    energy: f64,
    makespan: f64,
}

/// Pools every archive and keeps the nondominated objective points.
pub fn build_simulated_front<'a>(archives: impl IntoIterator<Item = &'a Archive>) -> Result<ReferenceFront> {
    let points: Vec<ObjectivePoint> =
        archives.into_iter().flat_map(|a| a.entries().iter().map(|e| e.point)).collect();
    if points.is_empty() {
        return Err(Error::arg("cannot build a front from empty archives"));
    }
    ReferenceFront::from_points(&points)
}

fn distances<T: HasObjectives>(points: &[T], front: &ReferenceFront) -> Vec<f64> {
    points.iter().map(|p| front.distance(p.objectives())).collect()
}

/// `sqrt(sum d_i^2) / N` with `N` the number of archive points.
pub fn gd<T: HasObjectives>(points: &[T], front: &ReferenceFront) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::arg("GD of an empty archive"));
    }
    Ok(gd_from_distances(&distances(points, front)))
}

pub fn gd_from_distances(d: &[f64]) -> f64 {
    d.iter().map(|x| x * x).sum::<f64>().sqrt() / d.len() as f64
}

/// Spacing value; `degenerate` marks archives of fewer than two points, for
/// which the value is defined as 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spacing {
    pub value: f64,
    pub degenerate: bool,
}

/// `sqrt(sum (mean(d) - d_i)^2) / (N - 1)`.
pub fn sp<T: HasObjectives>(points: &[T], front: &ReferenceFront) -> Spacing {
    sp_from_distances(&distances(points, front))
}

pub fn sp_from_distances(d: &[f64]) -> Spacing {
    if d.len() < 2 {
        return Spacing { value: 0.0, degenerate: true };
    }
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    let value = d.iter().map(|x| (mean - x).powi(2)).sum::<f64>().sqrt() / (d.len() - 1) as f64;
    Spacing { value, degenerate: false }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountStats {
    /// Archive size.
    pub n_n: usize,
    /// Archive points lying on the front.
    pub n_p: usize,
}

/// Default relative membership tolerance.
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-9;

/// A point counts as on the front when its distance to the front is at most
/// `tol_rel * front.scale()`.
pub fn count_stats<T: HasObjectives>(points: &[T], front: &ReferenceFront, tol_rel: f64) -> CountStats {
    let tol = tol_rel * front.scale();
    CountStats {
        n_n: points.len(),
        n_p: points.iter().filter(|p| front.distance(p.objectives()) <= tol).count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Schedule;
    use crate::pareto::{nondominated_filter, ArchiveEntry};
    use proptest::prelude::*;

    fn pt(e: f64, m: f64) -> ObjectivePoint {
        ObjectivePoint::with_feasibility(e, m, true)
    }

    fn archive(points: &[(f64, f64)]) -> Archive {
        let entries: Vec<_> = points
            .iter()
            .map(|&(e, m)| ArchiveEntry::new(Schedule::from_zero_based(vec![0]), pt(e, m)))
            .collect();
        Archive::from_entries(&entries, 1000, ConstraintMode::Ignore).unwrap()
    }

    fn front(points: &[(f64, f64)]) -> ReferenceFront {
        let pts: Vec<_> = points.iter().map(|&(e, m)| pt(e, m)).collect();
        ReferenceFront::from_points(&pts).unwrap()
    }

    #[test]
    fn gd_fixtures() {
        let f = front(&[(0.0, 10.0), (10.0, 0.0)]);
        assert_eq!(gd(&[pt(0.0, 10.0), pt(10.0, 0.0)], &f).unwrap(), 0.0);
        // (0, 12) is 2 away from (0, 10).
        assert!((gd(&[pt(0.0, 12.0)], &f).unwrap() - 2.0).abs() < 1e-12);
        // distances 3 and 4.
        let v = gd(&[pt(0.0, 13.0), pt(14.0, 0.0)], &f).unwrap();
        assert!((v - 2.5).abs() < 1e-12);
        assert!(gd::<ObjectivePoint>(&[], &f).is_err());
    }

    #[test]
    fn sp_fixtures() {
        let f = front(&[(0.0, 10.0), (10.0, 0.0)]);
        let equal = sp(&[pt(0.0, 13.0), pt(13.0, 0.0)], &f);
        assert_eq!(equal, Spacing { value: 0.0, degenerate: false });
        let v = sp(&[pt(0.0, 10.0), pt(12.0, 0.0)], &f);
        assert!((v.value - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(sp(&[pt(0.0, 10.0), pt(10.0, 0.0)], &f).value, 0.0);
        assert!(sp(&[pt(5.0, 5.0)], &f).degenerate);
    }

    #[test]
    fn count_fixtures() {
        let f = front(&[(0.0, 10.0), (5.0, 5.0), (10.0, 0.0)]);
        let on = [pt(0.0, 10.0), pt(5.0, 5.0)];
        assert_eq!(count_stats(&on, &f, DEFAULT_MEMBERSHIP_TOL), CountStats { n_n: 2, n_p: 2 });
        let off = [pt(1.0, 11.0), pt(6.0, 6.0)];
        assert_eq!(count_stats(&off, &f, DEFAULT_MEMBERSHIP_TOL), CountStats { n_n: 2, n_p: 0 });
        let mixed = [pt(0.0, 10.0), pt(6.0, 6.0), pt(10.0, 0.0), pt(11.0, 1.0)];
        assert_eq!(count_stats(&mixed, &f, DEFAULT_MEMBERSHIP_TOL), CountStats { n_n: 4, n_p: 2 });
        // Relative tolerance: 1e-9 of a scale-10 front admits a 5e-9 offset.
        let near = [pt(5.0 + 5e-9, 5.0)];
        assert_eq!(count_stats(&near, &f, DEFAULT_MEMBERSHIP_TOL).n_p, 1);
    }

    #[test]
    fn simulated_front_cases() {
        let a = archive(&[(1.0, 9.0), (5.0, 5.0), (9.0, 1.0)]);
        let single = build_simulated_front([&a]).unwrap();
        assert_eq!(single.points(), &a.points()[..]);

        let better = archive(&[(0.5, 8.0), (4.0, 4.0), (8.0, 0.5)]);
        let both = build_simulated_front([&a, &better]).unwrap();
        assert_eq!(both.points(), &better.points()[..]);

        let empty = Archive::new(3).unwrap();
        assert!(build_simulated_front([&empty]).is_err());
    }

    #[test]
    fn front_csv_round_trip_and_validation() {
        let f = front(&[(0.1 + 0.2, 10.0), (5.0, 1.0 / 3.0)]);
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("energy,makespan\n"));
        assert_eq!(ReferenceFront::read_csv(buf.as_slice()).unwrap(), f);
        assert!(ReferenceFront::read_csv("energy,makespan\n1,1\n2,2\n".as_bytes()).is_err());
        assert!(ReferenceFront::read_csv("energy,makespan\n2,1\n1,2\n".as_bytes()).is_err());
    }

    fn cloud(max: usize) -> impl Strategy<Value = Vec<ObjectivePoint>> {
        prop::collection::vec((0.0f64..100.0, 0.0f64..100.0), 1..max)
            .prop_map(|v| v.into_iter().map(|(e, m)| pt(e, m)).collect())
    }

    proptest! {
        #[test]
        fn front_matches_pairwise_filter(a in cloud(60), b in cloud(60)) {
            let arch_a = archive(&a.iter().map(|p| (p.energy, p.makespan)).collect::<Vec<_>>());
            let arch_b = archive(&b.iter().map(|p| (p.energy, p.makespan)).collect::<Vec<_>>());
            let built = build_simulated_front([&arch_a, &arch_b]).unwrap();
            let all: Vec<_> = a.iter().chain(&b).copied().collect();
            let mut oracle = nondominated_filter(&all, ConstraintMode::Ignore);
            oracle.sort_by(|x, y| x.energy.total_cmp(&y.energy));
            prop_assert_eq!(built.points(), &oracle[..]);
            // Idempotent.
            prop_assert_eq!(ReferenceFront::from_points(built.points()).unwrap(), built);
        }

        #[test]
        fn metrics_ignore_order_and_extra_front_points_help(pts in cloud(30), f in cloud(30), extra in (0.0f64..100.0, 0.0f64..100.0)) {
            let front_a = ReferenceFront::from_points(&f).unwrap();
            let mut rev = pts.clone();
            rev.reverse();
            prop_assert!((gd(&pts, &front_a).unwrap() - gd(&rev, &front_a).unwrap()).abs() < 1e-9);
            prop_assert!((sp(&pts, &front_a).value - sp(&rev, &front_a).value).abs() < 1e-9);

            let mut grown = f.clone();
            grown.push(pt(extra.0, extra.1));
            let front_b = ReferenceFront::from_points(&grown).unwrap();
            // A new point can evict dominated ones, so compare on the points
            // kept by both fronts: every old front point is weakly dominated
            // by some new one, which can still be farther away. Only check the
            // case where nothing was evicted.
            if front_a.points().iter().all(|p| front_b.points().contains(p)) {
                prop_assert!(gd(&pts, &front_b).unwrap() <= gd(&pts, &front_a).unwrap() + 1e-12);
            }
        }

        #[test]
        fn gd_zero_iff_on_front(f in cloud(30), take in 1usize..10) {
            let front = ReferenceFront::from_points(&f).unwrap();
            let on: Vec<_> = front.points().iter().take(take).copied().collect();
            prop_assert_eq!(gd(&on, &front).unwrap(), 0.0);
            prop_assert_eq!(count_stats(&on, &front, DEFAULT_MEMBERSHIP_TOL).n_p, on.len());
            let off: Vec<_> = on.iter().map(|p| pt(p.energy + 1.0, p.makespan + 1.0)).collect();
            prop_assert!(gd(&off, &front).unwrap() > 0.0);
        }
    }
}
