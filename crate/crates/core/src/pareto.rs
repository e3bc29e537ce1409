//! Dominance, nondominated filtering, crowding distance and the bounded
//! archive of temporary nondominated schedules.
//!
//! Both objectives are minimized. Entries with identical objective values are
//! treated as one point: filters keep the first occurrence only.

use std::cmp::Ordering;
use std::io::{Read, Write};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{ObjectivePoint, Schedule};

/// How the deadline constraint enters dominance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintMode {
    /// Plain Pareto dominance on (energy, makespan).
    Ignore,
    /// Feasible beats infeasible; among infeasible points the smaller makespan
    /// (smaller deadline violation) wins; feasible points compare by Pareto
    /// dominance.
    #[default]
    FeasibilityFirst,
}

impl ConstraintMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConstraintMode::Ignore => "ignore",
            ConstraintMode::FeasibilityFirst => "feasibility_first",
        }
    }
}

impl std::str::FromStr for ConstraintMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ignore" => Ok(ConstraintMode::Ignore),
            "feasibility_first" => Ok(ConstraintMode::FeasibilityFirst),
            other => Err(Error::arg(format!(
                "unknown constraint mode {other:?} (expected ignore or feasibility_first)"
            ))),
        }
    }
}

/// Anything that carries an objective point.
pub trait HasObjectives {
    fn objectives(&self) -> &ObjectivePoint;
}

impl HasObjectives for ObjectivePoint {
    fn objectives(&self) -> &ObjectivePoint {
        self
    }
}

impl<T: HasObjectives> HasObjectives for &T {
    fn objectives(&self) -> &ObjectivePoint {
        (*self).objectives()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveEntry {
    pub schedule: Schedule,
    pub point: ObjectivePoint,
}

impl ArchiveEntry {
    pub fn new(schedule: Schedule, point: ObjectivePoint) -> Self {
        ArchiveEntry { schedule, point }
    }
}

impl HasObjectives for ArchiveEntry {
    fn objectives(&self) -> &ObjectivePoint {
        &self.point
    }
}

/// Serialized as `[energy, makespan, feasible, "1;2;..."]`, the CSV row
/// layout embedded as an array.
impl Serialize for ArchiveEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        (self.point.energy, self.point.makespan, self.point.feasible, self.schedule.to_string())
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ArchiveEntry {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let (energy, makespan, feasible, assignment) =
            <(f64, f64, bool, String)>::deserialize(deserializer)?;
        let schedule = assignment.parse().map_err(D::Error::custom)?;
        Ok(ArchiveEntry::new(schedule, ObjectivePoint::with_feasibility(energy, makespan, feasible)))
    }
}

/// Whether `a` dominates `b` under `mode`.
pub fn dominates(a: &ObjectivePoint, b: &ObjectivePoint, mode: ConstraintMode) -> bool {
    if mode == ConstraintMode::FeasibilityFirst {
        match (a.feasible, b.feasible) {
            (true, false) => return true,
            (false, true) => return false,
            (false, false) => return a.makespan < b.makespan,
            (true, true) => {}
        }
    }
    a.energy <= b.energy
        && a.makespan <= b.makespan
        && (a.energy < b.energy || a.makespan < b.makespan)
}

/// Pairwise O(n^2) filter. Keeps, in input order, every item that no other
/// item dominates; repeated objective points keep their first occurrence.
pub fn nondominated_filter<T: HasObjectives + Clone>(items: &[T], mode: ConstraintMode) -> Vec<T> {
    let points: Vec<&ObjectivePoint> = items.iter().map(|x| x.objectives()).collect();
    items
        .iter()
        .enumerate()
        .filter(|&(i, _)| {
            let p = points[i];
            !points[..i].iter().any(|q| q.same_objectives(p))
                && !points.iter().any(|q| dominates(q, p, mode))
        })
        .map(|(_, x)| x.clone())
        .collect()
}

fn by_energy_then_makespan(a: &ObjectivePoint, b: &ObjectivePoint) -> Ordering {
    a.energy.total_cmp(&b.energy).then(a.makespan.total_cmp(&b.makespan))
}

/// O(n log n) nondominated filter for two objectives: sort by energy and keep
/// each point whose makespan beats every point before it. Returns indices into
/// `items` in ascending energy order.
fn sweep_indices<T: HasObjectives>(items: &[T], mode: ConstraintMode) -> Vec<usize> {
    let any_feasible = items.iter().any(|x| x.objectives().feasible);
    if mode == ConstraintMode::FeasibilityFirst && !any_feasible {
        // Only infeasible points: the minimal-violation ones survive.
        let best = items
            .iter()
            .map(|x| x.objectives().makespan)
            .fold(f64::INFINITY, f64::min);
        let mut idx: Vec<usize> =
            (0..items.len()).filter(|&i| items[i].objectives().makespan == best).collect();
        idx.sort_by(|&a, &b| {
            by_energy_then_makespan(items[a].objectives(), items[b].objectives()).then(a.cmp(&b))
        });
        idx.dedup_by(|b, a| items[*a].objectives().same_objectives(items[*b].objectives()));
        return idx;
    }

    let mut idx: Vec<usize> = (0..items.len())
        .filter(|&i| mode == ConstraintMode::Ignore || items[i].objectives().feasible)
        .collect();
    idx.sort_by(|&a, &b| {
        by_energy_then_makespan(items[a].objectives(), items[b].objectives()).then(a.cmp(&b))
    });
    let mut best = f64::INFINITY;
    idx.retain(|&i| {
        let m = items[i].objectives().makespan;
        if m < best {
            best = m;
            true
        } else {
            false
        }
    });
    idx
}

/// Same set as [`nondominated_filter`], in ascending energy order.
pub fn sweep_filter<T: HasObjectives + Clone>(items: &[T], mode: ConstraintMode) -> Vec<T> {
    sweep_indices(items, mode).into_iter().map(|i| items[i].clone()).collect()
}

/// True when no item dominates another and no objective point repeats.
pub fn is_mutually_nondominated<T: HasObjectives>(items: &[T], mode: ConstraintMode) -> bool {
    sweep_indices(items, mode).len() == items.len()
}

/// Nondominated set of `previous ∪ offspring` when `previous` is already
/// mutually nondominated.
///
/// The offspring are filtered pairwise first; the survivors are then merged
/// with `previous` by a sorted sweep. Output is in ascending energy order,
/// and an entry of `previous` wins over an offspring with the same objective
/// point.
pub fn group_compare_checked<T: HasObjectives + Clone>(
    previous: &[T],
    offspring: &[T],
    mode: ConstraintMode,
) -> Result<Vec<T>> {
    if !is_mutually_nondominated(previous, mode) {
        return Err(Error::Contract(
            "group comparison needs a mutually nondominated previous front".into(),
        ));
    }
    let fresh = nondominated_filter(offspring, mode);
    let mut merged = Vec::with_capacity(previous.len() + fresh.len());
    merged.extend_from_slice(previous);
    merged.extend(fresh);
    Ok(sweep_filter(&merged, mode))
}

/// [`group_compare_checked`], falling back to the full pairwise filter of the
/// union when `previous` breaks the precondition.
pub fn group_compare<T: HasObjectives + Clone>(
    previous: &[T],
    offspring: &[T],
    mode: ConstraintMode,
) -> Vec<T> {
    match group_compare_checked(previous, offspring, mode) {
        Ok(front) => front,
        Err(e) => {
            log::warn!("{e}; falling back to pairwise filtering");
            let union: Vec<T> = previous.iter().chain(offspring).cloned().collect();
            nondominated_filter(&union, mode)
        }
    }
}

/// Per-entry crowding value: the Euclidean norm of the two normalized
/// nearest-neighbour gaps, one gap per objective. A single entry gets
/// `f64::INFINITY`.
pub fn crowding_distance<T: HasObjectives>(front: &[T]) -> Result<Vec<f64>> {
    match front.len() {
        0 => return Err(Error::arg("crowding distance of an empty front")),
        1 => return Ok(vec![f64::INFINITY]),
        _ => {}
    }
    let energy = nearest_gaps(front, |p| p.energy);
    let makespan = nearest_gaps(front, |p| p.makespan);
    Ok(energy.iter().zip(&makespan).map(|(a, b)| a.hypot(*b)).collect())
}

/// Normalized gap from each item to its nearest neighbour along one objective.
fn nearest_gaps<T: HasObjectives>(front: &[T], key: impl Fn(&ObjectivePoint) -> f64) -> Vec<f64> {
    let values: Vec<f64> = front.iter().map(|x| key(x.objectives())).collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let span = values[order[order.len() - 1]] - values[order[0]];
    let mut gaps = vec![0.0; values.len()];
    if span <= 0.0 {
        return gaps;
    }
    for (rank, &i) in order.iter().enumerate() {
        let below = rank.checked_sub(1).map(|r| values[i] - values[order[r]]);
        let above = order.get(rank + 1).map(|&j| values[j] - values[i]);
        let gap = match (below, above) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => 0.0,
        };
        gaps[i] = gap / span;
    }
    gaps
}

/// Indices of `front` ranked best-first: larger crowding value, then lower
/// energy, then lower makespan, then earlier position.
fn crowding_rank<T: HasObjectives>(front: &[T]) -> Vec<usize> {
    if front.is_empty() {
        return Vec::new();
    }
    let crowd = crowding_distance(front).expect("front is nonempty");
    let mut order: Vec<usize> = (0..front.len()).collect();
    order.sort_by(|&a, &b| {
        crowd[b]
            .total_cmp(&crowd[a])
            .then_with(|| by_energy_then_makespan(front[a].objectives(), front[b].objectives()))
            .then(a.cmp(&b))
    });
    order
}

/// Keeps the `keep` least crowded entries (deterministic tie-break, see
/// [`crowding_rank`]). Fronts no larger than `keep` come back unchanged.
pub fn truncate_by_crowding<T: HasObjectives + Clone>(front: Vec<T>, keep: usize) -> Vec<T> {
    debug_assert!(keep >= 1, "truncation must keep at least one entry");
    if front.len() <= keep {
        return front;
    }
    crowding_rank(&front)
        .into_iter()
        .take(keep)
        .map(|i| front[i].clone())
        .collect()
}

/// Bounded set of mutually nondominated entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Archive {
    entries: Vec<ArchiveEntry>,
    capacity: usize,
}

impl Archive {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::arg("archive capacity must be >= 1"));
        }
        Ok(Archive { entries: Vec::new(), capacity })
    }

    /// Filters `entries` down to their nondominated set, truncated by crowding.
    pub fn from_entries(entries: &[ArchiveEntry], capacity: usize, mode: ConstraintMode) -> Result<Self> {
        let mut archive = Archive::new(capacity)?;
        archive.merge(entries, mode);
        Ok(archive)
    }

    /// Merges `offspring` by group comparison, then truncates to capacity.
    pub fn merge(&mut self, offspring: &[ArchiveEntry], mode: ConstraintMode) {
        let front = group_compare(&self.entries, offspring, mode);
        self.entries = truncate_by_crowding(front, self.capacity);
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<ArchiveEntry> {
        self.entries
    }

    pub fn points(&self) -> Vec<ObjectivePoint> {
        self.entries.iter().map(|e| e.point).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn check_invariants(&self, mode: ConstraintMode) -> Result<()> {
        if self.entries.len() > self.capacity {
            return Err(Error::Contract(format!(
                "archive holds {} entries over capacity {}",
                self.entries.len(),
                self.capacity
            )));
        }
        if !is_mutually_nondominated(&self.entries, mode) {
            return Err(Error::Contract("archive entries dominate each other or repeat".into()));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    energy: f64,
    makespan: f64,
    feasible: bool,
    assignment: String,
}

/// Writes `energy,makespan,feasible,assignment` rows with a header.
pub fn write_archive_csv<W: Write>(writer: W, entries: &[ArchiveEntry]) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    for e in entries {
        out.serialize(CsvRow {
            energy: e.point.energy,
            makespan: e.point.makespan,
            feasible: e.point.feasible,
            assignment: e.schedule.to_string(),
        })?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_archive_csv<R: Read>(reader: R) -> Result<Vec<ArchiveEntry>> {
    let mut input = csv::Reader::from_reader(reader);
    input
        .deserialize::<CsvRow>()
        .map(|row| {
            let row = row?;
            Ok(ArchiveEntry::new(
                row.assignment.parse()?,
                ObjectivePoint::with_feasibility(row.energy, row.makespan, row.feasible),
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const DEADLINE: f64 = 5.0;

    fn pt(e: f64, m: f64) -> ObjectivePoint {
        ObjectivePoint::new(e, m, DEADLINE)
    }

    fn set(points: &[ObjectivePoint]) -> Vec<(f64, f64)> {
        let mut v: Vec<(f64, f64)> = points.iter().map(|p| (p.energy, p.makespan)).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        v
    }

    #[test]
    fn dominance_examples() {
        let ig = ConstraintMode::Ignore;
        assert!(dominates(&pt(1.0, 2.0), &pt(2.0, 3.0), ig));
        assert!(!dominates(&pt(1.0, 3.0), &pt(3.0, 1.0), ig));
        assert!(!dominates(&pt(3.0, 1.0), &pt(1.0, 3.0), ig));
        assert!(!dominates(&pt(5.0, 5.0), &pt(5.0, 5.0), ig));
        assert!(!dominates(&pt(5.0, 5.0), &pt(5.0, 5.0), ConstraintMode::FeasibilityFirst));
        assert!(dominates(&pt(1.0, 2.0), &pt(1.0, 3.0), ig));
    }

    #[test]
    fn feasibility_first_rules() {
        let ff = ConstraintMode::FeasibilityFirst;
        let feasible_costly = pt(100.0, 4.0);
        let infeasible_cheap = pt(1.0, 6.0);
        let infeasible_worse = pt(0.5, 9.0);
        assert!(dominates(&feasible_costly, &infeasible_cheap, ff));
        assert!(!dominates(&infeasible_cheap, &feasible_costly, ff));
        assert!(dominates(&infeasible_cheap, &infeasible_worse, ff));
        assert!(!dominates(&infeasible_worse, &infeasible_cheap, ff));
        assert!(!dominates(&infeasible_cheap, &feasible_costly, ConstraintMode::Ignore));
    }

    #[test]
    fn filter_examples() {
        let ig = ConstraintMode::Ignore;
        let pts = [pt(1.0, 3.0), pt(3.0, 1.0), pt(2.0, 2.0), pt(4.0, 4.0)];
        assert_eq!(nondominated_filter(&pts, ig), pts[..3].to_vec());
        assert_eq!(nondominated_filter(&pts[..1], ig), pts[..1].to_vec());
        let chain = [pt(1.0, 1.0), pt(2.0, 2.0), pt(3.0, 3.0)];
        assert_eq!(nondominated_filter(&chain, ig), vec![pt(1.0, 1.0)]);
    }

    #[test]
    fn filter_collapses_duplicates_keeping_first() {
        let a = ArchiveEntry::new(Schedule::from_zero_based(vec![0]), pt(1.0, 1.0));
        let b = ArchiveEntry::new(Schedule::from_zero_based(vec![1]), pt(1.0, 1.0));
        let out = nondominated_filter(&[a.clone(), b], ConstraintMode::Ignore);
        assert_eq!(out, vec![a]);
    }

    #[test]
    fn group_compare_examples() {
        let ig = ConstraintMode::Ignore;
        let prev = [pt(1.0, 3.0), pt(3.0, 1.0)];
        let off = [pt(2.0, 2.0), pt(0.5, 4.0), pt(4.0, 4.0)];
        let union: Vec<_> = prev.iter().chain(&off).copied().collect();
        let oracle = nondominated_filter(&union, ig);
        let got = group_compare(&prev, &off, ig);
        assert_eq!(set(&got), set(&oracle));
        assert_eq!(set(&got), vec![(0.5, 4.0), (1.0, 3.0), (2.0, 2.0), (3.0, 1.0)]);

        let dominated = [pt(2.0, 4.0), pt(4.0, 2.0)];
        assert_eq!(set(&group_compare(&prev, &dominated, ig)), set(&prev));
        assert_eq!(set(&group_compare(&[], &off, ig)), set(&nondominated_filter(&off, ig)));
    }

    #[test]
    fn group_compare_prefers_previous_on_ties() {
        let old = ArchiveEntry::new(Schedule::from_zero_based(vec![0]), pt(1.0, 1.0));
        let new = ArchiveEntry::new(Schedule::from_zero_based(vec![1]), pt(1.0, 1.0));
        let out = group_compare(&[old.clone()], &[new], ConstraintMode::Ignore);
        assert_eq!(out, vec![old]);
    }

    #[test]
    fn group_compare_flags_bad_previous_and_falls_back() {
        let ig = ConstraintMode::Ignore;
        let bad_prev = [pt(1.0, 1.0), pt(2.0, 2.0)];
        let off = [pt(0.5, 3.0)];
        assert!(matches!(group_compare_checked(&bad_prev, &off, ig), Err(Error::Contract(_))));
        let got = group_compare(&bad_prev, &off, ig);
        assert_eq!(set(&got), vec![(0.5, 3.0), (1.0, 1.0)]);
    }

    #[test]
    fn infeasible_only_keeps_minimal_violation() {
        let ff = ConstraintMode::FeasibilityFirst;
        let pts = [pt(1.0, 7.0), pt(9.0, 6.0), pt(2.0, 6.0), pt(2.0, 6.0), pt(0.1, 8.0)];
        let pairwise = nondominated_filter(&pts, ff);
        assert_eq!(set(&pairwise), vec![(2.0, 6.0), (9.0, 6.0)]);
        assert_eq!(set(&sweep_filter(&pts, ff)), set(&pairwise));
    }

    #[test]
    fn crowding_examples() {
        assert_eq!(crowding_distance(&[pt(1.0, 1.0)]).unwrap(), vec![f64::INFINITY]);
        assert!(crowding_distance::<ObjectivePoint>(&[]).is_err());

        let front = [pt(0.0, 10.0), pt(5.0, 5.0), pt(10.0, 0.0)];
        let c = crowding_distance(&front).unwrap();
        for v in &c {
            assert!((v - 0.5f64.sqrt()).abs() < 1e-15);
        }

        let pair = crowding_distance(&[pt(1.0, 4.0), pt(3.0, 2.0)]).unwrap();
        assert_eq!(pair[0], pair[1]);
    }

    #[test]
    fn crowding_degenerate_axis_contributes_zero() {
        let c = crowding_distance(&[pt(1.0, 6.0), pt(1.0, 6.0), pt(1.0, 6.0)]).unwrap();
        assert_eq!(c, vec![0.0; 3]);
        let c = crowding_distance(&[pt(1.0, 6.0), pt(3.0, 6.0), pt(7.0, 6.0)]).unwrap();
        assert_eq!(c, vec![2.0 / 6.0, 2.0 / 6.0, 4.0 / 6.0]);
    }

    #[test]
    fn truncation_examples() {
        let front = vec![pt(0.0, 10.0), pt(5.0, 5.0), pt(10.0, 0.0)];
        assert_eq!(truncate_by_crowding(front.clone(), 3), front);
        assert_eq!(truncate_by_crowding(front.clone(), 2), vec![pt(0.0, 10.0), pt(5.0, 5.0)]);
        assert_eq!(truncate_by_crowding(front.clone(), 1), vec![pt(0.0, 10.0)]);

        let uneven = vec![pt(0.0, 10.0), pt(1.0, 9.0), pt(6.0, 4.0), pt(10.0, 0.0)];
        let kept = truncate_by_crowding(uneven.clone(), 1);
        let c = crowding_distance(&uneven).unwrap();
        // Largest crowding, ties to lower energy.
        let best = (0..4).max_by(|&a, &b| c[a].total_cmp(&c[b]).then(uneven[b].energy.total_cmp(&uneven[a].energy))).unwrap();
        assert_eq!(kept, vec![uneven[best]]);
    }

    #[test]
    fn archive_respects_capacity() {
        let mut archive = Archive::new(2).unwrap();
        let entries: Vec<ArchiveEntry> = (0..6)
            .map(|i| ArchiveEntry::new(Schedule::from_zero_based(vec![i]), pt(i as f64, 10.0 - i as f64)))
            .collect();
        archive.merge(&entries, ConstraintMode::Ignore);
        assert_eq!(archive.len(), 2);
        archive.check_invariants(ConstraintMode::Ignore).unwrap();
        assert!(Archive::new(0).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let entries = vec![
            ArchiveEntry::new("1;2;3".parse().unwrap(), ObjectivePoint::with_feasibility(0.1 + 0.2, 31.5, false)),
            ArchiveEntry::new("2;2;1".parse().unwrap(), ObjectivePoint::with_feasibility(12.0, 3.0, true)),
        ];
        let mut buf = Vec::new();
        write_archive_csv(&mut buf, &entries).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("energy,makespan,feasible,assignment\n"));
        assert!(text.contains("1;2;3"));
        assert_eq!(read_archive_csv(buf.as_slice()).unwrap(), entries);
    }

    #[test]
    fn entry_json_is_row_array() {
        let e = ArchiveEntry::new("3;1".parse().unwrap(), ObjectivePoint::with_feasibility(1.5, 2.0, true));
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(json, r#"[1.5,2.0,true,"3;1"]"#);
        assert_eq!(serde_json::from_str::<ArchiveEntry>(&json).unwrap(), e);
    }

    /// Independent crowding routine: brute-force nearest neighbour per axis.
    fn brute_crowding(front: &[ObjectivePoint]) -> Vec<f64> {
        let axis = |f: fn(&ObjectivePoint) -> f64| -> Vec<f64> {
            let max = front.iter().map(f).fold(f64::MIN, f64::max);
            let min = front.iter().map(f).fold(f64::MAX, f64::min);
            (0..front.len())
                .map(|i| {
                    if max == min {
                        return 0.0;
                    }
                    (0..front.len())
                        .filter(|&j| j != i)
                        .map(|j| (f(&front[i]) - f(&front[j])).abs() / (max - min))
                        .fold(f64::INFINITY, f64::min)
                })
                .collect()
        };
        let e = axis(|p| p.energy);
        let m = axis(|p| p.makespan);
        e.iter().zip(&m).map(|(a, b)| (a * a + b * b).sqrt()).collect()
    }

    fn points(max: usize) -> impl Strategy<Value = Vec<ObjectivePoint>> {
        // Small integer grid so duplicates and ties actually occur.
        prop::collection::vec((0u32..30, 0u32..30), 0..max)
            .prop_map(|v| v.into_iter().map(|(e, m)| pt(e as f64, m as f64 * 0.5)).collect())
    }

    proptest! {
        #[test]
        fn dominance_is_irreflexive_and_transitive(a in (0u32..6, 0u32..6), b in (0u32..6, 0u32..6), c in (0u32..6, 0u32..6)) {
            for mode in [ConstraintMode::Ignore, ConstraintMode::FeasibilityFirst] {
                let (a, b, c) = (pt(a.0 as f64, a.1 as f64), pt(b.0 as f64, b.1 as f64), pt(c.0 as f64, c.1 as f64));
                prop_assert!(!dominates(&a, &a, mode));
                if dominates(&a, &b, mode) && dominates(&b, &c, mode) {
                    prop_assert!(dominates(&a, &c, mode));
                }
            }
        }

        #[test]
        fn filter_output_is_exactly_the_undominated(pts in points(200)) {
            for mode in [ConstraintMode::Ignore, ConstraintMode::FeasibilityFirst] {
                let kept = nondominated_filter(&pts, mode);
                prop_assert!(is_mutually_nondominated(&kept, mode));
                for p in &pts {
                    let included = kept.iter().any(|k| k.same_objectives(p));
                    let dominated = kept.iter().any(|k| dominates(k, p, mode));
                    prop_assert!(included != dominated);
                }
                prop_assert_eq!(set(&sweep_filter(&pts, mode)), set(&kept));
            }
        }

        #[test]
        fn group_compare_equals_union_filter(a in points(80), b in points(80)) {
            for mode in [ConstraintMode::Ignore, ConstraintMode::FeasibilityFirst] {
                let prev = nondominated_filter(&a, mode);
                let union: Vec<_> = prev.iter().chain(&b).copied().collect();
                prop_assert_eq!(set(&group_compare(&prev, &b, mode)), set(&nondominated_filter(&union, mode)));
            }
        }

        #[test]
        fn crowding_matches_brute_force(pts in points(60)) {
            prop_assume!(!pts.is_empty());
            let c = crowding_distance(&pts).unwrap();
            if pts.len() == 1 {
                prop_assert!(c[0].is_infinite());
            } else {
                let oracle = brute_crowding(&pts);
                for (x, y) in c.iter().zip(&oracle) {
                    prop_assert!((x - y).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn crowding_is_affine_invariant(pts in points(40), scale in 0.01f64..100.0, shift in -1e3f64..1e3) {
            prop_assume!(pts.len() >= 2);
            let moved: Vec<_> = pts.iter().map(|p| pt(p.energy * scale + shift, p.makespan)).collect();
            let a = crowding_distance(&pts).unwrap();
            let b = crowding_distance(&moved).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }

        #[test]
        fn truncation_is_deterministic_and_sized(pts in points(60), keep in 1usize..20) {
            let front = nondominated_filter(&pts, ConstraintMode::Ignore);
            let a = truncate_by_crowding(front.clone(), keep);
            prop_assert_eq!(a.len(), front.len().min(keep));
            prop_assert_eq!(a, truncate_by_crowding(front, keep));
        }
    }
}
