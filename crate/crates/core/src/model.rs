//! Problem instances, schedules and the two objectives.
//!
//! A [`Schedule`] stores processor indices 0-based in memory. Everything that
//! leaves the process (JSON, CSV, `Display`) uses 1-based indices.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Tasks, processors and the makespan deadline.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    name: String,
    deadline: f64,
    task_sizes: Vec<f64>,
    cpu_speeds: Vec<f64>,
    cpu_energies: Vec<f64>,
    generator: Option<GeneratorInfo>,
}

/// Provenance of a generated instance, carried through serialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorInfo {
    pub seed: u64,
    pub energy_model: String,
}

impl ProblemInstance {
    pub fn new(
        name: impl Into<String>,
        task_sizes: Vec<f64>,
        cpu_speeds: Vec<f64>,
        cpu_energies: Vec<f64>,
        deadline: f64,
    ) -> Result<Self> {
        let instance = ProblemInstance {
            name: name.into(),
            deadline,
            task_sizes,
            cpu_speeds,
            cpu_energies,
            generator: None,
        };
        instance.validate()?;
        Ok(instance)
    }

    pub fn with_generator(mut self, info: GeneratorInfo) -> Self {
        self.generator = Some(info);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.task_sizes.is_empty() {
            return Err(Error::arg("instance needs at least one task"));
        }
        if self.cpu_speeds.is_empty() {
            return Err(Error::arg("instance needs at least one processor"));
        }
        if self.cpu_speeds.len() != self.cpu_energies.len() {
            return Err(Error::arg(format!(
                "{} processor speeds but {} energy rates",
                self.cpu_speeds.len(),
                self.cpu_energies.len()
            )));
        }
        let positive = |v: &f64| v.is_finite() && *v > 0.0;
        if !self.task_sizes.iter().all(positive) {
            return Err(Error::arg("task sizes must be finite and > 0"));
        }
        if !self.cpu_speeds.iter().all(positive) {
            return Err(Error::arg("processor speeds must be finite and > 0"));
        }
        if !self.cpu_energies.iter().all(positive) {
            return Err(Error::arg("processor energy rates must be finite and > 0"));
        }
        if !positive(&self.deadline) {
            return Err(Error::arg("deadline must be finite and > 0"));
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn deadline(&self) -> f64 {
        self.deadline
    }

    pub fn n_tasks(&self) -> usize {
        self.task_sizes.len()
    }

    pub fn n_cpus(&self) -> usize {
        self.cpu_speeds.len()
    }

    pub fn task_sizes(&self) -> &[f64] {
        &self.task_sizes
    }

    pub fn cpu_speeds(&self) -> &[f64] {
        &self.cpu_speeds
    }

    pub fn cpu_energies(&self) -> &[f64] {
        &self.cpu_energies
    }

    pub fn generator(&self) -> Option<&GeneratorInfo> {
        self.generator.as_ref()
    }

    /// Time to run `task` on `cpu` (both 0-based): size over speed.
    pub fn processing_time(&self, task: usize, cpu: usize) -> Result<f64> {
        let size = self.task_sizes.get(task).ok_or_else(|| {
            Error::arg(format!("task index {task} out of range 0..{}", self.n_tasks()))
        })?;
        let speed = self.cpu_speeds.get(cpu).ok_or_else(|| {
            Error::arg(format!("processor index {cpu} out of range 0..{}", self.n_cpus()))
        })?;
        Ok(size / speed)
    }

    /// Energy and makespan of `schedule`, with the deadline check.
    pub fn evaluate(&self, schedule: &Schedule) -> Result<ObjectivePoint> {
        self.check_schedule(schedule)?;
        let mut loads = vec![0.0_f64; self.n_cpus()];
        let mut energy = 0.0;
        for (task, &cpu) in schedule.as_slice().iter().enumerate() {
            let time = self.task_sizes[task] / self.cpu_speeds[cpu];
            energy += time * self.cpu_energies[cpu];
            loads[cpu] += time;
        }
        let makespan = loads.into_iter().fold(0.0, f64::max);
        Ok(ObjectivePoint::new(energy, makespan, self.deadline))
    }

    pub fn check_schedule(&self, schedule: &Schedule) -> Result<()> {
        if schedule.len() != self.n_tasks() {
            return Err(Error::arg(format!(
                "schedule has {} entries, instance has {} tasks",
                schedule.len(),
                self.n_tasks()
            )));
        }
        if let Some(bad) = schedule.as_slice().iter().find(|&&c| c >= self.n_cpus()) {
            return Err(Error::arg(format!(
                "processor {} out of range 1..={}",
                bad + 1,
                self.n_cpus()
            )));
        }
        Ok(())
    }

    /// A schedule with every task drawn uniformly over the processors.
    pub fn random_schedule<R: Rng + ?Sized>(&self, rng: &mut R) -> Schedule {
        let n_cpus = self.n_cpus();
        Schedule((0..self.n_tasks()).map(|_| rng.random_range(0..n_cpus)).collect())
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Serialize, Deserialize)]
struct CpuDoc {
    speed: f64,
    energy: f64,
}

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    name: String,
    deadline: f64,
    tasks: Vec<f64>,
    cpus: Vec<CpuDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<GeneratorInfo>,
}

impl Serialize for ProblemInstance {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        InstanceDoc {
            name: self.name.clone(),
            deadline: self.deadline,
            tasks: self.task_sizes.clone(),
            cpus: self
                .cpu_speeds
                .iter()
                .zip(&self.cpu_energies)
                .map(|(&speed, &energy)| CpuDoc { speed, energy })
                .collect(),
            generator: self.generator.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ProblemInstance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = InstanceDoc::deserialize(deserializer)?;
        let (speeds, energies) = doc.cpus.into_iter().map(|c| (c.speed, c.energy)).unzip();
        let mut instance = ProblemInstance::new(doc.name, doc.tasks, speeds, energies, doc.deadline)
            .map_err(serde::de::Error::custom)?;
        instance.generator = doc.generator;
        Ok(instance)
    }
}

/// Processor assignment per task, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schedule(Vec<usize>);

impl Schedule {
    pub fn from_zero_based(assignment: Vec<usize>) -> Self {
        Schedule(assignment)
    }

    pub fn from_one_based(assignment: &[usize]) -> Result<Self> {
        assignment
            .iter()
            .map(|&c| {
                c.checked_sub(1)
                    .ok_or_else(|| Error::arg("processor indices are 1-based; got 0"))
            })
            .collect::<Result<Vec<_>>>()
            .map(Schedule)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|c| c + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `;`-joined 1-based processor indices.
impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{}", c + 1)?;
        }
        Ok(())
    }
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let one_based = s
            .split(';')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::arg(format!("bad processor index {tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Schedule::from_one_based(&one_based)
    }
}

/// Objective values of one schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectivePoint {
    pub energy: f64,
    pub makespan: f64,
    pub feasible: bool,
}

impl ObjectivePoint {
    pub fn new(energy: f64, makespan: f64, deadline: f64) -> Self {
        ObjectivePoint { energy, makespan, feasible: makespan <= deadline }
    }

    pub fn with_feasibility(energy: f64, makespan: f64, feasible: bool) -> Self {
        ObjectivePoint { energy, makespan, feasible }
    }

    /// Same objective values; feasibility follows from them for a fixed deadline.
    pub fn same_objectives(&self, other: &ObjectivePoint) -> bool {
        self.energy == other.energy && self.makespan == other.makespan
    }

    pub fn distance(&self, other: &ObjectivePoint) -> f64 {
        (self.energy - other.energy).hypot(self.makespan - other.makespan)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use proptest::prelude::*;

    fn two_task() -> ProblemInstance {
        ProblemInstance::new("t", vec![5000.0, 6000.0], vec![1000.0, 2000.0], vec![0.3, 1.2], 30.0)
            .unwrap()
    }

    /// Straight transcription of the model with the full time matrix, where
    /// t[i][j] is zero unless task i runs on j.
    fn brute_force(inst: &ProblemInstance, one_based: &[usize]) -> (f64, f64) {
        let n = inst.n_tasks();
        let m = inst.n_cpus();
        let mut t = vec![vec![0.0; m]; n];
        for i in 0..n {
            for j in 0..m {
                if one_based[i] == j + 1 {
                    t[i][j] = inst.task_sizes()[i] / inst.cpu_speeds()[j];
                }
            }
        }
        let mut energy = 0.0;
        for i in 0..n {
            for j in 0..m {
                energy += t[i][j] * inst.cpu_energies()[j];
            }
        }
        let makespan = (0..m)
            .map(|j| (0..n).map(|i| t[i][j]).sum::<f64>())
            .fold(f64::MIN, f64::max);
        (energy, makespan)
    }

    #[test]
    fn processing_time_examples() {
        let inst = ProblemInstance::new("p", vec![5000.0, 15000.0, 7.0], vec![1000.0, 10000.0, 7.0], vec![1.0; 3], 1.0)
            .unwrap();
        assert_eq!(inst.processing_time(0, 0).unwrap(), 5.0);
        assert_eq!(inst.processing_time(1, 1).unwrap(), 1.5);
        assert_eq!(inst.processing_time(2, 2).unwrap(), 1.0);
        assert!(inst.processing_time(3, 0).is_err());
        assert!(inst.processing_time(0, 3).is_err());
    }

    #[test]
    fn evaluate_hand_example_matches_brute_force() {
        let inst = two_task();
        let (e, m) = brute_force(&inst, &[1, 2]);
        assert!((e - 5.1).abs() < 1e-12);
        assert_eq!(m, 5.0);
        let p = inst.evaluate(&Schedule::from_one_based(&[1, 2]).unwrap()).unwrap();
        assert!((p.energy - 5.1).abs() < 1e-12);
        assert_eq!(p.energy, e);
        assert_eq!(p.makespan, 5.0);
        assert!(p.feasible);
    }

    #[test]
    fn single_processor_makespan() {
        let inst = two_task();
        let p = inst.evaluate(&Schedule::from_one_based(&[1, 1]).unwrap()).unwrap();
        assert_eq!(p.makespan, 11.0);
    }

    #[test]
    fn tenfold_speed_gives_tenth_makespan() {
        let inst = ProblemInstance::new("x", vec![7300.0], vec![1000.0, 10000.0], vec![0.3, 30.0], 30.0).unwrap();
        let slow = inst.evaluate(&Schedule::from_zero_based(vec![0])).unwrap();
        let fast = inst.evaluate(&Schedule::from_zero_based(vec![1])).unwrap();
        assert!((fast.makespan * 10.0 - slow.makespan).abs() < 1e-12);
    }

    #[test]
    fn deadline_sets_feasibility() {
        let inst = ProblemInstance::new("d", vec![5000.0, 6000.0], vec![1000.0, 2000.0], vec![0.3, 1.2], 5.0).unwrap();
        assert!(inst.evaluate(&Schedule::from_one_based(&[1, 2]).unwrap()).unwrap().feasible);
        assert!(!inst.evaluate(&Schedule::from_one_based(&[1, 1]).unwrap()).unwrap().feasible);
    }

    #[test]
    fn invalid_schedules_are_rejected() {
        let inst = two_task();
        assert!(inst.evaluate(&Schedule::from_zero_based(vec![0])).is_err());
        assert!(inst.evaluate(&Schedule::from_zero_based(vec![0, 2])).is_err());
        assert!(Schedule::from_one_based(&[0, 1]).is_err());
    }

    #[test]
    fn invalid_instances_are_rejected() {
        assert!(ProblemInstance::new("e", vec![], vec![1.0], vec![1.0], 1.0).is_err());
        assert!(ProblemInstance::new("e", vec![1.0], vec![], vec![], 1.0).is_err());
        assert!(ProblemInstance::new("e", vec![-1.0], vec![1.0], vec![1.0], 1.0).is_err());
        assert!(ProblemInstance::new("e", vec![1.0], vec![1.0], vec![0.0], 1.0).is_err());
        assert!(ProblemInstance::new("e", vec![1.0], vec![1.0], vec![1.0], 0.0).is_err());
        assert!(ProblemInstance::new("e", vec![1.0], vec![1.0, 2.0], vec![1.0], 1.0).is_err());
    }

    #[test]
    fn random_schedule_single_cpu_is_all_ones() {
        let inst = ProblemInstance::new("one", vec![1.0; 8], vec![5.0], vec![1.0], 1.0).unwrap();
        let s = inst.random_schedule(&mut rng_from_seed(3));
        assert_eq!(s.to_one_based(), vec![1; 8]);
    }

    #[test]
    fn random_schedule_is_uniform() {
        let inst = ProblemInstance::new("u", vec![1.0; 20], vec![1.0; 5], vec![1.0; 5], 1.0).unwrap();
        let mut rng = rng_from_seed(11);
        let mut counts = [0u64; 5];
        let draws = 5000;
        for _ in 0..draws {
            for &c in inst.random_schedule(&mut rng).as_slice() {
                assert!(c < 5);
                counts[c] += 1;
            }
        }
        // 10^5 coordinate draws; binomial(n, 1/5) has sigma = sqrt(n * 0.2 * 0.8).
        let n = (draws * 20) as f64;
        let sigma = (n * 0.2 * 0.8).sqrt();
        for c in counts {
            assert!((c as f64 - n * 0.2).abs() < 3.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn schedule_text_round_trip() {
        let s: Schedule = "3;1;2".parse().unwrap();
        assert_eq!(s.as_slice(), &[2, 0, 1]);
        assert_eq!(s.to_string(), "3;1;2");
        assert!("1;x".parse::<Schedule>().is_err());
    }

    #[test]
    fn json_layout_is_fixed() {
        let json = serde_json::to_string(&two_task()).unwrap();
        assert_eq!(
            json,
            r#"{"name":"t","deadline":30.0,"tasks":[5000.0,6000.0],"cpus":[{"speed":1000.0,"energy":0.3},{"speed":2000.0,"energy":1.2}]}"#
        );
        assert!(ProblemInstance::from_json(r#"{"name":"b","deadline":-1,"tasks":[1],"cpus":[{"speed":1,"energy":1}]}"#).is_err());
    }

    fn instance_strategy() -> impl Strategy<Value = (ProblemInstance, Vec<usize>)> {
        (1usize..12, 1usize..6).prop_flat_map(|(n, m)| {
            (
                prop::collection::vec(1.0f64..20000.0, n),
                prop::collection::vec(100.0f64..10000.0, m),
                prop::collection::vec(0.1f64..40.0, m),
                1.0f64..100.0,
                prop::collection::vec(0..m, n),
            )
                .prop_map(|(t, s, e, d, x)| (ProblemInstance::new("p", t, s, e, d).unwrap(), x))
        })
    }

    proptest! {
        #[test]
        fn evaluate_agrees_with_brute_force((inst, x) in instance_strategy()) {
            let sched = Schedule::from_zero_based(x.clone());
            let p = inst.evaluate(&sched).unwrap();
            let (e, m) = brute_force(&inst, &sched.to_one_based());
            prop_assert!((p.energy - e).abs() <= 1e-9 * e.max(1.0));
            prop_assert!((p.makespan - m).abs() <= 1e-9 * m.max(1.0));
            prop_assert_eq!(p.feasible, p.makespan <= inst.deadline());
            prop_assert!(p.energy >= 0.0 && p.makespan >= 0.0);
            // Pure: repeated evaluation is bit-identical.
            prop_assert_eq!(p, inst.evaluate(&sched).unwrap());
            // Coarse upper bound: every task on its slowest processor, serially.
            let bound: f64 = inst.task_sizes().iter()
                .map(|s| inst.cpu_speeds().iter().map(|v| s / v).fold(0.0, f64::max))
                .sum();
            prop_assert!(p.makespan <= bound * (1.0 + 1e-12));
        }

        #[test]
        fn energy_ignores_task_order((inst, x) in instance_strategy(), rot in 0usize..12) {
            let n = inst.n_tasks();
            let k = rot % n;
            let mut sizes = inst.task_sizes().to_vec();
            sizes.rotate_left(k);
            let mut assign = x.clone();
            assign.rotate_left(k);
            let permuted = ProblemInstance::new("q", sizes, inst.cpu_speeds().to_vec(),
                inst.cpu_energies().to_vec(), inst.deadline()).unwrap();
            let a = inst.evaluate(&Schedule::from_zero_based(x)).unwrap();
            let b = permuted.evaluate(&Schedule::from_zero_based(assign)).unwrap();
            prop_assert!((a.energy - b.energy).abs() <= 1e-9 * a.energy);
            prop_assert!((a.makespan - b.makespan).abs() <= 1e-9 * a.makespan);
        }

        #[test]
        fn moving_a_task_to_idle_faster_cpu_never_slows_it((inst, x) in instance_strategy()) {
            let sched = Schedule::from_zero_based(x.clone());
            let used: Vec<bool> = (0..inst.n_cpus()).map(|j| x.contains(&j)).collect();
            for (task, &from) in x.iter().enumerate() {
                for to in 0..inst.n_cpus() {
                    if !used[to] && inst.cpu_speeds()[to] >= inst.cpu_speeds()[from] {
                        let before = inst.processing_time(task, from).unwrap();
                        let after = inst.processing_time(task, to).unwrap();
                        prop_assert!(after <= before);
                    }
                }
            }
            prop_assert!(inst.check_schedule(&sched).is_ok());
        }

        #[test]
        fn instance_json_round_trip((inst, _x) in instance_strategy()) {
            let back = ProblemInstance::from_json(&inst.to_json_pretty().unwrap()).unwrap();
            prop_assert_eq!(back, inst);
        }
    }
}
