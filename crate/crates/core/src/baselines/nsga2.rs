use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bsso::check_sizes;
use crate::error::{Error, Result};
use crate::eval::{CountingEvaluator, RunOutcome};
use crate::model::{ProblemInstance, Schedule};
use crate::pareto::{dominates, nondominated_filter, Archive, ArchiveEntry, ConstraintMode, HasObjectives};
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NsgaParams {
    pub crossover_rate: f64,
    /// Expected number of reset genes per child; each gene resets with
    /// probability `mutation_rate / n_tasks`.
    pub mutation_rate: f64,
    pub n_sol: usize,
    pub n_gen: usize,
    pub n_non: usize,
    pub constraint_mode: ConstraintMode,
    pub seed: u64,
}

impl NsgaParams {
    pub fn new(n_sol: usize, n_gen: usize, seed: u64) -> Self {
        NsgaParams {
            crossover_rate: 0.7,
            mutation_rate: 0.3,
            n_sol,
            n_gen,
            n_non: n_sol,
            constraint_mode: ConstraintMode::default(),
            seed,
        }
    }

    pub fn with_mode(mut self, mode: ConstraintMode) -> Self {
        self.constraint_mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !unit(self.crossover_rate) || !unit(self.mutation_rate) {
            return Err(Error::arg("crossover and mutation rates must lie in [0, 1]"));
        }
        check_sizes(self.n_sol, self.n_gen, self.n_non)
    }
}

/// Deb's fast nondominated sort. Returns fronts of indices, best first.
pub fn fast_nondominated_sort<T: HasObjectives>(pop: &[T], mode: ConstraintMode) -> Vec<Vec<usize>> {
    let n = pop.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut dominators = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (pop[i].objectives(), pop[j].objectives());
            if dominates(a, b, mode) {
                dominated_by_me[i].push(j);
                dominators[j] += 1;
            } else if dominates(b, a, mode) {
                dominated_by_me[j].push(i);
                dominators[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominators[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by_me[i] {
                dominators[j] -= 1;
                if dominators[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Classic cuboid crowding over one front: boundary members get infinity,
/// interior members the sum of normalized neighbour gaps per objective.
pub fn nsga_crowding<T: HasObjectives>(pop: &[T], front: &[usize]) -> Vec<f64> {
    let mut crowd = vec![0.0; front.len()];
    if front.len() <= 2 {
        return vec![f64::INFINITY; front.len()];
    }
    let keys: [fn(&T) -> f64; 2] = [|x| x.objectives().energy, |x| x.objectives().makespan];
    for key in keys {
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.sort_by(|&a, &b| key(&pop[front[a]]).total_cmp(&key(&pop[front[b]])).then(a.cmp(&b)));
        let lo = key(&pop[front[order[0]]]);
        let hi = key(&pop[front[order[order.len() - 1]]]);
        crowd[order[0]] = f64::INFINITY;
        crowd[order[order.len() - 1]] = f64::INFINITY;
        if hi > lo {
            for w in 1..order.len() - 1 {
                let gap = key(&pop[front[order[w + 1]]]) - key(&pop[front[order[w - 1]]]);
                crowd[order[w]] += gap / (hi - lo);
            }
        }
    }
    crowd
}

struct Ranked {
    rank: Vec<usize>,
    crowd: Vec<f64>,
}

fn rank_population(pop: &[ArchiveEntry], mode: ConstraintMode) -> Ranked {
    let mut rank = vec![0; pop.len()];
    let mut crowd = vec![0.0; pop.len()];
    for (r, front) in fast_nondominated_sort(pop, mode).iter().enumerate() {
        for (&i, c) in front.iter().zip(nsga_crowding(pop, front)) {
            rank[i] = r;
            crowd[i] = c;
        }
    }
    Ranked { rank, crowd }
}

fn tournament<R: Rng>(ranked: &Ranked, rng: &mut R) -> usize {
    let n = ranked.rank.len();
    let a = rng.random_range(0..n);
    let b = rng.random_range(0..n);
    let better = |x: usize, y: usize| {
        ranked.rank[x] < ranked.rank[y]
            || (ranked.rank[x] == ranked.rank[y] && ranked.crowd[x] > ranked.crowd[y])
    };
    if better(b, a) {
        b
    } else {
        a
    }
}

/// Elitist survivor selection: whole fronts while they fit, then the least
/// crowded members of the first front that does not.
fn survivors(combined: Vec<ArchiveEntry>, n_sol: usize, mode: ConstraintMode) -> Vec<ArchiveEntry> {
    let mut chosen = Vec::with_capacity(n_sol);
    for front in fast_nondominated_sort(&combined, mode) {
        if chosen.len() + front.len() <= n_sol {
            chosen.extend(front);
        } else {
            let crowd = nsga_crowding(&combined, &front);
            let mut order: Vec<usize> = (0..front.len()).collect();
            order.sort_by(|&a, &b| crowd[b].total_cmp(&crowd[a]).then(a.cmp(&b)));
            let room = n_sol - chosen.len();
            chosen.extend(order[..room].iter().map(|&k| front[k]));
        }
        if chosen.len() == n_sol {
            break;
        }
    }
    chosen.into_iter().map(|i| combined[i].clone()).collect()
}

pub fn run_nsga2(instance: &ProblemInstance, params: &NsgaParams) -> Result<RunOutcome> {
    params.validate()?;
    let started = Instant::now();
    let mode = params.constraint_mode;
    let n_sol = params.n_sol;
    let n_cpus = instance.n_cpus();
    let gene_rate = params.mutation_rate / instance.n_tasks() as f64;
    let mut rng = rng_from_seed(params.seed);
    let eval = CountingEvaluator::new(instance, (n_sol * params.n_gen) as u64);

    let mut pop = (0..n_sol)
        .map(|_| eval.evaluate(instance.random_schedule(&mut rng)))
        .collect::<Result<Vec<_>>>()?;

    for _ in 2..=params.n_gen {
        let ranked = rank_population(&pop, mode);
        let mut offspring = Vec::with_capacity(n_sol);
        while offspring.len() < n_sol {
            let a = pop[tournament(&ranked, &mut rng)].schedule.as_slice();
            let b = pop[tournament(&ranked, &mut rng)].schedule.as_slice();
            let (mut c1, mut c2) = (a.to_vec(), b.to_vec());
            if rng.random::<f64>() < params.crossover_rate {
                for j in 0..c1.len() {
                    if rng.random::<bool>() {
                        std::mem::swap(&mut c1[j], &mut c2[j]);
                    }
                }
            }
            for child in [c1, c2] {
                if offspring.len() == n_sol {
                    break;
                }
                let mutated = child
                    .into_iter()
                    .map(|g| if rng.random::<f64>() < gene_rate { rng.random_range(0..n_cpus) } else { g })
                    .collect();
                offspring.push(eval.evaluate(Schedule::from_zero_based(mutated))?);
            }
        }
        pop.extend(offspring);
        pop = survivors(pop, n_sol, mode);
    }

    let first = fast_nondominated_sort(&pop, mode).swap_remove(0);
    let front: Vec<ArchiveEntry> = first.into_iter().map(|i| pop[i].clone()).collect();
    let front = nondominated_filter(&front, mode);
    Ok(RunOutcome {
        archive: Archive::from_entries(&front, params.n_non, mode)?,
        evaluations: eval.used(),
        seconds: started.elapsed().as_secs_f64(),
        seed: params.seed,
        constraint_mode: mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchgen::{generate, BenchmarkSpec};
    use crate::model::ObjectivePoint;
    use crate::rng::rng_from_seed;

    fn pt(e: f64, m: f64) -> ObjectivePoint {
        ObjectivePoint::new(e, m, 10.0)
    }

    #[test]
    fn sort_layers() {
        let pop = [pt(1.0, 5.0), pt(2.0, 2.0), pt(5.0, 1.0), pt(3.0, 3.0), pt(6.0, 6.0), pt(2.0, 2.0)];
        let fronts = fast_nondominated_sort(&pop, ConstraintMode::Ignore);
        assert_eq!(fronts, vec![vec![0, 1, 2, 5], vec![3], vec![4]]);
    }

    #[test]
    fn cuboid_crowding() {
        let pop = [pt(0.0, 10.0), pt(2.0, 6.0), pt(6.0, 2.0), pt(10.0, 0.0)];
        let c = nsga_crowding(&pop, &[0, 1, 2, 3]);
        assert!(c[0].is_infinite() && c[3].is_infinite());
        // (6 - 0)/10 + (10 - 2)/10 and (10 - 2)/10 + (6 - 0)/10.
        assert!((c[1] - 1.4).abs() < 1e-12);
        assert!((c[2] - 1.4).abs() < 1e-12);
    }

    #[test]
    fn survivors_keep_best_fronts() {
        let mk = |e, m| ArchiveEntry::new(Schedule::from_zero_based(vec![0]), pt(e, m));
        let combined = vec![mk(5.0, 5.0), mk(1.0, 4.0), mk(4.0, 1.0), mk(2.0, 2.0), mk(6.0, 6.0)];
        let kept = survivors(combined, 3, ConstraintMode::Ignore);
        let pts: Vec<_> = kept.iter().map(|e| (e.point.energy, e.point.makespan)).collect();
        assert_eq!(pts, vec![(1.0, 4.0), (4.0, 1.0), (2.0, 2.0)]);
    }

    #[test]
    fn no_variation_keeps_initial_front() {
        let inst = generate(&BenchmarkSpec::small(1)).unwrap();
        let mut params = NsgaParams::new(12, 15, 8).with_mode(ConstraintMode::Ignore);
        params.crossover_rate = 0.0;
        params.mutation_rate = 0.0;
        let out = run_nsga2(&inst, &params).unwrap();
        let mut rng = rng_from_seed(8);
        let initial: Vec<_> = (0..12)
            .map(|_| {
                let s = inst.random_schedule(&mut rng);
                ArchiveEntry::new(s.clone(), inst.evaluate(&s).unwrap())
            })
            .collect();
        let initial_front = nondominated_filter(&initial, ConstraintMode::Ignore);
        for e in out.archive.entries() {
            assert!(initial_front.iter().any(|f| f.point.same_objectives(&e.point)));
        }
        assert_eq!(out.evaluations, 12 * 15);
    }

    #[test]
    fn budget_determinism_and_archive() {
        let inst = generate(&BenchmarkSpec::small(2)).unwrap();
        for (n_sol, n_gen) in [(1, 5), (7, 9), (20, 10)] {
            let params = NsgaParams::new(n_sol, n_gen, 3);
            let a = run_nsga2(&inst, &params).unwrap();
            assert_eq!(a.evaluations, (n_sol * n_gen) as u64);
            assert!(a.same_result(&run_nsga2(&inst, &params).unwrap()));
            a.archive.check_invariants(params.constraint_mode).unwrap();
        }
        let mut bad = NsgaParams::new(5, 5, 0);
        bad.crossover_rate = 1.5;
        assert!(run_nsga2(&inst, &bad).is_err());
    }
}
