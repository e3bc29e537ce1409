use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use super::RunRecord;
use crate::error::{Error, Result};
use crate::metrics::{build_simulated_front, count_stats, gd, sp, ReferenceFront, DEFAULT_MEMBERSHIP_TOL};

/// Where the reference front for scoring comes from.
#[derive(Debug, Clone)]
pub enum FrontPolicy {
    /// Pool the final archives of all records, per instance.
    Pooled,
    /// Frozen fronts keyed by instance name.
    External(BTreeMap<String, ReferenceFront>),
}

/// The seven reported quantities, in table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Nn,
    Np,
    Gd,
    Sp,
    T,
    Fe,
    Fm,
}

impl Metric {
    pub const ALL: [Metric; 7] = [Metric::Nn, Metric::Np, Metric::Gd, Metric::Sp, Metric::T, Metric::Fe, Metric::Fm];

    pub fn label(self) -> &'static str {
        match self {
            Metric::Nn => "N_n",
            Metric::Np => "N_p",
            Metric::Gd => "GD",
            Metric::Sp => "SP",
            Metric::T => "T",
            Metric::Fe => "F_e",
            Metric::Fm => "F_m",
        }
    }

    pub fn higher_is_better(self) -> bool {
        matches!(self, Metric::Nn | Metric::Np)
    }

    fn index(self) -> usize {
        Metric::ALL.iter().position(|&m| m == self).expect("listed")
    }
}

pub const SUMMARY_COLUMNS: [&str; 17] = [
    "instance", "n_sol", "alg",
    "Avg(N_n)", "Std(N_n)", "Avg(N_p)", "Std(N_p)", "Avg(GD)", "Std(GD)", "Avg(SP)", "Std(SP)",
    "Avg(T)", "Std(T)", "Avg(F_e)", "Std(F_e)", "Avg(F_m)", "Std(F_m)",
];

/// Scores of one run against its instance's reference front.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredRun {
    pub instance: String,
    pub algorithm: u8,
    pub n_sol: usize,
    pub run: usize,
    pub n_n: usize,
    pub n_p: usize,
    pub gd: f64,
    pub sp: f64,
    pub sp_degenerate: bool,
    pub seconds: f64,
    pub mean_energy: f64,
    pub mean_makespan: f64,
}

impl ScoredRun {
    pub fn value(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Nn => self.n_n as f64,
            Metric::Np => self.n_p as f64,
            Metric::Gd => self.gd,
            Metric::Sp => self.sp,
            Metric::T => self.seconds,
            Metric::Fe => self.mean_energy,
            Metric::Fm => self.mean_makespan,
        }
    }
}

/// Sample mean and standard deviation (N - 1 denominator; 0 for one sample).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub avg: f64,
    pub std: f64,
}

impl Stat {
    pub fn of(values: &[f64]) -> Stat {
        let n = values.len() as f64;
        let avg = values.iter().sum::<f64>() / n;
        let std = if values.len() < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - avg).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Stat { avg, std }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub instance: String,
    pub n_sol: usize,
    pub algorithm: u8,
    pub stats: [Stat; 7],
    /// Best Avg within the same (instance, n_sol) group, per metric.
    pub is_best: [bool; 7],
}

impl SummaryRow {
    pub fn stat(&self, metric: Metric) -> Stat {
        self.stats[metric.index()]
    }

    pub fn best(&self, metric: Metric) -> bool {
        self.is_best[metric.index()]
    }
}

#[derive(Debug, Clone)]
pub struct Summary {
    pub fronts: BTreeMap<String, ReferenceFront>,
    pub runs: Vec<ScoredRun>,
    pub rows: Vec<SummaryRow>,
}

/// Scores every record and aggregates one row per (instance, n_sol,
/// algorithm), ordered by instance first appearance, then n_sol, then id.
pub fn score_and_summarize(records: &[RunRecord], policy: &FrontPolicy) -> Result<Summary> {
    if records.is_empty() {
        return Err(Error::arg("nothing to score"));
    }
    let mut instance_order: Vec<&str> = Vec::new();
    for r in records {
        if !instance_order.contains(&r.instance.as_str()) {
            instance_order.push(&r.instance);
        }
    }

    let mut fronts = BTreeMap::new();
    for &name in &instance_order {
        let front = match policy {
            FrontPolicy::Pooled => {
                let archives = records
                    .iter()
                    .filter(|r| r.instance == name)
                    .map(RunRecord::to_archive)
                    .collect::<Result<Vec<_>>>()?;
                build_simulated_front(&archives)?
            }
            FrontPolicy::External(map) => map
                .get(name)
                .cloned()
                .ok_or_else(|| Error::arg(format!("no reference front for instance {name:?}")))?,
        };
        fronts.insert(name.to_string(), front);
    }

    let runs = records
        .iter()
        .map(|r| {
            let front = &fronts[&r.instance];
            let counts = count_stats(&r.archive, front, DEFAULT_MEMBERSHIP_TOL);
            let spacing = sp(&r.archive, front);
            Ok(ScoredRun {
                instance: r.instance.clone(),
                algorithm: r.algorithm,
                n_sol: r.n_sol,
                run: r.run,
                n_n: counts.n_n,
                n_p: counts.n_p,
                gd: gd(&r.archive, front)?,
                sp: spacing.value,
                sp_degenerate: spacing.degenerate,
                seconds: r.seconds,
                mean_energy: r.mean_energy,
                mean_makespan: r.mean_makespan,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut cells: BTreeMap<(usize, usize, u8), Vec<&ScoredRun>> = BTreeMap::new();
    for s in &runs {
        let order = instance_order.iter().position(|&n| n == s.instance).expect("collected above");
        cells.entry((order, s.n_sol, s.algorithm)).or_default().push(s);
    }
    let mut rows: Vec<SummaryRow> = cells
        .into_iter()
        .map(|((order, n_sol, algorithm), cell)| {
            let stats = Metric::ALL.map(|m| Stat::of(&cell.iter().map(|s| s.value(m)).collect::<Vec<_>>()));
            SummaryRow {
                instance: instance_order[order].to_string(),
                n_sol,
                algorithm,
                stats,
                is_best: [false; 7],
            }
        })
        .collect();
    mark_best(&mut rows);
    Ok(Summary { fronts, runs, rows })
}

/// Recomputes `is_best` within each (instance, n_sol) group; ties all win.
pub fn mark_best(rows: &mut [SummaryRow]) {
    for i in 0..rows.len() {
        for m in Metric::ALL {
            let mine = rows[i].stat(m).avg;
            let beaten = rows.iter().any(|o| {
                o.instance == rows[i].instance
                    && o.n_sol == rows[i].n_sol
                    && if m.higher_is_better() { o.stat(m).avg > mine } else { o.stat(m).avg < mine }
            });
            rows[i].is_best[m.index()] = !beaten;
        }
    }
}

pub fn write_summary_csv<W: Write>(writer: W, rows: &[SummaryRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(SUMMARY_COLUMNS)?;
    for row in rows {
        let mut fields = vec![row.instance.clone(), row.n_sol.to_string(), row.algorithm.to_string()];
        for s in &row.stats {
            fields.push(s.avg.to_string());
            fields.push(s.std.to_string());
        }
        out.write_record(&fields)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_summary_csv<R: Read>(reader: R) -> Result<Vec<SummaryRow>> {
    let schema = |reason: String| Error::Schema { path: PathBuf::from("summary.csv"), reason };
    let mut input = csv::Reader::from_reader(reader);
    let header: Vec<String> = input.headers()?.iter().map(str::to_string).collect();
    if header != SUMMARY_COLUMNS {
        return Err(schema(format!("header {header:?} does not match {SUMMARY_COLUMNS:?}")));
    }
    let mut rows = Vec::new();
    for (n, rec) in input.records().enumerate() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            rec[i].parse().map_err(|e| schema(format!("row {}: column {}: {e}", n + 1, SUMMARY_COLUMNS[i])))
        };
        let mut stats = [Stat { avg: 0.0, std: 0.0 }; 7];
        for (k, s) in stats.iter_mut().enumerate() {
            *s = Stat { avg: num(3 + 2 * k)?, std: num(4 + 2 * k)? };
        }
        rows.push(SummaryRow {
            instance: rec[0].to_string(),
            n_sol: rec[1].parse().map_err(|e| schema(format!("row {}: n_sol: {e}", n + 1)))?,
            algorithm: rec[2].parse().map_err(|e| schema(format!("row {}: alg: {e}", n + 1)))?,
            stats,
            is_best: [false; 7],
        });
    }
    mark_best(&mut rows);
    Ok(rows)
}

/// Fixed-width rendering, one block per instance; best cells carry `*`.
pub fn render_table(rows: &[SummaryRow]) -> String {
    let mut out = String::new();
    let mut instances: Vec<&str> = Vec::new();
    for r in rows {
        if !instances.contains(&r.instance.as_str()) {
            instances.push(&r.instance);
        }
    }
    for name in instances {
        let _ = writeln!(out, "instance: {name}");
        let _ = write!(out, "{:>6} {:>4}", "N_sol", "Alg");
        for col in &SUMMARY_COLUMNS[3..] {
            let _ = write!(out, " {col:>13}");
        }
        out.push('\n');
        for r in rows.iter().filter(|r| r.instance == name) {
            let _ = write!(out, "{:>6} {:>4}", r.n_sol, r.algorithm);
            for m in Metric::ALL {
                let s = r.stat(m);
                let mark = if r.best(m) { "*" } else { " " };
                let _ = write!(out, " {:>12}{mark} {:>13}", fmt_num(s.avg), fmt_num(s.std));
            }
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

fn fmt_num(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e6 || v.abs() < 1e-3) {
        format!("{v:.4e}")
    } else {
        format!("{v:.4}")
    }
}
