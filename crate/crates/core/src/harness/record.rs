use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::RunSpec;
use crate::error::{Error, Result};
use crate::eval::RunOutcome;
use crate::pareto::{Archive, ArchiveEntry, ConstraintMode};

/// One finished run as persisted in the results directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: u8,
    pub instance: String,
    pub n_sol: usize,
    pub n_gen: usize,
    pub run: usize,
    pub seed: u64,
    pub constraint_mode: ConstraintMode,
    pub evaluations: u64,
    pub seconds: f64,
    pub mean_energy: f64,
    pub mean_makespan: f64,
    /// Final archive rows: `[energy, makespan, feasible, "1;2;..."]`.
    pub archive: Vec<ArchiveEntry>,
}

impl RunRecord {
    pub(crate) fn from_outcome(spec: &RunSpec, instance: &str, outcome: &RunOutcome) -> Self {
        RunRecord {
            algorithm: spec.algorithm.id,
            instance: instance.to_string(),
            n_sol: spec.n_sol,
            n_gen: spec.n_gen,
            run: spec.run,
            seed: spec.seed,
            constraint_mode: outcome.constraint_mode,
            evaluations: outcome.evaluations,
            seconds: outcome.seconds,
            mean_energy: outcome.mean_energy(),
            mean_makespan: outcome.mean_makespan(),
            archive: outcome.archive.entries().to_vec(),
        }
    }

    /// The archive with capacity `n_sol`.
    pub fn to_archive(&self) -> Result<Archive> {
        let archive = Archive::from_entries(&self.archive, self.n_sol, self.constraint_mode)?;
        if archive.len() != self.archive.len() {
            return Err(Error::Contract(format!(
                "stored archive of run {} ({}, alg {}) is not mutually nondominated",
                self.run, self.instance, self.algorithm
            )));
        }
        Ok(archive)
    }

    /// Equality ignoring wall-clock time.
    pub fn same_result(&self, other: &RunRecord) -> bool {
        RunRecord { seconds: 0.0, ..self.clone() } == RunRecord { seconds: 0.0, ..other.clone() }
    }

    pub fn key(&self) -> (&str, u8, usize, usize) {
        (&self.instance, self.algorithm, self.n_sol, self.run)
    }
}

pub fn cell_file_name(instance: &str, algorithm: u8, n_sol: usize) -> String {
    let safe: String = instance
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    format!("{safe}__alg{algorithm:02}__nsol{n_sol}.jsonl")
}

/// Appends records to one JSON-lines file per cell.
pub struct RecordWriter {
    dir: PathBuf,
    files: HashMap<String, File>,
}

impl RecordWriter {
    /// Creates `dir` and truncates the named cell files.
    pub fn create(dir: &Path, cells: impl IntoIterator<Item = String>) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let mut files = HashMap::new();
        for name in cells {
            if let std::collections::hash_map::Entry::Vacant(slot) = files.entry(name) {
                let file = File::create(dir.join(slot.key()))?;
                slot.insert(file);
            }
        }
        Ok(RecordWriter { dir: dir.to_path_buf(), files })
    }

    pub fn append(&mut self, record: &RunRecord) -> Result<()> {
        let name = cell_file_name(&record.instance, record.algorithm, record.n_sol);
        if !self.files.contains_key(&name) {
            let file = OpenOptions::new().create(true).append(true).open(self.dir.join(&name))?;
            self.files.insert(name.clone(), file);
        }
        let file = self.files.get_mut(&name).expect("opened above");
        let mut line = serde_json::to_string(record)?;
        line.push('\n');
        file.write_all(line.as_bytes())?;
        file.flush()?;
        Ok(())
    }
}

/// Loads every `*.jsonl` file in `dir`, sorted by (instance, algorithm,
/// n_sol, run). A run present twice is a schema error.
pub fn read_results_dir(dir: &Path) -> Result<Vec<RunRecord>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.extension().is_some_and(|x| x == "jsonl"));
    paths.sort();
    let mut records = Vec::new();
    for path in paths {
        for (n, line) in BufReader::new(File::open(&path)?).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let record: RunRecord = serde_json::from_str(&line).map_err(|e| Error::Schema {
                path: path.clone(),
                reason: format!("line {}: {e}", n + 1),
            })?;
            records.push(record);
        }
    }
    records.sort_by(|a, b| a.key().cmp(&b.key()));
    if let Some(w) = records.windows(2).find(|w| w[0].key() == w[1].key()) {
        return Err(Error::Schema {
            path: dir.to_path_buf(),
            reason: format!("run {:?} recorded twice", w[0].key()),
        });
    }
    if records.is_empty() {
        return Err(Error::Schema { path: dir.to_path_buf(), reason: "no run records found".into() });
    }
    Ok(records)
}
