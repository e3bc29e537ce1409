//! Command-line front end: `gen`, `run`, `front`, `score`, `table`, `plot`.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::benchgen::{generate, BenchmarkSpec, DEFAULT_DEADLINE};
use crate::error::{Error, Result};
use crate::harness::{
    read_results_dir, read_summary_csv, render_table, run_plan, score_and_summarize, write_plots,
    write_summary_csv, AlgorithmConfig, ExperimentPlan, FrontPolicy, RecordWriter, RunOptions, RunRecord,
    RunSpec, WORKERS_ENV,
};
use crate::metrics::ReferenceFront;
use crate::model::ProblemInstance;
use crate::pareto::ConstraintMode;

#[derive(Debug, Parser)]
#[command(name = "pareto-sched", version, about = "Energy/makespan task scheduling experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a benchmark instance.
    Gen(GenArgs),
    /// Execute a plan, or one algorithm on one instance.
    Run(RunArgs),
    /// Build the reference front from a results directory.
    Front(FrontArgs),
    /// Score runs and write the summary CSV.
    Score(ScoreArgs),
    /// Print a summary CSV as a table.
    Table(TableArgs),
    /// Render SVG charts.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub tasks: usize,
    #[arg(long)]
    pub cpus: usize,
    #[arg(long, default_value_t = DEFAULT_DEADLINE)]
    pub deadline: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub name: Option<String>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, conflicts_with_all = ["alg", "instance", "nsol", "ngen", "seed", "mode", "run"])]
    pub plan: Option<PathBuf>,
    /// Results directory. Required with `--plan`; a single run prints its
    /// record to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = WORKERS_ENV)]
    pub workers: Option<usize>,
    #[arg(long, requires_all = ["instance", "nsol", "ngen", "seed"])]
    pub alg: Option<u8>,
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub nsol: Option<usize>,
    #[arg(long)]
    pub ngen: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub mode: Option<ConstraintMode>,
    /// Run index stored in the record.
    #[arg(long)]
    pub run: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FrontArgs {
    #[arg(long)]
    pub results: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Needed when the results cover more than one instance.
    #[arg(long)]
    pub instance: Option<String>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub results: PathBuf,
    /// Frozen front; the pooled front of the results is used when omitted.
    #[arg(long)]
    pub front: Option<PathBuf>,
    #[arg(long)]
    pub instance: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub summary: PathBuf,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long)]
    pub summary: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Adds archive scatters against the (pooled or given) front.
    #[arg(long)]
    pub results: Option<PathBuf>,
    #[arg(long, requires = "results")]
    pub front: Option<PathBuf>,
    #[arg(long)]
    pub instance: Option<String>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

pub fn execute(command: Command) -> Result<()> {
    match command {
        Command::Gen(a) => gen(a),
        Command::Run(a) => run_cmd(a),
        Command::Front(a) => front(a),
        Command::Score(a) => score(a),
        Command::Table(a) => {
            let rows = read_summary_csv(open(&a.summary)?)?;
            print!("{}", render_table(&rows));
            Ok(())
        }
        Command::Plot(a) => plot(a),
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::arg(format!("cannot open {}: {e}", path.display())))
}

fn create(path: &Path) -> Result<File> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    Ok(File::create(path)?)
}

fn gen(a: GenArgs) -> Result<()> {
    let mut spec = BenchmarkSpec::new(a.tasks, a.cpus, a.seed).with_deadline(a.deadline);
    if let Some(name) = a.name {
        spec = spec.named(name);
    }
    let json = generate(&spec)?.to_json_pretty()?;
    match a.out {
        Some(path) => writeln!(create(&path)?, "{json}")?,
        None => println!("{json}"),
    }
    Ok(())
}

fn run_cmd(a: RunArgs) -> Result<()> {
    if let Some(plan_path) = a.plan {
        let out = a.out.ok_or_else(|| Error::arg("--plan needs --out"))?;
        let plan = ExperimentPlan::load(&plan_path)?;
        let records = run_plan(&plan, &RunOptions { out_dir: Some(out.clone()), workers: a.workers })?;
        eprintln!("{} runs written to {}", records.len(), out.display());
        return Ok(());
    }
    let (Some(alg), Some(instance), Some(n_sol), Some(n_gen), Some(seed)) = (a.alg, a.instance, a.nsol, a.ngen, a.seed)
    else {
        return Err(Error::arg("run needs either --plan or --alg, --instance, --nsol, --ngen and --seed"));
    };
    let instance = ProblemInstance::from_json(&fs::read_to_string(&instance)
        .map_err(|e| Error::arg(format!("cannot read {}: {e}", instance.display())))?)?;
    let spec = RunSpec {
        instance_index: 0,
        algorithm: AlgorithmConfig::by_id(alg)?,
        n_sol,
        n_gen,
        run: a.run.unwrap_or(0),
        seed,
        constraint_mode: a.mode.unwrap_or_default(),
    };
    let record = spec.execute(&instance)?;
    match a.out {
        Some(dir) => RecordWriter::create(&dir, [])?.append(&record)?,
        None => println!("{}", serde_json::to_string(&record)?),
    }
    Ok(())
}

fn records_for(results: &Path, instance: Option<&str>) -> Result<Vec<RunRecord>> {
    let mut records = read_results_dir(results)?;
    match instance {
        Some(name) => {
            records.retain(|r| r.instance == name);
            if records.is_empty() {
                return Err(Error::arg(format!("no runs of instance {name:?} in {}", results.display())));
            }
        }
        None => {
            if records.iter().any(|r| r.instance != records[0].instance) {
                return Err(Error::arg("results cover several instances; pick one with --instance"));
            }
        }
    }
    Ok(records)
}

fn front(a: FrontArgs) -> Result<()> {
    let records = records_for(&a.results, a.instance.as_deref())?;
    let summary = score_and_summarize(&records, &FrontPolicy::Pooled)?;
    let front = summary.fronts.values().next().expect("one instance");
    front.write_csv(create(&a.out)?)?;
    eprintln!("{} front points written to {}", front.len(), a.out.display());
    Ok(())
}

fn external_policy(records: &[RunRecord], front: &Path) -> Result<FrontPolicy> {
    let front = ReferenceFront::read_csv(open(front)?)?;
    Ok(FrontPolicy::External(BTreeMap::from([(records[0].instance.clone(), front)])))
}

fn score(a: ScoreArgs) -> Result<()> {
    let (records, policy) = match &a.front {
        Some(front) => {
            let records = records_for(&a.results, a.instance.as_deref())?;
            let policy = external_policy(&records, front)?;
            (records, policy)
        }
        None => {
            let mut records = read_results_dir(&a.results)?;
            if let Some(name) = &a.instance {
                records.retain(|r| &r.instance == name);
            }
            (records, FrontPolicy::Pooled)
        }
    };
    let summary = score_and_summarize(&records, &policy)?;
    write_summary_csv(create(&a.out)?, &summary.rows)?;
    eprintln!("{} summary rows written to {}", summary.rows.len(), a.out.display());
    Ok(())
}

fn plot(a: PlotArgs) -> Result<()> {
    let rows = read_summary_csv(open(&a.summary)?)?;
    let (records, fronts) = match &a.results {
        None => (Vec::new(), BTreeMap::new()),
        Some(results) => match &a.front {
            Some(front) => {
                let records = records_for(results, a.instance.as_deref())?;
                let FrontPolicy::External(fronts) = external_policy(&records, front)? else { unreachable!() };
                (records, fronts)
            }
            None => {
                let mut records = read_results_dir(results)?;
                if let Some(name) = &a.instance {
                    records.retain(|r| &r.instance == name);
                }
                let fronts = score_and_summarize(&records, &FrontPolicy::Pooled)?.fronts;
                (records, fronts)
            }
        },
    };
    let written = write_plots(&a.out, &rows, &records, &fronts)?;
    let mut stderr = io::stderr();
    for path in written {
        let _ = writeln!(stderr, "{}", path.display());
    }
    Ok(())
}
