use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use noisemo::experiments::{
    self, AggregateReport, AlgorithmKind, ExperimentConfig, NoiseGrid, SweepGrid,
};
use noisemo::objectives::ObjectiveId;
use noisemo::pareto::{enumerate_pareto_front, pareto_front_oracle};
use noisemo::probe;
use noisemo::{CrossoverKind, Error, NoiseModel, Result};

#[derive(Parser)]
#[command(
    name = "noisemo",
    version,
    about = "Noisy evolutionary multi-objective optimisation lab"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment cell.
    Run(RunArgs),
    /// Run a grid of cells.
    Sweep(SweepArgs),
    /// Run the statistical probes of population dynamics.
    Probe(ProbeArgs),
    /// Print the true Pareto front.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum NoiseKind {
    None,
    Bernoulli,
    Gaussian,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// Bernoulli noise, NSGA-II, n in {20,30,40}, twelve values of p.
    Table1,
    /// Gaussian noise, NSGA-II, n in {20,30,40}, sigma = n q.
    Table2,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value = "nsga2")]
    algorithm: AlgorithmKind,
    /// Population size (NSGA-II only); default 9(n+1).
    #[arg(long)]
    mu: Option<usize>,
    /// Crossover probability.
    #[arg(long, default_value_t = 0.9)]
    pc: f64,
    #[arg(long, default_value = "onepoint")]
    crossover: CrossoverKind,
    #[arg(long, default_value = "none")]
    noise: NoiseKind,
    /// Bernoulli noise strength; default n+1.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = experiments::DEFAULT_RUNS)]
    runs: usize,
    /// Evaluation budget; default 10 n^3.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = experiments::DEFAULT_SEED)]
    seed: u64,
    /// Record per-generation coverage.
    #[arg(long)]
    trace: bool,
    /// Long-format trace CSV destination (implies --trace).
    #[arg(long)]
    trace_out: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Worker threads; all cores when absent.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "lotz")]
    objective: ObjectiveId,
    #[arg(long, default_value_t = 20)]
    n: usize,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Start from a predefined grid; other flags override its settings.
    #[arg(long)]
    preset: Option<Preset>,
    #[arg(long, value_delimiter = ',')]
    objective: Vec<ObjectiveId>,
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    sigma: Vec<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProbeKind {
    All,
    Mutation,
    Crowding,
    Shrinking,
    MaxPopulation,
}

#[derive(Args)]
struct ProbeArgs {
    #[arg(long, value_enum, default_value = "all")]
    kind: ProbeKind,
    #[arg(long, default_value = "lotz")]
    objective: ObjectiveId,
    #[arg(long, default_value_t = 40)]
    n: usize,
    /// Bernoulli noise probability for the population probes.
    #[arg(long, default_value_t = 0.25)]
    p: f64,
    /// Trials of the mutation probe.
    #[arg(long, default_value_t = 1_000_000)]
    trials: usize,
    /// Independent runs of the crowding and population-size probes.
    #[arg(long, default_value_t = 10)]
    runs: usize,
    /// Generations sampled per run of the crowding probe.
    #[arg(long, default_value_t = 100)]
    generations: usize,
    /// Trials of the shrinking-step probe.
    #[arg(long, default_value_t = 2_000)]
    shrink_trials: usize,
    #[arg(long, default_value_t = experiments::DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value = "lotz")]
    objective: ObjectiveId,
    #[arg(long)]
    n: usize,
    /// Enumerate all 2^n search points instead of using the closed form.
    #[arg(long)]
    enumerate: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Run(args) => {
            set_workers(args.common.workers)?;
            let cell = run_cell(&args)?;
            let reports = vec![experiments::run_batch(&cell)?];
            emit(&args.common, &cell, &reports)
        }
        Command::Sweep(args) => {
            set_workers(args.common.workers)?;
            let grid = sweep_grid(&args)?;
            let reports = experiments::sweep(&grid)?;
            emit(&args.common, &grid, &reports)
        }
        Command::Probe(args) => {
            set_workers(args.workers)?;
            let report = run_probes(&args)?;
            let mut text = serde_json::to_string_pretty(&report)?;
            text.push('\n');
            write_output(args.out.as_ref(), text.as_bytes())
        }
        Command::Oracle(args) => {
            let front = if args.enumerate {
                enumerate_pareto_front(args.objective, args.n)?
            } else {
                if args.n == 0 {
                    return Err(Error::InvalidConfig("n must be at least 1".into()));
                }
                pareto_front_oracle(args.objective, args.n)
            };
            let mut text = String::from("f1,f2\n");
            for f in front.iter() {
                text.push_str(&format!("{},{}\n", f.get(0), f.get(1)));
            }
            write_output(None, text.as_bytes())
        }
    }
}

fn set_workers(workers: Option<usize>) -> Result<()> {
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::InvalidConfig("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    }
    Ok(())
}

fn run_cell(args: &RunArgs) -> Result<ExperimentConfig> {
    let c = &args.common;
    let noise = match c.noise {
        NoiseKind::None => NoiseModel::None,
        NoiseKind::Bernoulli => NoiseModel::Bernoulli {
            delta: c.delta.unwrap_or((args.n + 1) as f64),
            p: args
                .p
                .ok_or_else(|| Error::InvalidConfig("bernoulli noise needs --p".into()))?,
        },
        NoiseKind::Gaussian => NoiseModel::Gaussian {
            sigma: args
                .sigma
                .ok_or_else(|| Error::InvalidConfig("gaussian noise needs --sigma".into()))?,
        },
    };
    let mut grid = SweepGrid::new(
        c.algorithm,
        vec![args.objective],
        vec![args.n],
        NoiseGrid::None,
    );
    apply_common(&mut grid, c);
    let mut cells = grid.cells()?;
    let mut cell = cells.remove(0);
    cell.noise = noise;
    cell.validate()?;
    Ok(cell)
}

fn sweep_grid(args: &SweepArgs) -> Result<SweepGrid> {
    let c = &args.common;
    let mut grid = match args.preset {
        Some(Preset::Table1) => SweepGrid::bernoulli_table(),
        Some(Preset::Table2) => SweepGrid::gaussian_table(),
        None => {
            let noise = match c.noise {
                NoiseKind::None => NoiseGrid::None,
                NoiseKind::Bernoulli => NoiseGrid::Bernoulli {
                    ps: args.p.clone(),
                    delta: None,
                },
                NoiseKind::Gaussian => NoiseGrid::Gaussian {
                    sigmas: args.sigma.clone(),
                },
            };
            SweepGrid::new(c.algorithm, args.objective.clone(), args.n.clone(), noise)
        }
    };
    if args.preset.is_some() {
        grid.algorithm = c.algorithm;
        if !args.objective.is_empty() {
            grid.objectives = args.objective.clone();
        }
        if !args.n.is_empty() {
            grid.ns = args.n.clone();
        }
        match &mut grid.noise {
            NoiseGrid::Bernoulli { ps, .. } if !args.p.is_empty() => *ps = args.p.clone(),
            NoiseGrid::GaussianScaled { .. } if !args.sigma.is_empty() => {
                grid.noise = NoiseGrid::Gaussian {
                    sigmas: args.sigma.clone(),
                }
            }
            _ => {}
        }
    }
    if let (Some(delta), NoiseGrid::Bernoulli { delta: d, .. }) = (c.delta, &mut grid.noise) {
        *d = Some(delta);
    }
    apply_common(&mut grid, c);
    grid.validate()?;
    Ok(grid)
}

fn apply_common(grid: &mut SweepGrid, c: &Common) {
    grid.runs = c.runs;
    grid.seed = c.seed;
    grid.budget = c.budget;
    grid.mu = c.mu;
    grid.p_c = c.pc;
    grid.crossover = c.crossover;
    grid.trace = c.trace || c.trace_out.is_some();
}

fn emit<C: serde::Serialize>(c: &Common, config: &C, reports: &[AggregateReport]) -> Result<()> {
    let mut buf = Vec::new();
    match c.format {
        Format::Csv => experiments::write_csv(&mut buf, reports)?,
        Format::Json => experiments::write_json(&mut buf, config, reports)?,
    }
    write_output(c.out.as_ref(), &buf)?;
    if let Some(path) = &c.trace_out {
        let mut buf = Vec::new();
        experiments::write_trace_csv(&mut buf, reports)?;
        experiments::write_file(path, &buf)?;
    }
    Ok(())
}

fn write_output(path: Option<&PathBuf>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => experiments::write_file(p, bytes),
        None => std::io::stdout().write_all(bytes).map_err(|e| Error::Io {
            path: "<stdout>".into(),
            source: e,
        }),
    }
}

fn run_probes(args: &ProbeArgs) -> Result<probe::ProbeSuite> {
    let all = args.kind == ProbeKind::All;
    let mut suite = probe::ProbeSuite::default();
    if all || args.kind == ProbeKind::Mutation {
        for class in [probe::ParentClass::OnFront, probe::ParentClass::OffFront] {
            suite.mutation.push(probe::estimate_mutation_to_front(
                args.n,
                class,
                args.trials,
                args.seed,
            )?);
        }
        suite.clone = Some(probe::estimate_clone_probability(
            args.n,
            args.trials,
            args.seed,
        )?);
    }
    if all || args.kind == ProbeKind::Crowding {
        suite.crowding = Some(probe::crowding_bound_probe(
            args.objective,
            args.n,
            args.p,
            args.runs,
            args.generations,
            args.seed,
        )?);
    }
    if all || args.kind == ProbeKind::Shrinking {
        suite.shrinking = Some(probe::shrinking_probe(
            args.objective,
            args.n,
            args.p,
            args.shrink_trials,
            args.seed,
        )?);
    }
    if all || args.kind == ProbeKind::MaxPopulation {
        suite.max_population = Some(probe::max_population_probe(
            args.objective,
            args.n,
            NoiseModel::Bernoulli {
                delta: (args.n + 1) as f64,
                p: args.p,
            },
            experiments::default_budget(args.n),
            args.runs,
            args.seed,
        )?);
    }
    Ok(suite)
}
