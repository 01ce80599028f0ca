//! Command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::controllers::controller_by_name;
use crate::error::{FlockError, Result};
use crate::export::{write_score_dump, write_trajectory_line};
use crate::init::init_swarm;
use crate::metrics::episode_cost;
use crate::params::SimParams;
use crate::sim::{run_from_state, EpisodeOptions, EpisodeRecord, ScoreSampling};
use crate::sweep::{run_sweep, write_sweep_csv, Cell, SweepRow, SweepSpec};

#[derive(Debug, Parser)]
#[command(
    name = "flockconf",
    version,
    about = "Flocking simulator with confidence-score auxiliary control"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one episode and print its summary row.
    Simulate(SimulateArgs),
    /// Run a parameter sweep and write one CSV row per episode.
    Sweep(SweepArgs),
    /// Run one episode and write the sampled confidence scores as CSV.
    Scores(ScoresArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    #[value(alias = "true")]
    On,
    #[value(alias = "false")]
    Off,
}

#[derive(Debug, Args)]
pub struct RunOverrides {
    /// JSON file with simulation parameters; omitted fields use defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Enable or disable the auxiliary controller.
    #[arg(long)]
    pub aux: Option<Toggle>,
    /// Base controller: local, global or none.
    #[arg(long, default_value = "local")]
    pub controller: String,
    #[arg(long = "top-k")]
    pub top_k: Option<usize>,
    /// Auxiliary gain; defaults to 30/N.
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub run: RunOverrides,
    /// Write the summary CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write every step as JSON Lines.
    #[arg(long = "dump-trajectory")]
    pub dump_trajectory: Option<PathBuf>,
    /// Also write the sampled score dump.
    #[arg(long = "dump-scores")]
    pub dump_scores: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// JSON sweep spec: `base` parameters plus value lists.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoresArgs {
    #[command(flatten)]
    pub run: RunOverrides,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Dump scores at every step instead of first, middle and last.
    #[arg(long = "all-steps")]
    pub all_steps: bool,
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| FlockError::Io(format!("reading {}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| FlockError::Io(format!("creating {}: {e}", path.display())))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

impl RunOverrides {
    /// Config file (or defaults) with command-line overrides applied.
    pub fn params(&self) -> Result<SimParams> {
        let mut p = match &self.config {
            Some(path) => SimParams::from_json_str(&read_to_string(path)?)?,
            None => SimParams::default(),
        };
        if let Some(seed) = self.seed {
            p.seed = seed;
        }
        if let Some(aux) = self.aux {
            p.aux_enabled = aux == Toggle::On;
        }
        if let Some(k) = self.top_k {
            p.top_k = k;
        }
        if let Some(l) = self.lambda {
            p.lambda_override = Some(l);
        }
        p.validate()?;
        Ok(p)
    }

    fn run<F>(&self, sampling: ScoreSampling, observer: F) -> Result<EpisodeRecord>
    where
        F: FnMut(&crate::sim::StepSnapshot<'_>),
    {
        let params = self.params()?;
        let controller = controller_by_name(&self.controller)?;
        let initial = init_swarm(&params)?;
        run_from_state(
            &params,
            controller.as_ref(),
            initial,
            &EpisodeOptions {
                score_sampling: sampling,
            },
            observer,
        )
    }
}

fn summary_row(record: &EpisodeRecord) -> SweepRow {
    let p = &record.params;
    SweepRow {
        cell: Cell {
            controller: record.controller.clone(),
            n_agents: p.n_agents,
            comm_radius: p.comm_radius,
            v_max: p.v_max,
            top_k: p.top_k,
        },
        lambda: record.lambda,
        seed: p.seed,
        aux_enabled: p.aux_enabled,
        summary: Some(episode_cost(record)),
        error: None,
        initial_fingerprint: Some(record.initial_fingerprint),
    }
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let sampling = if args.dump_scores.is_some() {
        ScoreSampling::Sparse
    } else {
        ScoreSampling::Off
    };
    let mut traj = args.dump_trajectory.as_deref().map(create).transpose()?;
    let mut write_err: Option<FlockError> = None;
    let record = args.run.run(sampling, |snap| {
        if let (Some(w), None) = (traj.as_mut(), &write_err) {
            if let Err(e) = write_trajectory_line(w, snap) {
                write_err = Some(e);
            }
        }
    })?;
    if let Some(e) = write_err {
        return Err(e);
    }
    if let Some(mut w) = traj {
        w.flush()?;
    }
    if let (Some(path), Some(samples)) = (&args.dump_scores, &record.score_history) {
        write_score_dump(create(path)?, samples)?;
    }
    write_sweep_csv(output(args.out.as_deref())?, &[summary_row(&record)])
}

fn sweep(args: &SweepArgs) -> Result<()> {
    let spec = match &args.config {
        Some(path) => SweepSpec::from_json_str(&read_to_string(path)?)?,
        None => SweepSpec::default(),
    };
    let rows = run_sweep(&spec)?;
    write_sweep_csv(output(args.out.as_deref())?, &rows)
}

fn scores(args: &ScoresArgs) -> Result<()> {
    let sampling = if args.all_steps {
        ScoreSampling::Every
    } else {
        ScoreSampling::Sparse
    };
    let record = args.run.run(sampling, |_| {})?;
    let samples = record.score_history.unwrap_or_default();
    write_score_dump(output(args.out.as_deref())?, &samples)
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => sweep(a),
        Command::Scores(a) => scores(a),
    }
}

/// Parse `args` (including the program name) and run. Returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
