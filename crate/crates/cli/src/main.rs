//! `netdeploy`: run presets or config files, ensembles, and dump presets.
//!
//! Exit codes: 0 success, 1 usage, 2 I/O, 3 a run hit `max_steps` before the
//! stop fraction.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use netdeploy::analysis::{curve_features, FeatureReport, DEFAULT_PROMINENCE, DEFAULT_WINDOW};
use netdeploy::output::{write_curve, write_summary, Format};
use netdeploy::simulation::{map_runs, preset, run, run_seed, summarize, EnsembleOptions, SimulationConfig};

const EXIT_USAGE: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_STALLED: u8 = 3;

#[derive(Parser)]
#[command(name = "netdeploy", version, about = "Simulate the deployment of a networking technology on a graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one run and write its growth curve.
    Run {
        #[command(flatten)]
        source: Source,
        /// Run seed; overrides the config's `rng_seed`.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Execute many runs and write the per-step summary and a feature report.
    Ensemble {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 30)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed_stream: u64,
        /// Reuse one graph (built from run 0's seed) for every run.
        #[arg(long)]
        pin_graph: bool,
        /// Smoothing window for burst detection (odd).
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        /// Relative prominence a burst must exceed.
        #[arg(long, default_value_t = DEFAULT_PROMINENCE)]
        prominence: f64,
        /// Feature report path. Defaults to `<out>.report.json` with --out,
        /// standard error otherwise.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Print a preset's config as JSON, loadable with `--config`.
    PresetDump { name: String },
}

#[derive(Args)]
struct Source {
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    max_steps: Option<u64>,
    #[arg(long)]
    stop_fraction: Option<f64>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct Output {
    #[arg(long, default_value = "csv", value_parser = ["csv", "json", "gnuplot"])]
    format: String,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure { code: EXIT_USAGE, message: message.to_string() }
    }

    fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_IO, message: format!("{}: {err}", path.display()) }
    }
}

impl From<netdeploy::Error> for Failure {
    fn from(err: netdeploy::Error) -> Self {
        let code = if matches!(err, netdeploy::Error::Io(_)) { EXIT_IO } else { EXIT_USAGE };
        Failure { code, message: err.to_string() }
    }
}

type CliResult<T> = Result<T, Failure>;

impl Source {
    fn load(&self) -> CliResult<SimulationConfig> {
        let mut config = match (&self.preset, &self.config) {
            (Some(name), _) => preset(name)?,
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
                SimulationConfig::from_json(&text)
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?
            }
            (None, None) => return Err(Failure::usage("one of --preset or --config is required")),
        };
        if let Some(steps) = self.max_steps {
            config.max_steps = steps;
        }
        if let Some(fraction) = self.stop_fraction {
            config.stop_fraction = fraction;
        }
        config.validate()?;
        Ok(config)
    }

    fn install<T: Send>(&self, job: impl FnOnce() -> T + Send) -> CliResult<T> {
        #[cfg(feature = "parallel")]
        if let Some(jobs) = self.jobs {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(Failure::usage)?;
            return Ok(pool.install(job));
        }
        #[cfg(not(feature = "parallel"))]
        if self.jobs.is_some_and(|j| j > 1) {
            eprintln!("warning: built without the `parallel` feature; --jobs is ignored");
        }
        Ok(job())
    }
}

impl Output {
    fn format(&self) -> Format {
        self.format.parse().expect("restricted by clap")
    }

    fn open(&self) -> CliResult<Box<dyn Write>> {
        open(self.out.as_deref())
    }
}

fn open(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| Failure::io(path, e))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn finish(mut out: Box<dyn Write>, path: Option<&Path>) -> CliResult<()> {
    out.flush().map_err(|e| Failure::io(path.unwrap_or(Path::new("<stdout>")), e))
}

fn write_failure(path: Option<&Path>, err: netdeploy::Error) -> Failure {
    match err {
        netdeploy::Error::Io(e) => Failure::io(path.unwrap_or(Path::new("<stdout>")), e),
        other => other.into(),
    }
}

fn cmd_run(source: &Source, seed: Option<u64>, output: &Output) -> CliResult<u8> {
    let mut config = source.load()?;
    if let Some(seed) = seed {
        config.rng_seed = seed;
    }
    let outcome = source.install(|| run(&config))??;
    let path = output.out.as_deref();
    let mut out = output.open()?;
    write_curve(&outcome, output.format(), &mut out).map_err(|e| write_failure(path, e))?;
    finish(out, path)?;
    if outcome.saturated() {
        Ok(0)
    } else {
        eprintln!("run stopped at max_steps = {} with {} adopters", config.max_steps, outcome.curve.last());
        Ok(EXIT_STALLED)
    }
}

struct EnsembleArgs<'a> {
    runs: usize,
    seed_stream: u64,
    pin_graph: bool,
    window: usize,
    prominence: f64,
    report: Option<&'a Path>,
}

fn cmd_ensemble(source: &Source, args: EnsembleArgs<'_>, output: &Output) -> CliResult<u8> {
    let config = source.load()?;
    if args.window.is_multiple_of(2) {
        return Err(Failure::usage("--window must be odd"));
    }
    if !(args.prominence > 0.0 && args.prominence < 1.0) {
        return Err(Failure::usage("--prominence must lie in (0, 1)"));
    }
    let options = EnsembleOptions { pin_graph: args.pin_graph, ..Default::default() };
    let stop = config.stop_fraction;
    let (window, prominence) = (args.window, args.prominence);
    let outcomes = source.install(|| {
        map_runs(&config, args.runs, args.seed_stream, options, |_, outcome| {
            let features = curve_features(&outcome.curve, window, prominence, stop);
            (outcome, features)
        })
    })??;
    let (outcomes, features): (Vec<_>, Vec<_>) = outcomes.into_iter().unzip();
    let seeds = (0..args.runs).map(|i| run_seed(args.seed_stream, i)).collect();
    let summary = summarize(&outcomes, seeds);
    let label = source.preset.clone().unwrap_or_else(|| {
        source.config.as_ref().map(|p| p.display().to_string()).unwrap_or_default()
    });
    let report = FeatureReport::from_features(&label, &features, window, prominence);

    let path = output.out.as_deref();
    let mut out = output.open()?;
    write_summary(&summary, output.format(), &mut out).map_err(|e| write_failure(path, e))?;
    finish(out, path)?;

    let report_path = args.report.map(Path::to_path_buf).or_else(|| {
        path.map(|p| {
            let mut name = p.as_os_str().to_owned();
            name.push(".report.json");
            PathBuf::from(name)
        })
    });
    let json = serde_json::to_string_pretty(&report).expect("report serialises");
    match &report_path {
        Some(p) => std::fs::write(p, json + "\n").map_err(|e| Failure::io(p, e))?,
        None => eprintln!("{json}"),
    }

    let stalled = summary.stalled.iter().filter(|&&s| s).count();
    if stalled > 0 {
        eprintln!("{stalled} of {} runs stopped at max_steps = {}", args.runs, config.max_steps);
        return Ok(EXIT_STALLED);
    }
    Ok(0)
}

fn cmd_preset_dump(name: &str) -> CliResult<u8> {
    let config = preset(name)?;
    let mut out = open(None)?;
    writeln!(out, "{}", config.to_json()).map_err(|e| Failure::io(Path::new("<stdout>"), e))?;
    finish(out, None)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Run { source, seed, output } => cmd_run(source, *seed, output),
        Command::Ensemble { source, runs, seed_stream, pin_graph, window, prominence, report, output } => {
            let args = EnsembleArgs {
                runs: *runs,
                seed_stream: *seed_stream,
                pin_graph: *pin_graph,
                window: *window,
                prominence: *prominence,
                report: report.as_deref(),
            };
            cmd_ensemble(source, args, output)
        }
        Command::PresetDump { name } => cmd_preset_dump(name),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
