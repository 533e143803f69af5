//! Command-line surface for the coordination-detection toolkit: dataset
//! generation, deterministic and statistical detection, utility
//! reconstruction, noise sweeps, tracking demos and waveform tables.
//!
//! Exit codes encode verdicts so shell pipelines can branch without parsing
//! output: 0 = success / coordination kept, 1 = coordination refuted,
//! 2 = configuration or input error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use coord::data::{self, Dataset, NoiseModel, NoisyDataset, SimplexWeights};
use coord::fmt_sig;
use coord::revpref::{self, Detection};
use coord::sim::{self, Regime, ScenarioConfig};
use coord::statdetect::{self, Decision};
use coord::tracking::{self, WaveformKind, WaveformSpec};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

mod track;

#[derive(Parser)]
#[command(name = "coord", version, about = "Coordination detection from probe/maneuver records")]
struct Cli {
    /// Seed for every random stream; identical invocations with the same
    /// seed produce byte-identical outputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker cap for Monte-Carlo subcommands.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Coordinated,
    Independent,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum WaveformArg {
    Triangular,
    Gaussian,
    Chirp,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a probe/maneuver dataset.
    Simulate(SimulateArgs),
    /// Deterministic coordination test on a recorded dataset.
    Detect(DetectArgs),
    /// Reconstruct rationalizing utilities and export surface grids.
    Reconstruct(ReconstructArgs),
    /// Statistical detector for noisy datasets.
    StatDetect(StatDetectArgs),
    /// Detector statistic versus noise level, both regimes.
    Sweep(SweepArgs),
    /// Fast-scale tracking demo with per-step filter diagnostics.
    Track(track::TrackArgs),
    /// Measurement covariance of a tracking waveform.
    Waveform(WaveformArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = RegimeArg::Coordinated)]
    regime: RegimeArg,
    /// Number of agents.
    #[arg(long = "M", default_value_t = 3)]
    agents: usize,
    /// Number of epochs.
    #[arg(long = "T", default_value_t = 10)]
    epochs: usize,
    /// Signal dimension (coordinated-regime defaults need 2).
    #[arg(long = "N", default_value_t = 2)]
    dim: usize,
    /// Observation-noise standard deviation; omit for a clean dataset.
    #[arg(long)]
    sigma: Option<f64>,
    /// Agent weights, comma separated; normalized onto the simplex.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DetectArgs {
    /// Dataset JSON path.
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReconstructArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// Grid points per axis of the exported surfaces.
    #[arg(long, default_value_t = 50)]
    resolution: usize,
    /// Lower corner of the export window.
    #[arg(long, default_value_t = 0.0)]
    lo: f64,
    /// Upper corner of the export window.
    #[arg(long, default_value_t = 1.2)]
    hi: f64,
    /// Output prefix; agent surfaces land in `<prefix>_agent<i>.csv`.
    #[arg(short, long, default_value = "utility")]
    output: PathBuf,
}

#[derive(Args)]
struct StatDetectArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// Detection threshold in (0, 1).
    #[arg(long)]
    gamma: f64,
    /// Monte-Carlo draws for the noise-functional distribution.
    #[arg(long = "L", default_value_t = 500)]
    draws: usize,
    /// Noise level assumed when the dataset file carries none.
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Noise grid as `start:step:end`.
    #[arg(long)]
    sigmas: String,
    #[arg(long, default_value_t = 300)]
    trials: usize,
    #[arg(long, default_value_t = 0.05)]
    gamma: f64,
    #[arg(long = "L", default_value_t = 500)]
    draws: usize,
    #[arg(long = "M", default_value_t = 3)]
    agents: usize,
    #[arg(long = "T", default_value_t = 10)]
    epochs: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct WaveformArgs {
    #[arg(long, value_enum)]
    kind: WaveformArg,
    /// Pulse parameter (half-width or length scale).
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    /// Chirp rate (chirp kind only).
    #[arg(long, default_value_t = 0.0)]
    theta2: f64,
    /// Signal-to-noise ratio.
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Carrier frequency (rad/s).
    #[arg(long, default_value_t = 1.0)]
    wc: f64,
    /// Propagation speed.
    #[arg(long = "c", default_value_t = 299_792_458.0)]
    lightspeed: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Errors mapped to exit code 2; refuted verdicts map to exit code 1 at the
/// call sites.
fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), std::io::Error> {
    match output {
        Some(path) => std::fs::write(path, text),
        None => {
            println!("{}", text.trim_end_matches('\n'));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate(args) => cmd_simulate(args, cli.seed),
        Command::Detect(args) => cmd_detect(args),
        Command::Reconstruct(args) => cmd_reconstruct(args),
        Command::StatDetect(args) => cmd_stat_detect(args, cli.seed),
        Command::Sweep(args) => cmd_sweep(args, cli.seed, cli.threads),
        Command::Track(args) => track::run(args, cli.seed),
        Command::Waveform(args) => cmd_waveform(args),
    }
}

fn scenario_from(
    regime: RegimeArg,
    agents: usize,
    epochs: usize,
    dim: usize,
    sigma: Option<f64>,
    weights: Option<Vec<f64>>,
) -> Result<ScenarioConfig, String> {
    let regime = match regime {
        RegimeArg::Coordinated => Regime::Coordinated,
        RegimeArg::Independent => Regime::Independent,
    };
    if regime == Regime::Coordinated && dim != 2 {
        return Err("the built-in utility profiles are two-dimensional; use --N 2".into());
    }
    let mut cfg = ScenarioConfig::standard(agents.max(1), epochs.max(1), regime);
    cfg.agents = agents;
    cfg.epochs = epochs;
    cfg.dim = dim;
    if agents > 0 {
        cfg.utilities = sim::default_utilities(agents);
        cfg.weights = SimplexWeights::equal(agents);
    }
    if let Some(raw) = weights {
        let sum: f64 = raw.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            eprintln!("note: weights sum to {sum}; rescaled onto the unit simplex");
        }
        cfg.weights = SimplexWeights::normalized(raw).map_err(|e| e.to_string())?;
    }
    if let Some(sigma) = sigma {
        cfg = cfg.with_noise(sigma).map_err(|e| e.to_string())?;
    }
    Ok(cfg)
}

fn cmd_simulate(args: SimulateArgs, seed: u64) -> ExitCode {
    let cfg = match scenario_from(
        args.regime,
        args.agents,
        args.epochs,
        args.dim,
        args.sigma,
        args.weights,
    ) {
        Ok(cfg) => cfg,
        Err(msg) => return fail(msg),
    };
    let dataset = match sim::generate_dataset(&cfg, seed) {
        Ok(ds) => ds,
        Err(e) => return fail(e),
    };
    let text = data::to_json(&dataset);
    match emit(&text, args.output.as_deref()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn load(path: &Path) -> Result<Dataset, String> {
    data::load(path).map_err(|e| e.to_string())
}

fn cmd_detect(args: DetectArgs) -> ExitCode {
    let dataset = match load(&args.input) {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    let detection = match revpref::detect_coordination(dataset.base()) {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    let report = match &detection {
        Detection::Coordinated(cert) => {
            let levels: Vec<Vec<String>> = (0..cert.agents())
                .map(|i| (0..cert.epochs()).map(|t| fmt_sig(cert.level(i, t))).collect())
                .collect();
            let marginals: Vec<Vec<String>> = (0..cert.agents())
                .map(|i| (0..cert.epochs()).map(|t| fmt_sig(cert.marginal(i, t))).collect())
                .collect();
            serde_json::json!({
                "verdict": "coordinated",
                "agents": cert.agents(),
                "epochs": cert.epochs(),
                "certificate": { "u": levels, "lambda": marginals },
            })
        }
        Detection::NotCoordinated => serde_json::json!({ "verdict": "not_coordinated" }),
    };
    let text = match args.format {
        FormatArg::Json => serde_json::to_string_pretty(&report).expect("report serializes"),
        FormatArg::Csv => match &detection {
            Detection::Coordinated(cert) => format!(
                "verdict,agents,epochs\ncoordinated,{},{}\n",
                cert.agents(),
                cert.epochs()
            ),
            Detection::NotCoordinated => "verdict,agents,epochs\nnot_coordinated,,\n".into(),
        },
    };
    if emit(&text, args.output.as_deref()).is_err() {
        return fail("cannot write report");
    }
    match detection {
        Detection::Coordinated(_) => ExitCode::SUCCESS,
        Detection::NotCoordinated => ExitCode::from(1),
    }
}

fn cmd_reconstruct(args: ReconstructArgs) -> ExitCode {
    if args.resolution < 2 {
        return fail(format!("resolution {} is too small", args.resolution));
    }
    let dataset = match load(&args.input) {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    if dataset.base().dim() != 2 {
        return fail("surface export needs two-dimensional signals");
    }
    let cert = match revpref::detect_coordination(dataset.base()) {
        Ok(Detection::Coordinated(cert)) => cert,
        Ok(Detection::NotCoordinated) => {
            eprintln!("dataset is not consistent with coordination; nothing to reconstruct");
            return ExitCode::from(1);
        }
        Err(e) => return fail(e),
    };
    let utils = match revpref::reconstruct_utilities(&cert, dataset.base()) {
        Ok(u) => u,
        Err(e) => return fail(e),
    };
    for util in &utils {
        let csv = match revpref::export_utility_grid(util, args.lo, args.hi, args.resolution) {
            Ok(csv) => csv,
            Err(e) => return fail(e),
        };
        let path = PathBuf::from(format!(
            "{}_agent{}.csv",
            args.output.display(),
            util.agent() + 1
        ));
        if let Err(e) = std::fs::write(&path, csv) {
            return fail(format!("cannot write {}: {e}", path.display()));
        }
        println!("{}", path.display());
    }
    ExitCode::SUCCESS
}

fn cmd_stat_detect(args: StatDetectArgs, seed: u64) -> ExitCode {
    if !(args.gamma > 0.0 && args.gamma < 1.0) {
        return fail(format!("--gamma {} must lie strictly inside (0, 1)", args.gamma));
    }
    let dataset = match load(&args.input) {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    let noisy = match dataset {
        Dataset::Noisy(n) => n,
        Dataset::Clean(base) => {
            let model = match NoiseModel::iid_gaussian(args.sigma) {
                Ok(m) => m,
                Err(e) => return fail(e),
            };
            NoisyDataset::new(base, model)
        }
    };
    let report = match statdetect::decide(&noisy, args.gamma, args.draws, seed) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let decision = match report.verdict.decision {
        Decision::H0Coordinated => "H0",
        Decision::H1NotCoordinated => "H1",
    };
    let text = match args.format {
        FormatArg::Json => serde_json::to_string_pretty(&serde_json::json!({
            "statistic": fmt_sig(report.verdict.statistic),
            "gamma": fmt_sig(report.verdict.gamma),
            "decision": decision,
            "phi_star": fmt_sig(report.relaxation.stat.overall),
            "phi_per_agent": report
                .relaxation
                .stat
                .per_agent
                .iter()
                .map(|&p| fmt_sig(p))
                .collect::<Vec<_>>(),
        }))
        .expect("report serializes"),
        FormatArg::Csv => format!(
            "statistic,gamma,decision,phi_star\n{},{},{},{}\n",
            fmt_sig(report.verdict.statistic),
            fmt_sig(report.verdict.gamma),
            decision,
            fmt_sig(report.relaxation.stat.overall)
        ),
    };
    if emit(&text, args.output.as_deref()).is_err() {
        return fail("cannot write report");
    }
    match report.verdict.decision {
        Decision::H0Coordinated => ExitCode::SUCCESS,
        Decision::H1NotCoordinated => ExitCode::from(1),
    }
}

fn parse_sigma_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("--sigmas `{spec}` must be start:step:end"));
    }
    let parse = |s: &str| s.parse::<f64>().map_err(|e| format!("bad number `{s}`: {e}"));
    let (start, step, end) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
    if !(step > 0.0) || end < start {
        return Err(format!("--sigmas `{spec}` must satisfy step > 0 and end >= start"));
    }
    let mut grid = Vec::new();
    let mut k = 0u32;
    loop {
        let v = start + step * k as f64;
        if v > end + 1e-12 {
            break;
        }
        grid.push(v);
        k += 1;
    }
    Ok(grid)
}

fn cmd_sweep(args: SweepArgs, seed: u64, threads: usize) -> ExitCode {
    let sigmas = match parse_sigma_grid(&args.sigmas) {
        Ok(g) => g,
        Err(msg) => return fail(msg),
    };
    let cfg = match scenario_from(
        RegimeArg::Coordinated,
        args.agents,
        args.epochs,
        2,
        None,
        None,
    ) {
        Ok(cfg) => cfg,
        Err(msg) => return fail(msg),
    };
    let rows = match statdetect::sweep(
        &sigmas,
        &cfg,
        args.gamma,
        args.draws,
        args.trials,
        seed,
        threads,
    ) {
        Ok(rows) => rows,
        Err(e) => return fail(e),
    };
    let csv = statdetect::sweep_csv(&rows);
    match emit(&csv, args.output.as_deref()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn cmd_waveform(args: WaveformArgs) -> ExitCode {
    let kind = match args.kind {
        WaveformArg::Triangular => WaveformKind::TriangularCw { theta: args.theta },
        WaveformArg::Gaussian => WaveformKind::GaussianCw { theta: args.theta },
        WaveformArg::Chirp => WaveformKind::GaussianLfmChirp {
            theta1: args.theta,
            theta2: args.theta2,
        },
    };
    let spec = WaveformSpec {
        kind,
        carrier: args.wc,
        snr: args.eta,
        lightspeed: args.lightspeed,
    };
    let r = match tracking::waveform_covariance(&spec) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    println!(
        "R = {},{};{},{}",
        fmt_sig(r[(0, 0)]),
        fmt_sig(r[(0, 1)]),
        fmt_sig(r[(1, 0)]),
        fmt_sig(r[(1, 1)])
    );
    if let Some(path) = args.output {
        let csv = format!(
            "r11,r12,r21,r22\n{},{},{},{}\n",
            fmt_sig(r[(0, 0)]),
            fmt_sig(r[(0, 1)]),
            fmt_sig(r[(1, 0)]),
            fmt_sig(r[(1, 1)])
        );
        if let Err(e) = std::fs::write(&path, csv) {
            return fail(format!("cannot write {}: {e}", path.display()));
        }
    }
    ExitCode::SUCCESS
}
