//! Command implementations behind the `werner` binary.
//!
//! Every command returns the exact text it prints on stdout, so the binary
//! stays a thin shell and tests can call the commands directly.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use werner_metrology::estimation::log_likelihood;
use werner_metrology::prelude::*;
use werner_metrology::tomography::{TomographyCountsFile, TomographyData};

/// Phase estimation with two-qubit Werner probes. Angles are in radians.
#[derive(Debug, Parser)]
#[command(name = "werner", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Outcome probabilities over a phase sweep.
    Probabilities(ProbabilitiesArgs),
    /// Fisher information against η at fixed phase.
    FisherSweep(FisherSweepArgs),
    /// Monte Carlo estimation compared with the Cramér–Rao bound.
    Simulate(SimulateArgs),
    /// Estimate η and φ from a counts file.
    Estimate(EstimateArgs),
    /// Simulated state tomography of a Werner state.
    Tomography(TomographyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ProbabilitiesArgs {
    #[arg(long, default_value = "bell")]
    pub strategy: Strategy,
    #[arg(long)]
    pub eta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub visibility: f64,
    /// Sweep start in radians.
    #[arg(long, default_value_t = 0.0)]
    pub from: f64,
    /// Sweep end in radians.
    #[arg(long, default_value_t = FRAC_PI_2)]
    pub to: f64,
    #[arg(long, default_value_t = 5)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Output::Csv)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct FisherSweepArgs {
    /// Emit long-format rows for one strategy instead of the comparison table.
    #[arg(long)]
    pub strategy: Option<Strategy>,
    /// Phase in radians.
    #[arg(long, default_value_t = FRAC_PI_4)]
    pub phi: f64,
    #[arg(long, default_value_t = 1.0)]
    pub visibility: f64,
    #[arg(long, default_value_t = 11)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Output::Csv)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// JSON experiment config; flags given alongside it are ignored.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = "bell")]
    pub strategy: Strategy,
    #[arg(long, required_unless_present = "config")]
    pub eta: Option<f64>,
    /// True phase in radians, within [0, π/2].
    #[arg(long, required_unless_present = "config")]
    pub phi: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub visibility: f64,
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
    #[arg(long, default_value_t = 300)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Output::Json)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Counts file: {"strategy": ..., "counts": {label: n}}.
    #[arg(long)]
    pub counts: PathBuf,
    /// Known η; required for local counts, otherwise estimated.
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub visibility: f64,
}

#[derive(Debug, Args)]
pub struct TomographyArgs {
    #[arg(long)]
    pub eta: f64,
    /// Shots per measurement setting.
    #[arg(long, default_value_t = 100_000)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use exact probabilities instead of sampled counts.
    #[arg(long)]
    pub exact: bool,
    /// Reconstruct from this counts file instead of simulating.
    #[arg(long, conflicts_with = "exact")]
    pub counts: Option<PathBuf>,
    /// Print the simulated counts file instead of the report.
    #[arg(long, conflicts_with_all = ["exact", "counts"])]
    pub emit_counts: bool,
}

/// A failed command: message for stderr plus the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_FLAT_LIKELIHOOD: i32 = 3;
pub const EXIT_INFEASIBLE_COUNTS: i32 = 4;

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::FlatLikelihood { .. } => EXIT_FLAT_LIKELIHOOD,
            Error::InfeasibleCounts => EXIT_INFEASIBLE_COUNTS,
            _ => EXIT_DOMAIN,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn domain(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_DOMAIN,
        message: message.into(),
    }
}

pub type CliResult = Result<String, CliError>;

pub fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Probabilities(a) => cmd_probabilities(a),
        Command::FisherSweep(a) => cmd_fisher_sweep(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Tomography(a) => cmd_tomography(a),
    }
}

fn grid(from: f64, to: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if points < 2 {
        return Err(domain(format!("points must be at least 2, got {points}")));
    }
    if !(from.is_finite() && to.is_finite() && from < to) {
        return Err(domain(format!("sweep needs start < stop, got {from}..{to}")));
    }
    let step = (to - from) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| if i == points - 1 { to } else { from + i as f64 * step })
        .collect())
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| domain(format!("{}: {e}", path.display())))
}

fn json_line<T: serde::Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data");
    s.push('\n');
    s
}

pub fn cmd_probabilities(a: &ProbabilitiesArgs) -> CliResult {
    let params = VisibilityModelParams::new(a.eta, a.visibility)?;
    let phis = grid(a.from, a.to, a.points)?;
    let rows: Vec<(f64, OutcomeDistribution)> =
        phis.into_iter().map(|phi| (phi, model_probs(a.strategy, phi, params))).collect();
    match a.output {
        Output::Csv => {
            let mut out = String::from("phi");
            for label in a.strategy.labels() {
                out.push(',');
                out.push_str(label);
            }
            out.push('\n');
            for (phi, d) in &rows {
                write!(out, "{phi}").unwrap();
                for p in d.probabilities() {
                    write!(out, ",{p}").unwrap();
                }
                out.push('\n');
            }
            Ok(out)
        }
        Output::Json => {
            let rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|(phi, d)| {
                    serde_json::json!({
                        "phi": phi,
                        "labels": d.labels(),
                        "p": d.probabilities(),
                    })
                })
                .collect();
            Ok(json_line(&serde_json::json!({
                "strategy": a.strategy,
                "eta": a.eta,
                "visibility": a.visibility,
                "rows": rows,
            })))
        }
    }
}

fn fisher_at(strategy: Strategy, phi: f64, eta: f64, visibility: f64) -> werner_metrology::Result<f64> {
    if visibility == 1.0 {
        match strategy {
            Strategy::Bell => return fisher_bell_closed(phi, eta),
            Strategy::Local => return fisher_local_closed(phi, eta),
            Strategy::GroupedBell => {}
        }
    }
    classical_fisher(&model_probs(strategy, phi, VisibilityModelParams::new(eta, visibility)?))
}

pub fn cmd_fisher_sweep(a: &FisherSweepArgs) -> CliResult {
    VisibilityModelParams::new(0.0, a.visibility)?;
    if !a.phi.is_finite() {
        return Err(domain(format!("phi must be finite, got {}", a.phi)));
    }
    let etas = grid(0.0, 1.0, a.points)?;
    let report = |strategy: &str, eta: f64, value: f64| FisherReport {
        strategy: strategy.to_string(),
        eta,
        phi: a.phi,
        visibility: a.visibility,
        value,
    };

    let mut reports = Vec::new();
    for &eta in &etas {
        match a.strategy {
            Some(s) => reports.push(report(s.name(), eta, fisher_at(s, a.phi, eta, a.visibility)?)),
            None => {
                reports.push(report("bell", eta, fisher_at(Strategy::Bell, a.phi, eta, a.visibility)?));
                reports.push(report("local", eta, fisher_at(Strategy::Local, a.phi, eta, a.visibility)?));
                reports.push(report("qfi", eta, qfi_coherent_closed(eta)?));
            }
        }
    }

    match (a.output, a.strategy) {
        (Output::Json, _) => Ok(json_line(&reports)),
        (Output::Csv, Some(_)) => {
            let mut out = format!("{}\n", FisherReport::CSV_HEADER);
            for r in &reports {
                out.push_str(&r.csv_row());
                out.push('\n');
            }
            Ok(out)
        }
        (Output::Csv, None) => {
            let mut out = String::from("eta,F_bell,F_local,QFI\n");
            for row in reports.chunks(3) {
                writeln!(out, "{},{},{},{}", row[0].eta, row[0].value, row[1].value, row[2].value).unwrap();
            }
            Ok(out)
        }
    }
}

fn experiment_config(a: &SimulateArgs) -> Result<ExperimentConfig, CliError> {
    if let Some(path) = &a.config {
        let text = read_file(path)?;
        return serde_json::from_str(&text).map_err(|e| domain(format!("{}: {e}", path.display())));
    }
    Ok(ExperimentConfig {
        eta_true: a.eta.expect("required by clap"),
        phi_true: a.phi.expect("required by clap"),
        visibility: a.visibility,
        shots: a.shots,
        trials: a.trials,
        strategy: a.strategy,
        seed: a.seed,
    })
}

pub fn cmd_simulate(a: &SimulateArgs) -> CliResult {
    let config = experiment_config(a)?;
    let report = run_monte_carlo(&config)?;
    Ok(match a.output {
        Output::Json => format!("{}\n", report.to_json()),
        Output::Csv => format!("{}\n{}\n", CrbReport::CSV_HEADER, report.csv_row()),
    })
}

pub fn cmd_estimate(a: &EstimateArgs) -> CliResult {
    let text = read_file(&a.counts)?;
    let counts = Counts::from_json(&text)?;
    let eta = match a.eta {
        Some(eta) => eta,
        None => estimate_eta(&counts)?,
    };
    let phi = mle_phi(&counts, eta, a.visibility)?;
    let params = VisibilityModelParams::new(eta, a.visibility)?;
    Ok(json_line(&serde_json::json!({
        "strategy": counts.strategy(),
        "shots": counts.total(),
        "eta_hat": eta,
        "phi_hat": phi,
        "log_likelihood": log_likelihood(&counts, phi, params),
    })))
}

pub fn cmd_tomography(a: &TomographyArgs) -> CliResult {
    let target = werner(a.eta)?;
    let report = if a.exact {
        tomography_report_exact(&target)?
    } else if let Some(path) = &a.counts {
        let text = read_file(path)?;
        let file: TomographyCountsFile =
            serde_json::from_str(&text).map_err(|e| domain(format!("{}: {e}", path.display())))?;
        let data = TomographyData::from_counts(&file.to_counts()?)?;
        let est = project_to_physical(&linear_inversion(&data)?)?;
        TomographyReport {
            fidelity: fidelity(&est, &target)?,
            purity: purity(&est),
        }
    } else {
        let settings = TomographySettings::new(a.shots, a.seed)?;
        if a.emit_counts {
            let counts = generate_tomography_counts(&target, &settings)?;
            let file = TomographyCountsFile::from_counts(&counts);
            return Ok(json_line(&file));
        }
        tomography_report(&target, &settings)?
    };
    Ok(format!("{}\n", report.to_json()))
}
