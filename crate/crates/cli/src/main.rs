//! `policy-game-lab`: equilibrium reports, simulations, sweeps and oracle
//! checks for the reputational monetary-policy game.

mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;
use policy_game_lab::format::{
    fmt_real, report_json, trajectory_json, write_reports_csv, write_trajectory_csv,
};
use policy_game_lab::sweep::{write_baseline_csv, write_sweep_csv};
use policy_game_lab::verify::run_oracle_suite;
use policy_game_lab::{equilibrium_report, run_sweep, simulate, EquilibriumReport};
use serde_json::json;

use config::{Format, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<policy_game_lab::Error> for CliError {
    fn from(e: policy_game_lab::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else if e.is_io() {
            CliError::Io(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "policy-game-lab", version)]
#[command(about = "Reputational monetary-policy game under present-biased discounting")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON config file; flags override its values
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write data here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Inflation-cost weight
    #[arg(long = "a", global = true, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Mean benefit slope of surprise inflation
    #[arg(long, global = true, allow_negative_numbers = true)]
    b_bar: Option<f64>,
    /// Actual present bias
    #[arg(long, global = true, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Believed present bias
    #[arg(long, global = true, allow_negative_numbers = true)]
    beta_hat: Option<f64>,
    /// Long-run discount factor
    #[arg(long, global = true, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Exponential discount factor of the baseline (defaults to delta)
    #[arg(long, global = true, allow_negative_numbers = true)]
    q: Option<f64>,
    /// Announced inflation target
    #[arg(long, global = true, allow_negative_numbers = true)]
    target: Option<f64>,
    #[arg(long, global = true)]
    horizon: Option<u32>,
    #[arg(long, global = true)]
    punishment_periods: Option<u32>,
    /// Bind the policymaker with a sanction on cheating
    #[arg(long, global = true)]
    committed: bool,
    /// Cost of cheating when committed (infinite if omitted)
    #[arg(long, global = true, allow_negative_numbers = true)]
    sanction: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Baseline and behavioral equilibrium reports side by side
    Analyze,
    /// Play the repeated game period by period
    Simulate,
    /// Enforceable-range table over a (beta, delta) grid
    Sweep {
        /// Comma-separated, strictly increasing
        #[arg(long, value_delimiter = ',')]
        beta_grid: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        delta_grid: Option<Vec<f64>>,
        /// Baseline exponential factors, written to <output>.baseline.csv
        #[arg(long, value_delimiter = ',')]
        q_grid: Option<Vec<f64>>,
    },
    /// Cross-check analytic results against independent oracles
    Verify {
        #[arg(long)]
        trials: Option<usize>,
    },
}

impl Cli {
    fn flags(&self) -> RunConfig {
        let mut c = RunConfig {
            a: self.a,
            b_bar: self.b_bar,
            beta: self.beta,
            beta_hat: self.beta_hat,
            delta: self.delta,
            q: self.q,
            target: self.target,
            horizon: self.horizon,
            punishment_periods: self.punishment_periods,
            committed: self.committed.then_some(true),
            sanction: self.sanction,
            seed: self.seed,
            format: self.format,
            output: self.output.clone(),
            ..Default::default()
        };
        match &self.command {
            Command::Sweep {
                beta_grid,
                delta_grid,
                q_grid,
            } => {
                c.beta_grid = beta_grid.clone();
                c.delta_grid = delta_grid.clone();
                c.q_grid = q_grid.clone();
            }
            Command::Verify { trials } => c.trials = *trials,
            _ => {}
        }
        c
    }
}

fn open_output(config: &RunConfig) -> Result<Box<dyn Write>, CliError> {
    Ok(match &config.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn echo_config(effective: &RunConfig) {
    eprintln!(
        "# config: {}",
        serde_json::to_string(effective).unwrap_or_default()
    );
}

fn write_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

type Field = fn(&EquilibriumReport) -> f64;

fn report_text(out: &mut dyn Write, reports: &[EquilibriumReport]) -> Result<(), CliError> {
    let rows: [(&str, Field); 6] = [
        ("discount_factor", |r| r.discount_factor),
        ("pi_discretion", |r| r.pi_discretion),
        ("pi_ideal", |r| r.pi_ideal),
        ("pi_best_enforceable", |r| r.pi_best_enforceable),
        ("range", |r| r.range_lo),
        ("range_width", |r| r.range_width),
    ];
    writeln!(out, "{:<22}{:>26}{:>26}", "", "baseline", "behavioral")?;
    for (name, get) in rows {
        let cell = |r: &EquilibriumReport| {
            if name == "range" {
                format!("[{}, {}]", fmt_real(r.range_lo), fmt_real(r.range_hi))
            } else {
                fmt_real(get(r))
            }
        };
        writeln!(
            out,
            "{name:<22}{:>26}{:>26}",
            cell(&reports[0]),
            cell(&reports[1])
        )?;
    }
    Ok(())
}

fn analyze(config: &RunConfig) -> Result<(), CliError> {
    let effective = config.effective("analyze");
    let params = config.game()?;
    let baseline = equilibrium_report(&params, &config.baseline_spec()?)?;
    let behavioral = equilibrium_report(&params, &config.behavioral_spec()?)?;
    let mut out = open_output(config)?;
    match config.format.unwrap_or(Format::Json) {
        Format::Json => write_json(
            &mut out,
            &json!({
                "config": effective,
                "baseline": report_json(&baseline),
                "behavioral": report_json(&behavioral),
            }),
        )?,
        Format::Csv => {
            echo_config(&effective);
            write_reports_csv(&mut out, &[baseline, behavioral])?;
        }
        Format::Text => {
            echo_config(&effective);
            report_text(&mut out, &[baseline, behavioral])?;
        }
    }
    out.flush()?;
    Ok(())
}

fn run_simulation(config: &RunConfig) -> Result<(), CliError> {
    let effective = config.effective("simulate");
    let params = config.game()?;
    let profile = config.profile()?;
    let spec = config.behavioral_spec()?;
    let trajectory = simulate(
        &profile,
        &params,
        &spec,
        effective.target.unwrap_or_default(),
        effective.horizon.unwrap_or_default(),
        config.seed(),
    )?;
    info!(
        "{:?} policymaker: {} cheats, {} reversals",
        trajectory.kind, trajectory.summary.cheat_count, trajectory.summary.reversal_count
    );
    let mut out = open_output(config)?;
    match config.format.unwrap_or(Format::Csv) {
        Format::Json => {
            let mut value = trajectory_json(&trajectory);
            value["config"] = json!(effective);
            write_json(&mut out, &value)?;
        }
        Format::Csv => {
            echo_config(&effective);
            write_trajectory_csv(&mut out, &trajectory)?;
        }
        Format::Text => {
            echo_config(&effective);
            writeln!(
                out,
                "{:>5} {:>14} {:>14} {:>14} {:>14}  {:<9} {:<9} reversal",
                "t", "target", "expected", "realized", "loss", "action", "planned"
            )?;
            for p in &trajectory.periods {
                writeln!(
                    out,
                    "{:>5} {:>14} {:>14} {:>14} {:>14}  {:<9} {:<9} {}",
                    p.t,
                    p.announced_target
                        .map(fmt_real)
                        .unwrap_or_else(|| "-".into()),
                    fmt_real(p.expected_inflation),
                    fmt_real(p.realized_inflation),
                    fmt_real(p.period_loss),
                    p.action.token(),
                    p.planned_action.token(),
                    p.reversal
                )?;
            }
            writeln!(
                out,
                "type {:?}; discounted loss {}; cheats {}; reversals {}",
                trajectory.kind,
                fmt_real(trajectory.summary.total_discounted_loss_actual_beta),
                trajectory.summary.cheat_count,
                trajectory.summary.reversal_count
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

fn run_grid(config: &RunConfig) -> Result<(), CliError> {
    let effective = config.effective("sweep");
    let mut spec = config.sweep_spec()?;
    let format = config.format.unwrap_or(Format::Csv);
    if format == Format::Csv {
        echo_config(&effective);
        if let Some(path) = &config.output {
            spec.output_path = Some(path.clone());
            let table = run_sweep(&spec)?;
            info!("wrote {} rows to {}", table.rows.len(), path.display());
            return Ok(());
        }
    }
    let table = run_sweep(&spec)?;
    let mut out = open_output(config)?;
    match format {
        Format::Csv => {
            write_sweep_csv(&mut out, &table.rows)?;
            if !table.baseline.is_empty() {
                writeln!(out)?;
                write_baseline_csv(&mut out, &table.baseline)?;
            }
        }
        Format::Json | Format::Text => {
            let rows: Vec<_> = table
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "beta": policy_game_lab::format::json_real(r.beta),
                        "delta": policy_game_lab::format::json_real(r.delta),
                        "discount_factor": policy_game_lab::format::json_real(r.discount_factor),
                        "pi_best_enforceable": policy_game_lab::format::json_real(r.pi_best_enforceable),
                        "range_width": policy_game_lab::format::json_real(r.range_width),
                        "width_ratio_vs_beta1": policy_game_lab::format::json_real(r.width_ratio_vs_beta1),
                    })
                })
                .collect();
            let baseline: Vec<_> = table
                .baseline
                .iter()
                .map(|r| {
                    json!({
                        "q": policy_game_lab::format::json_real(r.q),
                        "pi_best_enforceable": policy_game_lab::format::json_real(r.pi_best_enforceable),
                        "range_width": policy_game_lab::format::json_real(r.range_width),
                    })
                })
                .collect();
            write_json(
                &mut out,
                &json!({ "config": effective, "rows": rows, "baseline": baseline }),
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

fn run_verify(config: &RunConfig) -> Result<(), CliError> {
    let effective = config.effective("verify");
    let trials = effective.trials.unwrap_or_default();
    let seed = effective.seed.unwrap_or_default();
    let report = run_oracle_suite(trials, seed)?;
    let mut out = open_output(config)?;
    match config.format.unwrap_or(Format::Text) {
        Format::Json => {
            let checks: Vec<_> = report
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "tolerance": c.tolerance,
                        "passed": c.passed,
                        "failed": c.failed,
                        "max_error": c.max_error,
                    })
                })
                .collect();
            write_json(
                &mut out,
                &json!({
                    "config": effective,
                    "checks": checks,
                    "passed": report.passed(),
                    "failed": report.failed(),
                }),
            )?;
        }
        Format::Csv | Format::Text => {
            echo_config(&effective);
            for c in &report.checks {
                writeln!(
                    out,
                    "{} {} (passed {}, failed {}, max error {:.3e}, tolerance {:.0e})",
                    if c.ok() { "PASS" } else { "FAIL" },
                    c.name,
                    c.passed,
                    c.failed,
                    c.max_error,
                    c.tolerance
                )?;
            }
            writeln!(
                out,
                "total: {} passed, {} failed",
                report.passed(),
                report.failed()
            )?;
        }
    }
    out.flush()?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!(
            "{} oracle checks failed",
            report.failed()
        )))
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let config = file.overlay(cli.flags());
    match cli.command {
        Command::Analyze => analyze(&config),
        Command::Simulate => run_simulation(&config),
        Command::Sweep { .. } => run_grid(&config),
        Command::Verify { .. } => run_verify(&config),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("POLICY_GAME_LAB_LOG", "warn"))
        .init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
