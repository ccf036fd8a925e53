use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use wbfront::config::{parse_config, ExperimentConfig, SchemeKind};
use wbfront::output::{fit_text, read_timeseries, write_run};
use wbfront::presets::{expand, Preset, PresetOptions};
use wbfront::run::{run_experiment, RunError};
use wbfront::table::{collect_runs, render_tables};
use wbfront_core::analysis::fit_delay;

#[derive(Parser)]
#[command(name = "wbfront", version, about = "Well-balanced traveling-front experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment described by a `key = value` config file.
    Run {
        config: PathBuf,
        /// Output directory; overrides `output_dir` from the file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named preset sweep (fkpp_speed, fkpp_bramson, cubic_pulled,
    /// cubic_pushmi_pullyu, cubic_pushed).
    Preset {
        name: String,
        /// Mesh sizes, comma separated (default 2^-1 .. 2^-6).
        #[arg(long, value_delimiter = ',')]
        dx: Option<Vec<f64>>,
        #[arg(long)]
        t_end: Option<f64>,
        /// Schemes, comma separated.
        #[arg(long, value_delimiter = ',')]
        scheme: Option<Vec<SchemeKind>>,
        /// Step cap per run.
        #[arg(long)]
        budget: Option<u64>,
        /// Share the parabolic time step across schemes.
        #[arg(long)]
        same_dt: bool,
        /// Skip sweep entries with more grid points than this.
        #[arg(long, default_value_t = 50_000)]
        max_cells: usize,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Fit the delay of a recorded level-set trajectory.
    Fit {
        timeseries: PathBuf,
        /// Reference speed subtracted from the trajectory.
        #[arg(long)]
        speed: f64,
        /// Level the trajectory tracks (reported only).
        #[arg(long)]
        level: f64,
    },
    /// Convergence tables from run directories.
    Table {
        #[arg(required = true)]
        dirs: Vec<PathBuf>,
    },
}

enum Failure {
    Config(String),
    Numerical(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Numerical(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Numerical(m) | Failure::Io(m) => m,
        }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::Io(e.to_string())
}

/// Runs one config and writes its artifacts. A run that exhausts its budget
/// still writes what it recorded before failing.
fn execute(cfg: &ExperimentConfig, dir: &Path) -> Result<String, Failure> {
    match run_experiment(cfg) {
        Ok(outcome) => {
            let fit = outcome.fit(cfg);
            write_run(dir, cfg, &outcome.grid, &outcome.record, fit.as_ref()).map_err(io_failure)?;
            let speed = outcome
                .record
                .last_speed()
                .map_or("-".to_string(), |s| format!("{s:.10}"));
            let alpha = fit.map_or("-".to_string(), |f| format!("{:.6}", f.alpha));
            Ok(format!(
                "{}: {} steps, t = {:.6}, final speed {speed}, alpha {alpha}",
                dir.display(),
                outcome.steps,
                outcome.t_final
            ))
        }
        Err(RunError::BudgetExhausted { budget, t, partial }) => {
            let grid = cfg
                .grid()
                .map_err(|e| Failure::Config(e.to_string()))?;
            write_run(dir, cfg, &grid, &partial, None).map_err(io_failure)?;
            Err(Failure::Numerical(format!(
                "{}: step budget of {budget} exhausted at t = {t}; partial output written",
                dir.display()
            )))
        }
        Err(RunError::Config(m)) => Err(Failure::Config(m)),
        Err(RunError::Io(e)) => Err(io_failure(e)),
        Err(e) => Err(Failure::Numerical(format!("{}: {e}", dir.display()))),
    }
}

fn cmd_run(config: &Path, out: Option<PathBuf>) -> Result<(), Failure> {
    let text = fs::read_to_string(config)
        .map_err(|e| Failure::Io(format!("{}: {e}", config.display())))?;
    let cfg = parse_config(&text)
        .map_err(|e| Failure::Config(format!("{}: {e}", config.display())))?;
    let dir = out
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("results/run"));
    println!("{}", execute(&cfg, &dir)?);
    Ok(())
}

fn cmd_preset(name: &str, opts: PresetOptions, root: &Path) -> Result<(), Failure> {
    let preset: Preset = name.parse().map_err(Failure::Config)?;
    let cfgs = expand(preset, &opts, root).map_err(Failure::Config)?;
    if cfgs.is_empty() {
        return Err(Failure::Config(
            "every sweep entry exceeds --max-cells".to_string(),
        ));
    }
    let results: Vec<Result<String, Failure>> = cfgs
        .par_iter()
        .map(|cfg| {
            let dir = cfg.output_dir.clone().expect("presets set output_dir");
            execute(cfg, &dir)
        })
        .collect();
    let total = results.len();
    let mut failed = 0;
    let mut worst = 0;
    for r in results {
        match r {
            Ok(line) => println!("{line}"),
            Err(f) => {
                eprintln!("error: {}", f.message());
                failed += 1;
                worst = worst.max(f.code());
            }
        }
    }
    let summary = format!("{failed} of {total} sweep runs failed");
    match worst {
        0 => Ok(()),
        1 => Err(Failure::Config(summary)),
        2 => Err(Failure::Numerical(summary)),
        _ => Err(Failure::Io(summary)),
    }
}

fn cmd_fit(path: &Path, speed: f64, level: f64) -> Result<(), Failure> {
    if !speed.is_finite() || !level.is_finite() {
        return Err(Failure::Config("--speed and --level must be finite".into()));
    }
    let record = read_timeseries(path).map_err(io_failure)?;
    let fit = fit_delay(&record, speed)
        .map_err(|e| Failure::Numerical(format!("{}: {e}", path.display())))?;
    println!("# level {level}, reference speed {speed}");
    print!("{}", fit_text(&fit));
    Ok(())
}

fn cmd_table(dirs: &[PathBuf]) -> Result<(), Failure> {
    let runs = collect_runs(dirs).map_err(io_failure)?;
    if runs.is_empty() {
        return Err(Failure::Io("no run directories found".to_string()));
    }
    print!("{}", render_tables(&runs).map_err(Failure::Numerical)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Run { config, out } => cmd_run(&config, out),
        Command::Preset {
            name,
            dx,
            t_end,
            scheme,
            budget,
            same_dt,
            max_cells,
            out,
        } => cmd_preset(
            &name,
            PresetOptions {
                dx,
                t_end,
                schemes: scheme,
                budget,
                same_dt,
                max_cells: Some(max_cells),
            },
            &out,
        ),
        Command::Fit {
            timeseries,
            speed,
            level,
        } => cmd_fit(&timeseries, speed, level),
        Command::Table { dirs } => cmd_table(&dirs),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
