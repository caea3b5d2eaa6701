//! `molres` command line.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on runtime failures.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::benchmark::{run_benchmark, run_trial, simulate_trial};
use crate::config::{load_config, ExperimentConfig};
use crate::dynamics::{eigen_closed_form, sustained_substrate_level};
use crate::error::{Error, Result};
use crate::format::{fmt_g, write_trace_csv};
use crate::rc::ReadoutMode;
use crate::reactor::{integrate, InfluxProfile};
use crate::tasks::TaskKind;

#[derive(Debug, Parser)]
#[command(name = "molres", version, about = "Deoxyribozyme oscillator reservoir computer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON experiment config; missing keys take the default protocol values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Trial seed (simulate, trial) or master seed (bench, sweep).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long, global = true)]
    mode: Option<ReadoutMode>,
    #[arg(long, global = true)]
    task: Option<TaskKind>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one trial and write the trace as CSV.
    Simulate {
        /// Hold every influx at its base rate (no input signal).
        #[arg(long)]
        constant: bool,
    },
    /// Linearized eigenvalues and oscillation period as JSON.
    Analyze,
    /// Train and score one readout; prints a TrialResult as JSON.
    Trial,
    /// All four mode × task cells over many trials; prints JSON.
    Bench {
        /// Also write per-trial `seed,mode,task,nrmse_train,nrmse_test` CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Benchmark means over a grid of one config key; prints CSV.
    Sweep {
        /// Dotted config key, e.g. `tau` or `reactor.e`.
        #[arg(long)]
        key: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = write!(err, "{}", e.render());
            return 1;
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                let _ = writeln!(err, "  caused by: {s}");
                source = s.source();
            }
            2
        }
    }
}

fn resolve_config(common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => load_config(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(m) = common.mode {
        cfg.mode = m;
    }
    if let Some(t) = common.task {
        cfg.task = t;
    }
    if let Some(n) = common.trials {
        cfg.n_trials = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, body: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, body)?,
        None => out.write_all(body.as_bytes())?,
    }
    Ok(())
}

/// Provenance for CSV outputs, whose header line is fixed.
fn emit_sidecar(err: &mut dyn Write, path: Option<&Path>, meta: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(meta)? + "\n";
    match path {
        Some(p) => {
            let mut side = p.as_os_str().to_owned();
            side.push(".config.json");
            std::fs::write(side, text)?;
        }
        None => err.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let cfg = resolve_config(&cli.common)?;
    let out_path = cli.common.out.as_deref();
    match cli.command {
        Command::Simulate { constant } => {
            let seed = cli.common.seed.unwrap_or(cfg.master_seed);
            let trace = if constant {
                let input = InfluxProfile::constant([cfg.influx_base; 3]);
                integrate(&cfg.initial, &cfg.reactor, &input, cfg.t_end(), cfg.step())?
            } else {
                simulate_trial(&cfg, seed)?.trace
            };
            let mut buf = Vec::new();
            write_trace_csv(&trace, &mut buf)?;
            emit(out, out_path, std::str::from_utf8(&buf).expect("ascii csv"))?;
            emit_sidecar(
                err,
                out_path,
                &json!({
                    "seed": seed,
                    "constant_influx": constant,
                    "guard_violations": trace.guard_violations,
                    "negative_clamps": trace.negative_clamps,
                    "config": cfg,
                }),
            )?;
        }
        Command::Analyze => {
            let level = cfg.reactor.steady_total(cfg.influx_base);
            let eig = eigen_closed_form(&cfg.reactor, &[level; 3])?;
            let body = json!({
                "lambda1": eig.lambda1,
                "re23": eig.lambda23_real,
                "im23": eig.lambda23_imag,
                "period_s": eig.period,
                "regime": eig.regime,
                "sustained_substrate_nM": sustained_substrate_level(&cfg.reactor)?,
                "substrate_nM": level,
                "master_seed": cfg.master_seed,
                "config": cfg,
            });
            emit(out, out_path, &(serde_json::to_string_pretty(&body)? + "\n"))?;
        }
        Command::Trial => {
            let seed = cli.common.seed.unwrap_or(cfg.master_seed);
            let result = run_trial(&cfg, seed)?;
            let body = json!({ "result": result, "master_seed": cfg.master_seed, "config": cfg });
            emit(out, out_path, &(serde_json::to_string_pretty(&body)? + "\n"))?;
        }
        Command::Bench { csv } => {
            let mut cfg = cfg;
            if let Some(s) = cli.common.seed {
                cfg.master_seed = s;
            }
            let stats = run_benchmark(&cfg, cfg.n_trials)?;
            emit(out, out_path, &(stats.to_json() + "\n"))?;
            if let Some(p) = csv {
                std::fs::write(p, stats.trials_csv())?;
            }
        }
        Command::Sweep { key, values } => {
            let mut base = cfg;
            if let Some(s) = cli.common.seed {
                base.master_seed = s;
            }
            let mut csv = String::from("key,value,mode,task,mean,std\n");
            for raw in &values {
                let point = with_key(&base, &key, raw)?;
                let stats = run_benchmark(&point, point.n_trials)?;
                for c in &stats.cells {
                    csv.push_str(&format!(
                        "{key},{raw},{},{},{},{}\n",
                        c.mode,
                        c.task,
                        fmt_g(c.mean, 9),
                        fmt_g(c.std, 9)
                    ));
                }
            }
            emit(out, out_path, &csv)?;
            emit_sidecar(err, out_path, &json!({ "key": key, "values": values, "config": base }))?;
        }
    }
    Ok(())
}

/// Copy of `cfg` with the dotted `key` set to `raw`, typed after the current value.
pub fn with_key(cfg: &ExperimentConfig, key: &str, raw: &str) -> Result<ExperimentConfig> {
    let bad = |reason: String| Error::Config { key: key.to_string(), reason };
    let mut root = serde_json::to_value(cfg)?;
    let mut slot = &mut root;
    for part in key.split('.') {
        slot = slot.get_mut(part).ok_or_else(|| bad("no such key".into()))?;
    }
    *slot = match slot {
        Value::Number(n) if n.is_u64() => raw.parse::<u64>().map(Value::from).map_err(|e| bad(e.to_string()))?,
        Value::Number(_) => raw.parse::<f64>().map(Value::from).map_err(|e| bad(e.to_string()))?,
        Value::Bool(_) => raw.parse::<bool>().map(Value::from).map_err(|e| bad(e.to_string()))?,
        Value::String(_) => Value::from(raw),
        _ => return Err(bad("only scalar keys can be swept".into())),
    };
    ExperimentConfig::from_json(&root.to_string())
}
