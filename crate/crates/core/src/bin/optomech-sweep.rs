//! Command-line front end for parameter sweeps.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use optomech::qle::JOrder;
use optomech::sweep::{self, Engine, SweepConfig, SweepResult};
use optomech::Error;

#[derive(Parser)]
#[command(name = "optomech-sweep", version, about = "Steady-state photon statistics sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the base parameters once per engine.
    Point(Common),
    /// Scan Δ₁ along the configured axis.
    ScanDelta1(Common),
    /// Minimize g²₁ over one parameter on a two-axis grid.
    GridMinG2(Common),
    /// Minimize g²₁ over one parameter for each g.
    ScanG(Common),
    /// Run both engines and report their relative differences.
    Compare(Common),
}

#[derive(Args)]
struct Common {
    /// JSON sweep configuration; built-in defaults when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// numeric, analytic or both.
    #[arg(long)]
    engine: Option<Engine>,
    /// Output prefix; writes <prefix>.csv and <prefix>.json. CSV goes to
    /// stdout when neither this nor the config names an output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Powers of J kept by the analytic engine, or `resummed`.
    #[arg(long)]
    j_order: Option<JOrder>,
    #[arg(long)]
    m_max: Option<usize>,
    /// Override a base parameter, e.g. `--set delta1=0.25`.
    #[arg(long = "set", value_name = "NAME=VALUE")]
    overrides: Vec<String>,
}

fn load(c: &Common) -> Result<SweepConfig, Error> {
    let mut cfg = match &c.config {
        Some(p) => SweepConfig::from_file(p)?,
        None => SweepConfig::default(),
    };
    if let Some(e) = c.engine {
        cfg.engine = e;
    }
    if let Some(j) = c.j_order {
        cfg.analytic.j_order = j;
    }
    if let Some(m) = c.m_max {
        cfg.analytic.m_max = m;
    }
    for o in &c.overrides {
        let (k, v) = o
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("`--set {o}` is not NAME=VALUE")))?;
        let v: f64 = v.trim().parse().map_err(|_| Error::Config(format!("`{v}` is not a number")))?;
        cfg.base.set(k.trim(), v)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(result: &SweepResult, cfg: &SweepConfig, out: Option<PathBuf>, extra: Option<serde_json::Value>) -> Result<(), Error> {
    match out.or_else(|| cfg.output.as_ref().map(PathBuf::from)) {
        Some(prefix) => {
            let (csv, json) = sweep::write_outputs(result, cfg, &prefix, extra)?;
            eprintln!("wrote {} and {}", csv.display(), json.display());
        }
        None => print!("{}", sweep::render_csv(result, cfg, &sweep::output::now_rfc3339())?),
    }
    Ok(())
}

fn run(cmd: Cmd) -> Result<i32, Error> {
    let (c, kind) = match &cmd {
        Cmd::Point(c) => (c, 0),
        Cmd::ScanDelta1(c) => (c, 1),
        Cmd::GridMinG2(c) => (c, 2),
        Cmd::ScanG(c) => (c, 3),
        Cmd::Compare(c) => (c, 4),
    };
    let cfg = load(c)?;
    let (result, extra) = match kind {
        0 => (sweep::run_point(&cfg)?, None),
        1 => (sweep::scan_delta1(&cfg)?, None),
        2 => (sweep::grid_min_g2(&cfg)?, None),
        3 => (sweep::scan_g(&cfg)?, None),
        _ => {
            let (r, rep) = sweep::compare_engines(&cfg)?;
            eprintln!(
                "max relative difference: S1 {:.3e}, S2 {:.3e}, g2_1 {:.3e}, g2_2 {:.3e} (tolerance {}) -> {}",
                rep.s1.max,
                rep.s2.max,
                rep.g2_1.max,
                rep.g2_2.max,
                rep.tolerance,
                if rep.pass { "pass" } else { "fail" }
            );
            (r, Some(serde_json::to_value(&rep)?))
        }
    };
    emit(&result, &cfg, c.out.clone(), extra)?;
    if result.failures() > 0 {
        eprintln!("{} of {} rows failed", result.failures(), result.rows.len());
    }
    Ok(result.exit_code())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
