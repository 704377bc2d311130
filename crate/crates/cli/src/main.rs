//! `cavity-pingpong`: runs figure presets and custom scans, writes CSV.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical
//! failure (the CSV is still written when a scan completes with failed
//! exact-solver points).

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pingpong_core::bistability::{region_scan, Axis, RegionGrid};
use pingpong_core::scan::{
    compare, has_numerical_failure, preset, run_scan, Quantity, ScanConfig, ScanResult, PRESETS,
};
use pingpong_core::Error;

#[derive(Parser, Debug)]
#[command(name = "cavity-pingpong", version, about = "Semiclassical and exact steady states of a driven atom-cavity system")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Figure preset to start from (see `presets`).
    #[arg(long, global = true)]
    preset: Option<String>,
    /// `key = value` config file; its keys override the preset.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Fixed photon cutoff for the exact solver.
    #[arg(long = "n-max", global = true)]
    n_max: Option<usize>,
    /// Suppress messages on standard error.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ping-pong states, transmissions, residuals and bistability roots.
    States,
    /// Scaled rates, diffusion, friction and temperature of the selected state.
    Kinetics,
    /// Exact steady state, diffusion and friction.
    Exact,
    /// Bistability conditions over the complex nu plane or a (C, delta, theta) slice.
    BistabRegion(RegionArgs),
    /// Errors of one column against another.
    Compare(CompareArgs),
    /// Lists the presets, or prints one preset's full config.
    Presets,
}

#[derive(Args, Debug)]
struct RegionArgs {
    #[arg(long, value_enum, default_value_t = Plane::Nu)]
    plane: Plane,
    /// Re(nu) samples as `min:max:points`.
    #[arg(long, default_value = "-15:5:81", value_parser = parse_axis)]
    re: Axis,
    /// Im(nu) samples.
    #[arg(long, default_value = "-10:10:81", value_parser = parse_axis)]
    im: Axis,
    /// Cooperativity samples (standard plane).
    #[arg(long, default_value = "20:20:1", value_parser = parse_axis)]
    c: Axis,
    /// Atomic detuning samples (standard plane).
    #[arg(long, default_value = "-10:10:41", value_parser = parse_axis)]
    delta: Axis,
    /// Cavity detuning samples (standard plane).
    #[arg(long, default_value = "-10:10:41", value_parser = parse_axis)]
    theta: Axis,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Plane {
    Nu,
    Standard,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Reference column.
    #[arg(long)]
    base: String,
    /// Column compared against the reference.
    #[arg(long)]
    target: String,
    /// Existing scan CSV; without it the preset or config is run first.
    #[arg(long)]
    input: Option<PathBuf>,
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [min, max, points] = parts.as_slice() else {
        return Err(format!("expected `min:max:points`, found `{s}`"));
    };
    let num = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("bad number `{v}`"));
    let points = points
        .trim()
        .parse::<usize>()
        .map_err(|_| format!("bad point count `{points}`"))?;
    Ok(Axis::new(num(min)?, num(max)?, points))
}

/// Error with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_numerical_failure() { 2 } else { 1 };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

/// Preset and config file merged into one configuration.
fn load_config(common: &Common) -> Result<ScanConfig, Failure> {
    let mut text = String::new();
    if let Some(name) = &common.preset {
        text.push_str(&format!("preset = {name}\n"));
    }
    if let Some(path) = &common.config {
        let body = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        text.push_str(&body);
    }
    if text.is_empty() {
        return Err(usage("one of --preset or --config is required"));
    }
    let mut cfg = ScanConfig::parse(&text).map_err(|e| match e {
        Error::PresetNotFound(_) | Error::ConfigParse { .. } | Error::InvalidParams(_) => usage(e.to_string()),
        other => other.into(),
    })?;
    if let Some(n) = common.n_max {
        cfg.n_max = Some(n);
        cfg.validate().map_err(|e| usage(e.to_string()))?;
    }
    Ok(cfg)
}

/// Keeps the configured quantities of one family, or the family's
/// defaults when none of them was requested.
fn restrict(cfg: &mut ScanConfig, family: &[Quantity]) {
    let kept: Vec<Quantity> = cfg.quantities.iter().copied().filter(|q| family.contains(q)).collect();
    cfg.quantities = if kept.is_empty() { family.to_vec() } else { kept };
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| usage(format!("cannot write to stdout: {e}"))),
    }
}

fn note(common: &Common, message: &str) {
    if !common.quiet {
        eprintln!("{message}");
    }
}

/// Writes a scan and reports failed points.
fn finish_scan(common: &Common, result: &ScanResult) -> Result<(), Failure> {
    emit(common, &result.to_csv())?;
    let failed = result.status.iter().filter(|s| *s != "ok").count();
    if failed > 0 {
        note(common, &format!("{failed} of {} points recorded failures (see the status column)", result.len()));
    }
    if has_numerical_failure(result) {
        return Err(Failure {
            code: 2,
            message: "the exact solver failed at some grid points".into(),
        });
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let common = &cli.common;
    match &cli.command {
        Command::States | Command::Kinetics | Command::Exact => {
            use Quantity::*;
            let family: &[Quantity] = match cli.command {
                Command::States => &[States, Transmission, Excited, Residuals, Bistability],
                Command::Kinetics => &[Rates, Diffusion, Friction, Temperature],
                _ => &[Exact, ExactKinetics],
            };
            let mut cfg = load_config(common)?;
            restrict(&mut cfg, family);
            note(common, &format!("{}: {} points, config {}", cfg.name, cfg.grid.points, cfg.hash()));
            let result = run_scan(&cfg)?;
            finish_scan(common, &result)
        }
        Command::BistabRegion(args) => {
            let grid = match args.plane {
                Plane::Nu => RegionGrid::NuPlane { re: args.re, im: args.im },
                Plane::Standard => RegionGrid::Standard {
                    c: args.c,
                    delta: args.delta,
                    theta: args.theta,
                },
            };
            emit(common, &region_scan(&grid).to_csv())
        }
        Command::Compare(args) => {
            let result = match &args.input {
                Some(path) => {
                    let text =
                        fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
                    ScanResult::from_csv(&text).map_err(|e| usage(e.to_string()))?
                }
                None => run_scan(&load_config(common)?)?,
            };
            let c = compare(&result, &args.base, &args.target).map_err(|e| usage(e.to_string()))?;
            let axis = result.columns.first().map_or("x", String::as_str);
            let mut table = c.to_result(&result.preset, axis);
            table.config_hash = result.config_hash.clone();
            emit(common, &table.to_csv())?;
            let at = c
                .relative_at_antinode()
                .map_or_else(|| "n/a".to_string(), |e| format!("{e:e}"));
            note(
                common,
                &format!(
                    "{} vs {}: max abs {:e}, max rel {:e}, rel at antinode {at}",
                    c.target, c.baseline, c.max_absolute, c.max_relative
                ),
            );
            Ok(())
        }
        Command::Presets => match &common.preset {
            Some(name) => emit(common, &preset(name).map_err(|e| usage(e.to_string()))?.canonical()),
            None => {
                let text: String = PRESETS.iter().map(|(n, d)| format!("{n:<6} {d}\n")).collect();
                emit(common, &text)
            }
        },
    }
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
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
