use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ptbox::berry::{berry_phase, DEFAULT_STEPS};
use ptbox::config::{parse_config, OutputFormat, RunConfig};
use ptbox::coupling::oracle_discrepancy;
use ptbox::error::{Error, Result};
use ptbox::evolution::integrate;
use ptbox::hermitian::{integrate_hermitian, HermitianConfig};
use ptbox::observables::ObservableSeries;
use ptbox::output::{
    berry_csv, manifest_path, observables_csv, spectrum_csv, unix_timestamp, write_file,
    RunManifest,
};
use ptbox::spectrum::StaticEigenstate;
use ptbox::sweep::{run_sweep, SweepAxis};

#[derive(Parser)]
#[command(
    name = "ptbox",
    version,
    about = "PT-symmetric moving-wall box simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Static eigenvalues and normalisation constants.
    Spectrum {
        #[arg(long)]
        n_max: u32,
        #[arg(long)]
        length: f64,
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Evolve one configuration and write its observables.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Run the Dirichlet (Hermitian) baseline instead of the PT box.
        #[arg(long)]
        hermitian: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Geometric phase, closed form against quadrature.
    Berry {
        /// Quantum numbers, `K` or `1..K`.
        #[arg(long, value_parser = parse_range)]
        n: (u32, u32),
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// One run per value of a swept parameter.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        axis: SweepAxis,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        /// Directory for the per-value CSVs and the index manifest.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Largest closed-form vs quadrature discrepancy of the overlap integrals.
    #[command(hide = true)]
    OracleCheck {
        #[arg(long, default_value_t = 32)]
        n_max: usize,
    },
}

#[derive(Args)]
struct OutArg {
    /// Output file; `-` writes to stdout without a manifest.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_range(s: &str) -> std::result::Result<(u32, u32), String> {
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (parse(lo)?, parse(hi.trim_start_matches('='))?),
        None => {
            let k = parse(s)?;
            (k, k)
        }
    };
    if lo == 0 || hi < lo {
        return Err(format!("`{s}` is not a range of quantum numbers >= 1"));
    }
    Ok((lo, hi))
}

fn default_out(subcommand: &str) -> PathBuf {
    PathBuf::from("out").join(format!("{subcommand}-{}.csv", unix_timestamp()))
}

/// Writes `contents` plus a manifest, or to stdout for `-`.
fn emit(
    subcommand: &str,
    out: Option<PathBuf>,
    contents: &str,
    config: serde_json::Value,
    diagnostics: Option<serde_json::Value>,
) -> Result<()> {
    let path = out.unwrap_or_else(|| default_out(subcommand));
    if path == Path::new("-") {
        print!("{contents}");
        return Ok(());
    }
    write_file(&path, contents)?;
    let mut manifest = RunManifest::new(subcommand, config, vec![path.clone()]);
    manifest.diagnostics = diagnostics;
    write_file(&manifest_path(&path), &manifest.to_json())?;
    println!("{}", path.display());
    Ok(())
}

fn render(series: &ObservableSeries, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => observables_csv(series),
        OutputFormat::Json => {
            let mut s = serde_json::to_string(series).expect("series serialises");
            s.push('\n');
            s
        }
    }
}

/// True when `path` is a manifest recorded from a Hermitian run.
fn manifest_says_hermitian(path: &Path) -> bool {
    let is_json = path
        .extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("json"));
    is_json
        && std::fs::read_to_string(path)
            .ok()
            .and_then(|text| serde_json::from_str::<serde_json::Value>(&text).ok())
            .and_then(|m| m.pointer("/config/hermitian").and_then(|v| v.as_bool()))
            .unwrap_or(false)
}

fn simulate(config: &Path, hermitian: bool, out: Option<PathBuf>) -> Result<()> {
    let RunConfig { simulation, output } = parse_config(config)?;
    let hermitian = hermitian || manifest_says_hermitian(config);
    let document = simulation.to_document(&output);
    let out = out.or(output.path.clone());
    let (series, diagnostics, residual) = if hermitian {
        let cfg = HermitianConfig::from_simulation(&simulation)?;
        let rec = integrate_hermitian(&cfg)?;
        (
            ObservableSeries::from_hermitian(&rec)?,
            rec.diagnostics,
            0.0,
        )
    } else {
        let rec = integrate(&simulation)?;
        (
            ObservableSeries::from_record(&rec)?,
            rec.diagnostics,
            rec.truncation_residual,
        )
    };
    if residual > ptbox::evolution::PROJECTION_WARN_THRESHOLD {
        eprintln!("warning: initial state truncation residual {residual:.3e}");
    }
    let mut config = json!({ "hermitian": hermitian });
    config["document"] = document;
    emit(
        "simulate",
        out,
        &render(&series, output.format),
        config,
        Some(json!({
            "steps_taken": diagnostics.steps_taken,
            "rejected_steps": diagnostics.rejected_steps,
            "max_error_estimate": diagnostics.max_error_estimate,
            "truncation_residual": residual,
        })),
    )
}

fn sweep(config: &Path, axis: SweepAxis, values: &[f64], out_dir: Option<PathBuf>) -> Result<bool> {
    let RunConfig { simulation, output } = parse_config(config)?;
    let dir =
        out_dir.unwrap_or_else(|| PathBuf::from("out").join(format!("sweep-{}", unix_timestamp())));
    let outcomes = run_sweep(&simulation, axis, values);
    let mut entries = Vec::new();
    let mut all_ok = true;
    for (idx, outcome) in outcomes.iter().enumerate() {
        let file = dir.join(format!("{}-{idx:03}.csv", axis.name()));
        match &outcome.result {
            Ok(series) => {
                write_file(&file, &observables_csv(series))?;
                let cfg = outcome
                    .config
                    .as_ref()
                    .expect("successful runs carry their config");
                write_file(
                    &manifest_path(&file),
                    &RunManifest::new(
                        "simulate",
                        json!({ "hermitian": false, "document": cfg.to_document(&output) }),
                        vec![file.clone()],
                    )
                    .to_json(),
                )?;
                entries.push(json!({ "value": outcome.value, "file": file, "status": "ok" }));
            }
            Err(e) => {
                all_ok = false;
                eprintln!("{}", error_line(e));
                entries.push(json!({
                    "value": outcome.value,
                    "status": "error",
                    "error": { "kind": e.kind(), "message": e.to_string() },
                }));
            }
        }
    }
    let index = RunManifest::new(
        "sweep",
        json!({
            "axis": axis.name(),
            "values": values,
            "base": simulation.to_document(&output),
            "runs": entries,
        }),
        outcomes
            .iter()
            .enumerate()
            .filter(|(_, o)| o.result.is_ok())
            .map(|(idx, _)| dir.join(format!("{}-{idx:03}.csv", axis.name())))
            .collect(),
    );
    write_file(&dir.join("index.json"), &index.to_json())?;
    println!("{}", dir.display());
    Ok(all_ok)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Spectrum {
            n_max,
            length,
            alpha,
            out,
        } => {
            let states = (1..=n_max)
                .map(|n| StaticEigenstate::new(n, length, alpha))
                .collect::<Result<Vec<_>>>()?;
            emit(
                "spectrum",
                out.out,
                &spectrum_csv(&states),
                json!({ "n_max": n_max, "length": length, "alpha": alpha }),
                None,
            )?;
        }
        Command::Simulate {
            config,
            hermitian,
            out,
        } => simulate(&config, hermitian, out.out)?,
        Command::Berry {
            n: (lo, hi),
            a,
            b,
            alpha,
            omega,
            steps,
            out,
        } => {
            let results = (lo..=hi)
                .map(|n| berry_phase(n, a, b, alpha, omega, steps))
                .collect::<Result<Vec<_>>>()?;
            emit(
                "berry",
                out.out,
                &berry_csv(&results),
                json!({ "n": [lo, hi], "a": a, "b": b, "alpha": alpha, "omega": omega, "steps": steps }),
                None,
            )?;
        }
        Command::Sweep {
            config,
            axis,
            values,
            out_dir,
        } => return sweep(&config, axis, &values, out_dir),
        Command::OracleCheck { n_max } => {
            let (i2, i1) = oracle_discrepancy(n_max)?;
            println!("n_max={n_max} max_i2_discrepancy={i2:e} max_i1_magnitude={i1:e}");
        }
    }
    Ok(true)
}

fn error_line(e: &Error) -> String {
    json!({ "error": { "kind": e.kind(), "message": e.to_string() } }).to_string()
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", error_line(&e));
            ExitCode::from(2)
        }
    }
}
