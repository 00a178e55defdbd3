//! CSV tables and run manifests.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::berry::BerryPhaseResult;
use crate::error::{Error, Result};
use crate::observables::ObservableSeries;
use crate::spectrum::StaticEigenstate;

/// Every float in a CSV is printed with 17 significant digits.
fn num(out: &mut String, v: f64) {
    write!(out, "{v:.16e}").expect("writing to a String cannot fail");
}

fn row<I: IntoIterator<Item = f64>>(out: &mut String, values: I) {
    let mut first = true;
    for v in values {
        if !first {
            out.push(',');
        }
        first = false;
        num(out, v);
    }
    out.push('\n');
}

pub fn observables_csv(series: &ObservableSeries) -> String {
    let width = series.rows.first().map_or(0, |r| r.populations.len());
    let mut out = String::from("t,L,Ldot,N,E_raw,E_over_N,F,x_avg");
    for k in 0..width {
        write!(out, ",pop_{}", series.first_mode + k).unwrap();
    }
    out.push('\n');
    for r in &series.rows {
        row(
            &mut out,
            [
                r.t,
                r.length,
                r.velocity,
                r.norm,
                r.energy,
                r.energy_over_norm,
                r.force,
                r.position,
            ]
            .into_iter()
            .chain(r.populations.iter().copied()),
        );
    }
    out
}

pub fn spectrum_csv(states: &[StaticEigenstate]) -> String {
    let mut out = String::from("n,E_n,A_n\n");
    for s in states {
        write!(out, "{},", s.n).unwrap();
        row(&mut out, [s.energy, s.normalization]);
    }
    out
}

pub fn berry_csv(results: &[BerryPhaseResult]) -> String {
    let mut out = String::from(
        "n,re_gamma_analytic,im_gamma_analytic,re_gamma_numeric,im_gamma_numeric,discrepancy\n",
    );
    for r in results {
        write!(out, "{},", r.n).unwrap();
        row(
            &mut out,
            [
                r.gamma_analytic.re,
                r.gamma_analytic.im,
                r.gamma_numeric.re,
                r.gamma_numeric.im,
                r.discrepancy,
            ],
        );
    }
    out
}

/// Metadata written next to every output file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: Value,
    pub outputs: Vec<PathBuf>,
    pub timestamp: u64,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Value>,
}

impl RunManifest {
    pub fn new(subcommand: &str, config: Value, outputs: Vec<PathBuf>) -> Self {
        Self {
            subcommand: subcommand.to_owned(),
            config,
            outputs,
            timestamp: unix_timestamp(),
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            diagnostics: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest is always serialisable");
        s.push('\n');
        s
    }
}

pub fn unix_timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

/// `foo/run.csv` -> `foo/run.manifest.json`
pub fn manifest_path(output: &Path) -> PathBuf {
    output.with_extension("manifest.json")
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|source| Error::Io {
            path: parent.to_owned(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}
