//! Run configuration and its file format.
//!
//! Config files are TOML with the sections
//!
//! ```toml
//! [trajectory]  # kind, a, b, omega
//! [physics]     # alpha
//! [numerics]    # n_modes, t_final, dt | rtol, sample_interval
//! [initial]     # kind, index
//! [output]      # path, format
//! ```
//!
//! Every key is optional; missing values fall back to a = 10, b = 1, ω = 1,
//! α = 1, N = 64. Run manifests store the resolved document as JSON in the same
//! shape, so either file can seed a run.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::trajectory::{check_pt_symmetry, WallTrajectory};

pub const DEFAULT_A: f64 = 10.0;
pub const DEFAULT_B: f64 = 1.0;
pub const DEFAULT_OMEGA: f64 = 1.0;
pub const DEFAULT_ALPHA: f64 = 1.0;
pub const DEFAULT_MODES: usize = 64;
pub const DEFAULT_T_FINAL: f64 = 40.0;
pub const DEFAULT_SAMPLE_INTERVAL: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepControl {
    Fixed { dt: f64 },
    Adaptive { rtol: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// Unit coefficient on one cosine mode (slot 0 is the constant mode).
    NeumannMode(usize),
    /// Static Robin eigenstate Ψ_n at L(0), projected onto the basis.
    StaticPtEigenstate(u32),
}

impl InitialState {
    pub fn kind_name(&self) -> &'static str {
        match self {
            InitialState::NeumannMode(_) => "neumann_mode",
            InitialState::StaticPtEigenstate(_) => "static_pt_eigenstate",
        }
    }

    pub fn index(&self) -> usize {
        match *self {
            InitialState::NeumannMode(k) => k,
            InitialState::StaticPtEigenstate(n) => n as usize,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub trajectory: WallTrajectory,
    pub alpha: f64,
    pub n_modes: usize,
    pub t_final: f64,
    pub step: StepControl,
    pub initial: InitialState,
    pub sample_interval: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            path: None,
            format: OutputFormat::Csv,
        }
    }
}

/// Everything a config file describes.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub simulation: SimulationConfig,
    pub output: OutputSpec,
}

/// Fixed step used when the file gives neither `dt` nor `rtol`:
/// min(1e-3, T/1000) with T the oscillation period for harmonic walls and the
/// run length otherwise.
pub fn default_dt(trajectory: &WallTrajectory, t_final: f64) -> f64 {
    let characteristic = match *trajectory {
        WallTrajectory::Harmonic { omega, .. } if omega != 0.0 => TAU / omega.abs(),
        _ => t_final,
    };
    1e-3f64.min(characteristic / 1000.0)
}

impl SimulationConfig {
    /// Harmonic wall a = 10, b = 1, ω = 1 with α = 1, starting in cosine mode 1.
    pub fn harmonic_default() -> Self {
        let trajectory = WallTrajectory::Harmonic {
            a: DEFAULT_A,
            b: DEFAULT_B,
            omega: DEFAULT_OMEGA,
        };
        Self {
            trajectory,
            alpha: DEFAULT_ALPHA,
            n_modes: DEFAULT_MODES,
            t_final: DEFAULT_T_FINAL,
            step: StepControl::Fixed {
                dt: default_dt(&trajectory, DEFAULT_T_FINAL),
            },
            initial: InitialState::NeumannMode(1),
            sample_interval: DEFAULT_SAMPLE_INTERVAL,
        }
    }

    /// Step used for the positivity scan.
    pub fn scan_step(&self) -> f64 {
        match self.step {
            StepControl::Fixed { dt } => dt,
            StepControl::Adaptive { .. } => default_dt(&self.trajectory, self.t_final),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.trajectory
            .validated()
            .map_err(|e| Error::config(format!("trajectory.{}", param_name(&e)), e.to_string()))?;
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::config(
                "physics.alpha",
                format!("Robin parameter requires alpha > 0, got {}", self.alpha),
            ));
        }
        self.validate_common()
    }

    /// Checks shared by the PT and Hermitian runs (everything except α).
    pub fn validate_common(&self) -> Result<()> {
        if self.n_modes < 1 {
            return Err(Error::config("numerics.n_modes", "must be at least 1"));
        }
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(Error::config(
                "numerics.t_final",
                format!("must be positive, got {}", self.t_final),
            ));
        }
        if !(self.sample_interval > 0.0 && self.sample_interval <= self.t_final) {
            return Err(Error::config(
                "numerics.sample_interval",
                format!(
                    "must lie in (0, t_final = {}], got {}",
                    self.t_final, self.sample_interval
                ),
            ));
        }
        match self.step {
            StepControl::Fixed { dt } if !(dt.is_finite() && dt > 0.0) => {
                return Err(Error::config(
                    "numerics.dt",
                    format!("must be positive, got {dt}"),
                ));
            }
            StepControl::Adaptive { rtol } if !(rtol.is_finite() && rtol > 0.0) => {
                return Err(Error::config(
                    "numerics.rtol",
                    format!("must be positive, got {rtol}"),
                ));
            }
            _ => {}
        }
        match self.initial {
            InitialState::NeumannMode(k) if k >= self.n_modes => {
                return Err(Error::config(
                    "initial.index",
                    format!("mode {k} is outside the basis of {} modes", self.n_modes),
                ));
            }
            InitialState::StaticPtEigenstate(0) => {
                return Err(Error::config(
                    "initial.index",
                    "eigenstate index must be at least 1",
                ));
            }
            _ => {}
        }
        let probe: Vec<f64> = (1..=16).map(|k| k as f64 * self.t_final / 16.0).collect();
        if !check_pt_symmetry(&self.trajectory, &probe) {
            return Err(Error::config(
                "trajectory.kind",
                "wall law is not even in t",
            ));
        }
        self.trajectory
            .ensure_positive(self.t_final, self.scan_step())
            .map_err(|e| match e {
                Error::WallCollapsed { t, length } => Error::config(
                    "trajectory.b",
                    format!(
                        "wall collapses before t_final = {}: L({t:.6}) = {length:.6}{}",
                        self.t_final,
                        self.trajectory
                            .collapse_time()
                            .map(|tc| format!(" (collapse time {tc:.6})"))
                            .unwrap_or_default()
                    ),
                ),
                other => other,
            })
    }

    /// Resolved configuration as a sectioned document (the config-file shape).
    pub fn to_document(&self, output: &OutputSpec) -> Value {
        let trajectory = match self.trajectory {
            WallTrajectory::Static { a } => serde_json::json!({ "kind": "static", "a": a }),
            WallTrajectory::Harmonic { a, b, omega } => {
                serde_json::json!({ "kind": "harmonic", "a": a, "b": b, "omega": omega })
            }
            WallTrajectory::Expanding { a, b } => {
                serde_json::json!({ "kind": "expanding", "a": a, "b": b })
            }
            WallTrajectory::Contracting { a, b } => {
                serde_json::json!({ "kind": "contracting", "a": a, "b": b })
            }
        };
        let mut numerics = Map::new();
        numerics.insert("n_modes".into(), self.n_modes.into());
        numerics.insert("t_final".into(), self.t_final.into());
        match self.step {
            StepControl::Fixed { dt } => numerics.insert("dt".into(), dt.into()),
            StepControl::Adaptive { rtol } => numerics.insert("rtol".into(), rtol.into()),
        };
        numerics.insert("sample_interval".into(), self.sample_interval.into());
        let mut out = Map::new();
        if let Some(path) = &output.path {
            out.insert("path".into(), path.display().to_string().into());
        }
        out.insert(
            "format".into(),
            match output.format {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            }
            .into(),
        );
        serde_json::json!({
            "trajectory": trajectory,
            "physics": { "alpha": self.alpha },
            "numerics": Value::Object(numerics),
            "initial": { "kind": self.initial.kind_name(), "index": self.initial.index() },
            "output": Value::Object(out),
        })
    }
}

fn param_name(e: &Error) -> &'static str {
    match e {
        Error::InvalidParameter { name, .. } => name,
        _ => "kind",
    }
}

/// Reads a config file. `.json` files are treated as run manifests and the
/// resolved document inside their `config` member is used; anything else is
/// parsed as TOML.
pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    let is_json = path
        .extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("json"));
    let document = if is_json {
        let manifest: Value =
            serde_json::from_str(&text).map_err(|e| Error::config("<manifest>", e.to_string()))?;
        let config = manifest
            .get("config")
            .ok_or_else(|| Error::config("config", "manifest has no `config` member"))?;
        config.get("document").unwrap_or(config).clone()
    } else {
        let table: toml::Table =
            toml::from_str(&text).map_err(|e| Error::config("<file>", e.to_string()))?;
        serde_json::to_value(table).map_err(|e| Error::config("<file>", e.to_string()))?
    };
    config_from_document(&document)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let table: toml::Table =
        toml::from_str(text).map_err(|e| Error::config("<file>", e.to_string()))?;
    let document =
        serde_json::to_value(table).map_err(|e| Error::config("<file>", e.to_string()))?;
    config_from_document(&document)
}

struct Section<'a> {
    name: &'static str,
    map: Option<&'a Map<String, Value>>,
}

impl<'a> Section<'a> {
    fn get(root: &'a Map<String, Value>, name: &'static str, keys: &[&str]) -> Result<Self> {
        let map = match root.get(name) {
            None => None,
            Some(Value::Object(map)) => Some(map),
            Some(_) => return Err(Error::config(name, "expected a section")),
        };
        if let Some(map) = map {
            if let Some(unknown) = map.keys().find(|k| !keys.contains(&k.as_str())) {
                return Err(Error::config(format!("{name}.{unknown}"), "unknown key"));
            }
        }
        Ok(Self { name, map })
    }

    fn key(&self, key: &str) -> String {
        format!("{}.{}", self.name, key)
    }

    fn raw(&self, key: &str) -> Option<&'a Value> {
        self.map.and_then(|m| m.get(key))
    }

    fn float(&self, key: &str) -> Result<Option<f64>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| Error::config(self.key(key), format!("expected a number, got {v}"))),
        }
    }

    fn uint(&self, key: &str) -> Result<Option<usize>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.as_u64().map(|u| Some(u as usize)).ok_or_else(|| {
                Error::config(
                    self.key(key),
                    format!("expected a non-negative integer, got {v}"),
                )
            }),
        }
    }

    fn string(&self, key: &str) -> Result<Option<&'a str>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .as_str()
                .map(Some)
                .ok_or_else(|| Error::config(self.key(key), format!("expected a string, got {v}"))),
        }
    }
}

/// Builds and validates a config from a sectioned document.
pub fn config_from_document(document: &Value) -> Result<RunConfig> {
    let root = document
        .as_object()
        .ok_or_else(|| Error::config("<root>", "expected a table of sections"))?;
    const SECTIONS: [&str; 5] = ["trajectory", "physics", "numerics", "initial", "output"];
    if let Some(unknown) = root.keys().find(|k| !SECTIONS.contains(&k.as_str())) {
        return Err(Error::config(unknown.clone(), "unknown section"));
    }

    let traj = Section::get(root, "trajectory", &["kind", "a", "b", "omega"])?;
    let a = traj.float("a")?.unwrap_or(DEFAULT_A);
    let b = traj.float("b")?.unwrap_or(DEFAULT_B);
    let omega = traj.float("omega")?;
    let kind = traj.string("kind")?.unwrap_or("harmonic");
    if omega.is_some() && kind != "harmonic" {
        return Err(Error::config(
            "trajectory.omega",
            format!("only meaningful for harmonic walls, not `{kind}`"),
        ));
    }
    let trajectory = match kind {
        "static" => WallTrajectory::Static { a },
        "harmonic" => WallTrajectory::Harmonic {
            a,
            b,
            omega: omega.unwrap_or(DEFAULT_OMEGA),
        },
        "expanding" => WallTrajectory::Expanding { a, b },
        "contracting" => WallTrajectory::Contracting { a, b },
        other => {
            return Err(Error::config(
                "trajectory.kind",
                format!("expected static|harmonic|expanding|contracting, got `{other}`"),
            ))
        }
    };

    let physics = Section::get(root, "physics", &["alpha"])?;
    let alpha = physics.float("alpha")?.unwrap_or(DEFAULT_ALPHA);

    let numerics = Section::get(
        root,
        "numerics",
        &["n_modes", "t_final", "dt", "rtol", "sample_interval"],
    )?;
    let n_modes = numerics.uint("n_modes")?.unwrap_or(DEFAULT_MODES);
    let t_final = numerics.float("t_final")?.unwrap_or(DEFAULT_T_FINAL);
    let step = match (numerics.float("dt")?, numerics.float("rtol")?) {
        (Some(_), Some(_)) => {
            return Err(Error::config(
                "numerics.rtol",
                "give either dt or rtol, not both",
            ))
        }
        (Some(dt), None) => StepControl::Fixed { dt },
        (None, Some(rtol)) => StepControl::Adaptive { rtol },
        (None, None) => StepControl::Fixed {
            dt: default_dt(&trajectory, t_final),
        },
    };
    let sample_interval = numerics
        .float("sample_interval")?
        .unwrap_or(DEFAULT_SAMPLE_INTERVAL.min(t_final));

    let init = Section::get(root, "initial", &["kind", "index"])?;
    let index = init.uint("index")?.unwrap_or(1);
    let initial = match init.string("kind")?.unwrap_or("neumann_mode") {
        "neumann_mode" => InitialState::NeumannMode(index),
        "static_pt_eigenstate" => InitialState::StaticPtEigenstate(
            u32::try_from(index).map_err(|_| Error::config("initial.index", "too large"))?,
        ),
        other => {
            return Err(Error::config(
                "initial.kind",
                format!("expected neumann_mode|static_pt_eigenstate, got `{other}`"),
            ))
        }
    };

    let out = Section::get(root, "output", &["path", "format"])?;
    let format = match out.string("format")?.unwrap_or("csv") {
        "csv" => OutputFormat::Csv,
        "json" => OutputFormat::Json,
        other => {
            return Err(Error::config(
                "output.format",
                format!("expected csv|json, got `{other}`"),
            ))
        }
    };
    let output = OutputSpec {
        path: out.string("path")?.map(PathBuf::from),
        format,
    };

    let simulation = SimulationConfig {
        trajectory,
        alpha,
        n_modes,
        t_final,
        step,
        initial,
        sample_interval,
    };
    simulation.validate()?;
    Ok(RunConfig { simulation, output })
}
