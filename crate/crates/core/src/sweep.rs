//! Independent runs over one swept parameter, executed in parallel.

use std::str::FromStr;

use rayon::prelude::*;

use crate::config::SimulationConfig;
use crate::error::{Error, Result};
use crate::evolution::integrate;
use crate::observables::ObservableSeries;
use crate::trajectory::WallTrajectory;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    B,
    Omega,
    Alpha,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::B => "b",
            SweepAxis::Omega => "omega",
            SweepAxis::Alpha => "alpha",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "b" => Ok(SweepAxis::B),
            "omega" => Ok(SweepAxis::Omega),
            "alpha" => Ok(SweepAxis::Alpha),
            other => Err(Error::invalid(
                "axis",
                format!("expected b|omega|alpha, got `{other}`"),
            )),
        }
    }
}

/// `base` with the swept parameter replaced, validated.
pub fn with_value(
    base: &SimulationConfig,
    axis: SweepAxis,
    value: f64,
) -> Result<SimulationConfig> {
    if !value.is_finite() {
        return Err(Error::invalid(
            "value",
            format!("must be finite, got {value}"),
        ));
    }
    let mut cfg = base.clone();
    match (axis, &mut cfg.trajectory) {
        (SweepAxis::Alpha, _) => cfg.alpha = value,
        (SweepAxis::B, WallTrajectory::Harmonic { b, .. })
        | (SweepAxis::B, WallTrajectory::Expanding { b, .. })
        | (SweepAxis::B, WallTrajectory::Contracting { b, .. }) => *b = value,
        (SweepAxis::Omega, WallTrajectory::Harmonic { omega, .. }) => *omega = value,
        (axis, traj) => {
            return Err(Error::invalid(
                "axis",
                format!(
                    "cannot sweep `{}` on a {} wall",
                    axis.name(),
                    traj.kind_name()
                ),
            ))
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

pub struct SweepOutcome {
    pub value: f64,
    pub config: Option<SimulationConfig>,
    pub result: Result<ObservableSeries>,
}

/// One simulation per value. Failures stay with their own entry; the output
/// order follows `values` whatever order the runs finish in.
pub fn run_sweep(base: &SimulationConfig, axis: SweepAxis, values: &[f64]) -> Vec<SweepOutcome> {
    values
        .par_iter()
        .map(|&value| match with_value(base, axis, value) {
            Ok(cfg) => {
                let result = integrate(&cfg).and_then(|rec| ObservableSeries::from_record(&rec));
                SweepOutcome {
                    value,
                    config: Some(cfg),
                    result,
                }
            }
            Err(e) => SweepOutcome {
                value,
                config: None,
                result: Err(e),
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{InitialState, StepControl};

    fn base() -> SimulationConfig {
        SimulationConfig {
            trajectory: WallTrajectory::Harmonic {
                a: 10.0,
                b: 1.0,
                omega: 1.0,
            },
            alpha: 1.0,
            n_modes: 8,
            t_final: 1.0,
            step: StepControl::Fixed { dt: 1e-2 },
            initial: InitialState::NeumannMode(1),
            sample_interval: 0.25,
        }
    }

    #[test]
    fn axis_parsing() {
        assert_eq!("omega".parse::<SweepAxis>().unwrap(), SweepAxis::Omega);
        assert!("gamma".parse::<SweepAxis>().is_err());
    }

    #[test]
    fn failures_are_isolated() {
        let out = run_sweep(&base(), SweepAxis::B, &[0.5, 20.0, 1.0]);
        assert_eq!(out.len(), 3);
        assert!(out[0].result.is_ok());
        assert!(out[1].result.is_err());
        assert!(out[2].result.is_ok());
        assert_eq!(out[2].value, 1.0);
    }

    #[test]
    fn single_value_matches_direct_run() {
        let out = run_sweep(&base(), SweepAxis::Alpha, &[1.0]);
        let direct = ObservableSeries::from_record(&integrate(&base()).unwrap()).unwrap();
        assert_eq!(out[0].result.as_ref().unwrap(), &direct);
    }

    #[test]
    fn omega_needs_harmonic_wall() {
        let mut cfg = base();
        cfg.trajectory = WallTrajectory::Expanding { a: 10.0, b: 0.1 };
        assert!(with_value(&cfg, SweepAxis::Omega, 2.0).is_err());
    }
}
