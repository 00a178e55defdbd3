//! Galerkin dynamics of the PT-symmetric box with a moving wall.
//!
//! With y = x/L(t) and Ψ(y,t) = e^{-iαL y} ψ(y,t) the Robin walls become Neumann
//! walls. Expanding ψ = Σ C_n φ_n(y) over the cosine basis gives
//!
//! ```text
//! i L² dC_n/dt = (π²n² + α²L²)/2 · C_n + Σ_m V_nm C_m
//! ```
//!
//! Slot 0 holds the constant mode, slots 1..N-1 hold cos(πny).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::config::{InitialState, SimulationConfig};
use crate::coupling::CouplingMatrices;
use crate::error::{Error, Result};
use crate::integrator::{propagate, sample_times, Diagnostics, ModeSystem};
use crate::quadrature::DoublingRule;
use crate::spectrum::{eigenfunction_unchecked, neumann_mode, StaticEigenstate};
use crate::trajectory::WallTrajectory;

/// Projection residual above which a truncated initial state is worth a warning.
pub const PROJECTION_WARN_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeCoefficients {
    pub t: f64,
    pub c: Vec<Complex64>,
}

impl ModeCoefficients {
    pub fn unit(n_modes: usize, k: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); n_modes];
        c[k] = Complex64::new(1.0, 0.0);
        Self { t: 0.0, c }
    }

    pub fn populations(&self) -> impl Iterator<Item = f64> + '_ {
        self.c.iter().map(|z| z.norm_sqr())
    }

    /// ψ(y) = Σ C_n φ_n(y) in the transformed frame.
    pub fn frame_amplitude(&self, y: f64) -> Complex64 {
        self.c
            .iter()
            .enumerate()
            .map(|(n, &cn)| cn * neumann_mode(n, y))
            .sum()
    }
}

/// Initial coefficients together with the part of the state the basis cannot hold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectedState {
    pub coefficients: ModeCoefficients,
    /// 1 − Σ|C_m|² / ∫|ψ(y,0)|² dy; zero for a basis vector.
    pub truncation_residual: f64,
}

impl ProjectedState {
    pub fn needs_warning(&self) -> bool {
        self.truncation_residual > PROJECTION_WARN_THRESHOLD
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EvolutionRecord {
    pub samples: Vec<ModeCoefficients>,
    pub config: SimulationConfig,
    pub diagnostics: Diagnostics,
    pub truncation_residual: f64,
}

/// The mode system for one run.
pub struct PtBoxSystem {
    trajectory: WallTrajectory,
    alpha: f64,
    coupling: CouplingMatrices,
    /// π²n² per slot
    kinetic: Vec<f64>,
}

impl PtBoxSystem {
    pub fn new(trajectory: WallTrajectory, alpha: f64, n_modes: usize) -> Self {
        Self {
            trajectory,
            alpha,
            coupling: CouplingMatrices::new(n_modes),
            kinetic: (0..n_modes).map(|n| (PI * n as f64).powi(2)).collect(),
        }
    }

    pub fn from_config(config: &SimulationConfig) -> Self {
        Self::new(config.trajectory, config.alpha, config.n_modes)
    }
}

impl ModeSystem for PtBoxSystem {
    fn dimension(&self) -> usize {
        self.kinetic.len()
    }

    fn derivative(&self, t: f64, c: &[Complex64], dc: &mut [Complex64]) {
        let length = self.trajectory.length_at(t);
        let velocity = self.trajectory.wall_velocity(t);
        let inv_l2 = 1.0 / (length * length);
        let confinement = self.alpha * self.alpha * length * length;
        for ((d, &z), &k) in dc.iter_mut().zip(c).zip(&self.kinetic) {
            let diag = 0.5 * (k + confinement) * inv_l2;
            *d = Complex64::new(z.im * diag, -z.re * diag);
        }
        self.coupling.apply_scaled(length, velocity, c, dc);
    }
}

/// dC/dt at time t.
pub fn rhs(t: f64, state: &[Complex64], config: &SimulationConfig) -> Vec<Complex64> {
    let sys = PtBoxSystem::new(config.trajectory, config.alpha, state.len());
    let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
    sys.derivative(t, state, &mut out);
    out
}

/// Initial coefficients for the requested state at wall length `l0`.
pub fn project_initial_state(
    initial: InitialState,
    l0: f64,
    alpha: f64,
    n_modes: usize,
) -> Result<ProjectedState> {
    match initial {
        InitialState::NeumannMode(k) => {
            if k >= n_modes {
                return Err(Error::invalid(
                    "index",
                    format!("mode {k} is outside the basis of {n_modes} modes"),
                ));
            }
            Ok(ProjectedState {
                coefficients: ModeCoefficients::unit(n_modes, k),
                truncation_residual: 0.0,
            })
        }
        InitialState::StaticPtEigenstate(n) => {
            let state = StaticEigenstate::new(n, l0, alpha)?;
            // ψ(y,0) = e^{+iαL0 y} Ψ_n(L0 y)
            let psi = |y: f64| {
                Complex64::from_polar(1.0, alpha * l0 * y)
                    * eigenfunction_unchecked(state.n, l0, alpha, l0 * y)
            };
            let base_points =
                (4.0 * (n_modes as f64 + n as f64 + alpha * l0 / PI) + 32.0).max(256.0) as usize;
            let rule = DoublingRule::new(base_points);
            let mut c = Vec::with_capacity(n_modes);
            for m in 0..n_modes {
                c.push(
                    rule.integrate("initial-state projection", -1.0, 1.0, 1e-12, |y| {
                        psi(y) * neumann_mode(m, y)
                    })?,
                );
            }
            let total = rule
                .integrate("initial-state norm", -1.0, 1.0, 1e-12, |y| {
                    Complex64::new(psi(y).norm_sqr(), 0.0)
                })?
                .re;
            let kept: f64 = c.iter().map(|z| z.norm_sqr()).sum();
            Ok(ProjectedState {
                coefficients: ModeCoefficients { t: 0.0, c },
                truncation_residual: 1.0 - kept / total,
            })
        }
    }
}

/// Ψ(x,t) = e^{-iαL y} Σ C_n φ_n(y), y = x / L(t).
pub fn reconstruct_wavefunction(
    state: &ModeCoefficients,
    trajectory: &WallTrajectory,
    alpha: f64,
    x: f64,
) -> Result<Complex64> {
    let length = trajectory.wall_position(state.t)?;
    if x.abs() > length * (1.0 + 1e-14) {
        return Err(Error::OutsideBox {
            x,
            half_width: length,
        });
    }
    let y = (x / length).clamp(-1.0, 1.0);
    Ok(Complex64::from_polar(1.0, -alpha * length * y) * state.frame_amplitude(y))
}

/// Evolves the configured initial state and records it at every sample time.
pub fn integrate(config: &SimulationConfig) -> Result<EvolutionRecord> {
    config.validate()?;
    let l0 = config.trajectory.wall_position(0.0)?;
    let projected = project_initial_state(config.initial, l0, config.alpha, config.n_modes)?;
    let system = PtBoxSystem::from_config(config);
    let times = sample_times(config.t_final, config.sample_interval);
    let (states, diagnostics) = propagate(&system, &projected.coefficients.c, &times, config.step)?;
    let samples = times
        .into_iter()
        .zip(states)
        .map(|(t, c)| ModeCoefficients { t, c })
        .collect();
    Ok(EvolutionRecord {
        samples,
        config: config.clone(),
        diagnostics,
        truncation_residual: projected.truncation_residual,
    })
}
