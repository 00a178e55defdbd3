//! Hermitian baseline: Dirichlet box [0, L(t)] with a moving wall.
//!
//! With y = x/L the wave equation reads iΨ_t = -Ψ_yy/(2L²) + i(L'/L) y Ψ_y on
//! [0, 1]. The state is stored as Ψ(y,t) = L^{-1/2} Σ C_n χ_n(y) with
//! χ_n = √2 sin(πny), so that Σ|C_n|² is the physical norm ∫_0^L |Ψ|² dx.
//! Projecting gives
//!
//! ```text
//! dC_n/dt = -i π²n²/(2L²) C_n + (L'/L) Σ_m (D_nm + δ_nm/2) C_m
//! D_nm = ∫_0^1 χ_n(y) y χ_m'(y) dy
//! ```
//!
//! and D + I/2 is antisymmetric.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::config::{SimulationConfig, StepControl};
use crate::error::{Error, Result};
use crate::evolution::ModeCoefficients;
use crate::integrator::{propagate, sample_times, Diagnostics, ModeSystem};
use crate::quadrature::GaussLegendre;
use crate::trajectory::WallTrajectory;

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianConfig {
    pub trajectory: WallTrajectory,
    pub n_modes: usize,
    pub t_final: f64,
    pub step: StepControl,
    /// Dirichlet quantum number k ≥ 1 of the initial eigenmode.
    pub initial_mode: usize,
    pub sample_interval: f64,
}

impl HermitianConfig {
    /// Takes everything but α from a PT config; the initial index names the sine mode.
    pub fn from_simulation(config: &SimulationConfig) -> Result<Self> {
        let cfg = Self {
            trajectory: config.trajectory,
            n_modes: config.n_modes,
            t_final: config.t_final,
            step: config.step,
            initial_mode: config.initial.index(),
            sample_interval: config.sample_interval,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.initial_mode == 0 || self.initial_mode > self.n_modes {
            return Err(Error::config(
                "initial.index",
                format!(
                    "Dirichlet mode must lie in 1..={}, got {}",
                    self.n_modes, self.initial_mode
                ),
            ));
        }
        let as_sim = SimulationConfig {
            trajectory: self.trajectory,
            alpha: 1.0,
            n_modes: self.n_modes + 1,
            t_final: self.t_final,
            step: self.step,
            initial: crate::config::InitialState::NeumannMode(0),
            sample_interval: self.sample_interval,
        };
        self.trajectory
            .validated()
            .map_err(|e| Error::config("trajectory", e.to_string()))?;
        as_sim.validate_common()
    }
}

/// D_nm for 1 ≤ n, m ≤ `n_modes` by Gauss–Legendre quadrature, row-major and
/// zero-based (entry [i][j] is D_{i+1, j+1}).
pub fn dilation_matrix(n_modes: usize) -> Vec<f64> {
    let rule = GaussLegendre::new((8 * n_modes + 64).max(128));
    let mut d = vec![0.0; n_modes * n_modes];
    for i in 0..n_modes {
        let n = (i + 1) as f64;
        for j in 0..n_modes {
            let m = (j + 1) as f64;
            d[i * n_modes + j] = rule.integrate(0.0, 1.0, |y| {
                SQRT_2 * (PI * n * y).sin() * y * SQRT_2 * PI * m * (PI * m * y).cos()
            });
        }
    }
    d
}

pub struct DirichletBoxSystem {
    trajectory: WallTrajectory,
    /// D + I/2
    generator: Vec<f64>,
    kinetic: Vec<f64>,
}

impl DirichletBoxSystem {
    pub fn new(trajectory: WallTrajectory, n_modes: usize) -> Self {
        let mut generator = dilation_matrix(n_modes);
        for i in 0..n_modes {
            generator[i * n_modes + i] += 0.5;
        }
        Self {
            trajectory,
            generator,
            kinetic: (1..=n_modes).map(|n| (PI * n as f64).powi(2)).collect(),
        }
    }
}

impl ModeSystem for DirichletBoxSystem {
    fn dimension(&self) -> usize {
        self.kinetic.len()
    }

    fn derivative(&self, t: f64, c: &[Complex64], dc: &mut [Complex64]) {
        let length = self.trajectory.length_at(t);
        let velocity = self.trajectory.wall_velocity(t);
        let inv_2l2 = 0.5 / (length * length);
        for ((d, &z), &k) in dc.iter_mut().zip(c).zip(&self.kinetic) {
            let e = k * inv_2l2;
            *d = Complex64::new(z.im * e, -z.re * e);
        }
        if velocity == 0.0 {
            return;
        }
        let rate = velocity / length;
        let n = self.kinetic.len();
        for (row, d) in self.generator.chunks_exact(n).zip(dc.iter_mut()) {
            let acc: Complex64 = row.iter().zip(c).map(|(&g, &z)| z * g).sum();
            *d += acc * rate;
        }
    }
}

/// dC/dt for the Dirichlet system (slot i holds mode i + 1).
pub fn hermitian_rhs(t: f64, c: &[Complex64], config: &HermitianConfig) -> Vec<Complex64> {
    let sys = DirichletBoxSystem::new(config.trajectory, c.len());
    let mut out = vec![Complex64::new(0.0, 0.0); c.len()];
    sys.derivative(t, c, &mut out);
    out
}

/// ⟨E⟩ = Σ π²n²/(2L²) |C_n|².
pub fn hermitian_energy(c: &[Complex64], length: f64) -> f64 {
    c.iter()
        .enumerate()
        .map(|(i, z)| (PI * (i + 1) as f64).powi(2) * z.norm_sqr())
        .sum::<f64>()
        / (2.0 * length * length)
}

/// ⟨F⟩ = -∂⟨E⟩/∂L = Σ π²n²/L³ |C_n|².
pub fn hermitian_force(c: &[Complex64], length: f64) -> f64 {
    2.0 * hermitian_energy(c, length) / length
}

/// Σ|C_n|², the physical norm in this normalisation.
pub fn hermitian_norm(c: &[Complex64]) -> f64 {
    c.iter().map(|z| z.norm_sqr()).sum()
}

/// Ψ(x,t) = L^{-1/2} Σ C_n √2 sin(πn x/L) on [0, L].
pub fn hermitian_wavefunction(c: &[Complex64], length: f64, x: f64) -> Result<Complex64> {
    if !(-1e-14 * length..=length * (1.0 + 1e-14)).contains(&x) {
        return Err(Error::OutsideBox {
            x,
            half_width: length,
        });
    }
    let y = x / length;
    let sum: Complex64 = c
        .iter()
        .enumerate()
        .map(|(i, &z)| z * (SQRT_2 * (PI * (i + 1) as f64 * y).sin()))
        .sum();
    Ok(sum / length.sqrt())
}

/// ∫_0^L x |Ψ|² dx / norm.
pub fn hermitian_position(c: &[Complex64], length: f64) -> f64 {
    let rule = GaussLegendre::new((4 * c.len() + 32).max(64));
    let weighted = rule.integrate(0.0, length, |x| {
        x * hermitian_wavefunction(c, length, x).map_or(0.0, |v| v.norm_sqr())
    });
    weighted / hermitian_norm(c)
}

pub struct HermitianRecord {
    pub samples: Vec<ModeCoefficients>,
    pub config: HermitianConfig,
    pub diagnostics: Diagnostics,
}

pub fn integrate_hermitian(config: &HermitianConfig) -> Result<HermitianRecord> {
    config.validate()?;
    let system = DirichletBoxSystem::new(config.trajectory, config.n_modes);
    let mut c0 = vec![Complex64::new(0.0, 0.0); config.n_modes];
    c0[config.initial_mode - 1] = Complex64::new(1.0, 0.0);
    let times = sample_times(config.t_final, config.sample_interval);
    let (states, diagnostics) = propagate(&system, &c0, &times, config.step)?;
    Ok(HermitianRecord {
        samples: times
            .into_iter()
            .zip(states)
            .map(|(t, c)| ModeCoefficients { t, c })
            .collect(),
        config: config.clone(),
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// D_nm = -2nm(-1)^{n+m}/(n² - m²) off the diagonal, -1/2 on it.
    fn dilation_closed_form(n: usize, m: usize) -> f64 {
        if n == m {
            return -0.5;
        }
        let (nf, mf) = (n as f64, m as f64);
        let sign = if (n + m).is_multiple_of(2) { 1.0 } else { -1.0 };
        -2.0 * nf * mf * sign / (nf * nf - mf * mf)
    }

    #[test]
    fn dilation_matrix_matches_closed_form() {
        let n_modes = 16;
        let d = dilation_matrix(n_modes);
        for i in 0..n_modes {
            for j in 0..n_modes {
                let want = dilation_closed_form(i + 1, j + 1);
                assert!((d[i * n_modes + j] - want).abs() < 1e-12, "({i},{j})");
            }
        }
        assert!((d[0] + 0.5).abs() < 1e-14);
    }

    #[test]
    fn dilation_symmetric_part_is_minus_identity() {
        let n_modes = 16;
        let d = dilation_matrix(n_modes);
        for i in 0..n_modes {
            for j in 0..n_modes {
                let s = d[i * n_modes + j] + d[j * n_modes + i];
                let want = if i == j { -1.0 } else { 0.0 };
                assert!((s - want).abs() < 1e-12);
            }
        }
    }

    fn config(trajectory: WallTrajectory, t_final: f64) -> HermitianConfig {
        HermitianConfig {
            trajectory,
            n_modes: 16,
            t_final,
            step: StepControl::Fixed { dt: 1e-3 },
            initial_mode: 1,
            sample_interval: 0.5,
        }
    }

    #[test]
    fn static_wall_keeps_populations() {
        let rec = integrate_hermitian(&config(WallTrajectory::Static { a: 1.0 }, 5.0)).unwrap();
        for s in &rec.samples {
            assert!((s.c[0].norm() - 1.0).abs() < 1e-10);
            assert!((hermitian_energy(&s.c, 1.0) - PI * PI / 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn norm_conserved_over_one_period() {
        let traj = WallTrajectory::Harmonic {
            a: 10.0,
            b: 1.0,
            omega: 1.0,
        };
        let rec = integrate_hermitian(&config(traj, std::f64::consts::TAU)).unwrap();
        for s in &rec.samples {
            assert!((hermitian_norm(&s.c) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn wavefunction_norm_by_quadrature() {
        let c = vec![
            Complex64::new(0.6, 0.1),
            Complex64::new(-0.2, 0.5),
            Complex64::new(0.0, 0.3),
        ];
        let l = 7.5;
        let rule = GaussLegendre::new(64);
        let q = rule.integrate(0.0, l, |x| {
            hermitian_wavefunction(&c, l, x).unwrap().norm_sqr()
        });
        assert!((q - hermitian_norm(&c)).abs() < 1e-12);
        let single = [Complex64::new(1.0, 0.0)];
        assert!((hermitian_position(&single, l) - l / 2.0).abs() < 1e-12);
    }
}
