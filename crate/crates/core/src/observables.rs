//! Expectation values computed from the mode coefficients.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::evolution::{reconstruct_wavefunction, EvolutionRecord, ModeCoefficients};
use crate::hermitian::{
    hermitian_energy, hermitian_force, hermitian_norm, hermitian_position, HermitianRecord,
};
use crate::quadrature::GaussLegendre;
use crate::trajectory::WallTrajectory;

fn populations(c: &[Complex64]) -> impl Iterator<Item = (f64, f64)> + '_ {
    c.iter()
        .enumerate()
        .map(|(n, z)| ((PI * n as f64).powi(2), z.norm_sqr()))
}

/// ⟨E⟩ = (1/2L) Σ (π²n² + α²L²) |C_n|².
pub fn average_energy(c: &[Complex64], length: f64, alpha: f64) -> f64 {
    let confinement = (alpha * length).powi(2);
    populations(c)
        .map(|(k, p)| (k + confinement) * p)
        .sum::<f64>()
        / (2.0 * length)
}

/// ⟨F⟩ = ½ Σ (π²n²/L² − α²) |C_n|².
pub fn average_force(c: &[Complex64], length: f64, alpha: f64) -> f64 {
    let a2 = alpha * alpha;
    let inv_l2 = 1.0 / (length * length);
    0.5 * populations(c)
        .map(|(k, p)| (k * inv_l2 - a2) * p)
        .sum::<f64>()
}

/// N = ∫_{-L}^{L} |Ψ|² dx = L Σ |C_n|².
pub fn norm(c: &[Complex64], length: f64) -> f64 {
    length * c.iter().map(|z| z.norm_sqr()).sum::<f64>()
}

/// dN/dt from the wall values: (L' + α)|Ψ(L)|² + (L' − α)|Ψ(−L)|².
pub fn norm_rate_boundary(
    state: &ModeCoefficients,
    trajectory: &WallTrajectory,
    alpha: f64,
) -> Result<f64> {
    let length = trajectory.wall_position(state.t)?;
    let velocity = trajectory.wall_velocity(state.t);
    let right = reconstruct_wavefunction(state, trajectory, alpha, length)?.norm_sqr();
    let left = reconstruct_wavefunction(state, trajectory, alpha, -length)?.norm_sqr();
    Ok((velocity + alpha) * right + (velocity - alpha) * left)
}

/// ⟨x⟩ = Re ∫ Ψ* x Ψ dx / N, by Gauss–Legendre quadrature of the reconstructed
/// wave function.
pub fn average_position(
    state: &ModeCoefficients,
    trajectory: &WallTrajectory,
    alpha: f64,
) -> Result<f64> {
    let length = trajectory.wall_position(state.t)?;
    let rule = GaussLegendre::new((4 * state.c.len() + 32).max(64));
    let mut weighted = 0.0;
    let mut total = 0.0;
    for (x, w) in rule.mapped(-length, length) {
        let density = reconstruct_wavefunction(state, trajectory, alpha, x)?.norm_sqr();
        weighted += w * x * density;
        total += w * density;
    }
    if total == 0.0 {
        return Ok(0.0);
    }
    Ok(weighted / total)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObservableRow {
    pub t: f64,
    pub length: f64,
    pub velocity: f64,
    pub norm: f64,
    pub energy: f64,
    pub energy_over_norm: f64,
    pub force: f64,
    pub position: f64,
    pub populations: Vec<f64>,
}

/// Rows of observables plus the mode number of the first population column.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObservableSeries {
    pub first_mode: usize,
    pub rows: Vec<ObservableRow>,
}

impl ObservableSeries {
    pub fn from_record(record: &EvolutionRecord) -> Result<Self> {
        let traj = record.config.trajectory;
        let alpha = record.config.alpha;
        let rows = record
            .samples
            .iter()
            .map(|s| {
                let length = traj.wall_position(s.t)?;
                let n = norm(&s.c, length);
                let e = average_energy(&s.c, length, alpha);
                Ok(ObservableRow {
                    t: s.t,
                    length,
                    velocity: traj.wall_velocity(s.t),
                    norm: n,
                    energy: e,
                    energy_over_norm: e / n,
                    force: average_force(&s.c, length, alpha),
                    position: average_position(s, &traj, alpha)?,
                    populations: s.populations().collect(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            first_mode: 0,
            rows,
        })
    }

    pub fn from_hermitian(record: &HermitianRecord) -> Result<Self> {
        let traj = record.config.trajectory;
        let rows = record
            .samples
            .iter()
            .map(|s| {
                let length = traj.wall_position(s.t)?;
                let n = hermitian_norm(&s.c);
                let e = hermitian_energy(&s.c, length);
                Ok(ObservableRow {
                    t: s.t,
                    length,
                    velocity: traj.wall_velocity(s.t),
                    norm: n,
                    energy: e,
                    energy_over_norm: e / n,
                    force: hermitian_force(&s.c, length),
                    position: hermitian_position(&s.c, length),
                    populations: s.populations().collect(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            first_mode: 1,
            rows,
        })
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.energy).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n_modes: usize, k: usize) -> Vec<Complex64> {
        ModeCoefficients::unit(n_modes, k).c
    }

    #[test]
    fn energy_values() {
        let c = unit(4, 1);
        let e = average_energy(&c, 10.0, 1.0);
        assert!((e - (PI * PI + 100.0) / 20.0).abs() < 1e-14);
        assert!((e - 5.493_480_220_054_468).abs() < 1e-12);
        assert_eq!(
            average_energy(&[Complex64::new(0.0, 0.0); 3], 10.0, 1.0),
            0.0
        );
    }

    #[test]
    fn energy_without_alpha_is_kinetic_sum() {
        let c = vec![
            Complex64::new(0.2, 0.1),
            Complex64::new(0.3, -0.5),
            Complex64::new(0.0, 0.7),
        ];
        let l = 4.0;
        let want: f64 = c
            .iter()
            .enumerate()
            .map(|(n, z)| (PI * n as f64).powi(2) * z.norm_sqr())
            .sum::<f64>()
            / (2.0 * l);
        assert_eq!(average_energy(&c, l, 0.0), want);
    }

    #[test]
    fn force_values() {
        let c = unit(3, 1);
        assert!(average_force(&c, PI, 1.0).abs() < 1e-15);
        let f = average_force(&c, 10.0, 1.0);
        assert!((f - (PI * PI / 100.0 - 1.0) / 2.0).abs() < 1e-15);
        assert!((f + 0.450_651_977_994_553_2).abs() < 1e-12);
    }

    #[test]
    fn norm_of_unit_state() {
        assert_eq!(norm(&unit(5, 1), 10.0), 10.0);
    }

    #[test]
    fn norm_matches_quadrature_of_wavefunction() {
        let traj = WallTrajectory::Harmonic {
            a: 10.0,
            b: 1.0,
            omega: 1.0,
        };
        let state = ModeCoefficients {
            t: 0.4,
            c: vec![
                Complex64::new(0.1, -0.2),
                Complex64::new(0.5, 0.1),
                Complex64::new(-0.3, 0.2),
                Complex64::new(0.05, 0.05),
            ],
        };
        let l = traj.length_at(0.4);
        let rule = GaussLegendre::new(128);
        let q = rule.integrate(-l, l, |x| {
            reconstruct_wavefunction(&state, &traj, 1.0, x)
                .unwrap()
                .norm_sqr()
        });
        assert!((q - norm(&state.c, l)).abs() < 1e-8);
    }

    #[test]
    fn boundary_rate_cases() {
        let fixed = WallTrajectory::Static { a: 10.0 };
        let s = ModeCoefficients::unit(4, 1);
        assert!(norm_rate_boundary(&s, &fixed, 1.0).unwrap().abs() < 1e-14);
        let mixed = ModeCoefficients {
            t: 0.0,
            c: vec![Complex64::new(0.3, 0.0), Complex64::new(0.2, 0.4)],
        };
        assert_eq!(norm_rate_boundary(&mixed, &fixed, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn position_of_even_density_is_zero() {
        let traj = WallTrajectory::Static { a: 10.0 };
        let s = ModeCoefficients::unit(4, 1);
        assert!(average_position(&s, &traj, 1.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn position_matches_dense_grid() {
        let traj = WallTrajectory::Static { a: 3.0 };
        let s = ModeCoefficients {
            t: 0.0,
            c: vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(FRAC, 0.0),
                Complex64::new(FRAC, 0.0),
            ],
        };
        let got = average_position(&s, &traj, 0.0).unwrap();
        // midpoint rule on a dense grid
        let cells = 200_000;
        let h = 6.0 / cells as f64;
        let (mut num, mut den) = (0.0, 0.0);
        for k in 0..cells {
            let x = -3.0 + (k as f64 + 0.5) * h;
            let d = reconstruct_wavefunction(&s, &traj, 0.0, x)
                .unwrap()
                .norm_sqr();
            num += x * d * h;
            den += d * h;
        }
        assert!((got - num / den).abs() < 1e-8);
        assert!(got.abs() <= 3.0);
    }

    const FRAC: f64 = std::f64::consts::FRAC_1_SQRT_2;
}
