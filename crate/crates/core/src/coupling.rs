//! Overlap integrals of the cosine basis and the wall-motion coupling matrix.
//!
//! Projecting the transformed wave equation onto φ_n(y) gives
//!
//! ```text
//! V_nm = -i L π m (α I1_nm + L' I2_nm)
//! I1_nm = ∫ φ_n(y) sin(πmy) dy          (= 0, odd integrand)
//! I2_nm = ∫ y φ_n(y) sin(πmy) dy
//! ```
//!
//! over y ∈ [-1, 1]. The n = 0 row uses φ_0 = 1/√2, for which
//! I2_0m = -√2 (-1)^m / (πm). Column m = 0 vanishes identically.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::spectrum::neumann_mode;

fn parity(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// ∫_{-1}^{1} φ_n(y) sin(πmy) dy. Zero for every n, m.
pub fn overlap_i1(_n: usize, _m: usize) -> f64 {
    0.0
}

/// ∫_{-1}^{1} y φ_n(y) sin(πmy) dy in closed form.
pub fn overlap_i2(n: usize, m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let mf = m as f64;
    if n == 0 {
        return -SQRT_2 * parity(m as i64) / (PI * mf);
    }
    let nf = n as f64;
    if n == m {
        return -1.0 / (2.0 * PI * nf);
    }
    let (ni, mi) = (n as i64, m as i64);
    -parity(mi + ni) / (PI * (mf + nf)) - parity(mi - ni) / (PI * (mf - nf))
}

/// Weight in the oracle integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    One,
    Y,
}

/// Second factor of the oracle integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Partner {
    /// sin(πmy), as in the coupling integrals.
    Sine,
    /// φ_m(y), for the Gram matrix of the basis.
    Basis,
}

/// Minimum node count used by the oracle for a given pair of mode indices.
pub fn oracle_points(n: usize, m: usize) -> usize {
    (4 * (n + m) + 32).max(64)
}

/// Gauss–Legendre evaluation of ∫ w(y) φ_n(y) g_m(y) dy, checked by doubling the
/// node count. Errors when `points < 64` or when doubling moves the result by more
/// than 1e-10.
pub fn quadrature_overlap(
    weight: Weight,
    partner: Partner,
    n: usize,
    m: usize,
    points: usize,
) -> Result<f64> {
    if points < 64 {
        return Err(Error::invalid(
            "points",
            format!("need at least 64, got {points}"),
        ));
    }
    let integrand = |y: f64| {
        let w = match weight {
            Weight::One => 1.0,
            Weight::Y => y,
        };
        let g = match partner {
            Partner::Sine => (PI * m as f64 * y).sin(),
            Partner::Basis => neumann_mode(m, y),
        };
        w * neumann_mode(n, y) * g
    };
    let coarse = GaussLegendre::new(points).integrate(-1.0, 1.0, integrand);
    let fine = GaussLegendre::new(2 * points).integrate(-1.0, 1.0, integrand);
    let change = (fine - coarse).abs();
    if change > 1e-10 {
        return Err(Error::QuadratureNotConverged {
            what: format!("overlap ({n}, {m})"),
            change,
        });
    }
    Ok(fine)
}

/// Precomputed, time-independent part of the coupling.
///
/// Stores K_nm = π m I2_nm so that, per time step, the projected coupling term
/// `(-i / L²) Σ_m V_nm C_m` reduces to `-(L'/L) Σ_m K_nm C_m`.
#[derive(Clone, Debug)]
pub struct CouplingMatrices {
    n_modes: usize,
    i2: Vec<f64>,
    kernel: Vec<f64>,
}

impl CouplingMatrices {
    pub fn new(n_modes: usize) -> Self {
        let mut i2 = vec![0.0; n_modes * n_modes];
        let mut kernel = vec![0.0; n_modes * n_modes];
        for n in 0..n_modes {
            for m in 0..n_modes {
                let v = overlap_i2(n, m);
                i2[n * n_modes + m] = v;
                kernel[n * n_modes + m] = PI * m as f64 * v;
            }
        }
        Self {
            n_modes,
            i2,
            kernel,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn i2(&self, n: usize, m: usize) -> f64 {
        self.i2[n * self.n_modes + m]
    }

    /// Full V(t) for the given wall state, row-major.
    pub fn assemble(&self, length: f64, velocity: f64, alpha: f64) -> Vec<Complex64> {
        let n_modes = self.n_modes;
        let mut v = vec![Complex64::new(0.0, 0.0); n_modes * n_modes];
        for n in 0..n_modes {
            for m in 0..n_modes {
                let inner = alpha * overlap_i1(n, m) + velocity * self.i2(n, m);
                v[n * n_modes + m] = Complex64::new(0.0, -length * PI * m as f64 * inner);
            }
        }
        v
    }

    /// Adds `-(L'/L) K c` into `out`. Equivalent to `(-i/L²) V c`.
    pub fn apply_scaled(&self, length: f64, velocity: f64, c: &[Complex64], out: &mut [Complex64]) {
        if velocity == 0.0 {
            return;
        }
        let scale = -velocity / length;
        for (row, o) in self.kernel.chunks_exact(self.n_modes).zip(out.iter_mut()) {
            let mut acc = Complex64::new(0.0, 0.0);
            for (&k, &cm) in row.iter().zip(c) {
                acc += cm * k;
            }
            *o += acc * scale;
        }
    }
}

/// V(t) assembled from scratch.
pub fn coupling_matrix(length: f64, velocity: f64, alpha: f64, n_modes: usize) -> Vec<Complex64> {
    CouplingMatrices::new(n_modes).assemble(length, velocity, alpha)
}

/// Largest |closed form − quadrature| over 1 ≤ n, m ≤ `n_max` for I2, and the largest
/// |quadrature| of the I1 integrand.
pub fn oracle_discrepancy(n_max: usize) -> Result<(f64, f64)> {
    let mut i2_err = 0.0f64;
    let mut i1_mag = 0.0f64;
    for n in 1..=n_max {
        for m in 1..=n_max {
            let points = oracle_points(n, m);
            let q2 = quadrature_overlap(Weight::Y, Partner::Sine, n, m, points)?;
            i2_err = i2_err.max((q2 - overlap_i2(n, m)).abs());
            let q1 = quadrature_overlap(Weight::One, Partner::Sine, n, m, points)?;
            i1_mag = i1_mag.max(q1.abs());
        }
    }
    Ok((i2_err, i1_mag))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i1_is_zero() {
        assert_eq!(overlap_i1(1, 1), 0.0);
        assert_eq!(overlap_i1(3, 7), 0.0);
        let q = quadrature_overlap(Weight::One, Partner::Sine, 2, 5, 64).unwrap();
        assert!(q.abs() < 1e-13);
        let q = quadrature_overlap(Weight::One, Partner::Sine, 4, 9, 256).unwrap();
        assert!(q.abs() < 1e-13);
    }

    #[test]
    fn i2_known_values() {
        assert!((overlap_i2(1, 1) + 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((overlap_i2(2, 1) + 2.0 / (3.0 * PI)).abs() < 1e-15);
        assert!((overlap_i2(5, 5) + 1.0 / (10.0 * PI)).abs() < 1e-15);
        let q = quadrature_overlap(Weight::Y, Partner::Sine, 1, 1, 256).unwrap();
        assert!((q + 0.159_154_943_091_895_3).abs() < 1e-12);
        let q = quadrature_overlap(Weight::Y, Partner::Sine, 2, 1, 256).unwrap();
        assert!((q + 0.212_206_590_789_193_8).abs() < 1e-12);
        let q = quadrature_overlap(Weight::Y, Partner::Sine, 5, 5, 256).unwrap();
        assert!((q + 1.0 / (10.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn constant_mode_row_matches_quadrature() {
        for m in 1..=3 {
            let q = quadrature_overlap(Weight::Y, Partner::Sine, 0, m, 128).unwrap();
            assert!((q - overlap_i2(0, m)).abs() < 1e-13, "m={m}");
        }
        assert_eq!(overlap_i2(4, 0), 0.0);
    }

    #[test]
    fn too_few_points_rejected() {
        assert!(quadrature_overlap(Weight::Y, Partner::Sine, 1, 1, 32).is_err());
    }

    #[test]
    fn gram_matrix_is_identity() {
        for n in 0..=16 {
            for m in 0..=16 {
                let g = quadrature_overlap(Weight::One, Partner::Basis, n, m, 256).unwrap();
                let want = if n == m { 1.0 } else { 0.0 };
                assert!((g - want).abs() < 1e-12, "({n},{m}) -> {g}");
            }
        }
    }

    #[test]
    fn static_wall_gives_zero_coupling() {
        let v = coupling_matrix(7.0, 0.0, 1.3, 6);
        assert!(v.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn diagonal_entry_and_asymmetry() {
        let n_modes = 4;
        let v = coupling_matrix(10.0, 1.0, 1.0, n_modes);
        let at = |n: usize, m: usize| v[n * n_modes + m];
        assert!((at(1, 1) - Complex64::new(0.0, 5.0)).norm() < 1e-13);
        // V_12 = -i 10π·2·I2_12, V_21 = -i 10π·1·I2_21
        let v12 = at(1, 2);
        let v21 = at(2, 1);
        assert!((v12.im - (-10.0 * PI * 2.0 * overlap_i2(1, 2))).abs() < 1e-12);
        assert!((v21.im - (-10.0 * PI * overlap_i2(2, 1))).abs() < 1e-12);
        assert!((v12.norm() - v21.norm()).abs() > 1.0);
        assert!(v.iter().all(|z| z.re == 0.0));
    }

    #[test]
    fn apply_matches_assembled_matrix() {
        let n_modes = 7;
        let table = CouplingMatrices::new(n_modes);
        let (l, ld, alpha) = (9.3, -0.4, 1.1);
        let c: Vec<Complex64> = (0..n_modes)
            .map(|k| Complex64::new((k as f64).sin(), 0.3 * k as f64))
            .collect();
        let mut fast = vec![Complex64::new(0.0, 0.0); n_modes];
        table.apply_scaled(l, ld, &c, &mut fast);
        let v = table.assemble(l, ld, alpha);
        for n in 0..n_modes {
            let slow: Complex64 = (0..n_modes).map(|m| v[n * n_modes + m] * c[m]).sum();
            let slow = slow * Complex64::new(0.0, -1.0 / (l * l));
            assert!((slow - fast[n]).norm() < 1e-13);
        }
    }
}
