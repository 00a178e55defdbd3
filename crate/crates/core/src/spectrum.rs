//! Eigenstates of the static PT-symmetric box on [-L, L] with Robin walls
//! Ψ' + iαΨ = 0, and the cosine (Neumann) basis on [-1, 1] used by the
//! dynamical solver.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// One eigenstate of the static box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StaticEigenstate {
    pub n: u32,
    pub length: f64,
    pub alpha: f64,
    pub normalization: f64,
    pub energy: f64,
}

impl StaticEigenstate {
    pub fn new(n: u32, length: f64, alpha: f64) -> Result<Self> {
        check_quantum_number(n)?;
        check_positive("length", length)?;
        check_positive("alpha", alpha)?;
        Ok(Self {
            n,
            length,
            alpha,
            normalization: normalization(n, length, alpha),
            energy: static_eigenvalue(n, length)?,
        })
    }

    pub fn amplitude(&self, x: f64) -> Complex64 {
        eigenfunction_unchecked(self.n, self.length, self.alpha, x)
    }

    pub fn derivative(&self, x: f64) -> Complex64 {
        let k = PI * self.n as f64 / self.length;
        let kappa = k / self.alpha;
        let (s, c) = (k * x).sin_cos();
        Complex64::new(k * c, -kappa * k * s) * self.normalization
    }
}

fn check_quantum_number(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid(
            "n",
            "quantum number must be at least 1 (n = 0 is the zero function)",
        ));
    }
    Ok(())
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::invalid(
            name,
            format!("must be positive, got {value}"),
        ));
    }
    Ok(())
}

/// E_n = π²n² / (2L²).
pub fn static_eigenvalue(n: u32, length: f64) -> Result<f64> {
    check_quantum_number(n)?;
    check_positive("length", length)?;
    let pn = PI * n as f64;
    Ok(pn * pn / (2.0 * length * length))
}

/// A_n = sqrt(Lα² / (L²α² + π²n²)). With this constant the eigenstate has unit
/// norm under the plain L² product on [-L, L].
pub fn normalization(n: u32, length: f64, alpha: f64) -> f64 {
    let pn = PI * n as f64;
    let la = length * alpha;
    (length * alpha * alpha / (la * la + pn * pn)).sqrt()
}

/// Ψ_n(x) = A_n (sin(πnx/L) + iπn/(Lα) cos(πnx/L)).
pub fn static_eigenfunction(n: u32, length: f64, alpha: f64, x: f64) -> Result<Complex64> {
    check_quantum_number(n)?;
    check_positive("length", length)?;
    check_positive("alpha", alpha)?;
    if x.abs() > length {
        return Err(Error::OutsideBox {
            x,
            half_width: length,
        });
    }
    Ok(eigenfunction_unchecked(n, length, alpha, x))
}

pub(crate) fn eigenfunction_unchecked(n: u32, length: f64, alpha: f64, x: f64) -> Complex64 {
    let k = PI * n as f64 / length;
    let (s, c) = (k * x).sin_cos();
    Complex64::new(s, k / alpha * c) * normalization(n, length, alpha)
}

/// Ψ_n'(±L) + iαΨ_n(±L); vanishes for a true eigenstate.
pub fn robin_residual(n: u32, length: f64, alpha: f64, side: Side) -> Result<Complex64> {
    let state = StaticEigenstate::new(n, length, alpha)?;
    let x = side.sign() * length;
    Ok(state.derivative(x) + Complex64::i() * alpha * state.amplitude(x))
}

/// Which wall of the box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }
}

/// Neumann basis function on [-1, 1]: cos(πny) for n ≥ 1, the constant 1/√2 for n = 0.
/// Orthonormal under ∫_{-1}^{1}.
pub fn neumann_mode(n: usize, y: f64) -> f64 {
    if n == 0 {
        FRAC_1_SQRT_2
    } else {
        (PI * n as f64 * y).cos()
    }
}

/// φ_n(±1), identical on both walls since every mode is even.
pub fn neumann_mode_at_wall(n: usize) -> f64 {
    match n {
        0 => FRAC_1_SQRT_2,
        n if n % 2 == 0 => 1.0,
        _ => -1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussLegendre;

    #[test]
    fn eigenvalues() {
        assert!((static_eigenvalue(1, PI).unwrap() - 0.5).abs() < 1e-15);
        assert!((static_eigenvalue(2, 1.0).unwrap() - 2.0 * PI * PI).abs() < 1e-12);
        assert!((static_eigenvalue(3, 3.0).unwrap() - PI * PI / 2.0).abs() < 1e-14);
        assert!(static_eigenvalue(0, 1.0).is_err());
    }

    #[test]
    fn eigenvalue_scaling() {
        for n in 1..6 {
            let base = static_eigenvalue(n, 1.5).unwrap();
            let scaled = static_eigenvalue(n, 3.0).unwrap();
            assert!((scaled - base / 4.0).abs() <= 1e-15 * base);
        }
    }

    #[test]
    fn eigenfunction_values() {
        let a1 = 1.0 / (1.0 + PI * PI).sqrt();
        let at0 = static_eigenfunction(1, 1.0, 1.0, 0.0).unwrap();
        assert!(at0.re.abs() < 1e-16);
        assert!((at0.im - PI * a1).abs() < 1e-15);
        let half = static_eigenfunction(1, 1.0, 1.0, 0.5).unwrap();
        assert!((half.re - a1).abs() < 1e-15 && half.im.abs() < 1e-15);
        assert!(static_eigenfunction(1, 1.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn normalization_is_plain_l2() {
        // Regression baseline for L = 1, α = 1: ∫|Ψ_1|² dx = 1 under the plain product.
        let rule = GaussLegendre::new(128);
        let norm = rule.integrate(-1.0, 1.0, |x| {
            static_eigenfunction(1, 1.0, 1.0, x).unwrap().norm_sqr()
        });
        assert!((norm - 1.0).abs() < 1e-13, "{norm}");
        for (n, l, a) in [(3, 10.0, 0.5), (7, 0.5, 4.0)] {
            let norm = rule.integrate(-l, l, |x| {
                static_eigenfunction(n, l, a, x).unwrap().norm_sqr()
            });
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn robin_condition_holds_on_both_walls() {
        let cases = [
            (1, 1.0, 1.0, Side::Right),
            (2, 10.0, 0.5, Side::Left),
            (5, 3.0, 2.0, Side::Right),
        ];
        for (n, l, a, side) in cases {
            assert!(robin_residual(n, l, a, side).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn neumann_values() {
        assert_eq!(neumann_mode(1, 0.0), 1.0);
        assert!((neumann_mode(2, 1.0) - 1.0).abs() < 1e-15);
        for n in 0..8 {
            assert!((neumann_mode(n, 1.0) - neumann_mode_at_wall(n)).abs() < 1e-14);
            assert!((neumann_mode(n, -1.0) - neumann_mode_at_wall(n)).abs() < 1e-14);
        }
    }

    #[test]
    fn neumann_derivative_vanishes_at_walls() {
        for n in 0..10usize {
            let h = 1e-6;
            for y in [-1.0, 1.0] {
                // one-sided difference pointing into the interval
                let inward = -y;
                let d = (neumann_mode(n, y + inward * h) - neumann_mode(n, y)) / h;
                assert!(d.abs() < 1e-3 * (n as f64 + 1.0).powi(2));
            }
        }
    }
}
