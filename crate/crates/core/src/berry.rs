//! Geometric phase of the static Robin eigenstates carried around a harmonic
//! wall cycle L(t) = a + b cos(ωt).
//!
//! Two routes are provided: the logarithmic closed form, and direct quadrature
//! of γ = i ∫_0^T f(L(t)) |L'(t)| dt with the connection
//! f(L) = ∫_{-L}^{L} Ψ_n* ∂_L Ψ_n dx.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_converged, GaussLegendre};
use crate::spectrum::{eigenfunction_unchecked, normalization};

/// Default number of panels for the period quadrature.
pub const DEFAULT_STEPS: usize = 512;

/// Nodes per panel in the composite period quadrature.
const PANEL_POINTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BerryPhaseResult {
    pub n: u32,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub gamma_analytic: Complex64,
    pub gamma_numeric: Complex64,
    pub discrepancy: f64,
}

fn check_loop(n: u32, a: f64, b: f64, alpha: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n", "quantum number must be at least 1"));
    }
    if !(b >= 0.0 && a > b) {
        return Err(Error::invalid(
            "b",
            format!("need a > b >= 0, got a = {a}, b = {b}"),
        ));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::invalid(
            "alpha",
            format!("must be positive, got {alpha}"),
        ));
    }
    Ok(())
}

/// γ_n = i ln[(α²(a−b)² + π²n²) / (α²(a+b)² + π²n²)].
pub fn berry_phase_analytic(n: u32, a: f64, b: f64, alpha: f64) -> Result<Complex64> {
    check_loop(n, a, b, alpha)?;
    let p = (PI * n as f64).powi(2);
    let a2 = alpha * alpha;
    let ratio = (a2 * (a - b).powi(2) + p) / (a2 * (a + b).powi(2) + p);
    Ok(Complex64::new(0.0, ratio.ln()))
}

/// ∂_L Ψ_n(x; L) with every L-dependence (A_n, the 1/L arguments, the
/// iπn/(Lα) factor) differentiated analytically.
pub fn eigenstate_length_derivative(n: u32, length: f64, alpha: f64, x: f64) -> Complex64 {
    let pn = PI * n as f64;
    let k = pn / length;
    let kappa = k / alpha;
    let amp = normalization(n, length, alpha);
    let la2 = (length * alpha).powi(2);
    // A² = Lα²/(L²α² + p)  ⇒  dA/dL = α²(p − L²α²) / (2A (L²α² + p)²)
    let damp = alpha * alpha * (pn * pn - la2) / (2.0 * amp * (la2 + pn * pn).powi(2));
    let (s, c) = (k * x).sin_cos();
    let u_over_l = k * x / length;
    let shape = Complex64::new(s, kappa * c);
    let dshape = Complex64::new(-u_over_l * c, -kappa / length * c + kappa * u_over_l * s);
    shape * damp + dshape * amp
}

/// f(L) = ∫_{-L}^{L} Ψ_n* ∂_L Ψ_n dx, the x-integral by Gauss–Legendre quadrature
/// checked under point doubling.
pub fn berry_connection(n: u32, length: f64, alpha: f64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::invalid("n", "quantum number must be at least 1"));
    }
    if !(length > 0.0 && alpha > 0.0) {
        return Err(Error::invalid(
            "length",
            "length and alpha must be positive",
        ));
    }
    let points = (4 * n as usize + 32).max(64);
    integrate_converged("berry connection", -length, length, points, 1e-12, |x| {
        eigenfunction_unchecked(n, length, alpha, x).conj()
            * eigenstate_length_derivative(n, length, alpha, x)
    })
}

/// Berry connection with a fixed rule; used inside the period quadrature where
/// the doubling check has already been made once.
fn connection_with(rule: &GaussLegendre, n: u32, length: f64, alpha: f64) -> Complex64 {
    rule.integrate_complex(-length, length, |x| {
        eigenfunction_unchecked(n, length, alpha, x).conj()
            * eigenstate_length_derivative(n, length, alpha, x)
    })
}

fn period_integral(
    rule: &GaussLegendre,
    n: u32,
    a: f64,
    b: f64,
    alpha: f64,
    omega: f64,
    steps: usize,
) -> Complex64 {
    let period = TAU / omega;
    let panel = GaussLegendre::new(PANEL_POINTS);
    // Panels tile [0, T] with a boundary at T/2, where |L'| has its kink.
    let width = period / steps as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..steps {
        let lo = k as f64 * width;
        total += panel.integrate_complex(lo, lo + width, |t| {
            let length = a + b * (omega * t).cos();
            let speed = (b * omega * (omega * t).sin()).abs();
            connection_with(rule, n, length, alpha) * speed
        });
    }
    Complex64::i() * total
}

/// γ = i ∫_0^{2π/ω} f(L(t)) |L'(t)| dt by composite Gauss–Legendre over the period.
/// `steps` (≥ 256, rounded up to even) panels are compared against twice as many.
pub fn berry_phase_numeric(
    n: u32,
    a: f64,
    b: f64,
    alpha: f64,
    omega: f64,
    steps: usize,
) -> Result<Complex64> {
    check_loop(n, a, b, alpha)?;
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::invalid(
            "omega",
            format!("must be positive, got {omega}"),
        ));
    }
    if steps < 256 {
        return Err(Error::invalid(
            "steps",
            format!("need at least 256, got {steps}"),
        ));
    }
    if b == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let steps = steps + steps % 2;
    // Validate the inner rule at the extremes of the loop once.
    let points = (4 * n as usize + 32).max(64);
    for length in [a - b, a + b] {
        berry_connection(n, length, alpha)?;
    }
    let rule = GaussLegendre::new(2 * points);
    let coarse = period_integral(&rule, n, a, b, alpha, omega, steps);
    let fine = period_integral(&rule, n, a, b, alpha, omega, 2 * steps);
    let change = (fine - coarse).norm();
    if change > 1e-10 * fine.norm().max(1.0) {
        return Err(Error::QuadratureNotConverged {
            what: "berry phase period integral".into(),
            change,
        });
    }
    Ok(fine)
}

/// Both routes side by side.
pub fn berry_phase(
    n: u32,
    a: f64,
    b: f64,
    alpha: f64,
    omega: f64,
    steps: usize,
) -> Result<BerryPhaseResult> {
    let gamma_analytic = berry_phase_analytic(n, a, b, alpha)?;
    let gamma_numeric = berry_phase_numeric(n, a, b, alpha, omega, steps)?;
    Ok(BerryPhaseResult {
        n,
        a,
        b,
        alpha,
        gamma_analytic,
        gamma_numeric,
        discrepancy: (gamma_analytic - gamma_numeric).norm(),
    })
}
