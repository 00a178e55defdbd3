//! Classical RK4 for complex mode-amplitude systems, with an optional
//! step-doubling error control. Both integrators land exactly on the requested
//! sample times.

use num_complex::Complex64;
use serde::Serialize;

use crate::config::StepControl;
use crate::error::{Error, Result};

/// A linear-in-state system dC/dt = f(t, C).
pub trait ModeSystem {
    fn dimension(&self) -> usize;
    fn derivative(&self, t: f64, c: &[Complex64], dc: &mut [Complex64]);
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub steps_taken: usize,
    pub rejected_steps: usize,
    /// Largest normalised step-doubling error estimate (adaptive runs only).
    pub max_error_estimate: Option<f64>,
}

pub struct Rk4 {
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    tmp: Vec<Complex64>,
}

impl Rk4 {
    pub fn new(dim: usize) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); dim];
        Self {
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            tmp: z,
        }
    }

    /// Advances `c` from t to t + h in place. `h` may be negative.
    pub fn step<S: ModeSystem + ?Sized>(&mut self, sys: &S, t: f64, h: f64, c: &mut [Complex64]) {
        let half = 0.5 * h;
        sys.derivative(t, c, &mut self.k1);
        axpy(&mut self.tmp, c, half, &self.k1);
        sys.derivative(t + half, &self.tmp, &mut self.k2);
        axpy(&mut self.tmp, c, half, &self.k2);
        sys.derivative(t + half, &self.tmp, &mut self.k3);
        axpy(&mut self.tmp, c, h, &self.k3);
        sys.derivative(t + h, &self.tmp, &mut self.k4);
        let sixth = h / 6.0;
        for (i, z) in c.iter_mut().enumerate() {
            *z += (self.k1[i] + (self.k2[i] + self.k3[i]) * 2.0 + self.k4[i]) * sixth;
        }
    }
}

fn axpy(out: &mut [Complex64], base: &[Complex64], h: f64, k: &[Complex64]) {
    for ((o, &b), &d) in out.iter_mut().zip(base).zip(k) {
        *o = b + d * h;
    }
}

fn check_finite(t: f64, c: &[Complex64]) -> Result<()> {
    if c.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { t })
    }
}

/// Sample times k·interval for k = 0, 1, … up to t_final, with t_final itself
/// always the last entry.
pub fn sample_times(t_final: f64, interval: f64) -> Vec<f64> {
    let full = (t_final / interval + 1e-9).floor() as usize;
    let mut times: Vec<f64> = (0..=full).map(|k| k as f64 * interval).collect();
    let last = *times.last().expect("at least t = 0");
    if t_final - last > 1e-9 * interval {
        times.push(t_final);
    } else if let Some(l) = times.last_mut() {
        *l = t_final;
    }
    times
}

/// Integrates from `times[0]` through each entry of `times`, returning the state at
/// every one of them (the first is `c0` itself).
pub fn propagate<S: ModeSystem + ?Sized>(
    sys: &S,
    c0: &[Complex64],
    times: &[f64],
    control: StepControl,
) -> Result<(Vec<Vec<Complex64>>, Diagnostics)> {
    let mut rk = Rk4::new(sys.dimension());
    let mut c = c0.to_vec();
    let mut diag = Diagnostics::default();
    let mut out = Vec::with_capacity(times.len());
    check_finite(times.first().copied().unwrap_or(0.0), &c)?;
    out.push(c.clone());
    let mut adaptive_h = None;
    for w in times.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        match control {
            StepControl::Fixed { dt } => {
                let span = t1 - t0;
                let steps = ((span.abs() / dt) - 1e-9).ceil().max(1.0) as usize;
                let h = span / steps as f64;
                for s in 0..steps {
                    rk.step(sys, t0 + s as f64 * h, h, &mut c);
                    diag.steps_taken += 1;
                }
                check_finite(t1, &c)?;
            }
            StepControl::Adaptive { rtol } => {
                let mut h = adaptive_h.unwrap_or((t1 - t0) / 16.0);
                advance_adaptive(sys, &mut rk, &mut c, t0, t1, rtol, &mut h, &mut diag)?;
                adaptive_h = Some(h);
            }
        }
        out.push(c.clone());
    }
    Ok((out, diag))
}

#[allow(clippy::too_many_arguments)]
fn advance_adaptive<S: ModeSystem + ?Sized>(
    sys: &S,
    rk: &mut Rk4,
    c: &mut [Complex64],
    t0: f64,
    t1: f64,
    rtol: f64,
    h: &mut f64,
    diag: &mut Diagnostics,
) -> Result<()> {
    let dir = (t1 - t0).signum();
    let mut t = t0;
    let mut full = c.to_vec();
    let mut halves = c.to_vec();
    while (t1 - t) * dir > 0.0 {
        let remaining = t1 - t;
        let mut step = h.abs().min(remaining.abs()) * dir;
        let landing = step.abs() >= remaining.abs();
        if landing {
            step = remaining;
        }
        if step.abs() < 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepUnderflow {
                t,
                step: step.abs(),
            });
        }
        full.copy_from_slice(c);
        rk.step(sys, t, step, &mut full);
        halves.copy_from_slice(c);
        rk.step(sys, t, 0.5 * step, &mut halves);
        rk.step(sys, t + 0.5 * step, 0.5 * step, &mut halves);
        let err = full
            .iter()
            .zip(halves.iter())
            .map(|(a, b)| (a - b).norm() / 15.0 / (rtol * b.norm().max(1.0)))
            .fold(0.0f64, f64::max);
        if !err.is_finite() {
            return Err(Error::NonFinite { t: t + step });
        }
        let factor = if err == 0.0 {
            4.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 4.0)
        };
        if err <= 1.0 {
            c.copy_from_slice(&halves);
            t = if landing { t1 } else { t + step };
            diag.steps_taken += 1;
            diag.max_error_estimate = Some(diag.max_error_estimate.unwrap_or(0.0).max(err));
            if !landing {
                *h = step.abs() * factor;
            } else {
                *h = h.abs().max(step.abs() * factor.min(1.0));
            }
        } else {
            diag.rejected_steps += 1;
            *h = step.abs() * factor;
        }
    }
    check_finite(t1, c)
}
