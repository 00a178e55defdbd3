//! Wall laws L(t) for the moving box.
//!
//! Every built-in law is an even function of time, which is what keeps the
//! Robin boundary problem PT-symmetric while the wall moves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Anything that can report a wall position L(t) for arbitrary (also negative) t.
pub trait WallLaw {
    fn length(&self, t: f64) -> f64;
}

impl<F: Fn(f64) -> f64> WallLaw for F {
    fn length(&self, t: f64) -> f64 {
        self(t)
    }
}

/// Closed-form wall trajectory with analytic derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WallTrajectory {
    /// L(t) = a
    Static { a: f64 },
    /// L(t) = a + b cos(ωt)
    Harmonic { a: f64, b: f64, omega: f64 },
    /// L(t) = a + b t²
    Expanding { a: f64, b: f64 },
    /// L(t) = a − b t²
    Contracting { a: f64, b: f64 },
}

impl WallTrajectory {
    pub fn fixed(a: f64) -> Result<Self> {
        Self::Static { a }.validated()
    }

    pub fn harmonic(a: f64, b: f64, omega: f64) -> Result<Self> {
        Self::Harmonic { a, b, omega }.validated()
    }

    pub fn expanding(a: f64, b: f64) -> Result<Self> {
        Self::Expanding { a, b }.validated()
    }

    pub fn contracting(a: f64, b: f64) -> Result<Self> {
        Self::Contracting { a, b }.validated()
    }

    /// Checks the parameter invariants (a > 0, b ≥ 0, and a > b for harmonic walls).
    pub fn validated(self) -> Result<Self> {
        let (a, b) = match self {
            Self::Static { a } => (a, 0.0),
            Self::Harmonic { a, b, omega } => {
                if !omega.is_finite() {
                    return Err(Error::invalid("omega", "must be finite"));
                }
                if a <= b {
                    return Err(Error::invalid(
                        "b",
                        format!(
                            "harmonic wall needs a > b so that L stays positive (a = {a}, b = {b})"
                        ),
                    ));
                }
                (a, b)
            }
            Self::Expanding { a, b } | Self::Contracting { a, b } => (a, b),
        };
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::invalid("a", format!("must be positive, got {a}")));
        }
        if !(b.is_finite() && b >= 0.0) {
            return Err(Error::invalid(
                "b",
                format!("must be non-negative, got {b}"),
            ));
        }
        Ok(self)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Static { .. } => "static",
            Self::Harmonic { .. } => "harmonic",
            Self::Expanding { .. } => "expanding",
            Self::Contracting { .. } => "contracting",
        }
    }

    /// Closed-form L(t) without the positivity check.
    pub fn length_at(&self, t: f64) -> f64 {
        match *self {
            Self::Static { a } => a,
            Self::Harmonic { a, b, omega } => a + b * (omega * t).cos(),
            Self::Expanding { a, b } => a + b * t * t,
            Self::Contracting { a, b } => a - b * t * t,
        }
    }

    /// L(t), rejecting times at which the wall has collapsed.
    pub fn wall_position(&self, t: f64) -> Result<f64> {
        let length = self.length_at(t);
        if length > 0.0 {
            Ok(length)
        } else {
            Err(Error::WallCollapsed { t, length })
        }
    }

    pub fn wall_velocity(&self, t: f64) -> f64 {
        match *self {
            Self::Static { .. } => 0.0,
            Self::Harmonic { b, omega, .. } => -b * omega * (omega * t).sin(),
            Self::Expanding { b, .. } => 2.0 * b * t,
            Self::Contracting { b, .. } => -2.0 * b * t,
        }
    }

    pub fn wall_acceleration(&self, t: f64) -> f64 {
        match *self {
            Self::Static { .. } => 0.0,
            Self::Harmonic { b, omega, .. } => -b * omega * omega * (omega * t).cos(),
            Self::Expanding { b, .. } => 2.0 * b,
            Self::Contracting { b, .. } => -2.0 * b,
        }
    }

    /// Time at which a contracting wall reaches zero, if any.
    pub fn collapse_time(&self) -> Option<f64> {
        match *self {
            Self::Contracting { a, b } if b > 0.0 => Some((a / b).sqrt()),
            _ => None,
        }
    }

    /// Scans L on [0, t_final] at resolution `min(dt, t_final / 1e4)` and fails on the
    /// first non-positive sample.
    pub fn ensure_positive(&self, t_final: f64, dt: f64) -> Result<()> {
        let step = dt.min(t_final / 1e4);
        let samples = (t_final / step).ceil() as usize;
        for k in 0..=samples {
            let t = (k as f64 * step).min(t_final);
            self.wall_position(t)?;
        }
        Ok(())
    }
}

impl WallLaw for WallTrajectory {
    fn length(&self, t: f64) -> f64 {
        self.length_at(t)
    }
}

/// True iff L(t) = L(-t) exactly at every sample time.
pub fn check_pt_symmetry<W: WallLaw + ?Sized>(law: &W, times: &[f64]) -> bool {
    times.iter().all(|&t| law.length(t) == law.length(-t))
}
