use std::path::PathBuf;

/// Errors raised by the simulator.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("wall collapsed: L({t}) = {length} is not positive")]
    WallCollapsed { t: f64, length: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("config `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("trajectory is not PT-symmetric: L(t) != L(-t) at t = {t}")]
    NotPtSymmetric { t: f64 },

    #[error("position x = {x} lies outside the box [-{half_width}, {half_width}]")]
    OutsideBox { x: f64, half_width: f64 },

    #[error("step size underflow at t = {t} (h = {step:e})")]
    StepUnderflow { t: f64, step: f64 },

    #[error("non-finite mode coefficient at t = {t}")]
    NonFinite { t: f64 },

    #[error("{what}: quadrature did not converge under point doubling (change {change:e})")]
    QuadratureNotConverged { what: String, change: f64 },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Short machine-readable category, used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::WallCollapsed { .. } => "wall_collapsed",
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::Config { .. } => "config",
            Error::NotPtSymmetric { .. } => "not_pt_symmetric",
            Error::OutsideBox { .. } => "outside_box",
            Error::StepUnderflow { .. } => "step_underflow",
            Error::NonFinite { .. } => "non_finite",
            Error::QuadratureNotConverged { .. } => "quadrature",
            Error::Io { .. } => "io",
        }
    }

    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
