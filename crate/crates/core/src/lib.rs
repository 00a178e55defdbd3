//! Spectral-Galerkin simulation of a quantum particle in a one-dimensional
//! PT-symmetric box whose wall moves in time.
//!
//! The box occupies [-L(t), L(t)] with Robin walls Ψ' + iαΨ = 0. After mapping
//! to a fixed interval the dynamics become a linear ODE system for cosine-mode
//! amplitudes, integrated here with RK4. From the amplitudes the crate
//! computes the average kinetic energy, the quantum force on the wall, the norm
//! and its boundary leakage rate, and the average position. A Dirichlet
//! (Hermitian) moving box is included as a baseline, and the geometric phase
//! of the static eigenstates around a harmonic wall cycle is evaluated both in
//! closed form and by direct quadrature.
//!
//! Units are ħ = m = 1.

pub mod berry;
pub mod config;
pub mod coupling;
pub mod error;
pub mod evolution;
pub mod hermitian;
pub mod integrator;
pub mod observables;
pub mod output;
pub mod quadrature;
pub mod spectrum;
pub mod sweep;
pub mod trajectory;

pub use num_complex::Complex64;

pub use config::{InitialState, RunConfig, SimulationConfig, StepControl};
pub use error::{Error, Result};
pub use evolution::{integrate, EvolutionRecord, ModeCoefficients};
pub use observables::{ObservableRow, ObservableSeries};
pub use trajectory::WallTrajectory;
