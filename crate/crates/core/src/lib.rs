//! Correlated Gaussian wavepackets in a static harmonic trap.
//!
//! The closed-form width, curvature and Gouy phase live in [`dynamics`];
//! [`oracle`] re-derives the evolved state by direct quadrature of the
//! harmonic propagator so every closed form can be checked independently.
//! [`phase_space`] holds the covariance and Wigner machinery, [`estimation`]
//! the Fisher information for estimating the trap frequency, and [`cli`]
//! the sweep and figure-dataset drivers behind the `gouy` binary.

pub mod dynamics;
pub mod error;
pub mod model;

pub use error::{Error, Result};
pub use model::{gamma_to_pearson, pearson_to_gamma, PearsonCoefficient, UnitSystem, WavepacketSpec};
pub mod oracle;
pub mod phase_space;
pub mod estimation;
pub mod cli;
