//! Autocorrelation and coherence time of air-to-ground wireless channels.
//!
//! The channel between a moving base station (e.g. a LEO satellite) and a
//! moving ground user is a Rician mix of a deterministic line-of-sight path
//! and a scattered component whose scatterers lie on a sphere around the user
//! with a von-Mises–Fisher angular density. Doppler phases are evaluated in
//! exact integral (closed) form, beam patterns are `cos^q` lobes, and the
//! scattered autocorrelation is a spherical integral evaluated by adaptive
//! quadrature. A discrete-scatterer Monte-Carlo generator serves as an
//! independent check of that integral.
//!
//! Units throughout: meters, seconds, radians, hertz. Phases are in cycles.

pub mod antenna;
pub mod channel;
pub mod coherence;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod quadrature;
pub mod scatter;
pub mod scenarios;
pub mod units;

pub use antenna::BeamConfig;
pub use channel::{Autocorr, RicianK, Scenario};
pub use coherence::{CoherenceResult, CoherenceTime, TauGrid};
pub use error::{Error, Result};
pub use geometry::{BodyState, SolidAngle, Vec3};
pub use quadrature::QuadSpec;
pub use scatter::VmfField;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
