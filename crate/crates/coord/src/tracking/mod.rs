//! Physical-layer grounding for the budget constraint: waveform-dependent
//! measurement covariances, the decoupled Kalman filter with its steady-state
//! Riccati analysis, and joint probabilistic data association for the
//! multi-target case.
//!
//! The link to the detectors upstream: with `Q = diag(beta)` and
//! `R = diag(alpha)^-1`, the steady-state predicted precision is monotone
//! increasing in the probe `alpha` and decreasing in the maneuver `beta`,
//! which is what lets a cap on average tracking precision be written as the
//! linear inequality `alpha' * (sum_i beta_i) <= 1`.

mod jpdaf;
mod kalman;
mod waveform;

pub use jpdaf::{
    enumerate_events, event_posterior_coupled, event_posterior_uncoupled, gate,
    jpdacf_update, marginal_association_probs, pda_update, AssociationEvent, ClutterModel,
    EventPosterior, StackedBelief, ValidationMatrix,
};
pub use kalman::{
    kalman_predict, kalman_step, precision, solve_are, GaussianBelief, LinearGaussianModel,
};
pub use waveform::{waveform_covariance, WaveformKind, WaveformSpec};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TrackError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("innovation covariance is singular")]
    SingularInnovation,
    #[error("[A, C] is not detectable")]
    NotDetectable,
    #[error("[A, sqrt(Q)] is not stabilizable")]
    NotStabilizable,
    #[error("Riccati iteration did not converge")]
    NoConvergence,
    #[error("steady-state covariance is singular; precision is unbounded")]
    SingularCovariance,
    #[error("combinatorial guard: {0}")]
    TooLarge(String),
    #[error("all event weights vanished; inconsistent gating")]
    ZeroTotalMass,
    #[error("shape error: {0}")]
    Shape(String),
}
