//! Closed-form measurement-noise covariances for three classic tracking
//! waveforms. Adapting the waveform parameters modulates `R`, which at a
//! higher level reads as adjusting the eigenvalues of `R^-1`: the probe
//! vector consumed by the detectors.

use super::TrackError;
use nalgebra::Matrix2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaveformKind {
    /// Triangular pulse, continuous wave; `theta` is the pulse half-width.
    TriangularCw { theta: f64 },
    /// Gaussian pulse, continuous wave; `theta` is the pulse length scale.
    GaussianCw { theta: f64 },
    /// Gaussian pulse with linear frequency modulation; `theta1` is the
    /// pulse length scale and `theta2` the chirp rate.
    GaussianLfmChirp { theta1: f64, theta2: f64 },
}

/// Waveform family and link-level constants: carrier frequency `omega_c`
/// (rad/s), signal-to-noise ratio `eta`, propagation speed `c` (m/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveformSpec {
    pub kind: WaveformKind,
    pub carrier: f64,
    pub snr: f64,
    pub lightspeed: f64,
}

impl WaveformSpec {
    fn validate(&self) -> Result<(), TrackError> {
        let bad = |name: &str, v: f64| {
            Err(TrackError::InvalidParams(format!("{name} = {v} must be positive")))
        };
        if !(self.carrier > 0.0) {
            return bad("omega_c", self.carrier);
        }
        if !(self.snr > 0.0) {
            return bad("eta", self.snr);
        }
        if !(self.lightspeed > 0.0) {
            return bad("c", self.lightspeed);
        }
        match self.kind {
            WaveformKind::TriangularCw { theta } | WaveformKind::GaussianCw { theta } => {
                if !(theta > 0.0) {
                    return bad("theta", theta);
                }
            }
            WaveformKind::GaussianLfmChirp { theta1, theta2 } => {
                if !(theta1 > 0.0) {
                    return bad("theta1", theta1);
                }
                if !theta2.is_finite() {
                    return bad("theta2", theta2);
                }
            }
        }
        Ok(())
    }
}

/// The 2x2 range/range-rate measurement covariance of the waveform.
///
/// The unmodulated Gaussian pulse is the chirp with zero chirp rate, which
/// fixes its range entry to `c^2 theta^2 / (2 eta)`.
pub fn waveform_covariance(spec: &WaveformSpec) -> Result<Matrix2<f64>, TrackError> {
    spec.validate()?;
    let c2 = spec.lightspeed * spec.lightspeed;
    let eta = spec.snr;
    let wc = spec.carrier;
    let r = match spec.kind {
        WaveformKind::TriangularCw { theta } => Matrix2::new(
            c2 * theta * theta / (12.0 * eta),
            0.0,
            0.0,
            5.0 * c2 / (2.0 * wc * wc * theta * theta * eta),
        ),
        WaveformKind::GaussianCw { theta } => Matrix2::new(
            c2 * theta * theta / (2.0 * eta),
            0.0,
            0.0,
            c2 / (2.0 * wc * wc * theta * theta * eta),
        ),
        WaveformKind::GaussianLfmChirp { theta1, theta2 } => {
            let t1sq = theta1 * theta1;
            let off = -c2 * theta2 * t1sq / (wc * eta);
            Matrix2::new(
                c2 * t1sq / (2.0 * eta),
                off,
                off,
                c2 / (wc * wc * eta) * (1.0 / (2.0 * t1sq) + 2.0 * theta2 * theta2 * t1sq),
            )
        }
    };
    Ok(r)
}
