//! Coordination detection in tracked multi-agent networks.
//!
//! A radar-style observer probes a group of agents (precision weights
//! `alpha`) and records their maneuvers (process-noise eigenvalues `beta`).
//! This crate decides whether the recorded maneuvers are consistent with the
//! group jointly maximizing individual utilities under the shared linear
//! budget `alpha' * (sum beta) <= 1`, reconstructs utilities that rationalize
//! the data, and runs a noise-robust statistical detector with a Type-I
//! error guarantee. The physical-layer grounding (waveform-dependent
//! measurement covariance, Kalman/Riccati precision analysis, joint
//! probabilistic data association) lives in [`tracking`].
//!
//! Pipeline overview:
//!
//! * [`sim`] generates probe/maneuver datasets (coordinated or independent);
//! * [`revpref`] runs the deterministic feasibility test and reconstructs
//!   rationalizing utilities;
//! * [`statdetect`] handles noisy observations via the relaxation statistic
//!   and an empirical-CDF detector;
//! * [`lp`] is the dense two-phase simplex engine underneath;
//! * [`moo`] provides forward scalarized Pareto solutions and grid oracles.

pub mod data;
pub mod lp;
pub mod moo;
pub mod revpref;
pub mod rng;
pub mod sim;
pub mod statdetect;
pub mod tracking;

/// Formats a float with 9 significant digits, trimming trailing zeros, for
/// stable plot-ready CSV output.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (_, e) = sci.split_once('e').expect("scientific format");
    let exp: i32 = e.parse().expect("exponent parses");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let (m, _) = sci.split_once('e').unwrap();
        format!("{}e{}", trim_zeros(m.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
