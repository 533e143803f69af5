//! Two-timescale interaction simulator: slow-scale probe/maneuver datasets
//! for the detectors, and fast-scale state/measurement trajectories showing
//! how maneuvers would be recovered by the tracker in the first place.
//!
//! The slow-scale detectors consume maneuvers directly, as if the fast-scale
//! tracker recovered them perfectly; [`simulate_fast_scale`] exists to
//! demonstrate and measure that recovery pathway, not to gate detection.

use crate::data::{
    Dataset, InteractionDataset, Maneuver, NoiseModel, NoisyDataset, ProbeSignal, SimplexWeights,
    validate_dataset, DataError,
};
use crate::moo::{self, MooError, ScalarizedProblem, UtilitySpec};
use crate::rng::rng_stream;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    Moo(#[from] MooError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("invalid scenario: {0}")]
    Config(String),
}

/// How the agents respond to probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Joint weighted-sum maximization under the shared budget.
    Coordinated,
    /// Responses drawn i.i.d. uniform on `[0, 1]^N`, ignoring the budget.
    Independent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbeLaw {
    /// Probe components i.i.d. uniform on `[lo, hi]`; `lo` must be positive
    /// so that `R = diag(alpha)^-1` exists.
    UniformBox { lo: f64, hi: f64 },
}

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub agents: usize,
    pub epochs: usize,
    pub dim: usize,
    pub probe_law: ProbeLaw,
    pub utilities: Vec<UtilitySpec>,
    pub weights: SimplexWeights,
    pub regime: Regime,
    pub noise: Option<NoiseModel>,
    /// Fast-scale steps per epoch.
    pub fast_steps: usize,
    /// Convergence tolerance handed to the scalarized solver.
    pub solve_tol: f64,
}

impl ScenarioConfig {
    /// Standard two-dimensional scenario: agent `i` gets the `i mod 3`-th of
    /// the three stock power-law profiles, equal weights, probes uniform on
    /// `[0.1, 1.1]^2`.
    pub fn standard(agents: usize, epochs: usize, regime: Regime) -> Self {
        Self {
            agents,
            epochs,
            dim: 2,
            probe_law: ProbeLaw::UniformBox { lo: 0.1, hi: 1.1 },
            utilities: default_utilities(agents),
            weights: SimplexWeights::equal(agents),
            regime,
            noise: None,
            fast_steps: 100,
            solve_tol: 1e-9,
        }
    }

    pub fn with_noise(mut self, sigma: f64) -> Result<Self, SimError> {
        self.noise = Some(NoiseModel::iid_gaussian(sigma)?);
        Ok(self)
    }

    fn validate(&self) -> Result<(), SimError> {
        if self.agents == 0 || self.epochs == 0 || self.dim == 0 {
            return Err(SimError::Config("M, T and N must all be positive".into()));
        }
        let ProbeLaw::UniformBox { lo, hi } = self.probe_law;
        if !(lo > 0.0) || !(hi > lo) {
            return Err(SimError::Config(format!(
                "probe box [{lo}, {hi}] needs 0 < lo < hi"
            )));
        }
        if self.regime == Regime::Coordinated {
            if self.utilities.len() != self.agents {
                return Err(SimError::Config(format!(
                    "{} utilities for {} agents",
                    self.utilities.len(),
                    self.agents
                )));
            }
            if self.utilities.iter().any(|u| u.dim() != self.dim) {
                return Err(SimError::Config("utility dimension differs from N".into()));
            }
            if self.weights.len() != self.agents {
                return Err(SimError::Config("weight count differs from M".into()));
            }
        }
        Ok(())
    }
}

/// The three stock two-dimensional utility profiles, cycled over agents:
/// a quartic `(b1*b2)^2`, `sqrt(b1)*b2`, and `b1*sqrt(b2)`.
pub fn default_utilities(agents: usize) -> Vec<UtilitySpec> {
    let stock = [
        UtilitySpec::power(vec![1.0, 1.0], 2.0).unwrap(),
        UtilitySpec::power(vec![0.5, 1.0], 1.0).unwrap(),
        UtilitySpec::power(vec![1.0, 0.5], 1.0).unwrap(),
    ];
    (0..agents).map(|i| stock[i % 3].clone()).collect()
}

// Epochs draw from three interleaved streams so that the clean maneuvers of
// a noisy scenario coincide with the noise-free scenario at the same seed.
fn probe_stream(seed: u64, t: usize) -> crate::rng::RngStream {
    rng_stream(seed, 3 * t as u64)
}
fn response_stream(seed: u64, t: usize) -> crate::rng::RngStream {
    rng_stream(seed, 3 * t as u64 + 1)
}
fn noise_stream(seed: u64, t: usize) -> crate::rng::RngStream {
    rng_stream(seed, 3 * t as u64 + 2)
}

/// Generates a probe/response dataset under the configured regime; epochs
/// are independent given their random streams.
pub fn generate_dataset(cfg: &ScenarioConfig, seed: u64) -> Result<Dataset, SimError> {
    cfg.validate()?;
    let ProbeLaw::UniformBox { lo, hi } = cfg.probe_law;

    let mut probes = Vec::with_capacity(cfg.epochs);
    let mut clean: Vec<Vec<Maneuver>> = Vec::with_capacity(cfg.epochs);
    for t in 0..cfg.epochs {
        let mut rng = probe_stream(seed, t);
        let alpha: Vec<f64> = (0..cfg.dim).map(|_| rng.gen_range(lo..hi)).collect();
        let probe = ProbeSignal::new(alpha)?;

        let responses = match cfg.regime {
            Regime::Coordinated => {
                let prob = ScalarizedProblem::new(
                    cfg.utilities.clone(),
                    cfg.weights.clone(),
                    probe.clone(),
                )?;
                moo::solve_scalarized(&prob, cfg.solve_tol)?.responses
            }
            Regime::Independent => {
                let mut rng = response_stream(seed, t);
                (0..cfg.agents)
                    .map(|_| {
                        Maneuver::new((0..cfg.dim).map(|_| rng.gen_range(0.0..1.0)).collect())
                    })
                    .collect::<Result<Vec<_>, _>>()?
            }
        };
        probes.push(probe);
        clean.push(responses);
    }

    match &cfg.noise {
        None => {
            let ds = InteractionDataset::new(probes, clean)?;
            Ok(Dataset::Clean(validate_dataset(ds)?))
        }
        Some(nm) => {
            let sigma = nm.sigma();
            let mut observed = Vec::with_capacity(cfg.epochs);
            for (t, row) in clean.iter().enumerate() {
                let mut rng = noise_stream(seed, t);
                let noisy_row = row
                    .iter()
                    .map(|b| {
                        Maneuver::observed(
                            b.values()
                                .iter()
                                .map(|&v| v + sigma * rng.sample::<f64, _>(StandardNormal))
                                .collect(),
                        )
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                observed.push(noisy_row);
            }
            let base = InteractionDataset::new(probes, observed)?;
            Ok(Dataset::Noisy(NoisyDataset::new(base, nm.clone())))
        }
    }
}

/// Fast-scale sample paths for a set of targets under one epoch's probe and
/// maneuvers: states follow `x' = A x + w`, measurements `y = C x + v`,
/// with `w ~ N(0, diag(beta_i))` and `v ~ N(0, diag(alpha)^-1)`.
#[derive(Debug, Clone)]
pub struct FastTrajectories {
    /// `states[i][k]`, `k = 0..=K`.
    pub states: Vec<Vec<DVector<f64>>>,
    /// `measurements[i][k]`, `k = 0..K` (measurement of `states[i][k+1]`).
    pub measurements: Vec<Vec<DVector<f64>>>,
}

pub fn simulate_fast_scale(
    a: &DMatrix<f64>,
    c: &DMatrix<f64>,
    alpha: &ProbeSignal,
    betas: &[Maneuver],
    steps: usize,
    seed: u64,
) -> Result<FastTrajectories, SimError> {
    let n = a.nrows();
    if a.ncols() != n || c.ncols() != n {
        return Err(SimError::Config("A must be square and C conformable".into()));
    }
    if alpha.dim() != c.nrows() {
        return Err(SimError::Config("probe dimension must match C rows".into()));
    }
    if alpha.values().iter().any(|&v| v <= 0.0) {
        return Err(SimError::Config(
            "fast-scale simulation needs a strictly positive probe".into(),
        ));
    }
    let meas_std: Vec<f64> = alpha.values().iter().map(|&v| (1.0 / v).sqrt()).collect();

    let mut states = Vec::with_capacity(betas.len());
    let mut measurements = Vec::with_capacity(betas.len());
    for (i, beta) in betas.iter().enumerate() {
        if beta.dim() != n {
            return Err(SimError::Config("maneuver dimension must match A".into()));
        }
        let proc_std: Vec<f64> = beta.values().iter().map(|&v| v.max(0.0).sqrt()).collect();
        let mut rng = rng_stream(seed, i as u64);
        let mut x = DVector::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)));
        let mut xs = Vec::with_capacity(steps + 1);
        let mut ys = Vec::with_capacity(steps);
        xs.push(x.clone());
        for _ in 0..steps {
            let w = DVector::from_iterator(
                n,
                proc_std.iter().map(|s| s * rng.sample::<f64, _>(StandardNormal)),
            );
            x = a * &x + w;
            let v = DVector::from_iterator(
                meas_std.len(),
                meas_std.iter().map(|s| s * rng.sample::<f64, _>(StandardNormal)),
            );
            ys.push(c * &x + v);
            xs.push(x.clone());
        }
        states.push(xs);
        measurements.push(ys);
    }
    Ok(FastTrajectories { states, measurements })
}

/// Sample covariance of the state increments `x_{k+1} - A x_k`; with the
/// true states this estimates the process-noise covariance, which is how
/// the observer recovers a maneuver from tracked states.
pub fn estimate_process_covariance(states: &[DVector<f64>], a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let k = states.len().saturating_sub(1);
    let mut cov = DMatrix::zeros(n, n);
    for w in states.windows(2) {
        let inc = &w[1] - a * &w[0];
        cov += &inc * inc.transpose();
    }
    if k > 0 {
        cov /= k as f64;
    }
    cov
}

/// Sorted eigenvalues of a symmetric matrix, ascending.
pub fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut vals: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}
