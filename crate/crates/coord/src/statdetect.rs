//! Statistical coordination detector for noisy responses.
//!
//! The relaxation statistic of the observed dataset is compared against the
//! simulated distribution of the noise functional
//! `Psi = max_{i, t != s} alpha_t' (eps_t^i - eps_s^i)`: the detector keeps
//! the coordination hypothesis while the upper-tail mass at the statistic
//! exceeds the threshold `gamma`, which bounds the false-alarm probability
//! by `gamma`.

use crate::data::{NoiseModel, NoisyDataset, ProbeSignal};
use crate::revpref::{self, RelaxationSolution, RevPrefError};
use crate::rng::rng_stream;
use crate::sim::{self, Regime, ScenarioConfig, SimError};
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatError {
    #[error("gamma = {0} must lie strictly inside (0, 1)")]
    InvalidGamma(f64),
    #[error(transparent)]
    RevPref(#[from] RevPrefError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("{0}")]
    Shape(String),
}

/// Simulated draws of the noise functional.
#[derive(Debug, Clone)]
pub struct PsiSample {
    values: Vec<f64>,
}

impl PsiSample {
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Draws `count` independent realizations of
/// `max_{i, t != s} alpha_t' (eps_t^i - eps_s^i)` under the noise model.
/// Draw `l` comes from `rng_stream(seed, l)`, so the sample is reproducible
/// regardless of scheduling.
pub fn sample_psi(
    probes: &[ProbeSignal],
    agents: usize,
    noise: &NoiseModel,
    count: usize,
    seed: u64,
) -> Result<PsiSample, StatError> {
    if count == 0 {
        return Err(StatError::Shape("at least one draw required".into()));
    }
    if probes.is_empty() || agents == 0 {
        return Err(StatError::Shape("probes and agents must be nonempty".into()));
    }
    let t_len = probes.len();
    let dim = probes[0].dim();
    let sigma = noise.sigma();

    let mut values = Vec::with_capacity(count);
    for l in 0..count {
        let mut rng = rng_stream(seed, l as u64);
        // eps[i][t] simulated for every agent and epoch
        let eps: Vec<Vec<Vec<f64>>> = (0..agents)
            .map(|_| {
                (0..t_len)
                    .map(|_| {
                        (0..dim)
                            .map(|_| sigma * rng.sample::<f64, _>(StandardNormal))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut best = f64::NEG_INFINITY;
        for eps_i in &eps {
            for t in 0..t_len {
                for s in 0..t_len {
                    if s == t {
                        continue;
                    }
                    let diff: Vec<f64> = eps_i[t]
                        .iter()
                        .zip(&eps_i[s])
                        .map(|(a, b)| a - b)
                        .collect();
                    best = best.max(probes[t].dot(&diff));
                }
            }
        }
        // a single epoch admits no ordered pair: the functional is zero
        if t_len == 1 {
            best = 0.0;
        }
        values.push(best);
    }
    Ok(PsiSample { values })
}

/// Empirical distribution over a finite sample.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(sample: &PsiSample) -> Self {
        let mut sorted = sample.values.clone();
        sorted.sort_by(f64::total_cmp);
        Self { sorted }
    }

    /// `F(x)`: fraction of draws `<= x`.
    pub fn fraction_at_most(&self, x: f64) -> f64 {
        let k = self.sorted.partition_point(|&v| v <= x);
        k as f64 / self.sorted.len() as f64
    }

    /// Closed upper-tail mass: fraction of draws `>= x`. Coincides with
    /// `1 - F(x)` except on atoms; the closed boundary makes the degenerate
    /// zero-noise sample give statistic 1 at a zero relaxation level,
    /// matching deterministic detection.
    pub fn fraction_at_least(&self, x: f64) -> f64 {
        let k = self.sorted.partition_point(|&v| v < x);
        (self.sorted.len() - k) as f64 / self.sorted.len() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    H0Coordinated,
    H1NotCoordinated,
}

/// Detector output: the upper-tail statistic, the threshold it was compared
/// against, and the decision (`H0` iff `statistic > gamma`).
#[derive(Debug, Clone)]
pub struct DetectorVerdict {
    pub statistic: f64,
    pub gamma: f64,
    pub decision: Decision,
}

/// Verdict plus the relaxation level and the multiplier set saved from the
/// relaxed feasibility systems.
#[derive(Debug, Clone)]
pub struct DecideReport {
    pub verdict: DetectorVerdict,
    pub relaxation: RelaxationSolution,
}

/// Runs the full noisy-detector pipeline on an observed dataset.
pub fn decide(
    data: &NoisyDataset,
    gamma: f64,
    draws: usize,
    seed: u64,
) -> Result<DecideReport, StatError> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(StatError::InvalidGamma(gamma));
    }
    let relaxation = revpref::relaxation_solution(data.base())?;
    let psi = sample_psi(
        data.base().probes(),
        data.base().agents(),
        data.noise_model(),
        draws,
        seed,
    )?;
    let cdf = EmpiricalCdf::new(&psi);
    let statistic = cdf.fraction_at_least(relaxation.stat.overall);
    let decision = if statistic > gamma {
        Decision::H0Coordinated
    } else {
        Decision::H1NotCoordinated
    };
    Ok(DecideReport {
        verdict: DetectorVerdict { statistic, gamma, decision },
        relaxation,
    })
}

/// Runs `trials` independent trial closures over `threads` workers,
/// returning results in trial order. Each closure must derive all of its
/// randomness from the trial index so scheduling cannot matter.
fn run_trials<R, F>(trials: usize, threads: usize, f: F) -> Result<Vec<R>, StatError>
where
    R: Send,
    F: Fn(usize) -> Result<R, StatError> + Sync,
{
    let threads = threads.max(1).min(trials.max(1));
    if threads <= 1 {
        return (0..trials).map(&f).collect();
    }
    let mut slots: Vec<Option<Result<R, StatError>>> = Vec::with_capacity(trials);
    slots.resize_with(trials, || None);
    let mut chunks: Vec<&mut [Option<Result<R, StatError>>]> = Vec::new();
    let mut rest = slots.as_mut_slice();
    let per = trials.div_ceil(threads);
    while !rest.is_empty() {
        let take = per.min(rest.len());
        let (head, tail) = rest.split_at_mut(take);
        chunks.push(head);
        rest = tail;
    }
    std::thread::scope(|scope| {
        let f = &f;
        let mut base = 0usize;
        for chunk in chunks {
            let start = base;
            base += chunk.len();
            scope.spawn(move || {
                for (off, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(f(start + off));
                }
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every trial slot filled"))
        .collect()
}

fn noise_sigma(cfg: &ScenarioConfig) -> Result<f64, StatError> {
    match &cfg.noise {
        Some(nm) => Ok(nm.sigma()),
        None => Err(StatError::Shape(
            "scenario must carry a noise model for the statistical detector".into(),
        )),
    }
}

/// Statistic from one simulated trial of the configured scenario.
fn trial_statistic(
    cfg: &ScenarioConfig,
    gamma: f64,
    draws: usize,
    seed: u64,
    trial: u64,
) -> Result<DecideReport, StatError> {
    let mut root = rng_stream(seed, trial);
    let ds_seed: u64 = root.gen();
    let psi_seed: u64 = root.gen();
    let ds = sim::generate_dataset(cfg, ds_seed)?;
    let noisy = match ds {
        crate::data::Dataset::Noisy(n) => n,
        crate::data::Dataset::Clean(_) => {
            return Err(StatError::Shape("scenario produced a clean dataset".into()))
        }
    };
    decide(&noisy, gamma, draws, psi_seed)
}

/// Monte-Carlo estimate of the false-alarm rate: the fraction of simulated
/// coordinated noisy datasets the detector rejects. Bounded by `gamma` up
/// to Monte-Carlo error.
pub fn type1_error_estimate(
    cfg: &ScenarioConfig,
    gamma: f64,
    draws: usize,
    trials: usize,
    seed: u64,
    threads: usize,
) -> Result<f64, StatError> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(StatError::InvalidGamma(gamma));
    }
    if cfg.regime != Regime::Coordinated {
        return Err(StatError::Shape(
            "false-alarm estimation needs the coordinated regime".into(),
        ));
    }
    noise_sigma(cfg)?;
    let reports = run_trials(trials, threads, |k| {
        trial_statistic(cfg, gamma, draws, seed, k as u64)
    })?;
    let alarms = reports
        .iter()
        .filter(|r| r.verdict.decision == Decision::H1NotCoordinated)
        .count();
    Ok(alarms as f64 / trials as f64)
}

/// One row of the noise sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub sigma: f64,
    pub regime: Regime,
    pub mean_statistic: f64,
    pub std_statistic: f64,
    pub n_trials: usize,
}

/// Mean and sample standard deviation of the detector statistic across
/// Monte-Carlo repetitions, for both regimes at each noise level.
pub fn sweep(
    sigmas: &[f64],
    cfg: &ScenarioConfig,
    gamma: f64,
    draws: usize,
    trials: usize,
    seed: u64,
    threads: usize,
) -> Result<Vec<SweepRow>, StatError> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(StatError::InvalidGamma(gamma));
    }
    let mut rows = Vec::new();
    for (r_idx, regime) in [Regime::Coordinated, Regime::Independent].into_iter().enumerate() {
        for (s_idx, &sigma) in sigmas.iter().enumerate() {
            let mut cell = cfg.clone();
            cell.regime = regime;
            cell = cell.with_noise(sigma)?;
            let cell_seed = seed
                .wrapping_add(1 + r_idx as u64)
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(s_idx as u64);
            let reports = run_trials(trials, threads, |k| {
                trial_statistic(&cell, gamma, draws, cell_seed, k as u64)
            })?;
            let stats: Vec<f64> = reports.iter().map(|r| r.verdict.statistic).collect();
            let mean = stats.iter().sum::<f64>() / trials as f64;
            let var = if trials > 1 {
                stats.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (trials - 1) as f64
            } else {
                0.0
            };
            rows.push(SweepRow {
                sigma,
                regime,
                mean_statistic: mean,
                std_statistic: var.sqrt(),
                n_trials: trials,
            });
        }
    }
    Ok(rows)
}

/// CSV rendering of a sweep, one row per `(sigma, regime)`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("sigma,regime,mean_statistic,std_statistic,n_trials\n");
    for r in rows {
        let regime = match r.regime {
            Regime::Coordinated => "H0",
            Regime::Independent => "H1",
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            crate::fmt_sig(r.sigma),
            regime,
            crate::fmt_sig(r.mean_statistic),
            crate::fmt_sig(r.std_statistic),
            r.n_trials
        ));
    }
    out
}
