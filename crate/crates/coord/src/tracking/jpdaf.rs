//! Joint probabilistic data association: feasible event enumeration, event
//! posteriors (uncoupled and coupled), marginal association probabilities,
//! and the coupled-filter update on the stacked state.

use super::TrackError;
use super::{GaussianBelief, LinearGaussianModel};
use nalgebra::{DMatrix, DVector};

/// Gating matrix with one row per measurement and columns `0..=m`; column 0
/// is "none of the targets" and is always admissible.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationMatrix {
    gates: Vec<Vec<bool>>,
    measurements: usize,
    targets: usize,
}

impl ValidationMatrix {
    /// All measurement/target pairs admissible.
    pub fn permissive(measurements: usize, targets: usize) -> Self {
        Self {
            gates: vec![vec![true; targets + 1]; measurements],
            measurements,
            targets,
        }
    }

    /// Forbid association of measurement `j` with target `t` (1-based;
    /// column 0 cannot be closed).
    pub fn forbid(&mut self, j: usize, t: usize) {
        assert!(t >= 1 && t <= self.targets, "target column out of range");
        self.gates[j][t] = false;
    }

    pub fn allows(&self, j: usize, t: usize) -> bool {
        self.gates[j][t]
    }

    pub fn measurements(&self) -> usize {
        self.measurements
    }

    pub fn targets(&self) -> usize {
        self.targets
    }
}

/// Builds the validation matrix from predicted measurements: `j` gates into
/// `t` when the normalized innovation squared is at most `chi2` (default
/// 9.21, the 99% point at two degrees of freedom).
pub fn gate(
    predictions: &[(DVector<f64>, DMatrix<f64>)],
    measurements: &[DVector<f64>],
    chi2: f64,
) -> Result<ValidationMatrix, TrackError> {
    let mut omega = ValidationMatrix::permissive(measurements.len(), predictions.len());
    for (j, y) in measurements.iter().enumerate() {
        for (t, (y_hat, s)) in predictions.iter().enumerate() {
            if y.len() != y_hat.len() {
                return Err(TrackError::Shape("measurement dimension mismatch".into()));
            }
            let nu = y - y_hat;
            let chol = s.clone().cholesky().ok_or(TrackError::SingularInnovation)?;
            let nis = nu.dot(&chol.solve(&nu));
            if nis > chi2 {
                omega.forbid(j, t + 1);
            }
        }
    }
    Ok(omega)
}

/// One feasible joint association: `assignment[j]` is the source of
/// measurement `j` (0 for clutter, `1..=m` for a target).
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationEvent {
    pub assignment: Vec<usize>,
}

impl AssociationEvent {
    /// Measurement assigned to 1-based target `t`, if any.
    pub fn measurement_for(&self, t: usize) -> Option<usize> {
        self.assignment.iter().position(|&a| a == t)
    }

    /// Target detection indicators, index 0 for target 1.
    pub fn detections(&self, targets: usize) -> Vec<bool> {
        (1..=targets)
            .map(|t| self.assignment.contains(&t))
            .collect()
    }

    /// Number of clutter (unassociated) measurements.
    pub fn false_count(&self) -> usize {
        self.assignment.iter().filter(|&&a| a == 0).count()
    }
}

const EVENT_GUARD: usize = 8;

/// All feasible joint association events: every measurement has exactly one
/// source it is gated into, and each target generates at most one
/// measurement.
pub fn enumerate_events(omega: &ValidationMatrix) -> Result<Vec<AssociationEvent>, TrackError> {
    let n = omega.measurements();
    let m = omega.targets();
    if n > EVENT_GUARD || m > EVENT_GUARD {
        return Err(TrackError::TooLarge(format!(
            "{n} measurements x {m} targets exceeds the enumeration guard"
        )));
    }
    let mut events = Vec::new();
    let mut assignment = vec![0usize; n];
    fn rec(
        omega: &ValidationMatrix,
        j: usize,
        used: &mut Vec<bool>,
        assignment: &mut Vec<usize>,
        events: &mut Vec<AssociationEvent>,
    ) {
        if j == assignment.len() {
            events.push(AssociationEvent { assignment: assignment.clone() });
            return;
        }
        assignment[j] = 0;
        rec(omega, j + 1, used, assignment, events);
        for t in 1..=omega.targets() {
            if omega.allows(j, t) && !used[t] {
                used[t] = true;
                assignment[j] = t;
                rec(omega, j + 1, used, assignment, events);
                assignment[j] = 0;
                used[t] = false;
            }
        }
    }
    let mut used = vec![false; m + 1];
    rec(omega, 0, &mut used, &mut assignment, &mut events);
    Ok(events)
}

/// Prior on the number of false measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClutterModel {
    /// Poisson count with mean `density * volume`.
    Poisson { density: f64 },
    /// Flat prior over counts; the factor cancels in normalization.
    Diffuse,
}

impl ClutterModel {
    fn mass(&self, count: usize, volume: f64) -> f64 {
        match self {
            ClutterModel::Poisson { density } => {
                let mean = density * volume;
                (-mean).exp() * mean.powi(count as i32) / factorial(count)
            }
            ClutterModel::Diffuse => 1.0,
        }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// Events with their normalized posterior probabilities.
#[derive(Debug, Clone)]
pub struct EventPosterior {
    pub events: Vec<AssociationEvent>,
    pub probs: Vec<f64>,
}

fn gaussian_pdf(y: &DVector<f64>, mean: &DVector<f64>, cov: &DMatrix<f64>) -> Result<f64, TrackError> {
    let chol = cov.clone().cholesky().ok_or(TrackError::SingularInnovation)?;
    let nu = y - mean;
    let maha = nu.dot(&chol.solve(&nu));
    let log_det: f64 = chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>() * 2.0;
    let d = y.len() as f64;
    Ok((-0.5 * (maha + log_det + d * (2.0 * std::f64::consts::PI).ln())).exp())
}

fn normalize(events: Vec<AssociationEvent>, weights: Vec<f64>) -> Result<EventPosterior, TrackError> {
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(TrackError::ZeroTotalMass);
    }
    Ok(EventPosterior {
        events,
        probs: weights.into_iter().map(|w| w / total).collect(),
    })
}

/// Event posterior under independent per-target measurement likelihoods.
///
/// The unnormalized weight of an event with `phi` false measurements out of
/// `n` is
///
/// ```text
/// phi! / m_k! * mu_F(phi) * V^-phi
///     * prod_{j associated} N(y_j; yhat_{t_j}, S_{t_j})
///     * prod_t P_D^delta_t (1 - P_D)^(1 - delta_t)
/// ```
///
/// with `m_k = n - phi` the number of target-originated measurements.
pub fn event_posterior_uncoupled(
    events: &[AssociationEvent],
    predictions: &[(DVector<f64>, DMatrix<f64>)],
    detection_prob: &[f64],
    clutter: &ClutterModel,
    volume: f64,
    measurements: &[DVector<f64>],
) -> Result<EventPosterior, TrackError> {
    let m = predictions.len();
    if detection_prob.len() != m {
        return Err(TrackError::Shape("one detection probability per target".into()));
    }
    if !(volume > 0.0) {
        return Err(TrackError::InvalidParams(format!("volume {volume} must be positive")));
    }
    let mut weights = Vec::with_capacity(events.len());
    for ev in events {
        let phi = ev.false_count();
        let m_k = measurements.len() - phi;
        let mut w = factorial(phi) / factorial(m_k)
            * clutter.mass(phi, volume)
            * volume.powi(-(phi as i32));
        for (j, &src) in ev.assignment.iter().enumerate() {
            if src >= 1 {
                let (y_hat, s) = &predictions[src - 1];
                w *= gaussian_pdf(&measurements[j], y_hat, s)?;
            }
        }
        for (t0, det) in ev.detections(m).iter().enumerate() {
            let pd = detection_prob[t0];
            w *= if *det { pd } else { 1.0 - pd };
        }
        weights.push(w);
    }
    normalize(events.to_vec(), weights)
}

/// Stacked multi-target belief: per-target means plus the joint covariance
/// (cross-covariance blocks included).
#[derive(Debug, Clone)]
pub struct StackedBelief {
    pub means: Vec<DVector<f64>>,
    pub cov: DMatrix<f64>,
}

impl StackedBelief {
    /// Block-diagonal stack of independent per-target beliefs.
    pub fn from_independent(beliefs: &[GaussianBelief]) -> Self {
        let total: usize = beliefs.iter().map(|b| b.mean.len()).sum();
        let mut cov = DMatrix::zeros(total, total);
        let mut off = 0;
        for b in beliefs {
            let n = b.mean.len();
            cov.view_mut((off, off), (n, n)).copy_from(&b.cov);
            off += n;
        }
        Self {
            means: beliefs.iter().map(|b| b.mean.clone()).collect(),
            cov,
        }
    }

    pub fn stacked_mean(&self) -> DVector<f64> {
        let total: usize = self.means.iter().map(DVector::len).sum();
        let mut v = DVector::zeros(total);
        let mut off = 0;
        for m in &self.means {
            v.rows_mut(off, m.len()).copy_from(m);
            off += m.len();
        }
        v
    }
}

/// Event posterior with a joint Gaussian likelihood over the detected
/// targets, honoring cross-covariances in the stacked prediction.
pub fn event_posterior_coupled(
    events: &[AssociationEvent],
    predicted: &StackedBelief,
    models: &[LinearGaussianModel],
    detection_prob: &[f64],
    clutter: &ClutterModel,
    volume: f64,
    measurements: &[DVector<f64>],
) -> Result<EventPosterior, TrackError> {
    let m = models.len();
    if detection_prob.len() != m || predicted.means.len() != m {
        return Err(TrackError::Shape("one model/P_D/mean per target".into()));
    }
    if !(volume > 0.0) {
        return Err(TrackError::InvalidParams(format!("volume {volume} must be positive")));
    }
    let state_offsets = offsets(models.iter().map(LinearGaussianModel::state_dim));

    let mut weights = Vec::with_capacity(events.len());
    for ev in events {
        let phi = ev.false_count();
        let m_k = measurements.len() - phi;
        let mut w = factorial(phi) / factorial(m_k)
            * clutter.mass(phi, volume)
            * volume.powi(-(phi as i32));

        // detected targets and their measurements, in target order
        let detected: Vec<(usize, usize)> = (0..m)
            .filter_map(|t0| ev.measurement_for(t0 + 1).map(|j| (t0, j)))
            .collect();
        if !detected.is_empty() {
            let y_dim: usize = detected
                .iter()
                .map(|&(t0, _)| models[t0].measurement_dim())
                .sum();
            let mut y = DVector::zeros(y_dim);
            let mut y_hat = DVector::zeros(y_dim);
            let mut c_sel = DMatrix::zeros(y_dim, predicted.cov.nrows());
            let mut r_sel = DMatrix::zeros(y_dim, y_dim);
            let mut row = 0;
            for &(t0, j) in &detected {
                let p = models[t0].measurement_dim();
                y.rows_mut(row, p).copy_from(&measurements[j]);
                y_hat
                    .rows_mut(row, p)
                    .copy_from(&(&models[t0].c * &predicted.means[t0]));
                c_sel
                    .view_mut((row, state_offsets[t0]), (p, models[t0].state_dim()))
                    .copy_from(&models[t0].c);
                r_sel.view_mut((row, row), (p, p)).copy_from(&models[t0].r);
                row += p;
            }
            let s = &c_sel * &predicted.cov * c_sel.transpose() + r_sel;
            w *= gaussian_pdf(&y, &y_hat, &s)?;
        }
        for (t0, det) in ev.detections(m).iter().enumerate() {
            let pd = detection_prob[t0];
            w *= if *det { pd } else { 1.0 - pd };
        }
        weights.push(w);
    }
    normalize(events.to_vec(), weights)
}

/// Marginal association probabilities `psi[j][t]`, `t = 0..=m`.
pub fn marginal_association_probs(posterior: &EventPosterior, measurements: usize, targets: usize) -> Vec<Vec<f64>> {
    let mut psi = vec![vec![0.0; targets + 1]; measurements];
    for (ev, &p) in posterior.events.iter().zip(&posterior.probs) {
        for (j, &src) in ev.assignment.iter().enumerate() {
            psi[j][src] += p;
        }
    }
    psi
}

fn offsets(dims: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut off = 0;
    let mut out = Vec::new();
    for d in dims {
        out.push(off);
        off += d;
    }
    out
}

/// Coupled filter measurement update on the stacked belief.
///
/// The stacked gain is `W = P C' (C P C' + R)^-1` with block-diagonal `C`
/// and `R`; each target's combined innovation is the association-probability
/// mix of its gated innovations, and the covariance update is
///
/// ```text
/// P <- P - (1 - psi_0) W S W' + W Stilde W'
/// ```
///
/// with `psi_0` the posterior probability that no measurement originated
/// from any target and `Stilde` the block-diagonal spread of innovations
/// (per-target blocks `sum_j psi_jt nu_jt nu_jt' - nu_t nu_t'`).
pub fn jpdacf_update(
    predicted: &StackedBelief,
    models: &[LinearGaussianModel],
    posterior: &EventPosterior,
    measurements: &[DVector<f64>],
) -> Result<StackedBelief, TrackError> {
    let m = models.len();
    if predicted.means.len() != m {
        return Err(TrackError::Shape("one predicted mean per target".into()));
    }
    let n_meas = measurements.len();
    let state_dims: Vec<usize> = models.iter().map(LinearGaussianModel::state_dim).collect();
    let meas_dims: Vec<usize> = models.iter().map(LinearGaussianModel::measurement_dim).collect();
    let state_off = offsets(state_dims.iter().copied());
    let meas_off = offsets(meas_dims.iter().copied());
    let total_state: usize = state_dims.iter().sum();
    let total_meas: usize = meas_dims.iter().sum();
    if predicted.cov.nrows() != total_state {
        return Err(TrackError::Shape("stacked covariance dimension mismatch".into()));
    }

    let mut c_full = DMatrix::zeros(total_meas, total_state);
    let mut r_full = DMatrix::zeros(total_meas, total_meas);
    for t0 in 0..m {
        c_full
            .view_mut((meas_off[t0], state_off[t0]), (meas_dims[t0], state_dims[t0]))
            .copy_from(&models[t0].c);
        r_full
            .view_mut((meas_off[t0], meas_off[t0]), (meas_dims[t0], meas_dims[t0]))
            .copy_from(&models[t0].r);
    }
    let s_full = &c_full * &predicted.cov * c_full.transpose() + &r_full;
    let chol = s_full.clone().cholesky().ok_or(TrackError::SingularInnovation)?;
    let gain = chol.solve(&(&c_full * &predicted.cov)).transpose();

    let psi = marginal_association_probs(posterior, n_meas, m);
    let psi_none: f64 = posterior
        .events
        .iter()
        .zip(&posterior.probs)
        .filter(|(ev, _)| ev.detections(m).iter().all(|d| !d))
        .map(|(_, &p)| p)
        .sum();

    // per-target combined innovations and spread blocks
    let mut nu_stacked = DVector::zeros(total_meas);
    let mut spread = DMatrix::zeros(total_meas, total_meas);
    for t0 in 0..m {
        let p = meas_dims[t0];
        let y_hat = &models[t0].c * &predicted.means[t0];
        let mut nu_t = DVector::zeros(p);
        let mut outer = DMatrix::zeros(p, p);
        for (j, y) in measurements.iter().enumerate() {
            let w = psi[j][t0 + 1];
            if w > 0.0 {
                let nu = y - &y_hat;
                nu_t += w * &nu;
                outer += w * &nu * nu.transpose();
            }
        }
        outer -= &nu_t * nu_t.transpose();
        nu_stacked.rows_mut(meas_off[t0], p).copy_from(&nu_t);
        spread.view_mut((meas_off[t0], meas_off[t0]), (p, p)).copy_from(&outer);
    }

    let correction = &gain * &nu_stacked;
    let means = (0..m)
        .map(|t0| &predicted.means[t0] + correction.rows(state_off[t0], state_dims[t0]))
        .collect();
    let mut cov = &predicted.cov - (1.0 - psi_none) * &gain * &s_full * gain.transpose()
        + &gain * spread * gain.transpose();
    let cov_t = cov.transpose();
    cov += cov_t;
    cov *= 0.5;
    Ok(StackedBelief { means, cov })
}

/// Per-target probabilistic data association update (uncoupled filtering):
/// same mixture construction as the coupled filter, restricted to one
/// target's gated measurements.
pub fn pda_update(
    predicted: &GaussianBelief,
    model: &LinearGaussianModel,
    measurements: &[DVector<f64>],
    assoc_probs: &[f64],
) -> Result<GaussianBelief, TrackError> {
    if assoc_probs.len() != measurements.len() {
        return Err(TrackError::Shape("one association probability per measurement".into()));
    }
    let total: f64 = assoc_probs.iter().sum();
    if total > 1.0 + 1e-9 {
        return Err(TrackError::Shape("association probabilities exceed 1".into()));
    }
    let miss = (1.0 - total).max(0.0);
    let s = &model.c * &predicted.cov * model.c.transpose() + &model.r;
    let chol = s.clone().cholesky().ok_or(TrackError::SingularInnovation)?;
    let gain = chol.solve(&(&model.c * &predicted.cov)).transpose();
    let y_hat = &model.c * &predicted.mean;

    let p = model.measurement_dim();
    let mut nu_bar = DVector::zeros(p);
    let mut outer = DMatrix::zeros(p, p);
    for (y, &w) in measurements.iter().zip(assoc_probs) {
        let nu = y - &y_hat;
        nu_bar += w * &nu;
        outer += w * &nu * nu.transpose();
    }
    outer -= &nu_bar * nu_bar.transpose();

    let mean = &predicted.mean + &gain * &nu_bar;
    let mut cov = &predicted.cov - (1.0 - miss) * &gain * &s * gain.transpose()
        + &gain * outer * gain.transpose();
    let cov_t = cov.transpose();
    cov += cov_t;
    cov *= 0.5;
    Ok(GaussianBelief { mean, cov })
}
