//! Forward multi-objective machinery: scalarized Pareto-optimal response
//! generation under the shared linear budget, plus brute-force grid oracles
//! used by tests and the simulator.
//!
//! The scalarized problem maximizes `sum_i mu_i * f_i(beta_i)` subject to
//! `alpha' * (sum_i beta_i) <= 1` and `beta >= 0`. With strictly positive
//! weights any maximizer is Pareto-optimal, which is what the simulator
//! relies on to produce coordinated datasets.

use crate::data::{Maneuver, ProbeSignal, SimplexWeights};
use crate::rng::rng_stream;
use rand::Rng;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MooError {
    #[error("utility {agent} failed the sampled concavity check")]
    NonConcaveUtility { agent: usize },
    #[error("ascent did not converge from any start")]
    DidNotConverge,
    #[error("grid too large: {0}")]
    TooLarge(String),
    #[error("weights must be strictly positive")]
    WeightsNotStrict,
    #[error("malformed problem: {0}")]
    Shape(String),
}

/// Opaque user-supplied utility. The contract is concave, continuous and
/// monotone increasing on the nonnegative orthant; concavity is spot-checked
/// by sampling before the solver will touch it.
#[derive(Clone)]
pub struct CustomUtility {
    dim: usize,
    eval: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
}

impl fmt::Debug for CustomUtility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomUtility(dim={})", self.dim)
    }
}

/// A single agent's utility over its own maneuver vector.
#[derive(Debug, Clone)]
pub enum UtilitySpec {
    /// `f(beta) = (prod_n beta_n^{p_n})^q`. Concave iff `q * sum_n p_n <= 1`;
    /// non-concave specs are accepted but flagged by the solver.
    Power { exponents: Vec<f64>, power: f64 },
    Custom(CustomUtility),
}

impl UtilitySpec {
    /// Power-law utility. Exponents lie in `[0, 1]` with at least one
    /// positive entry (a zero exponent drops that component), `q > 0`.
    pub fn power(exponents: Vec<f64>, power: f64) -> Result<Self, MooError> {
        if exponents.is_empty() {
            return Err(MooError::Shape("no exponents".into()));
        }
        for &p in &exponents {
            if !(0.0..=1.0).contains(&p) {
                return Err(MooError::Shape(format!("exponent {p} outside [0, 1]")));
            }
        }
        if !exponents.iter().any(|&p| p > 0.0) {
            return Err(MooError::Shape("all exponents zero".into()));
        }
        if !(power > 0.0) || !power.is_finite() {
            return Err(MooError::Shape(format!("power {power} must be positive")));
        }
        Ok(Self::Power { exponents, power })
    }

    pub fn custom<F>(dim: usize, eval: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::Custom(CustomUtility { dim, eval: Arc::new(eval) })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Power { exponents, .. } => exponents.len(),
            Self::Custom(c) => c.dim,
        }
    }

    /// For the power family, concavity holds exactly when
    /// `q * sum p_n <= 1`. Custom utilities are assumed concave here and
    /// spot-checked separately.
    pub fn is_concave(&self) -> bool {
        match self {
            Self::Power { exponents, power } => {
                power * exponents.iter().sum::<f64>() <= 1.0 + 1e-12
            }
            Self::Custom(_) => true,
        }
    }

    /// Effective per-component exponents `q * p_n` of the power form.
    fn effective_exponents(&self) -> Option<Vec<f64>> {
        match self {
            Self::Power { exponents, power } => {
                Some(exponents.iter().map(|p| p * power).collect())
            }
            Self::Custom(_) => None,
        }
    }

    pub fn evaluate(&self, beta: &[f64]) -> f64 {
        match self {
            Self::Power { exponents, power } => {
                let mut prod = 1.0;
                for (&b, &p) in beta.iter().zip(exponents) {
                    if p == 0.0 {
                        continue;
                    }
                    let b = b.max(0.0);
                    prod *= b.powf(p);
                }
                prod.powf(*power)
            }
            Self::Custom(c) => (c.eval)(beta),
        }
    }

    /// Ascent gradient; boundary components use one-sided clamped values
    /// capped at `GRAD_CAP` to avoid the infinite slope of roots at zero.
    fn gradient(&self, beta: &[f64], out: &mut [f64]) {
        const EPS: f64 = 1e-12;
        match self {
            Self::Power { .. } => {
                let e = self.effective_exponents().unwrap();
                let mut prod = 1.0;
                for (&b, &en) in beta.iter().zip(&e) {
                    if en != 0.0 {
                        prod *= b.max(EPS).powf(en);
                    }
                }
                for ((g, &b), &en) in out.iter_mut().zip(beta).zip(&e) {
                    *g = if en == 0.0 {
                        0.0
                    } else {
                        (en * prod / b.max(EPS)).min(GRAD_CAP)
                    };
                }
            }
            Self::Custom(c) => {
                let h = 1e-6;
                let mut work = beta.to_vec();
                for n in 0..beta.len() {
                    let lo = (beta[n] - h).max(0.0);
                    let hi = beta[n] + h;
                    work[n] = hi;
                    let fh = (c.eval)(&work);
                    work[n] = lo;
                    let fl = (c.eval)(&work);
                    work[n] = beta[n];
                    out[n] = ((fh - fl) / (hi - lo)).min(GRAD_CAP);
                }
            }
        }
    }

    /// Sampled midpoint-concavity check used to vet custom utilities.
    fn passes_midpoint_concavity(&self, samples: usize) -> bool {
        let dim = self.dim();
        let mut rng = rng_stream(0xC0CA, 0);
        let mut a = vec![0.0; dim];
        let mut b = vec![0.0; dim];
        let mut mid = vec![0.0; dim];
        for _ in 0..samples {
            for n in 0..dim {
                a[n] = rng.gen_range(0.0..2.0);
                b[n] = rng.gen_range(0.0..2.0);
                mid[n] = 0.5 * (a[n] + b[n]);
            }
            let fa = self.evaluate(&a);
            let fb = self.evaluate(&b);
            let fm = self.evaluate(&mid);
            if fm + 1e-9 < 0.5 * (fa + fb) {
                return false;
            }
        }
        true
    }
}

const GRAD_CAP: f64 = 1e6;

/// Weighted-sum problem over the joint budget polytope.
#[derive(Debug, Clone)]
pub struct ScalarizedProblem {
    pub utilities: Vec<UtilitySpec>,
    pub weights: SimplexWeights,
    pub probe: ProbeSignal,
}

impl ScalarizedProblem {
    pub fn new(
        utilities: Vec<UtilitySpec>,
        weights: SimplexWeights,
        probe: ProbeSignal,
    ) -> Result<Self, MooError> {
        if utilities.is_empty() {
            return Err(MooError::Shape("no utilities".into()));
        }
        if weights.len() != utilities.len() {
            return Err(MooError::Shape(format!(
                "{} weights for {} utilities",
                weights.len(),
                utilities.len()
            )));
        }
        let n = probe.dim();
        if utilities.iter().any(|u| u.dim() != n) {
            return Err(MooError::Shape(
                "utility dimension differs from probe dimension".into(),
            ));
        }
        Ok(Self { utilities, weights, probe })
    }

    pub fn agents(&self) -> usize {
        self.utilities.len()
    }

    pub fn dim(&self) -> usize {
        self.probe.dim()
    }

    /// Budget weight vector over the flattened joint maneuver (agent-major).
    fn flat_budget(&self) -> Vec<f64> {
        let n = self.dim();
        let mut w = Vec::with_capacity(self.agents() * n);
        for _ in 0..self.agents() {
            w.extend_from_slice(self.probe.values());
        }
        w
    }

    /// Weighted-sum objective on the flattened joint maneuver.
    pub fn objective(&self, flat: &[f64]) -> f64 {
        let n = self.dim();
        self.utilities
            .iter()
            .zip(self.weights.values())
            .enumerate()
            .map(|(i, (u, &mu))| mu * u.evaluate(&flat[i * n..(i + 1) * n]))
            .sum()
    }

    fn gradient(&self, flat: &[f64], out: &mut [f64]) {
        let n = self.dim();
        for (i, (u, &mu)) in self.utilities.iter().zip(self.weights.values()).enumerate() {
            let block = &mut out[i * n..(i + 1) * n];
            u.gradient(&flat[i * n..(i + 1) * n], block);
            for g in block.iter_mut() {
                *g *= mu;
            }
        }
    }
}

/// Non-fatal diagnostics from the scalarized solver.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveWarning {
    /// A power-law utility violates `q * sum p <= 1`; the solver still runs
    /// multi-start ascent but global optimality is best-effort.
    NonConcaveUtility { agent: usize },
}

#[derive(Debug, Clone)]
pub struct ScalarizedSolution {
    pub responses: Vec<Maneuver>,
    pub objective: f64,
    pub warnings: Vec<SolveWarning>,
}

/// Projects `v` onto `{z >= 0, w'z <= 1}` in place (Euclidean projection).
fn project_budget(v: &mut [f64], w: &[f64]) {
    for z in v.iter_mut() {
        if *z < 0.0 {
            *z = 0.0;
        }
    }
    let used: f64 = v.iter().zip(w).map(|(z, wi)| z * wi).sum();
    if used <= 1.0 {
        return;
    }
    // Solve sum_i w_i * max(0, v_i - nu*w_i) = 1 for nu > 0 by bisection;
    // the left side is continuous, piecewise linear and decreasing.
    let mut hi = v
        .iter()
        .zip(w)
        .filter(|(_, &wi)| wi > 0.0)
        .map(|(&vi, &wi)| vi / wi)
        .fold(0.0f64, f64::max);
    let mut lo = 0.0;
    let g = |nu: f64, v: &[f64]| -> f64 {
        v.iter()
            .zip(w)
            .filter(|(_, &wi)| wi > 0.0)
            .map(|(&vi, &wi)| wi * (vi - nu * wi).max(0.0))
            .sum()
    };
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if g(mid, v) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let nu = 0.5 * (lo + hi);
    for (z, &wi) in v.iter_mut().zip(w) {
        if wi > 0.0 {
            *z = (*z - nu * wi).max(0.0);
        }
    }
}

/// One projected-gradient ascent run with backtracking line search.
fn ascend(
    prob: &ScalarizedProblem,
    start: Vec<f64>,
    w: &[f64],
    tol: f64,
) -> (Vec<f64>, f64, bool) {
    let mut z = start;
    project_budget(&mut z, w);
    let mut obj = prob.objective(&z);
    let mut grad = vec![0.0; z.len()];
    let mut cand = vec![0.0; z.len()];
    let mut step = 0.1;
    let mut converged = false;
    for _ in 0..2000 {
        prob.gradient(&z, &mut grad);
        let mut improved = false;
        for _ in 0..45 {
            for ((c, &zi), &g) in cand.iter_mut().zip(&z).zip(&grad) {
                *c = zi + step * g;
            }
            project_budget(&mut cand, w);
            let cand_obj = prob.objective(&cand);
            if cand_obj > obj && cand_obj.is_finite() && cand.iter().all(|v| v.is_finite()) {
                let delta = cand_obj - obj;
                z.copy_from_slice(&cand);
                obj = cand_obj;
                step *= 1.5;
                improved = true;
                if delta < tol * (1.0 + obj.abs()) {
                    converged = true;
                }
                break;
            }
            step *= 0.5;
            if step < 1e-18 {
                break;
            }
        }
        if obj > 1e30 {
            // runaway direction: the budget fails to bound this problem
            converged = false;
            break;
        }
        if !improved {
            // no ascent at line-search resolution: stationary point
            converged = true;
            break;
        }
        if converged {
            break;
        }
    }
    (z, obj, converged)
}

/// Closed-form per-agent bundle for a power-law utility given a budget
/// share `s`: component `n` receives the fraction `e_n / sum(e)` of it.
fn power_bundle(effective: &[f64], share: f64, alpha: &[f64]) -> Vec<f64> {
    let d: f64 = effective.iter().sum();
    effective
        .iter()
        .zip(alpha)
        .map(|(&e, &a)| if e > 0.0 { e / d * share / a } else { 0.0 })
        .collect()
}

/// Deterministic start derived from the budget-share decomposition of pure
/// power-law problems: for fixed shares the per-agent bundle is closed form,
/// so only the M-dimensional share split needs searching.
fn share_start(prob: &ScalarizedProblem) -> Option<Vec<f64>> {
    let n = prob.dim();
    let m = prob.agents();
    if prob.probe.values().iter().any(|&a| a <= 0.0) {
        return None;
    }
    let eff: Vec<Vec<f64>> = prob
        .utilities
        .iter()
        .map(|u| u.effective_exponents())
        .collect::<Option<Vec<_>>>()?;
    let alpha = prob.probe.values();
    let value = |shares: &[f64]| -> f64 {
        shares
            .iter()
            .zip(&eff)
            .zip(prob.weights.values())
            .map(|((&s, e), &mu)| mu * bundle_value(e, s, alpha))
            .sum()
    };

    let mut best_shares = vec![1.0 / m as f64; m];
    if m > 1 && m <= 4 {
        let mut best_val = value(&best_shares);
        // coarse simplex grid, then a few zoom rounds around the incumbent
        let mut center = best_shares.clone();
        let mut radius = 1.0;
        for round in 0..5 {
            let ticks: usize = if round == 0 { 25 } else { 10 };
            let mut shares = vec![0.0; m];
            let mut stack = vec![0usize; m - 1];
            'grid: loop {
                let mut rem = 1.0;
                let mut ok = true;
                for (d, &k) in stack.iter().enumerate() {
                    let lo = (center[d] - radius).max(0.0);
                    let hi = (center[d] + radius).min(1.0);
                    let s = lo + (hi - lo) * k as f64 / ticks as f64;
                    if s > rem {
                        ok = false;
                        break;
                    }
                    shares[d] = s;
                    rem -= s;
                }
                if ok {
                    shares[m - 1] = rem;
                    let v = value(&shares);
                    if v > best_val {
                        best_val = v;
                        best_shares.copy_from_slice(&shares);
                    }
                }
                // odometer increment over the free share coordinates
                let mut d = 0;
                loop {
                    if d == m - 1 {
                        break 'grid;
                    }
                    stack[d] += 1;
                    if stack[d] <= ticks {
                        break;
                    }
                    stack[d] = 0;
                    d += 1;
                }
            }
            center.copy_from_slice(&best_shares);
            radius *= 0.25;
        }
    }

    let mut flat = vec![0.0; m * n];
    for (i, e) in eff.iter().enumerate() {
        let bundle = power_bundle(e, best_shares[i], alpha);
        flat[i * n..(i + 1) * n].copy_from_slice(&bundle);
    }
    Some(flat)
}

fn bundle_value(effective: &[f64], share: f64, alpha: &[f64]) -> f64 {
    let bundle = power_bundle(effective, share, alpha);
    let mut prod = 1.0;
    for (&b, &e) in bundle.iter().zip(effective) {
        if e > 0.0 {
            prod *= b.max(0.0).powf(e);
        }
    }
    prod
}

/// Rescales the solution's budget shares to exhaust the budget and rebuilds
/// each block with the closed-form bundle; only valid for pure power-law
/// problems, and only kept when it improves the objective.
fn share_polish(prob: &ScalarizedProblem, flat: &[f64]) -> Option<Vec<f64>> {
    let n = prob.dim();
    let m = prob.agents();
    if prob.probe.values().iter().any(|&a| a <= 0.0) {
        return None;
    }
    let eff: Vec<Vec<f64>> = prob
        .utilities
        .iter()
        .map(|u| u.effective_exponents())
        .collect::<Option<Vec<_>>>()?;
    let alpha = prob.probe.values();
    let mut shares: Vec<f64> = (0..m)
        .map(|i| prob.probe.dot(&flat[i * n..(i + 1) * n]))
        .collect();
    let total: f64 = shares.iter().sum();
    if !(total > 0.0) {
        return None;
    }
    for s in &mut shares {
        *s /= total;
    }
    let mut out = vec![0.0; m * n];
    for (i, e) in eff.iter().enumerate() {
        out[i * n..(i + 1) * n].copy_from_slice(&power_bundle(e, shares[i], alpha));
    }
    Some(out)
}

/// Maximizes the weighted-sum objective over the budget polytope by
/// multi-start projected gradient ascent, with a deterministic share-split
/// start and a closed-form polish for power-law families.
///
/// By the scalarization relation, the output is Pareto-optimal for strictly
/// positive weights.
pub fn solve_scalarized(
    prob: &ScalarizedProblem,
    tol: f64,
) -> Result<ScalarizedSolution, MooError> {
    if !prob.weights.is_strict() {
        return Err(MooError::WeightsNotStrict);
    }
    let mut warnings = Vec::new();
    for (i, u) in prob.utilities.iter().enumerate() {
        match u {
            UtilitySpec::Power { .. } => {
                if !u.is_concave() {
                    warnings.push(SolveWarning::NonConcaveUtility { agent: i });
                }
            }
            UtilitySpec::Custom(_) => {
                if !u.passes_midpoint_concavity(50) {
                    return Err(MooError::NonConcaveUtility { agent: i });
                }
            }
        }
    }

    let n = prob.dim();
    let m = prob.agents();
    let w = prob.flat_budget();
    let dims = m * n;

    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(11);
    if let Some(s) = share_start(prob) {
        starts.push(s);
    }
    for r in 0..10u64 {
        let mut rng = rng_stream(0x5CA1E, r);
        let u: Vec<f64> = (0..dims).map(|_| rng.gen_range(0.05..1.0)).collect();
        let used: f64 = u.iter().zip(&w).map(|(z, wi)| z * wi).sum();
        let rho = rng.gen_range(0.5..0.95);
        let scale = if used > 0.0 { rho / used } else { 1.0 };
        starts.push(u.into_iter().map(|z| z * scale).collect());
    }

    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut any_converged = false;
    for start in starts {
        let (z, obj, converged) = ascend(prob, start, &w, tol);
        any_converged |= converged;
        if best.as_ref().is_none_or(|(_, b)| obj > *b) {
            best = Some((z, obj));
        }
    }
    let (mut flat, mut obj) = best.expect("at least one start");
    if let Some(polished) = share_polish(prob, &flat) {
        let pobj = prob.objective(&polished);
        if pobj > obj {
            flat = polished;
            obj = pobj;
        }
    }
    if !any_converged {
        return Err(MooError::DidNotConverge);
    }

    let responses = (0..m)
        .map(|i| {
            Maneuver::new(flat[i * n..(i + 1) * n].to_vec())
                .expect("projection keeps entries nonnegative")
        })
        .collect();
    Ok(ScalarizedSolution { responses, objective: obj, warnings })
}

const GRID_VISIT_CAP: u64 = 50_000_000;

/// Exhaustive search over the budget-binding surface at resolution `step`.
///
/// The budget always binds at an optimum of monotone increasing utilities,
/// so the last flattened coordinate absorbs the leftover budget and the
/// enumeration runs over `N*M - 1` free coordinates. Ties break toward the
/// lexicographically smallest joint vector.
pub fn grid_oracle(prob: &ScalarizedProblem, step: f64) -> Result<Vec<Maneuver>, MooError> {
    let n = prob.dim();
    let m = prob.agents();
    let dims = m * n;
    if dims > 6 {
        return Err(MooError::TooLarge(format!("{dims} joint dimensions")));
    }
    if !(step > 0.0) {
        return Err(MooError::Shape(format!("step {step} must be positive")));
    }
    let w = prob.flat_budget();
    if w.iter().any(|&wi| wi <= 0.0) {
        return Err(MooError::TooLarge(
            "a zero probe component makes the grid unbounded".into(),
        ));
    }

    fn rec(
        prob: &ScalarizedProblem,
        w: &[f64],
        step: f64,
        depth: usize,
        spent: f64,
        flat: &mut Vec<f64>,
        best: &mut Option<(Vec<f64>, f64)>,
        visited: &mut u64,
    ) -> Result<(), MooError> {
        let dims = flat.len();
        if depth == dims - 1 {
            // last coordinate absorbs the leftover budget
            flat[depth] = ((1.0 - spent) / w[depth]).max(0.0);
            *visited += 1;
            if *visited > GRID_VISIT_CAP {
                return Err(MooError::TooLarge("visit cap exceeded".into()));
            }
            let obj = prob.objective(flat);
            if best.as_ref().is_none_or(|(_, b)| obj > *b) {
                *best = Some((flat.clone(), obj));
            }
            flat[depth] = 0.0;
            return Ok(());
        }
        let max_k = ((1.0 - spent) / (w[depth] * step) + 1e-9).floor() as i64;
        for k in 0..=max_k.max(0) {
            let v = k as f64 * step;
            flat[depth] = v;
            rec(prob, w, step, depth + 1, spent + v * w[depth], flat, best, visited)?;
        }
        flat[depth] = 0.0;
        Ok(())
    }

    let mut flat = vec![0.0; dims];
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut visited: u64 = 0;
    rec(prob, &w, step, 0, 0.0, &mut flat, &mut best, &mut visited)?;

    let (flat, _) = best.expect("grid contains at least one point");
    Ok((0..m)
        .map(|i| Maneuver::new(flat[i * n..(i + 1) * n].to_vec()).unwrap())
        .collect())
}

/// Resolution-limited Pareto check: scans for a feasible dominating point
/// (every utility at least the candidate's up to a `1e-9` margin, at least
/// one better by more than `1e-9`) on the joint grid at resolution `step`.
///
/// Utilities are block-separable and the budget couples blocks only through
/// the sum of their costs, so the product-grid scan reduces to per-agent
/// sweeps: the cheapest grid bundle matching the candidate's utility and the
/// cheapest strictly improving one. A dominating joint grid point exists iff
/// one agent's improving cost plus the others' matching costs fits the
/// budget.
pub fn is_pareto_optimal(
    candidate: &[Maneuver],
    utilities: &[UtilitySpec],
    probe: &ProbeSignal,
    step: f64,
) -> Result<bool, MooError> {
    let m = utilities.len();
    let n = probe.dim();
    if m * n > 6 {
        return Err(MooError::TooLarge(format!("{} joint dimensions", m * n)));
    }
    if candidate.len() != m {
        return Err(MooError::Shape("candidate/utilities length mismatch".into()));
    }
    if probe.values().iter().any(|&a| a <= 0.0) {
        return Err(MooError::TooLarge(
            "a zero probe component makes the grid unbounded".into(),
        ));
    }
    if !(step > 0.0) {
        return Err(MooError::Shape(format!("step {step} must be positive")));
    }
    let alpha = probe.values();

    fn sweep(
        u: &UtilitySpec,
        alpha: &[f64],
        step: f64,
        depth: usize,
        cost: f64,
        point: &mut Vec<f64>,
        target: f64,
        match_cost: &mut f64,
        beat_cost: &mut f64,
    ) {
        if depth == point.len() {
            let v = u.evaluate(point);
            if v >= target - 1e-9 && cost < *match_cost {
                *match_cost = cost;
            }
            if v > target + 1e-9 && cost < *beat_cost {
                *beat_cost = cost;
            }
            return;
        }
        let max_k = ((1.0 + 1e-9 - cost) / (alpha[depth] * step)).floor() as i64;
        for k in 0..=max_k.max(0) {
            let v = k as f64 * step;
            point[depth] = v;
            sweep(u, alpha, step, depth + 1, cost + v * alpha[depth], point, target, match_cost, beat_cost);
        }
        point[depth] = 0.0;
    }

    let mut match_cost = vec![f64::INFINITY; m];
    let mut beat_cost = vec![f64::INFINITY; m];
    let mut point = vec![0.0; n];
    for i in 0..m {
        let target = utilities[i].evaluate(candidate[i].values());
        sweep(
            &utilities[i],
            alpha,
            step,
            0,
            0.0,
            &mut point,
            target,
            &mut match_cost[i],
            &mut beat_cost[i],
        );
    }

    let match_total: f64 = match_cost.iter().sum();
    for k in 0..m {
        if beat_cost[k].is_finite() && match_cost.iter().all(|c| c.is_finite()) {
            let total = match_total - match_cost[k] + beat_cost[k];
            if total <= 1.0 + 1e-9 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
