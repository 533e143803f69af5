//! Inverse multi-objective optimization via revealed preferences: the
//! deterministic coordination test, rationalizing-utility reconstruction,
//! and the per-agent relaxation statistic for noisy data.
//!
//! The feasibility system for agent `i` asks for numbers `u_t, lambda_t`
//! (utility levels and marginal utilities) with
//!
//! ```text
//! u_s - u_t - lambda_t * alpha_t' (beta_s - beta_t) <= 0   for all s != t
//! ```
//!
//! The raw conditions require `lambda > 0` and admit free `u`; the system is
//! jointly positively homogeneous in `(u, lambda)` and translation-invariant
//! in `u`, so `u >= 1` and `lambda >= 1` are imposed without loss of
//! generality, turning the open conditions into closed LP rows. The system
//! couples agents only through the shared probes and is solved as M
//! independent LPs.

use crate::data::InteractionDataset;
use crate::lp::{self, Bound, Constraint, Feasibility, LinearProgram, LpError, LpOutcome, FEAS_TOL};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RevPrefError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("certificate does not match the dataset: {0}")]
    CertificateMismatch(String),
    #[error("{0}")]
    Shape(String),
}

/// Feasible multipliers witnessing coordination: utility levels `u[i][t]`
/// and marginal utilities `lambda[i][t]`, all normalized to `>= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AfriatCertificate {
    u: Vec<Vec<f64>>,
    lambda: Vec<Vec<f64>>,
}

impl AfriatCertificate {
    pub fn agents(&self) -> usize {
        self.u.len()
    }

    pub fn epochs(&self) -> usize {
        self.u.first().map_or(0, Vec::len)
    }

    pub fn level(&self, agent: usize, t: usize) -> f64 {
        self.u[agent][t]
    }

    pub fn marginal(&self, agent: usize, t: usize) -> f64 {
        self.lambda[agent][t]
    }

    /// Largest violation of the feasibility system against `data`
    /// (negative when strictly feasible).
    pub fn max_violation(&self, data: &InteractionDataset) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for i in 0..data.agents() {
            let gaps = pair_gaps(data, i);
            for t in 0..data.epochs() {
                worst = worst.max(1.0 - self.lambda[i][t]);
                worst = worst.max(1.0 - self.u[i][t]);
                for s in 0..data.epochs() {
                    if s == t {
                        continue;
                    }
                    let v = self.u[i][s] - self.u[i][t] - self.lambda[i][t] * gaps[t][s];
                    worst = worst.max(v);
                }
            }
        }
        worst
    }
}

/// Outcome of the deterministic coordination test.
#[derive(Debug, Clone, PartialEq)]
pub enum Detection {
    Coordinated(AfriatCertificate),
    NotCoordinated,
}

impl Detection {
    pub fn is_coordinated(&self) -> bool {
        matches!(self, Detection::Coordinated(_))
    }
}

/// `gaps[t][s] = alpha_t' (beta_s^i - beta_t^i)`.
fn pair_gaps(data: &InteractionDataset, agent: usize) -> Vec<Vec<f64>> {
    let t_len = data.epochs();
    let mut gaps = vec![vec![0.0; t_len]; t_len];
    for t in 0..t_len {
        let bt = data.response(t, agent).values();
        for s in 0..t_len {
            if s == t {
                continue;
            }
            let bs = data.response(s, agent).values();
            let diff: Vec<f64> = bs.iter().zip(bt).map(|(a, b)| a - b).collect();
            gaps[t][s] = data.probe(t).dot(&diff);
        }
    }
    gaps
}

/// Rows of the per-agent system at relaxation level `phi`, over variables
/// `[u_0..u_{T-1}, lambda_0..lambda_{T-1}]`.
fn agent_rows(gaps: &[Vec<f64>], phi: f64) -> Vec<Constraint> {
    let t_len = gaps.len();
    let mut rows = Vec::with_capacity(t_len * t_len.saturating_sub(1));
    for t in 0..t_len {
        for s in 0..t_len {
            if s == t {
                continue;
            }
            let mut coeffs = vec![0.0; 2 * t_len];
            coeffs[s] += 1.0;
            coeffs[t] -= 1.0;
            coeffs[t_len + t] = -(gaps[t][s] + phi);
            rows.push(Constraint::le(coeffs, 0.0));
        }
    }
    rows
}

fn unit_lower_bounds(n: usize) -> Vec<Bound> {
    vec![Bound::at_least(1.0); n]
}

/// Solves one agent's system, preferring small multipliers for a tidy
/// certificate; if the minimization runs into numerical trouble on a
/// near-degenerate system, any feasibility witness serves. Returns `None`
/// when infeasible.
fn solve_agent(gaps: &[Vec<f64>]) -> Result<Option<(Vec<f64>, Vec<f64>)>, LpError> {
    let t_len = gaps.len();
    let rows = agent_rows(gaps, 0.0);
    let bounds = unit_lower_bounds(2 * t_len);
    let lp = LinearProgram {
        objective: vec![1.0; 2 * t_len],
        constraints: rows.clone(),
        bounds: bounds.clone(),
    };
    let x = match lp::solve(&lp) {
        Ok(LpOutcome::Optimal { x, .. } | LpOutcome::Feasible { x }) => Some(x),
        Ok(LpOutcome::Infeasible) => None,
        Ok(LpOutcome::Unbounded) => unreachable!("objective is bounded below by the bounds"),
        Err(LpError::NumericalBreakdown(_)) => match lp::feasible(&rows, &bounds)? {
            Feasibility::Yes(x) => Some(x),
            Feasibility::No => None,
        },
        Err(e) => return Err(e),
    };
    Ok(x.map(|x| (x[..t_len].to_vec(), x[t_len..].to_vec())))
}

/// Tries to re-derive the certificate with one marginal utility per epoch
/// shared across agents (budget-efficient form). Such a certificate exists
/// whenever the data came from weighted-sum maximization, and it is what
/// makes the reconstructed utilities rationalize the dataset under equal
/// weights; for merely per-agent-rationalizable data it may not exist, in
/// which case the per-agent certificate stands.
fn refine_shared_marginals(
    data: &InteractionDataset,
) -> Result<Option<AfriatCertificate>, LpError> {
    let m = data.agents();
    let t_len = data.epochs();
    let n_u = m * t_len;
    let n_vars = n_u + t_len + 1; // u blocks, shared lambda, violation eps
    let gaps: Vec<Vec<Vec<f64>>> = (0..m).map(|i| pair_gaps(data, i)).collect();

    let build_rows = |eps_cap: Option<f64>| {
        let mut rows = Vec::with_capacity(m * t_len * t_len + 1);
        for (i, g) in gaps.iter().enumerate() {
            for t in 0..t_len {
                for s in 0..t_len {
                    if s == t {
                        continue;
                    }
                    let mut coeffs = vec![0.0; n_vars];
                    coeffs[i * t_len + s] += 1.0;
                    coeffs[i * t_len + t] -= 1.0;
                    coeffs[n_u + t] = -g[t][s];
                    coeffs[n_vars - 1] = -1.0; // ... <= eps
                    rows.push(Constraint::le(coeffs, 0.0));
                }
            }
        }
        if let Some(cap) = eps_cap {
            let mut coeffs = vec![0.0; n_vars];
            coeffs[n_vars - 1] = 1.0;
            rows.push(Constraint::le(coeffs, cap));
        }
        rows
    };
    let mut bounds = unit_lower_bounds(n_vars);
    bounds[n_vars - 1] = Bound::nonnegative();

    // Stage 1: smallest violation achievable with shared marginals. Any
    // numerical trouble just means no refinement.
    let mut objective = vec![0.0; n_vars];
    objective[n_vars - 1] = 1.0;
    let stage1 = LinearProgram {
        objective,
        constraints: build_rows(None),
        bounds: bounds.clone(),
    };
    let (eps, stage1_x) = match lp::solve(&stage1) {
        Ok(LpOutcome::Optimal { x, value }) => (value, x),
        Ok(LpOutcome::Infeasible) | Err(LpError::NumericalBreakdown(_)) => return Ok(None),
        Ok(other) => unreachable!("stage-1 refinement cannot be {other:?}"),
        Err(e) => return Err(e),
    };
    if eps > FEAS_TOL {
        return Ok(None);
    }

    // Stage 2: tidy multipliers at that violation level; the stage-1
    // witness already satisfies the system and stands in on failure.
    let stage2 = LinearProgram {
        objective: vec![1.0; n_vars],
        constraints: build_rows(Some(eps.max(0.0) + 1e-12)),
        bounds,
    };
    let x = match lp::solve(&stage2) {
        Ok(LpOutcome::Optimal { x, .. }) => x,
        _ => stage1_x,
    };
    let lambda_shared = &x[n_u..n_u + t_len];
    let u = (0..m)
        .map(|i| x[i * t_len..(i + 1) * t_len].to_vec())
        .collect();
    let lambda = (0..m).map(|_| lambda_shared.to_vec()).collect();
    Ok(Some(AfriatCertificate { u, lambda }))
}

/// Deterministic coordination test: feasibility of the multiplier system,
/// decomposed into one LP per agent (all must be feasible).
pub fn detect_coordination(data: &InteractionDataset) -> Result<Detection, RevPrefError> {
    let m = data.agents();
    let mut u = Vec::with_capacity(m);
    let mut lambda = Vec::with_capacity(m);
    for i in 0..m {
        let gaps = pair_gaps(data, i);
        match solve_agent(&gaps)? {
            Some((ui, li)) => {
                u.push(ui);
                lambda.push(li);
            }
            None => return Ok(Detection::NotCoordinated),
        }
    }
    // Prefer the budget-efficient certificate when one exists.
    if let Some(cert) = refine_shared_marginals(data)? {
        return Ok(Detection::Coordinated(cert));
    }
    Ok(Detection::Coordinated(AfriatCertificate { u, lambda }))
}

/// One affine piece `level + slope * probe' (x - response)` of a
/// reconstructed utility.
#[derive(Debug, Clone)]
pub struct Anchor {
    pub level: f64,
    pub slope: f64,
    pub probe: Vec<f64>,
    pub response: Vec<f64>,
}

/// Piecewise-min-affine utility rationalizing one agent's observations:
/// concave by construction and monotone increasing whenever all
/// `slope * probe` products are nonnegative.
#[derive(Debug, Clone)]
pub struct RationalizingUtility {
    agent: usize,
    anchors: Vec<Anchor>,
}

impl RationalizingUtility {
    pub fn agent(&self) -> usize {
        self.agent
    }

    pub fn anchors(&self) -> &[Anchor] {
        &self.anchors
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.anchors
            .iter()
            .map(|a| {
                let shift: f64 = a
                    .probe
                    .iter()
                    .zip(x.iter().zip(&a.response))
                    .map(|(p, (xi, bi))| p * (xi - bi))
                    .sum();
                a.level + a.slope * shift
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Builds the min-affine evaluators from a certificate.
pub fn reconstruct_utilities(
    cert: &AfriatCertificate,
    data: &InteractionDataset,
) -> Result<Vec<RationalizingUtility>, RevPrefError> {
    if cert.agents() != data.agents() || cert.epochs() != data.epochs() {
        return Err(RevPrefError::CertificateMismatch(format!(
            "certificate is {}x{}, dataset is {}x{}",
            cert.agents(),
            cert.epochs(),
            data.agents(),
            data.epochs()
        )));
    }
    let violation = cert.max_violation(data);
    if violation > FEAS_TOL {
        return Err(RevPrefError::CertificateMismatch(format!(
            "multipliers violate the inequality system by {violation:.3e}"
        )));
    }
    Ok((0..data.agents())
        .map(|i| RationalizingUtility {
            agent: i,
            anchors: (0..data.epochs())
                .map(|t| Anchor {
                    level: cert.u[i][t],
                    slope: cert.lambda[i][t],
                    probe: data.probe(t).values().to_vec(),
                    response: data.response(t, i).values().to_vec(),
                })
                .collect(),
        })
        .collect())
}

/// Per-agent minimal uniform relaxations and their maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationStatistic {
    pub per_agent: Vec<f64>,
    pub overall: f64,
}

/// Multipliers saved from the relaxed system at the returned level.
#[derive(Debug, Clone)]
pub struct AgentMultipliers {
    pub u: Vec<f64>,
    pub lambda: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct RelaxationSolution {
    pub stat: RelaxationStatistic,
    pub multipliers: Vec<AgentMultipliers>,
}

const BISECT_TOL: f64 = 1e-8;

/// Smallest uniform relaxation `phi` making agent `i`'s system feasible.
///
/// Feasibility is monotone in `phi` (the marginals are positive, so growing
/// `phi` only loosens rows), which justifies bisection with an LP oracle at
/// each trial value. The bracket is `[-B, B]` with `B` the largest absolute
/// pair gap: feasibility at `B` is guaranteed (set all levels equal), and
/// the lower end is clamped at `-B`.
fn agent_relaxation(
    gaps: &[Vec<f64>],
    bracket: f64,
) -> Result<(f64, AgentMultipliers), RevPrefError> {
    let t_len = gaps.len();
    let bounds = unit_lower_bounds(2 * t_len);
    // Every feasible probe keeps its witness: near the critical level the
    // minimizing refit can fail numerically, and the bisection's own
    // witness is always a valid multiplier set. A probe that breaks down
    // numerically counts as infeasible, nudging the accepted level up by at
    // most the ambiguity band.
    let feasible_at = |phi: f64| -> Result<Option<Vec<f64>>, LpError> {
        match lp::feasible(&agent_rows(gaps, phi), &bounds) {
            Ok(Feasibility::Yes(x)) => Ok(Some(x)),
            Ok(Feasibility::No) | Err(LpError::NumericalBreakdown(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };

    if t_len <= 1 {
        return Ok((
            0.0,
            AgentMultipliers { u: vec![1.0; t_len], lambda: vec![1.0; t_len] },
        ));
    }

    let mut witness;
    let phi = match feasible_at(-bracket)? {
        Some(x) => {
            witness = x;
            -bracket
        }
        None => {
            let mut lo = -bracket;
            let mut hi = bracket;
            // at the upper bracket all-ones is feasible by construction:
            // every row becomes -(gap + B) <= 0 with gap + B >= 0
            witness = vec![1.0; 2 * t_len];
            while hi - lo > BISECT_TOL {
                let mid = 0.5 * (lo + hi);
                match feasible_at(mid)? {
                    Some(x) => {
                        witness = x;
                        hi = mid;
                    }
                    None => lo = mid,
                }
            }
            hi
        }
    };

    // Prefer small multipliers for readability; keep the plain witness when
    // the refit struggles.
    let refit = LinearProgram {
        objective: vec![1.0; 2 * t_len],
        constraints: agent_rows(gaps, phi),
        bounds,
    };
    if let Ok(LpOutcome::Optimal { x, .. }) = lp::solve(&refit) {
        witness = x;
    }
    Ok((
        phi,
        AgentMultipliers {
            u: witness[..t_len].to_vec(),
            lambda: witness[t_len..].to_vec(),
        },
    ))
}

/// Relaxation statistic plus the multiplier set from each agent's LP.
pub fn relaxation_solution(data: &InteractionDataset) -> Result<RelaxationSolution, RevPrefError> {
    let m = data.agents();
    let all_gaps: Vec<Vec<Vec<f64>>> = (0..m).map(|i| pair_gaps(data, i)).collect();
    let bracket = all_gaps
        .iter()
        .flat_map(|g| g.iter().flatten())
        .fold(0.0f64, |acc, &v| acc.max(v.abs()));

    let mut per_agent = Vec::with_capacity(m);
    let mut multipliers = Vec::with_capacity(m);
    for gaps in &all_gaps {
        let (phi, mult) = agent_relaxation(gaps, bracket)?;
        per_agent.push(phi);
        multipliers.push(mult);
    }
    let overall = per_agent.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(RelaxationSolution {
        stat: RelaxationStatistic { per_agent, overall },
        multipliers,
    })
}

/// The relaxation statistic alone.
pub fn relaxation_statistic(
    data: &InteractionDataset,
) -> Result<RelaxationStatistic, RevPrefError> {
    Ok(relaxation_solution(data)?.stat)
}

/// CSV grid (`beta1,beta2,U`) of a reconstructed utility over `[lo, hi]^2`,
/// for surface plots. Only two-dimensional signals supported.
pub fn export_utility_grid(
    util: &RationalizingUtility,
    lo: f64,
    hi: f64,
    resolution: usize,
) -> Result<String, RevPrefError> {
    if resolution < 2 {
        return Err(RevPrefError::Shape(format!(
            "grid resolution {resolution} must be at least 2"
        )));
    }
    let dim = util.anchors.first().map_or(0, |a| a.probe.len());
    if dim != 2 {
        return Err(RevPrefError::Shape(format!(
            "utility grid export needs N=2 (got N={dim})"
        )));
    }
    if !(hi > lo) {
        return Err(RevPrefError::Shape(format!("empty range [{lo}, {hi}]")));
    }
    let mut out = String::from("beta1,beta2,U\n");
    let step = (hi - lo) / (resolution - 1) as f64;
    for r in 0..resolution {
        let b1 = lo + r as f64 * step;
        for c in 0..resolution {
            let b2 = lo + c as f64 * step;
            let v = util.evaluate(&[b1, b2]);
            out.push_str(&format!(
                "{},{},{}\n",
                crate::fmt_sig(b1),
                crate::fmt_sig(b2),
                crate::fmt_sig(v)
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Maneuver, ProbeSignal};

    fn dataset(probes: &[&[f64]], responses: &[&[&[f64]]]) -> InteractionDataset {
        InteractionDataset::new(
            probes
                .iter()
                .map(|p| ProbeSignal::new(p.to_vec()).unwrap())
                .collect(),
            responses
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|b| Maneuver::new(b.to_vec()).unwrap())
                        .collect()
                })
                .collect(),
        )
        .unwrap()
    }

    /// Two observations each strictly revealed preferred to the other.
    fn warp_cycle() -> InteractionDataset {
        dataset(
            &[&[1.0 / 6.0, 2.0 / 6.0], &[2.0 / 6.5, 1.0 / 6.5]],
            &[&[&[2.0, 2.0]], &[&[3.0, 0.5]]],
        )
    }

    #[test]
    fn single_observation_always_coordinated() {
        let d = dataset(&[&[0.5, 0.5]], &[&[&[1.0, 1.0], &[0.2, 0.0]]]);
        let det = detect_coordination(&d).unwrap();
        assert!(det.is_coordinated());
        if let Detection::Coordinated(cert) = det {
            assert!(cert.max_violation(&d) <= FEAS_TOL);
        }
    }

    #[test]
    fn warp_cycle_not_coordinated() {
        let d = warp_cycle();
        // both inner products are negative: the defining property of the cycle
        let g = pair_gaps(&d, 0);
        assert!(g[0][1] < 0.0 && g[1][0] < 0.0, "{g:?}");
        assert!((g[0][1] + 1.0 / 3.0).abs() < 1e-12);
        assert!((g[1][0] + 1.0 / 13.0).abs() < 1e-12);
        assert_eq!(detect_coordination(&d).unwrap(), Detection::NotCoordinated);
    }

    #[test]
    fn warp_cycle_relaxation_level() {
        let d = warp_cycle();
        let sol = relaxation_solution(&d).unwrap();
        let phi = sol.stat.overall;
        // analytic minimum: feasibility needs phi > 1/13
        assert!((phi - 1.0 / 13.0).abs() <= 1e-6, "phi = {phi}");
        assert!(phi >= (1.0f64 / 3.0).min(1.0 / 13.0) / 2.0);
        // saved multipliers satisfy the relaxed system at the returned level
        let g = pair_gaps(&d, 0);
        let m = &sol.multipliers[0];
        for t in 0..2 {
            for s in 0..2 {
                if s != t {
                    let v = m.u[s] - m.u[t] - m.lambda[t] * (g[t][s] + phi);
                    assert!(v <= FEAS_TOL, "violated by {v}");
                }
            }
        }
    }

    #[test]
    fn relaxation_matches_detection_verdict() {
        let coordinated = dataset(
            &[&[0.5, 0.5], &[0.9, 0.2]],
            &[&[&[1.0, 0.5]], &[&[0.8, 0.9]]],
        );
        // check this really is rationalizable before relying on it
        assert!(detect_coordination(&coordinated).unwrap().is_coordinated());
        let stat = relaxation_statistic(&coordinated).unwrap();
        assert!(stat.overall <= FEAS_TOL, "{stat:?}");

        let cyc = warp_cycle();
        assert!(!detect_coordination(&cyc).unwrap().is_coordinated());
        assert!(relaxation_statistic(&cyc).unwrap().overall > FEAS_TOL);
    }

    #[test]
    fn single_epoch_relaxation_is_zero() {
        let d = dataset(&[&[0.5, 0.5]], &[&[&[1.0, 1.0]]]);
        let stat = relaxation_statistic(&d).unwrap();
        assert_eq!(stat.overall, 0.0);
    }

    #[test]
    fn reconstruction_evaluates_to_levels_at_data() {
        let d = dataset(
            &[&[0.5, 0.5], &[0.9, 0.2]],
            &[&[&[1.0, 0.5]], &[&[0.8, 0.9]]],
        );
        let Detection::Coordinated(cert) = detect_coordination(&d).unwrap() else {
            panic!("expected coordination");
        };
        let utils = reconstruct_utilities(&cert, &d).unwrap();
        for t in 0..d.epochs() {
            let v = utils[0].evaluate(d.response(t, 0).values());
            // own affine piece evaluates exactly to the level; the min can
            // only fall below it
            assert!(v <= cert.level(0, t) + 1e-12);
            assert!(v >= cert.level(0, t) - FEAS_TOL - 1e-9);
        }
    }

    #[test]
    fn reconstruction_is_monotone() {
        let d = dataset(
            &[&[0.5, 0.5], &[0.9, 0.2]],
            &[&[&[1.0, 0.5]], &[&[0.8, 0.9]]],
        );
        let Detection::Coordinated(cert) = detect_coordination(&d).unwrap() else {
            panic!("expected coordination");
        };
        let utils = reconstruct_utilities(&cert, &d).unwrap();
        let at_zero = utils[0].evaluate(&[0.0, 0.0]);
        for step in 1..=10 {
            let x = step as f64 * 0.3;
            assert!(utils[0].evaluate(&[x, x]) >= at_zero - 1e-12);
        }
    }

    #[test]
    fn certificate_mismatch_detected() {
        let d1 = dataset(&[&[0.5, 0.5]], &[&[&[1.0, 1.0]]]);
        let d2 = dataset(
            &[&[0.5, 0.5], &[0.9, 0.2]],
            &[&[&[1.0, 0.5]], &[&[0.8, 0.9]]],
        );
        let Detection::Coordinated(cert) = detect_coordination(&d1).unwrap() else {
            panic!();
        };
        assert!(matches!(
            reconstruct_utilities(&cert, &d2),
            Err(RevPrefError::CertificateMismatch(_))
        ));
        // tampered multipliers against the right dataset
        let Detection::Coordinated(cert2) = detect_coordination(&d2).unwrap() else {
            panic!();
        };
        let mut bad = cert2.clone();
        bad.u[0][0] += 100.0;
        assert!(matches!(
            reconstruct_utilities(&bad, &d2),
            Err(RevPrefError::CertificateMismatch(_))
        ));
    }

    #[test]
    fn grid_export_shape() {
        let d = dataset(&[&[0.5, 0.5]], &[&[&[1.0, 1.0]]]);
        let Detection::Coordinated(cert) = detect_coordination(&d).unwrap() else {
            panic!();
        };
        let utils = reconstruct_utilities(&cert, &d).unwrap();
        let csv = export_utility_grid(&utils[0], 0.0, 1.2, 5).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "beta1,beta2,U");
        assert_eq!(lines.len(), 1 + 25);
        assert!(export_utility_grid(&utils[0], 0.0, 1.2, 1).is_err());
    }
}
