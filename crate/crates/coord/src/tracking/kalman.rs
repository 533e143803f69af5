//! Decoupled Kalman filtering and the steady-state Riccati analysis that
//! ties tracking precision to the probe/maneuver vectors.

use super::TrackError;
use crate::data::{Maneuver, ProbeSignal};
use nalgebra::{Complex, DMatrix, DVector};

const SYM_TOL: f64 = 1e-10;

/// Linear Gaussian system `x' = A x + w`, `y = C x + v` with
/// `w ~ N(0, Q)`, `v ~ N(0, R)`.
#[derive(Debug, Clone)]
pub struct LinearGaussianModel {
    pub a: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub q: DMatrix<f64>,
    pub r: DMatrix<f64>,
}

impl LinearGaussianModel {
    pub fn new(
        a: DMatrix<f64>,
        c: DMatrix<f64>,
        q: DMatrix<f64>,
        r: DMatrix<f64>,
    ) -> Result<Self, TrackError> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(TrackError::Shape("A must be square".into()));
        }
        if c.ncols() != n {
            return Err(TrackError::Shape("C column count must match A".into()));
        }
        let p = c.nrows();
        if q.nrows() != n || q.ncols() != n {
            return Err(TrackError::Shape("Q must be n x n".into()));
        }
        if r.nrows() != p || r.ncols() != p {
            return Err(TrackError::Shape("R must be p x p".into()));
        }
        if !is_symmetric(&q) || !is_symmetric(&r) {
            return Err(TrackError::Shape("Q and R must be symmetric".into()));
        }
        if min_symmetric_eigenvalue(&q) < -SYM_TOL {
            return Err(TrackError::Shape("Q must be positive semidefinite".into()));
        }
        if r.clone().cholesky().is_none() {
            return Err(TrackError::Shape("R must be positive definite".into()));
        }
        Ok(Self { a, c, q, r })
    }

    /// Spectral instantiation used throughout: `Q = diag(beta)`,
    /// `R = diag(alpha)^-1` (probes must be strictly positive).
    pub fn from_spectral(
        a: DMatrix<f64>,
        c: DMatrix<f64>,
        alpha: &ProbeSignal,
        beta: &Maneuver,
    ) -> Result<Self, TrackError> {
        if alpha.values().iter().any(|&v| v <= 0.0) {
            return Err(TrackError::InvalidParams(
                "probe must be strictly positive for R = diag(alpha)^-1".into(),
            ));
        }
        if beta.values().iter().any(|&v| v < 0.0) {
            return Err(TrackError::InvalidParams("maneuver must be nonnegative".into()));
        }
        let q = DMatrix::from_diagonal(&DVector::from_column_slice(beta.values()));
        let r = DMatrix::from_diagonal(&DVector::from_iterator(
            alpha.dim(),
            alpha.values().iter().map(|&v| 1.0 / v),
        ));
        Self::new(a, c, q, r)
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn measurement_dim(&self) -> usize {
        self.c.nrows()
    }
}

/// Gaussian state posterior.
#[derive(Debug, Clone)]
pub struct GaussianBelief {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
}

impl GaussianBelief {
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self, TrackError> {
        if cov.nrows() != mean.len() || cov.ncols() != mean.len() {
            return Err(TrackError::Shape("covariance must be n x n".into()));
        }
        if !is_symmetric(&cov) {
            return Err(TrackError::Shape("covariance must be symmetric".into()));
        }
        if min_symmetric_eigenvalue(&cov) < -SYM_TOL {
            return Err(TrackError::Shape("covariance must be PSD".into()));
        }
        Ok(Self { mean, cov })
    }
}

fn is_symmetric(m: &DMatrix<f64>) -> bool {
    let scale = 1.0 + m.amax();
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            if (m[(i, j)] - m[(j, i)]).abs() > SYM_TOL * scale {
                return false;
            }
        }
    }
    true
}

fn min_symmetric_eigenvalue(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let t = m.transpose();
    *m += t;
    *m *= 0.5;
}

/// Time update: `mean <- A mean`, `cov <- A cov A' + Q`.
pub fn kalman_predict(model: &LinearGaussianModel, belief: &GaussianBelief) -> GaussianBelief {
    let mean = &model.a * &belief.mean;
    let mut cov = &model.a * &belief.cov * model.a.transpose() + &model.q;
    symmetrize(&mut cov);
    GaussianBelief { mean, cov }
}

/// One predict-update cycle of the classical Kalman recursion.
pub fn kalman_step(
    model: &LinearGaussianModel,
    belief: &GaussianBelief,
    y: &DVector<f64>,
) -> Result<GaussianBelief, TrackError> {
    if y.len() != model.measurement_dim() {
        return Err(TrackError::Shape("measurement dimension mismatch".into()));
    }
    let pred = kalman_predict(model, belief);
    let innovation_cov = &model.c * &pred.cov * model.c.transpose() + &model.r;
    let chol = innovation_cov
        .clone()
        .cholesky()
        .ok_or(TrackError::SingularInnovation)?;
    // gain = P C' S^-1, computed as (S^-1 (C P))' without forming S^-1
    let gain = chol.solve(&(&model.c * &pred.cov)).transpose();
    let innovation = y - &model.c * &pred.mean;
    let mean = &pred.mean + &gain * innovation;
    let mut cov = &pred.cov - &gain * &model.c * &pred.cov;
    symmetrize(&mut cov);
    Ok(GaussianBelief { mean, cov })
}

/// PBH rank tests at the unstable eigenvalues of `A`.
fn pbh_ok(a: &DMatrix<f64>, other: &DMatrix<f64>, stack_below: bool) -> bool {
    let n = a.nrows();
    let eigs = a.clone().complex_eigenvalues();
    for lam in eigs.iter() {
        if lam.norm() < 1.0 - 1e-9 {
            continue;
        }
        let a_shift = a.map(Complex::from) - DMatrix::from_diagonal_element(n, n, *lam);
        let oc = other.map(Complex::from);
        let stacked = if stack_below {
            let mut s = DMatrix::zeros(n + other.nrows(), n);
            s.view_mut((0, 0), (n, n)).copy_from(&a_shift);
            s.view_mut((n, 0), (other.nrows(), n)).copy_from(&oc);
            s
        } else {
            let mut s = DMatrix::zeros(n, n + other.ncols());
            s.view_mut((0, 0), (n, n)).copy_from(&a_shift);
            s.view_mut((0, n), (n, other.ncols())).copy_from(&oc);
            s
        };
        let sv = stacked.svd(false, false).singular_values;
        let max_sv = sv.iter().copied().fold(0.0f64, f64::max);
        let rank = sv.iter().filter(|&&s| s > 1e-10 * (1.0 + max_sv)).count();
        if rank < n {
            return false;
        }
    }
    true
}

/// Symmetric PSD square root via the eigendecomposition.
fn psd_sqrt(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = m.clone().symmetric_eigen();
    let vals = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    &eig.eigenvectors * DMatrix::from_diagonal(&vals) * eig.eigenvectors.transpose()
}

const ARE_ITER_TOL: f64 = 1e-12;
const ARE_RESIDUAL_TOL: f64 = 1e-9;
const ARE_MAX_ITER: usize = 100_000;

/// Riccati operator residual `A(Sigma) - Sigma` where `A` maps a predicted
/// covariance through one measurement update and one time update.
fn riccati_map(model: &LinearGaussianModel, sigma: &DMatrix<f64>) -> Result<DMatrix<f64>, TrackError> {
    let s = &model.c * sigma * model.c.transpose() + &model.r;
    let chol = s.cholesky().ok_or(TrackError::SingularInnovation)?;
    let gain = chol.solve(&(&model.c * sigma)).transpose();
    let updated = sigma - &gain * &model.c * sigma;
    let mut next = &model.a * updated * model.a.transpose() + &model.q;
    symmetrize(&mut next);
    Ok(next)
}

/// Steady-state predicted covariance: the unique PSD fixed point of the
/// Riccati map, found by iterating it until successive iterates differ by
/// less than `1e-12` in max-abs entry. Requires `[A, C]` detectable and
/// `[A, sqrt(Q)]` stabilizable (checked numerically via PBH).
pub fn solve_are(model: &LinearGaussianModel) -> Result<DMatrix<f64>, TrackError> {
    if !pbh_ok(&model.a, &model.c, true) {
        return Err(TrackError::NotDetectable);
    }
    let sqrt_q = psd_sqrt(&model.q);
    if !pbh_ok(&model.a, &sqrt_q, false) {
        return Err(TrackError::NotStabilizable);
    }

    let n = model.state_dim();
    let mut sigma = model.q.clone() + DMatrix::identity(n, n);
    for _ in 0..ARE_MAX_ITER {
        let next = riccati_map(model, &sigma)?;
        let diff = (&next - &sigma).amax();
        sigma = next;
        if diff < ARE_ITER_TOL {
            let residual = (riccati_map(model, &sigma)? - &sigma).amax();
            if residual < ARE_RESIDUAL_TOL {
                return Ok(sigma);
            }
        }
    }
    Err(TrackError::NoConvergence)
}

/// Asymptotic tracking precision `Sigma*^-1` for the spectral model
/// `Q = diag(beta)`, `R = diag(alpha)^-1`. Monotone nondecreasing in the
/// probe and nonincreasing in the maneuver (Loewner order).
pub fn precision(
    alpha: &ProbeSignal,
    beta: &Maneuver,
    a: &DMatrix<f64>,
    c: &DMatrix<f64>,
) -> Result<DMatrix<f64>, TrackError> {
    let model = LinearGaussianModel::from_spectral(a.clone(), c.clone(), alpha, beta)?;
    let sigma = solve_are(&model)?;
    let chol = sigma.cholesky().ok_or(TrackError::SingularCovariance)?;
    let mut inv = chol.inverse();
    symmetrize(&mut inv);
    Ok(inv)
}
