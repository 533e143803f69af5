//! Domain types shared by all modules: probe signals, maneuvers, datasets,
//! noise models, simplex weights, validation and the JSON wire format.
//!
//! All numeric data is 64-bit IEEE floating point. Types are immutable after
//! construction and safe to share between concurrent workers.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use thiserror::Error;

/// Errors raised while constructing or validating datasets.
#[derive(Debug, Error, PartialEq)]
pub enum DataError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("empty dataset: {0}")]
    EmptyDataset(String),
    #[error("negative entry {value} at {location}")]
    NegativeEntry { location: String, value: f64 },
    #[error("non-finite entry at {0}")]
    NotFinite(String),
    #[error("probe has no positive entry")]
    DegenerateProbe,
    #[error("weights do not lie on the unit simplex (sum = {sum})")]
    WeightsOffSimplex { sum: f64 },
    #[error("negative noise level sigma = {0}")]
    NegativeSigma(f64),
    #[error("i/o: {0}")]
    Io(String),
    #[error("malformed dataset JSON: {0}")]
    Json(String),
}

/// Radar probe for one epoch: the eigenvalues of the inverse
/// measurement-noise covariance (unitless precision weights).
///
/// Entries are nonnegative with at least one strictly positive; an all-zero
/// probe would make the budget constraint vacuous and is rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSignal {
    values: Vec<f64>,
}

impl ProbeSignal {
    pub fn new(values: Vec<f64>) -> Result<Self, DataError> {
        if values.is_empty() {
            return Err(DataError::EmptyDataset("probe of dimension 0".into()));
        }
        for (n, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(DataError::NotFinite(format!("probe component {n}")));
            }
            if v < 0.0 {
                return Err(DataError::NegativeEntry {
                    location: format!("probe component {n}"),
                    value: v,
                });
            }
        }
        if !values.iter().any(|&v| v > 0.0) {
            return Err(DataError::DegenerateProbe);
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Inner product with a raw vector of the same dimension.
    pub fn dot(&self, other: &[f64]) -> f64 {
        debug_assert_eq!(self.values.len(), other.len());
        self.values.iter().zip(other).map(|(a, b)| a * b).sum()
    }
}

/// One agent's maneuver for one epoch: the eigenvalues of its state-noise
/// covariance.
///
/// Actions are nonnegative; observed (noise-corrupted) maneuvers may carry
/// negative entries and are built with [`Maneuver::observed`]. Clean-dataset
/// validation enforces nonnegativity at the dataset level.
#[derive(Debug, Clone, PartialEq)]
pub struct Maneuver {
    values: Vec<f64>,
}

impl Maneuver {
    pub fn new(values: Vec<f64>) -> Result<Self, DataError> {
        let m = Self::observed(values)?;
        for (n, &v) in m.values.iter().enumerate() {
            if v < 0.0 {
                return Err(DataError::NegativeEntry {
                    location: format!("maneuver component {n}"),
                    value: v,
                });
            }
        }
        Ok(m)
    }

    /// A measured maneuver; entries must be finite but may be negative.
    pub fn observed(values: Vec<f64>) -> Result<Self, DataError> {
        if values.is_empty() {
            return Err(DataError::EmptyDataset("maneuver of dimension 0".into()));
        }
        for (n, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(DataError::NotFinite(format!("maneuver component {n}")));
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// Time-indexed record of probes and per-agent responses: the object every
/// detector consumes.
///
/// `T` epochs, `M` agents, signal dimension `N`; responses are indexed
/// `[t][i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionDataset {
    probes: Vec<ProbeSignal>,
    responses: Vec<Vec<Maneuver>>,
}

impl InteractionDataset {
    /// Builds a dataset, checking shape consistency only. Use
    /// [`validate_dataset`] to additionally enforce the clean-action sign
    /// invariant.
    pub fn new(
        probes: Vec<ProbeSignal>,
        responses: Vec<Vec<Maneuver>>,
    ) -> Result<Self, DataError> {
        if probes.is_empty() {
            return Err(DataError::EmptyDataset("T = 0".into()));
        }
        if responses.len() != probes.len() {
            return Err(DataError::DimensionMismatch(format!(
                "{} probes but {} response rows",
                probes.len(),
                responses.len()
            )));
        }
        let n = probes[0].dim();
        let m = responses[0].len();
        if m == 0 {
            return Err(DataError::EmptyDataset("M = 0".into()));
        }
        for (t, probe) in probes.iter().enumerate() {
            if probe.dim() != n {
                return Err(DataError::DimensionMismatch(format!(
                    "probe {t} has dimension {} (expected {n})",
                    probe.dim()
                )));
            }
        }
        for (t, row) in responses.iter().enumerate() {
            if row.len() != m {
                return Err(DataError::DimensionMismatch(format!(
                    "epoch {t} has {} agents (expected {m})",
                    row.len()
                )));
            }
            for (i, b) in row.iter().enumerate() {
                if b.dim() != n {
                    return Err(DataError::DimensionMismatch(format!(
                        "response [{t}][{i}] has dimension {} (expected {n})",
                        b.dim()
                    )));
                }
            }
        }
        Ok(Self { probes, responses })
    }

    pub fn epochs(&self) -> usize {
        self.probes.len()
    }

    pub fn agents(&self) -> usize {
        self.responses[0].len()
    }

    pub fn dim(&self) -> usize {
        self.probes[0].dim()
    }

    pub fn probe(&self, t: usize) -> &ProbeSignal {
        &self.probes[t]
    }

    pub fn probes(&self) -> &[ProbeSignal] {
        &self.probes
    }

    pub fn response(&self, t: usize, i: usize) -> &Maneuver {
        &self.responses[t][i]
    }
}

/// Returns the dataset iff all type invariants hold, including
/// nonnegativity of every response entry. Idempotent.
pub fn validate_dataset(raw: InteractionDataset) -> Result<InteractionDataset, DataError> {
    for (t, row) in raw.responses.iter().enumerate() {
        for (i, b) in row.iter().enumerate() {
            for (n, &v) in b.values().iter().enumerate() {
                if v < 0.0 {
                    return Err(DataError::NegativeEntry {
                        location: format!("response [{t}][{i}] component {n}"),
                        value: v,
                    });
                }
            }
        }
    }
    // Shape invariants were established at construction.
    Ok(raw)
}

/// Additive observation-noise model for maneuvers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseModel {
    /// i.i.d. zero-mean Gaussian per component with standard deviation
    /// `sigma`.
    IidGaussian { sigma: f64 },
}

impl NoiseModel {
    pub fn iid_gaussian(sigma: f64) -> Result<Self, DataError> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(DataError::NegativeSigma(sigma));
        }
        Ok(Self::IidGaussian { sigma })
    }

    pub fn sigma(&self) -> f64 {
        match self {
            Self::IidGaussian { sigma } => *sigma,
        }
    }
}

/// A dataset whose responses are observed in additive noise. Shape
/// invariants match [`InteractionDataset`]; response entries may be
/// negative (they are measurements, not actions).
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyDataset {
    base: InteractionDataset,
    noise_model: NoiseModel,
}

impl NoisyDataset {
    pub fn new(observed: InteractionDataset, noise_model: NoiseModel) -> Self {
        Self {
            base: observed,
            noise_model,
        }
    }

    /// The observed probes/responses (responses are the noisy maneuvers).
    pub fn base(&self) -> &InteractionDataset {
        &self.base
    }

    pub fn noise_model(&self) -> &NoiseModel {
        &self.noise_model
    }
}

/// Weights on the non-negative unit simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexWeights {
    mu: Vec<f64>,
}

impl SimplexWeights {
    const SUM_TOL: f64 = 1e-12;

    pub fn new(mu: Vec<f64>) -> Result<Self, DataError> {
        if mu.is_empty() {
            return Err(DataError::EmptyDataset("weights of length 0".into()));
        }
        for (i, &w) in mu.iter().enumerate() {
            if !w.is_finite() {
                return Err(DataError::NotFinite(format!("weight {i}")));
            }
            if w < 0.0 {
                return Err(DataError::NegativeEntry {
                    location: format!("weight {i}"),
                    value: w,
                });
            }
        }
        let sum: f64 = mu.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOL {
            return Err(DataError::WeightsOffSimplex { sum });
        }
        Ok(Self { mu })
    }

    /// Rescales arbitrary nonnegative weights onto the simplex.
    pub fn normalized(raw: Vec<f64>) -> Result<Self, DataError> {
        let sum: f64 = raw.iter().sum();
        if !(sum > 0.0) {
            return Err(DataError::WeightsOffSimplex { sum });
        }
        let mu: Vec<f64> = raw.iter().map(|w| w / sum).collect();
        for (i, &w) in mu.iter().enumerate() {
            if !w.is_finite() {
                return Err(DataError::NotFinite(format!("weight {i}")));
            }
            if w < 0.0 {
                return Err(DataError::NegativeEntry {
                    location: format!("weight {i}"),
                    value: w,
                });
            }
        }
        Ok(Self { mu })
    }

    pub fn equal(m: usize) -> Self {
        Self {
            mu: vec![1.0 / m as f64; m],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.mu
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    /// True when every weight is strictly positive.
    pub fn is_strict(&self) -> bool {
        self.mu.iter().all(|&w| w > 0.0)
    }
}

/// Either a clean or a noise-corrupted dataset, as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Clean(InteractionDataset),
    Noisy(NoisyDataset),
}

impl Dataset {
    pub fn base(&self) -> &InteractionDataset {
        match self {
            Dataset::Clean(d) => d,
            Dataset::Noisy(d) => d.base(),
        }
    }

    pub fn noise_model(&self) -> Option<&NoiseModel> {
        match self {
            Dataset::Clean(_) => None,
            Dataset::Noisy(d) => Some(d.noise_model()),
        }
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.base();
        write!(
            f,
            "dataset T={} M={} N={}{}",
            d.epochs(),
            d.agents(),
            d.dim(),
            match self.noise_model() {
                Some(nm) => format!(" noise sigma={}", nm.sigma()),
                None => String::new(),
            }
        )
    }
}

/// On-disk JSON schema. Field names are normative.
#[derive(Debug, Serialize, Deserialize)]
struct DatasetFile {
    #[serde(rename = "T")]
    t: usize,
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    probes: Vec<Vec<f64>>,
    responses: Vec<Vec<Vec<f64>>>,
    noise: Option<NoiseModel>,
}

/// Serializes a dataset to the JSON wire format.
pub fn to_json(ds: &Dataset) -> String {
    let base = ds.base();
    let file = DatasetFile {
        t: base.epochs(),
        m: base.agents(),
        n: base.dim(),
        probes: base.probes.iter().map(|p| p.values.clone()).collect(),
        responses: base
            .responses
            .iter()
            .map(|row| row.iter().map(|b| b.values.clone()).collect())
            .collect(),
        noise: ds.noise_model().cloned(),
    };
    serde_json::to_string_pretty(&file).expect("dataset serialization cannot fail")
}

/// Parses and validates a dataset from the JSON wire format.
pub fn from_json(text: &str) -> Result<Dataset, DataError> {
    let file: DatasetFile =
        serde_json::from_str(text).map_err(|e| DataError::Json(e.to_string()))?;
    if file.t == 0 || file.probes.is_empty() {
        return Err(DataError::EmptyDataset("T = 0".into()));
    }
    if file.m == 0 {
        return Err(DataError::EmptyDataset("M = 0".into()));
    }
    if file.probes.len() != file.t {
        return Err(DataError::DimensionMismatch(format!(
            "header T={} but {} probes",
            file.t,
            file.probes.len()
        )));
    }
    if file.responses.len() != file.t {
        return Err(DataError::DimensionMismatch(format!(
            "header T={} but {} response rows",
            file.t,
            file.responses.len()
        )));
    }
    let probes = file
        .probes
        .into_iter()
        .map(ProbeSignal::new)
        .collect::<Result<Vec<_>, _>>()?;
    if probes.iter().any(|p| p.dim() != file.n) {
        return Err(DataError::DimensionMismatch(format!(
            "probe dimension differs from header N={}",
            file.n
        )));
    }
    let noisy = file.noise.is_some();
    let mut responses = Vec::with_capacity(file.t);
    for row in file.responses {
        if row.len() != file.m {
            return Err(DataError::DimensionMismatch(format!(
                "header M={} but a row has {} agents",
                file.m,
                row.len()
            )));
        }
        let row = row
            .into_iter()
            .map(|v| {
                if noisy {
                    Maneuver::observed(v)
                } else {
                    Maneuver::new(v)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        responses.push(row);
    }
    let base = InteractionDataset::new(probes, responses)?;
    Ok(match file.noise {
        Some(nm) => {
            if nm.sigma() < 0.0 || !nm.sigma().is_finite() {
                return Err(DataError::NegativeSigma(nm.sigma()));
            }
            Dataset::Noisy(NoisyDataset::new(base, nm))
        }
        None => Dataset::Clean(validate_dataset(base)?),
    })
}

pub fn save(ds: &Dataset, path: &Path) -> Result<(), DataError> {
    std::fs::write(path, to_json(ds)).map_err(|e| DataError::Io(e.to_string()))
}

pub fn load(path: &Path) -> Result<Dataset, DataError> {
    let text = std::fs::read_to_string(path).map_err(|e| DataError::Io(e.to_string()))?;
    from_json(&text)
}
