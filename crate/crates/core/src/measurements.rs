//! Measurement strategies: POVM constructors, the trace rule, the
//! visibility-corrected analytic outcome models, and conditioning on a local
//! projection.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, partial_trace, CMatrix, Subsystem};
use crate::states::{bell_state, check_unit_interval, DensityMatrix, PureState};

const POVM_TOL: f64 = 1e-9;
const PROB_CLIP: f64 = 1e-12;
const SUM_TOL: f64 = 1e-9;
const CONDITION_MIN: f64 = 1e-12;

pub const BELL_LABELS: [&str; 4] = ["B00", "B10", "B01", "B11"];
pub const GROUPED_LABELS: [&str; 3] = ["B00", "B10", "group_B01_B11"];
pub const LOCAL_LABELS: [&str; 4] = ["++", "+-", "-+", "--"];

/// Which measurement is performed on the probe pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Full projection onto the four Bell states.
    Bell,
    /// Three-outcome analyzer resolving `{B00}`, `{B10}`, `{B01, B11}`.
    GroupedBell,
    /// Local projections onto `|±±⟩`.
    Local,
}

impl Strategy {
    pub fn labels(self) -> &'static [&'static str] {
        match self {
            Strategy::Bell => &BELL_LABELS,
            Strategy::GroupedBell => &GROUPED_LABELS,
            Strategy::Local => &LOCAL_LABELS,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Bell => "bell",
            Strategy::GroupedBell => "grouped_bell",
            Strategy::Local => "local",
        }
    }

    pub fn povm(self) -> Povm {
        match self {
            Strategy::Bell => bell_povm(),
            Strategy::GroupedBell => grouped_bell_povm(),
            Strategy::Local => local_diag_povm(),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bell" => Ok(Strategy::Bell),
            "grouped_bell" | "grouped-bell" | "grouped" => Ok(Strategy::GroupedBell),
            "local" => Ok(Strategy::Local),
            other => Err(Error::InvalidConfig(format!("unknown strategy {other:?}"))),
        }
    }
}

/// Labeled positive operators summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<(String, CMatrix)>,
}

impl Povm {
    pub fn new(elements: Vec<(String, CMatrix)>) -> Result<Self> {
        let Some((_, first)) = elements.first() else {
            return Err(Error::InvalidPovm("no elements".into()));
        };
        let dim = first.dim();
        let mut sum = CMatrix::zeros(dim);
        for (label, op) in &elements {
            if op.dim() != dim {
                return Err(Error::InvalidPovm(format!("element {label} has dim {}", op.dim())));
            }
            if !op.is_psd(POVM_TOL) {
                return Err(Error::InvalidPovm(format!("element {label} is not Hermitian PSD")));
            }
            sum = &sum + op;
        }
        let dev = sum.max_abs_diff(&CMatrix::identity(dim));
        if dev > POVM_TOL {
            return Err(Error::InvalidPovm(format!(
                "elements sum to identity only within {dev:.3e}"
            )));
        }
        Ok(Povm { elements })
    }

    pub fn dim(&self) -> usize {
        self.elements[0].1.dim()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.elements.iter().map(|(l, _)| l.clone()).collect()
    }

    pub fn elements(&self) -> &[(String, CMatrix)] {
        &self.elements
    }

    pub fn element(&self, label: &str) -> Option<&CMatrix> {
        self.elements.iter().find(|(l, _)| l == label).map(|(_, m)| m)
    }
}

/// Projectors `|B_kj⟩⟨B_kj|` labeled `B00, B10, B01, B11`.
pub fn bell_povm() -> Povm {
    let elements = [(0, 0), (1, 0), (0, 1), (1, 1)]
        .into_iter()
        .zip(BELL_LABELS)
        .map(|((k, j), label)| (label.to_string(), bell_state(k, j).projector()))
        .collect();
    Povm { elements }
}

/// `{B00}`, `{B10}` and the merged `{B01, B11}` element.
pub fn grouped_bell_povm() -> Povm {
    let merged = &bell_state(0, 1).projector() + &bell_state(1, 1).projector();
    Povm {
        elements: vec![
            (GROUPED_LABELS[0].into(), bell_state(0, 0).projector()),
            (GROUPED_LABELS[1].into(), bell_state(1, 0).projector()),
            (GROUPED_LABELS[2].into(), merged),
        ],
    }
}

/// Separable projectors onto `|++⟩, |+−⟩, |−+⟩, |−−⟩`.
pub fn local_diag_povm() -> Povm {
    let p = PureState::plus().projector();
    let m = PureState::minus().projector();
    let elements = [(&p, &p), (&p, &m), (&m, &p), (&m, &m)]
        .into_iter()
        .zip(LOCAL_LABELS)
        .map(|((a, b), label)| (label.to_string(), kron(a, b)))
        .collect();
    Povm { elements }
}

/// Outcome probabilities, optionally with their φ-derivatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    labels: Vec<String>,
    #[serde(rename = "p")]
    probabilities: Vec<f64>,
    #[serde(rename = "dp", default, skip_serializing_if = "Option::is_none")]
    dprob_dphi: Option<Vec<f64>>,
}

impl OutcomeDistribution {
    /// Clips values in `[-1e-12, 0)` to zero and checks normalization
    /// (and `Σ dp = 0` when derivatives are given), both within `1e-9`.
    pub fn new(labels: Vec<String>, probabilities: Vec<f64>, dprob_dphi: Option<Vec<f64>>) -> Result<Self> {
        if labels.len() != probabilities.len()
            || dprob_dphi.as_ref().is_some_and(|d| d.len() != labels.len())
        {
            return Err(Error::InvalidConfig("label/probability length mismatch".into()));
        }
        let mut probabilities = probabilities;
        for (label, p) in labels.iter().zip(probabilities.iter_mut()) {
            if !p.is_finite() || *p < -PROB_CLIP {
                return Err(Error::InvalidConfig(format!("probability of {label} is {p}")));
            }
            *p = p.max(0.0);
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidConfig(format!("probabilities sum to {total}")));
        }
        if let Some(d) = &dprob_dphi {
            let dsum: f64 = d.iter().sum();
            if !dsum.is_finite() || dsum.abs() > SUM_TOL {
                return Err(Error::InvalidConfig(format!("derivatives sum to {dsum}")));
            }
        }
        Ok(OutcomeDistribution {
            labels,
            probabilities,
            dprob_dphi,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn dprob_dphi(&self) -> Option<&[f64]> {
        self.dprob_dphi.as_deref()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.probabilities[i])
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain numeric data")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: OutcomeDistribution = serde_json::from_str(s)?;
        OutcomeDistribution::new(raw.labels, raw.probabilities, raw.dprob_dphi)
    }
}

/// Trace rule `pᵢ = Tr(Mᵢ ρ)`; no derivatives.
pub fn probabilities(povm: &Povm, rho: &DensityMatrix) -> Result<OutcomeDistribution> {
    if povm.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            left: povm.dim(),
            right: rho.dim(),
        });
    }
    let probs = povm
        .elements
        .iter()
        .map(|(_, m)| (m * rho.matrix()).trace().re)
        .collect();
    OutcomeDistribution::new(povm.labels(), probs, None)
}

/// Noise level `η` and interference visibility `V`, both in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VisibilityModelParams {
    pub eta: f64,
    pub visibility: f64,
}

impl VisibilityModelParams {
    pub fn new(eta: f64, visibility: f64) -> Result<Self> {
        check_unit_interval("eta", eta)?;
        check_unit_interval("visibility", visibility)?;
        Ok(VisibilityModelParams { eta, visibility })
    }

    /// `V = 1`
    pub fn ideal(eta: f64) -> Result<Self> {
        Self::new(eta, 1.0)
    }

    /// Contrast of the interference terms, `V·η`.
    pub fn contrast(&self) -> f64 {
        self.eta * self.visibility
    }
}

fn model(labels: &[&str], probs: Vec<f64>, derivs: Vec<f64>) -> OutcomeDistribution {
    OutcomeDistribution::new(
        labels.iter().map(|s| s.to_string()).collect(),
        probs,
        Some(derivs),
    )
    .expect("model probabilities are valid for parameters in [0, 1]")
}

/// Bell-basis outcome model with the cosine terms damped by `V`:
/// `P_B00/B10 = (1+η)/4 ± Vη cos(2φ)/2`, `P_B01 = P_B11 = (1−η)/4`.
pub fn model_bell_probs(phi: f64, params: VisibilityModelParams) -> OutcomeDistribution {
    let eta = params.eta;
    let a = (1.0 + eta) / 4.0;
    let b = params.contrast() * (2.0 * phi).cos() / 2.0;
    let d = params.contrast() * (2.0 * phi).sin();
    let rest = (1.0 - eta) / 4.0;
    model(&BELL_LABELS, vec![a + b, a - b, rest, rest], vec![-d, d, 0.0, 0.0])
}

/// Bell model with `B01` and `B11` merged into one outcome.
pub fn model_grouped_probs(phi: f64, params: VisibilityModelParams) -> OutcomeDistribution {
    let full = model_bell_probs(phi, params);
    let p = full.probabilities();
    let d = full.dprob_dphi().unwrap();
    model(
        &GROUPED_LABELS,
        vec![p[0], p[1], p[2] + p[3]],
        vec![d[0], d[1], d[2] + d[3]],
    )
}

/// Local `|±±⟩` model: `P_{++} = P_{−−} = (1 + Vη cos 2φ)/4`,
/// `P_{+−} = P_{−+} = (1 − Vη cos 2φ)/4`.
pub fn model_local_probs(phi: f64, params: VisibilityModelParams) -> OutcomeDistribution {
    let cv = params.contrast() * (2.0 * phi).cos();
    let same = (1.0 + cv) / 4.0;
    let diff = (1.0 - cv) / 4.0;
    let d = params.contrast() * (2.0 * phi).sin() / 2.0;
    model(&LOCAL_LABELS, vec![same, diff, diff, same], vec![-d, d, d, -d])
}

pub fn model_probs(strategy: Strategy, phi: f64, params: VisibilityModelParams) -> OutcomeDistribution {
    match strategy {
        Strategy::Bell => model_bell_probs(phi, params),
        Strategy::GroupedBell => model_grouped_probs(phi, params),
        Strategy::Local => model_local_probs(phi, params),
    }
}

/// Projects the first qubit of `rho_phi` onto `|m⟩` and returns the outcome
/// probability together with the normalized state of the second qubit.
pub fn adaptive_project(rho_phi: &DensityMatrix, m: &PureState) -> Result<(f64, DensityMatrix)> {
    if rho_phi.dim() != 4 {
        return Err(Error::UnsupportedDimension {
            dim: rho_phi.dim(),
            expected: 4,
        });
    }
    if m.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            dim: m.dim(),
            expected: 2,
        });
    }
    let proj = kron(&m.projector(), &CMatrix::identity(2));
    let probability = (&proj * rho_phi.matrix()).trace().re;
    if probability < CONDITION_MIN {
        return Err(Error::CannotCondition { probability });
    }
    let post = &(&proj * rho_phi.matrix()) * &proj;
    let reduced = partial_trace(&post, Subsystem::Second)?.scale_real(1.0 / probability);
    Ok((probability, DensityMatrix::new(reduced.hermitian_part())?))
}
