//! Two-qubit state tomography from local Pauli-basis measurements.
//!
//! Nine basis pairs `{X,Y,Z}²`, four joint outcomes each, are sampled; the
//! state is rebuilt by Pauli linear inversion and then mapped back onto the
//! set of density matrices by clipping negative eigenvalues.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::sample_counts;
use crate::linalg::{c, hermitian_eig, kron, re, CMatrix};
use crate::measurements::{OutcomeDistribution, LOCAL_LABELS};
use crate::rng::substream;
use crate::states::{fidelity, purity, DensityMatrix, PureState};

/// Single-qubit measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::X, Basis::Y, Basis::Z];

    /// Eigenvectors for eigenvalue `+1` and `−1`.
    pub fn eigenstates(self) -> [PureState; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mk = |a: [crate::linalg::C64; 2]| PureState::new(a.to_vec()).expect("unit vector");
        match self {
            Basis::X => [PureState::plus(), PureState::minus()],
            Basis::Y => [mk([re(h), c(0.0, h)]), mk([re(h), c(0.0, -h)])],
            Basis::Z => [PureState::zero(), PureState::one()],
        }
    }

    pub fn pauli(self) -> CMatrix {
        match self {
            Basis::X => CMatrix::from_rows(&[vec![re(0.0), re(1.0)], vec![re(1.0), re(0.0)]]),
            Basis::Y => CMatrix::from_rows(&[vec![re(0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), re(0.0)]]),
            Basis::Z => CMatrix::from_real_diag(&[1.0, -1.0]),
        }
    }

    fn letter(self) -> char {
        match self {
            Basis::X => 'X',
            Basis::Y => 'Y',
            Basis::Z => 'Z',
        }
    }

    fn from_letter(ch: char) -> Option<Self> {
        match ch {
            'X' | 'x' => Some(Basis::X),
            'Y' | 'y' => Some(Basis::Y),
            'Z' | 'z' => Some(Basis::Z),
            _ => None,
        }
    }
}

/// A pair of local bases, first qubit on the left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisPair(pub Basis, pub Basis);

impl BasisPair {
    /// All nine pairs in `XX, XY, …, ZZ` order.
    pub fn all() -> Vec<BasisPair> {
        Basis::ALL
            .iter()
            .flat_map(|&a| Basis::ALL.iter().map(move |&b| BasisPair(a, b)))
            .collect()
    }

    /// Joint projectors in outcome order `++, +−, −+, −−`.
    pub fn projectors(self) -> [CMatrix; 4] {
        let [ap, am] = self.0.eigenstates().map(|s| s.projector());
        let [bp, bm] = self.1.eigenstates().map(|s| s.projector());
        [kron(&ap, &bp), kron(&ap, &bm), kron(&am, &bp), kron(&am, &bm)]
    }
}

impl fmt::Display for BasisPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0.letter(), self.1.letter())
    }
}

impl std::str::FromStr for BasisPair {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        match (chars.next().and_then(Basis::from_letter), chars.next().and_then(Basis::from_letter), chars.next()) {
            (Some(a), Some(b), None) => Ok(BasisPair(a, b)),
            _ => Err(Error::IncompleteData(format!("bad basis pair {s:?}"))),
        }
    }
}

/// Sampling budget and seed for simulated tomography.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TomographySettings {
    pub shots_per_setting: u64,
    pub seed: u64,
}

impl TomographySettings {
    pub fn new(shots_per_setting: u64, seed: u64) -> Result<Self> {
        if shots_per_setting == 0 {
            return Err(Error::InvalidConfig("shots_per_setting must be at least 1".into()));
        }
        Ok(TomographySettings {
            shots_per_setting,
            seed,
        })
    }

    /// The 36 `(basis pair, outcome projector)` combinations.
    pub fn projectors(&self) -> Vec<(BasisPair, CMatrix)> {
        BasisPair::all()
            .into_iter()
            .flat_map(|pair| pair.projectors().into_iter().map(move |p| (pair, p)))
            .collect()
    }
}

/// Outcome frequencies (or counts) for each measured basis pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographyData {
    settings: BTreeMap<BasisPair, [f64; 4]>,
}

impl TomographyData {
    /// Exact Born-rule probabilities, i.e. the infinite-shot limit.
    pub fn exact(rho: &DensityMatrix) -> Result<Self> {
        check_two_qubit(rho)?;
        let settings = BasisPair::all()
            .into_iter()
            .map(|pair| (pair, born(rho, pair)))
            .collect();
        Ok(TomographyData { settings })
    }

    /// Builds data from raw counts per pair; each pair must have at least one count.
    pub fn from_counts(counts: &BTreeMap<BasisPair, [u64; 4]>) -> Result<Self> {
        let mut settings = BTreeMap::new();
        for (&pair, n) in counts {
            let total: u64 = n.iter().sum();
            if total == 0 {
                return Err(Error::IncompleteData(format!("setting {pair} has no counts")));
            }
            settings.insert(pair, n.map(|k| k as f64 / total as f64));
        }
        Ok(TomographyData { settings })
    }

    pub fn frequencies(&self, pair: BasisPair) -> Option<&[f64; 4]> {
        self.settings.get(&pair)
    }
}

fn check_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::UnsupportedDimension {
            dim: rho.dim(),
            expected: 4,
        });
    }
    Ok(())
}

fn born(rho: &DensityMatrix, pair: BasisPair) -> [f64; 4] {
    pair.projectors().map(|p| (&p * rho.matrix()).trace().re.max(0.0))
}

/// Simulated counts for the nine basis pairs; pair `k` (in [`BasisPair::all`]
/// order) uses random substream `k`.
pub fn generate_tomography_counts(
    rho: &DensityMatrix,
    settings: &TomographySettings,
) -> Result<BTreeMap<BasisPair, [u64; 4]>> {
    check_two_qubit(rho)?;
    let mut out = BTreeMap::new();
    for (k, pair) in BasisPair::all().into_iter().enumerate() {
        let probs = born(rho, pair);
        let total: f64 = probs.iter().sum();
        let dist = OutcomeDistribution::new(
            LOCAL_LABELS.iter().map(|s| s.to_string()).collect(),
            probs.map(|p| p / total).to_vec(),
            None,
        )?;
        let mut rng = substream(settings.seed, k as u64);
        let n = sample_counts(&dist, settings.shots_per_setting, &mut rng);
        out.insert(pair, [n[0], n[1], n[2], n[3]]);
    }
    Ok(out)
}

const SIGNS: [(f64, f64); 4] = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];

/// Pauli linear inversion `ρ̂ = ¼ Σᵢⱼ ⟨σᵢ⊗σⱼ⟩ σᵢ⊗σⱼ`.
///
/// Two-body correlators come from their own setting; single-qubit
/// expectations are averaged over the three settings sharing that basis. The
/// result is Hermitian with unit trace but may have negative eigenvalues.
pub fn linear_inversion(data: &TomographyData) -> Result<CMatrix> {
    for pair in BasisPair::all() {
        if !data.settings.contains_key(&pair) {
            return Err(Error::IncompleteData(format!("missing setting {pair}")));
        }
    }
    let id = CMatrix::identity(2);
    let mut rho = kron(&id, &id);

    for a in Basis::ALL {
        let mut first = 0.0;
        let mut second = 0.0;
        for b in Basis::ALL {
            let fa = &data.settings[&BasisPair(a, b)];
            first += SIGNS.iter().zip(fa).map(|((sa, _), f)| sa * f).sum::<f64>();
            let fb = &data.settings[&BasisPair(b, a)];
            second += SIGNS.iter().zip(fb).map(|((_, sb), f)| sb * f).sum::<f64>();
        }
        rho = &rho + &kron(&a.pauli(), &id).scale_real(first / 3.0);
        rho = &rho + &kron(&id, &a.pauli()).scale_real(second / 3.0);
    }
    for pair in BasisPair::all() {
        let f = &data.settings[&pair];
        let corr: f64 = SIGNS.iter().zip(f).map(|((sa, sb), p)| sa * sb * p).sum();
        rho = &rho + &kron(&pair.0.pauli(), &pair.1.pauli()).scale_real(corr);
    }
    Ok(rho.scale_real(0.25))
}

/// Clips negative eigenvalues to zero and renormalizes.
pub fn project_to_physical(m: &CMatrix) -> Result<DensityMatrix> {
    let tr = m.trace();
    if (tr.re - 1.0).abs() > 1e-6 || tr.im.abs() > 1e-6 {
        return Err(Error::InvalidState(format!("trace {tr} is not 1")));
    }
    let eig = hermitian_eig(m)?;
    let mass: f64 = eig.eigenvalues.iter().map(|l| l.max(0.0)).sum();
    if mass <= 0.0 {
        return Err(Error::InvalidState("no positive spectrum to keep".into()));
    }
    let rebuilt = eig.reconstruct_with(|l| l.max(0.0) / mass);
    DensityMatrix::new(rebuilt.hermitian_part())
}

/// Fidelity and purity of a reconstructed state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TomographyReport {
    pub fidelity: f64,
    pub purity: f64,
}

impl TomographyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

/// Sample → invert → project.
pub fn reconstruct(rho: &DensityMatrix, settings: &TomographySettings) -> Result<DensityMatrix> {
    let counts = generate_tomography_counts(rho, settings)?;
    project_to_physical(&linear_inversion(&TomographyData::from_counts(&counts)?)?)
}

/// Reconstructs `rho_state` and scores it against `rho_target`.
pub fn tomography_report_against(
    rho_state: &DensityMatrix,
    rho_target: &DensityMatrix,
    settings: &TomographySettings,
) -> Result<TomographyReport> {
    let est = reconstruct(rho_state, settings)?;
    Ok(TomographyReport {
        fidelity: fidelity(&est, rho_target)?,
        purity: purity(&est),
    })
}

/// Tomography of `rho_target` itself.
pub fn tomography_report(rho_target: &DensityMatrix, settings: &TomographySettings) -> Result<TomographyReport> {
    tomography_report_against(rho_target, rho_target, settings)
}

/// Same pipeline on exact probabilities.
pub fn tomography_report_exact(rho_target: &DensityMatrix) -> Result<TomographyReport> {
    let est = project_to_physical(&linear_inversion(&TomographyData::exact(rho_target)?)?)?;
    Ok(TomographyReport {
        fidelity: fidelity(&est, rho_target)?,
        purity: purity(&est),
    })
}

/// Wire form `{"settings": [{"bases": "XY", "counts": {"++": n, ...}}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomographyCountsFile {
    pub settings: Vec<SettingCounts>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingCounts {
    pub bases: String,
    pub counts: BTreeMap<String, u64>,
}

impl TomographyCountsFile {
    pub fn from_counts(counts: &BTreeMap<BasisPair, [u64; 4]>) -> Self {
        let settings = counts
            .iter()
            .map(|(pair, n)| SettingCounts {
                bases: pair.to_string(),
                counts: LOCAL_LABELS.iter().zip(n).map(|(l, &k)| (l.to_string(), k)).collect(),
            })
            .collect();
        TomographyCountsFile { settings }
    }

    pub fn to_counts(&self) -> Result<BTreeMap<BasisPair, [u64; 4]>> {
        let mut out = BTreeMap::new();
        for s in &self.settings {
            let pair: BasisPair = s.bases.parse()?;
            let mut n = [0u64; 4];
            for (label, &k) in &s.counts {
                let idx = LOCAL_LABELS
                    .iter()
                    .position(|l| l == label)
                    .ok_or_else(|| Error::IncompleteData(format!("unknown outcome {label:?}")))?;
                n[idx] = k;
            }
            out.insert(pair, n);
        }
        Ok(out)
    }
}
