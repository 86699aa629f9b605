//! Bell states, the Werner family, and state metrics.
//!
//! Basis order is `|00⟩, |01⟩, |10⟩, |11⟩` with the left factor being the first
//! qubit; `|0⟩` is horizontal and `|1⟩` vertical polarization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, re, CMatrix, C64};

/// Validation tolerance for density-matrix invariants.
pub const STATE_TOL: f64 = 1e-9;

/// Normalized state vector on a qubit or a qubit pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != 2 && amplitudes.len() != 4 {
            return Err(Error::UnsupportedDimension {
                dim: amplitudes.len(),
                expected: 4,
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(PureState { amplitudes })
    }

    /// Single-qubit `m₀|0⟩ + m₁|1⟩`.
    pub fn qubit(m0: C64, m1: C64) -> Result<Self> {
        Self::new(vec![m0, m1])
    }

    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState {
            amplitudes: vec![re(h), re(h)],
        }
    }

    pub fn minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState {
            amplitudes: vec![re(h), re(-h)],
        }
    }

    pub fn zero() -> Self {
        PureState {
            amplitudes: vec![re(1.0), re(0.0)],
        }
    }

    pub fn one() -> Self {
        PureState {
            amplitudes: vec![re(0.0), re(1.0)],
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> CMatrix {
        CMatrix::outer(&self.amplitudes)
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: self.projector(),
        }
    }
}

/// `|B_kj⟩ = (|0,j⟩ + (−1)^k |1,1⊕j⟩)/√2`.
pub fn bell_state(k: u8, j: u8) -> PureState {
    assert!(k <= 1 && j <= 1, "Bell indices are bits");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let sign = if k == 0 { 1.0 } else { -1.0 };
    let mut amps = vec![re(0.0); 4];
    amps[j as usize] = re(h); // |0, j⟩
    amps[2 + (1 - j as usize)] = re(sign * h); // |1, 1⊕j⟩
    PureState { amplitudes: amps }
}

/// Trace-one, Hermitian, positive semidefinite operator, validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (tolerance `1e-9`).
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dev = matrix.hermitian_deviation();
        if dev > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {dev:.3e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let eig = hermitian_eig(&matrix)?;
        if eig.eigenvalues[0] < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:.3e}",
                eig.eigenvalues[0]
            )));
        }
        Ok(DensityMatrix { matrix })
    }

    pub(crate) fn new_unchecked(matrix: CMatrix) -> Self {
        DensityMatrix { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            matrix: CMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eig(&self.matrix)
            .expect("validated density matrix is Hermitian")
            .eigenvalues
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&DensityMatrixJson::from(self)).expect("plain numeric data")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: DensityMatrixJson = serde_json::from_str(s)?;
        raw.try_into()
    }
}

/// Wire form `{"dim": n, "re": [[..]], "im": [[..]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityMatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&DensityMatrix> for DensityMatrixJson {
    fn from(rho: &DensityMatrix) -> Self {
        DensityMatrixJson {
            dim: rho.dim(),
            re: rho.matrix.real_part(),
            im: rho.matrix.imag_part(),
        }
    }
}

impl TryFrom<DensityMatrixJson> for DensityMatrix {
    type Error = Error;
    fn try_from(raw: DensityMatrixJson) -> Result<Self> {
        let m = CMatrix::from_parts(&raw.re, &raw.im)?;
        if m.dim() != raw.dim {
            return Err(Error::DimensionMismatch {
                left: raw.dim,
                right: m.dim(),
            });
        }
        DensityMatrix::new(m)
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eta) {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "eta",
            value: eta,
            domain: "[0, 1]",
        })
    }
}

pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            domain: "[0, 1]",
        })
    }
}

/// `(1−η)·I/4 + η·|B00⟩⟨B00|`
pub fn werner(eta: f64) -> Result<DensityMatrix> {
    check_eta(eta)?;
    let noise = CMatrix::identity(4).scale_real((1.0 - eta) / 4.0);
    let signal = bell_state(0, 0).projector().scale_real(eta);
    Ok(DensityMatrix::new_unchecked(&noise + &signal))
}

/// The same Werner state written as a mixture of the four Bell projectors,
/// `(1+3η)/4` on `B00` and `(1−η)/4` on each of the others.
pub fn werner_from_bell_mixture(eta: f64) -> Result<DensityMatrix> {
    check_eta(eta)?;
    let mut m = bell_state(0, 0).projector().scale_real((1.0 + 3.0 * eta) / 4.0);
    for (k, j) in [(1, 0), (0, 1), (1, 1)] {
        m = &m + &bell_state(k, j).projector().scale_real((1.0 - eta) / 4.0);
    }
    Ok(DensityMatrix::new_unchecked(m))
}

/// Square root that treats roundoff-sized eigenvalues as exact zeros, so
/// rank-deficient states do not pick up `√ε` contributions.
fn rounded_sqrt(lambda: f64) -> f64 {
    if lambda <= FIDELITY_ZERO {
        0.0
    } else {
        lambda.sqrt()
    }
}

const FIDELITY_ZERO: f64 = 1e-15;

/// Uhlmann fidelity `Tr √(√σ ρ √σ)`, in `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let s = hermitian_eig(sigma.matrix())?.reconstruct_with(rounded_sqrt);
    let inner = &(&s * rho.matrix()) * &s;
    // √σ ρ √σ is PSD in exact arithmetic; symmetrize away roundoff.
    let eig = hermitian_eig(&inner.hermitian_part())?;
    let f: f64 = eig.eigenvalues.iter().map(|&l| rounded_sqrt(l)).sum();
    Ok(f.clamp(0.0, 1.0))
}

/// `Tr(ρ²)`
pub fn purity(rho: &DensityMatrix) -> f64 {
    (rho.matrix() * rho.matrix()).trace().re
}
