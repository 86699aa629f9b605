//! Classical and quantum Fisher information, plus the closed forms for the
//! Werner family used as cross-checks.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::hermitian_eig;
use crate::channels::PhaseGenerator;
use crate::measurements::OutcomeDistribution;
use crate::states::{check_unit_interval, DensityMatrix};

const ZERO_PROB: f64 = 1e-12;
const ZERO_DERIV: f64 = 1e-9;
const ZERO_WEIGHT: f64 = 1e-12;
// |sin 2φ| below this counts as the edge of the phase domain.
const EDGE_SIN: f64 = 1e-12;

/// A Fisher-information value tagged with where it was evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FisherReport {
    pub strategy: String,
    pub eta: f64,
    pub phi: f64,
    pub visibility: f64,
    pub value: f64,
}

impl FisherReport {
    pub const CSV_HEADER: &'static str = "strategy,eta,phi,visibility,value";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.strategy, self.eta, self.phi, self.visibility, self.value
        )
    }
}

/// `F = Σₓ (∂_φ pₓ)² / pₓ`.
///
/// Outcomes with `p < 1e-12` and `|p′| < 1e-9` contribute nothing; a vanishing
/// probability with a non-vanishing derivative is reported as
/// [`Error::DivergentInformation`].
pub fn classical_fisher(dist: &OutcomeDistribution) -> Result<f64> {
    let derivs = dist.dprob_dphi().ok_or(Error::MissingDerivative)?;
    let mut total = 0.0;
    for ((label, &p), &dp) in dist.labels().iter().zip(dist.probabilities()).zip(derivs) {
        if p < ZERO_PROB {
            if dp.abs() < ZERO_DERIV {
                continue;
            }
            return Err(Error::DivergentInformation {
                label: label.clone(),
                probability: p,
                derivative: dp,
            });
        }
        total += dp * dp / p;
    }
    Ok(total.max(0.0))
}

/// Quantum Fisher information of the unitary family `e^{iHφ} ρ e^{−iHφ}`:
/// `2 Σᵢⱼ (λᵢ−λⱼ)²/(λᵢ+λⱼ) |⟨ψᵢ|H|ψⱼ⟩|²`, skipping pairs with `λᵢ+λⱼ < 1e-12`.
pub fn qfi_unitary_family(rho: &DensityMatrix, generator: &PhaseGenerator) -> Result<f64> {
    let h = generator.matrix();
    if h.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: h.dim(),
        });
    }
    let eig = hermitian_eig(rho.matrix())?;
    let n = eig.eigenvalues.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (li, lj) = (eig.eigenvalues[i].max(0.0), eig.eigenvalues[j].max(0.0));
            let weight = li + lj;
            if weight < ZERO_WEIGHT {
                continue;
            }
            let elem = h.sandwich(&eig.eigenvectors[i], &eig.eigenvectors[j]);
            total += (li - lj).powi(2) / weight * elem.norm_sqr();
        }
    }
    Ok(2.0 * total)
}

/// `8η²/(1+η)`: the largest information any measurement extracts from the
/// Werner family.
pub fn qfi_coherent_closed(eta: f64) -> Result<f64> {
    check_unit_interval("eta", eta)?;
    Ok(8.0 * eta * eta / (1.0 + eta))
}

/// Bell-basis Fisher information at `V = 1`:
/// `8η²(1+η) sin²2φ / ((1+η)² − 4η² cos²2φ)`.
///
/// The cosine in the denominator is squared; this is what summing `(p′)²/p`
/// over the Bell outcomes gives. At the domain edges (`sin 2φ ≈ 0`) the value
/// is 0, matching [`classical_fisher`]'s treatment of `0/0` terms even for
/// the pure probe, whose limit there is 4.
pub fn fisher_bell_closed(phi: f64, eta: f64) -> Result<f64> {
    check_unit_interval("eta", eta)?;
    let s = (2.0 * phi).sin();
    if eta == 0.0 || s.abs() < EDGE_SIN {
        return Ok(0.0);
    }
    // (1+η)² − 4η²cos² written without the cancellation at η = 1.
    let denom = (1.0 - eta) * (1.0 + 3.0 * eta) + 4.0 * eta * eta * s * s;
    Ok(8.0 * eta * eta * (1.0 + eta) * s * s / denom)
}

/// The Bell-basis expression with an unsquared `cos 2φ` in the denominator.
/// Kept only to show where it departs from [`fisher_bell_closed`].
pub fn fisher_bell_printed(phi: f64, eta: f64) -> Result<f64> {
    check_unit_interval("eta", eta)?;
    let (s, c) = (2.0 * phi).sin_cos();
    Ok(8.0 * eta * eta * (1.0 + eta) * s * s / ((1.0 + eta).powi(2) - 4.0 * eta * eta * c))
}

/// Local `|±±⟩` Fisher information at `V = 1`: `4η² sin²2φ / (1 − η² cos²2φ)`.
pub fn fisher_local_closed(phi: f64, eta: f64) -> Result<f64> {
    check_unit_interval("eta", eta)?;
    let s = (2.0 * phi).sin();
    if eta == 0.0 || s.abs() < EDGE_SIN {
        return Ok(0.0);
    }
    // 1 − η²cos² = (1 − η²) + η²sin²
    Ok(4.0 * eta * eta * s * s / ((1.0 - eta * eta) + eta * eta * s * s))
}

/// `16|m₀m₁|²η²`: QFI left in the unmeasured probe after projecting its
/// partner onto `m₀|0⟩ + m₁|1⟩`.
pub fn qfi_adaptive_closed(m0: Complex64, m1: Complex64, eta: f64) -> Result<f64> {
    check_unit_interval("eta", eta)?;
    let norm_sq = m0.norm_sqr() + m1.norm_sqr();
    if (norm_sq - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { norm_sq });
    }
    Ok(16.0 * (m0 * m1).norm_sqr() * eta * eta)
}
