//! Global depolarizing noise and the phase-imprinting unitary.

use crate::error::Result;
use crate::linalg::{c, CMatrix};
use crate::states::{check_unit_interval, DensityMatrix};

/// Generator `H = |1⟩⟨1|⊗I + I⊗|1⟩⟨1| = diag(0, 1, 1, 2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGenerator {
    matrix: CMatrix,
}

impl PhaseGenerator {
    /// The two-qubit generator used for the Werner family.
    pub fn two_qubit() -> Self {
        PhaseGenerator {
            matrix: CMatrix::from_real_diag(&[0.0, 1.0, 1.0, 2.0]),
        }
    }

    /// Single-qubit generator `2|1⟩⟨1|`, which carries the doubled phase seen
    /// by the unmeasured probe after conditioning.
    pub fn conditional_qubit() -> Self {
        PhaseGenerator {
            matrix: CMatrix::from_real_diag(&[0.0, 2.0]),
        }
    }

    /// Arbitrary Hermitian generator.
    pub fn from_matrix(matrix: CMatrix) -> Self {
        debug_assert!(matrix.is_hermitian(1e-12));
        PhaseGenerator { matrix }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// `(1−η)·I/d + η·ρ`
pub fn depolarize(rho: &DensityMatrix, eta: f64) -> Result<DensityMatrix> {
    check_unit_interval("eta", eta)?;
    let d = rho.dim();
    let noise = CMatrix::identity(d).scale_real((1.0 - eta) / d as f64);
    Ok(DensityMatrix::new_unchecked(
        &noise + &rho.matrix().scale_real(eta),
    ))
}

/// `U ρ U†` with `U = exp(iHφ) = diag(1, e^{iφ}, e^{iφ}, e^{2iφ})`.
///
/// Works for any diagonal generator; for a 2×2 input the conditional-qubit
/// generator `diag(0, 2)` is used.
pub fn phase_imprint(rho: &DensityMatrix, phi: f64) -> DensityMatrix {
    let generator = match rho.dim() {
        2 => PhaseGenerator::conditional_qubit(),
        _ => PhaseGenerator::two_qubit(),
    };
    phase_imprint_with(rho, &generator, phi)
}

/// `U ρ U†` for a diagonal generator `H`: entry `(i, j)` picks up `e^{i(hᵢ−hⱼ)φ}`.
pub fn phase_imprint_with(rho: &DensityMatrix, generator: &PhaseGenerator, phi: f64) -> DensityMatrix {
    let h = generator.matrix();
    assert_eq!(h.dim(), rho.dim(), "generator and state dimensions differ");
    let n = rho.dim();
    let mut out = rho.matrix().clone();
    for i in 0..n {
        for j in 0..n {
            let angle = (h[(i, i)].re - h[(j, j)].re) * phi;
            out[(i, j)] *= c(angle.cos(), angle.sin());
        }
    }
    DensityMatrix::new_unchecked(out)
}

/// `‖imprint(depolarize(ρ)) − depolarize(imprint(ρ))‖_max`
pub fn check_order_independence(rho: &DensityMatrix, eta: f64, phi: f64) -> Result<f64> {
    let a = phase_imprint(&depolarize(rho, eta)?, phi);
    let b = depolarize(&phase_imprint(rho, phi), eta)?;
    Ok(a.matrix().max_abs_diff(b.matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::re;
    use crate::states::{bell_state, werner};
    use std::f64::consts::PI;

    #[test]
    fn depolarized_bell_is_werner() {
        let b00 = bell_state(0, 0).density();
        for eta in [0.0, 0.3, 1.0] {
            let d = depolarize(&b00, eta).unwrap();
            assert!(d.matrix().max_abs_diff(werner(eta).unwrap().matrix()) < 1e-15);
        }
    }

    #[test]
    fn depolarize_endpoints() {
        let rho = phase_imprint(&werner(0.4).unwrap(), 1.1);
        assert_eq!(depolarize(&rho, 1.0).unwrap(), rho);
        let mixed = depolarize(&rho, 0.0).unwrap();
        assert!(mixed.matrix().max_abs_diff(&CMatrix::identity(4).scale_real(0.25)) < 1e-15);
        assert!(depolarize(&rho, 1.5).is_err());
    }

    #[test]
    fn imprint_identity_and_mixed() {
        let w = werner(0.7).unwrap();
        assert_eq!(phase_imprint(&w, 0.0).matrix().max_abs_diff(w.matrix()), 0.0);
        let mixed = DensityMatrix::maximally_mixed(4);
        assert!(phase_imprint(&mixed, 0.9).matrix().max_abs_diff(mixed.matrix()) < 1e-16);
    }

    #[test]
    fn imprint_puts_two_phi_on_coherence() {
        let eta = 0.8;
        let phi = 0.3;
        let rho = phase_imprint(&werner(eta).unwrap(), phi);
        // (|00⟩ + e^{2iφ}|11⟩)(⟨00| + e^{−2iφ}⟨11|): ⟨11|ρ|00⟩ = η/2·e^{2iφ}.
        let z = rho.matrix()[(3, 0)];
        assert!((z.norm() - eta / 2.0).abs() < 1e-15);
        assert!((z.arg() - 2.0 * phi).abs() < 1e-15);
        assert!((rho.matrix()[(0, 3)] - z.conj()).norm() < 1e-16);
    }

    #[test]
    fn imprint_matches_explicit_unitary() {
        let phi: f64 = 0.77;
        let u = CMatrix::from_diag(&[
            re(1.0),
            c(phi.cos(), phi.sin()),
            c(phi.cos(), phi.sin()),
            c((2.0 * phi).cos(), (2.0 * phi).sin()),
        ]);
        let w = werner(0.6).unwrap();
        let direct = &(&u * w.matrix()) * &u.adjoint();
        assert!(phase_imprint(&w, phi).matrix().max_abs_diff(&direct) < 1e-15);
    }

    #[test]
    fn order_independence_for_bell_input() {
        let b00 = bell_state(0, 0).density();
        for eta in [0.0, 0.2, 0.5, 0.9, 1.0] {
            for phi in [0.0, 0.4, PI / 4.0, 1.3] {
                assert!(check_order_independence(&b00, eta, phi).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn werner_family_has_period_pi() {
        let w = werner(0.55).unwrap();
        for phi in [0.1, 0.6, 1.2] {
            let a = phase_imprint(&w, phi);
            let b = phase_imprint(&w, phi + PI);
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
        }
    }
}
