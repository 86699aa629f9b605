//! Phase estimation with two-qubit Werner-state probes.
//!
//! The crate models a pair of polarization qubits prepared in a Werner state
//! `(1−η)·I/4 + η·|B00⟩⟨B00|`, a phase `φ` imprinted by `exp(iHφ)` with
//! `H = diag(0, 1, 1, 2)`, and three ways of reading the phase out:
//!
//! * a projection onto the Bell basis ([`Strategy::Bell`]),
//! * the three-outcome linear-optics Bell analyzer ([`Strategy::GroupedBell`]),
//! * local projections onto `|±±⟩` ([`Strategy::Local`]).
//!
//! For each it computes the classical Fisher information, compares it with the
//! quantum Fisher information, and checks by seeded Monte Carlo that the
//! maximum-likelihood estimator reaches the Cramér–Rao bound. A tomography
//! simulator rebuilds Werner states from local Pauli measurements.
//!
//! ```
//! use werner_metrology::prelude::*;
//!
//! let params = VisibilityModelParams::ideal(0.5).unwrap();
//! let bell = classical_fisher(&model_bell_probs(std::f64::consts::FRAC_PI_4, params)).unwrap();
//! let local = classical_fisher(&model_local_probs(std::f64::consts::FRAC_PI_4, params)).unwrap();
//! assert!(bell > local);
//! ```

pub mod channels;
pub mod error;
pub mod estimation;
pub mod fisher;
pub mod linalg;
pub mod measurements;
pub mod rng;
pub mod search;
pub mod states;
pub mod tomography;

pub use error::{Error, Result};
pub use measurements::Strategy;

pub mod prelude {
    pub use crate::channels::{check_order_independence, depolarize, phase_imprint, PhaseGenerator};
    pub use crate::error::Error;
    pub use crate::estimation::{
        crb, estimate_eta, mle_phi, run_monte_carlo, run_trials, sample_counts, Counts, CrbReport,
        ExperimentConfig, TrialResult,
    };
    pub use crate::fisher::{
        classical_fisher, fisher_bell_closed, fisher_local_closed, qfi_adaptive_closed,
        qfi_coherent_closed, qfi_unitary_family, FisherReport,
    };
    pub use crate::linalg::{hermitian_eig, kron, matrix_sqrt, partial_trace, CMatrix, Subsystem};
    pub use crate::measurements::{
        adaptive_project, bell_povm, grouped_bell_povm, local_diag_povm, model_bell_probs,
        model_grouped_probs, model_local_probs, model_probs, probabilities, OutcomeDistribution,
        Povm, Strategy, VisibilityModelParams,
    };
    pub use crate::states::{
        bell_state, fidelity, purity, werner, werner_from_bell_mixture, DensityMatrix, PureState,
    };
    pub use crate::tomography::{
        generate_tomography_counts, linear_inversion, project_to_physical, tomography_report,
        tomography_report_exact, TomographyData, TomographyReport, TomographySettings,
    };
}
