//! Seeded outcome sampling, the two-step `η̂`-then-`φ̂` estimator, and the
//! Monte Carlo harness that compares estimator variance with the Cramér–Rao
//! bound.
//!
//! Randomness: every trial draws from its own ChaCha20 stream, obtained by
//! seeding with the run seed and selecting stream number `trial_index`. Results
//! therefore do not depend on trial scheduling.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fisher::classical_fisher;
use crate::measurements::{model_probs, OutcomeDistribution, Strategy, VisibilityModelParams};
use crate::rng::substream;
use crate::search::golden_section_max;
use crate::states::check_unit_interval;

const MLE_GRID_POINTS: usize = 1024;
const MLE_REFINE_WIDTH: f64 = 1e-9;

/// Multinomial draw of `shots` outcomes, returned in the distribution's label order.
pub fn sample_counts<R: Rng + ?Sized>(dist: &OutcomeDistribution, shots: u64, rng: &mut R) -> Vec<u64> {
    let probs = dist.probabilities();
    let mut counts = vec![0u64; probs.len()];
    let mut remaining = shots;
    let mut mass = 1.0f64;
    for (i, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if i == probs.len() - 1 {
            counts[i] = remaining;
            break;
        }
        let q = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
        let k = if q >= 1.0 {
            remaining
        } else if q <= 0.0 {
            0
        } else {
            Binomial::new(remaining, q)
                .expect("q is a probability")
                .sample(rng)
        };
        counts[i] = k;
        remaining -= k;
        mass -= p;
    }
    counts
}

/// Outcome counts for one strategy, aligned with [`Strategy::labels`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts {
    strategy: Strategy,
    values: Vec<u64>,
}

impl Counts {
    pub fn new(strategy: Strategy, values: Vec<u64>) -> Result<Self> {
        if values.len() != strategy.labels().len() {
            return Err(Error::InvalidConfig(format!(
                "{strategy} counts need {} entries, got {}",
                strategy.labels().len(),
                values.len()
            )));
        }
        Ok(Counts { strategy, values })
    }

    /// Builds counts from `label → n`; missing labels count as zero.
    pub fn from_map(strategy: Strategy, map: &BTreeMap<String, u64>) -> Result<Self> {
        for label in map.keys() {
            if !strategy.labels().contains(&label.as_str()) {
                return Err(Error::UnknownLabel {
                    label: label.clone(),
                    strategy: strategy.to_string(),
                });
            }
        }
        let values = strategy
            .labels()
            .iter()
            .map(|l| map.get(*l).copied().unwrap_or(0))
            .collect();
        Ok(Counts { strategy, values })
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn total(&self) -> u64 {
        self.values.iter().sum()
    }

    pub fn get(&self, label: &str) -> Option<u64> {
        self.strategy
            .labels()
            .iter()
            .position(|l| *l == label)
            .map(|i| self.values[i])
    }

    pub fn to_map(&self) -> BTreeMap<String, u64> {
        self.strategy
            .labels()
            .iter()
            .zip(&self.values)
            .map(|(l, &n)| (l.to_string(), n))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CountsFile::from(self)).expect("plain data")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: CountsFile = serde_json::from_str(s)?;
        Counts::from_map(file.strategy, &file.counts)
    }
}

/// Wire form `{"strategy": ..., "counts": {label: n}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CountsFile {
    pub strategy: Strategy,
    pub counts: BTreeMap<String, u64>,
}

impl From<&Counts> for CountsFile {
    fn from(c: &Counts) -> Self {
        CountsFile {
            strategy: c.strategy,
            counts: c.to_map(),
        }
    }
}

/// `η̂ = 1 − 2·(n_B01 + n_B11)/N`, clamped to `[0, 1]`.
///
/// Only the Bell strategies see the phase-free outcomes; local counts cannot
/// separate a change of `η` from a change of `φ`.
pub fn estimate_eta(counts: &Counts) -> Result<f64> {
    let n = counts.total();
    let null = match counts.strategy {
        Strategy::Bell => counts.values[2] + counts.values[3],
        Strategy::GroupedBell => counts.values[2],
        Strategy::Local => {
            return Err(Error::NotIdentifiable {
                strategy: counts.strategy.to_string(),
            })
        }
    };
    if n == 0 {
        return Err(Error::InvalidConfig("no counts".into()));
    }
    Ok((1.0 - 2.0 * null as f64 / n as f64).clamp(0.0, 1.0))
}

/// `Σₓ nₓ ln pₓ(φ)`; outcomes with no counts are skipped and an observed
/// outcome with zero probability yields `−∞`.
pub fn log_likelihood(counts: &Counts, phi: f64, params: VisibilityModelParams) -> f64 {
    let dist = model_probs(counts.strategy, phi, params);
    let mut ll = 0.0;
    for (&n, &p) in counts.values.iter().zip(dist.probabilities()) {
        if n == 0 {
            continue;
        }
        if p <= 0.0 {
            return f64::NEG_INFINITY;
        }
        ll += n as f64 * p.ln();
    }
    ll
}

/// Maximum-likelihood phase on `[0, π/2]` for known `η` and `V`.
///
/// A 1024-point grid locates the global maximum; golden-section search on the
/// neighbouring grid cells refines it to width `1e-9`. Ties go to the smaller
/// phase.
pub fn mle_phi(counts: &Counts, eta: f64, visibility: f64) -> Result<f64> {
    let params = VisibilityModelParams::new(eta, visibility)?;
    if params.contrast() == 0.0 {
        return Err(Error::FlatLikelihood {
            eta_v: params.contrast(),
        });
    }
    let ll = |phi: f64| log_likelihood(counts, phi, params);
    let step = FRAC_PI_2 / (MLE_GRID_POINTS - 1) as f64;
    let grid_phi = |i: usize| if i == MLE_GRID_POINTS - 1 { FRAC_PI_2 } else { i as f64 * step };

    let mut best_i = 0;
    let mut best_ll = ll(0.0);
    for i in 1..MLE_GRID_POINTS {
        let v = ll(grid_phi(i));
        if v > best_ll {
            best_i = i;
            best_ll = v;
        }
    }
    if best_ll == f64::NEG_INFINITY {
        return Err(Error::InfeasibleCounts);
    }

    let lo = grid_phi(best_i.saturating_sub(1));
    let hi = grid_phi((best_i + 1).min(MLE_GRID_POINTS - 1));
    let (phi, refined) = golden_section_max(ll, lo, hi, MLE_REFINE_WIDTH);
    let grid_best = grid_phi(best_i);
    if refined > best_ll || (refined == best_ll && phi < grid_best) {
        Ok(phi)
    } else {
        Ok(grid_best)
    }
}

/// `1/(N·F)`
pub fn crb(fisher: f64, shots: u64) -> Result<f64> {
    if fisher.is_nan() || fisher <= 0.0 || !fisher.is_finite() || shots == 0 {
        return Err(Error::NoBound { fisher });
    }
    Ok(1.0 / (shots as f64 * fisher))
}

/// One Monte Carlo experiment: ground truth, strategy, budget and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub eta_true: f64,
    pub phi_true: f64,
    #[serde(default = "default_visibility")]
    pub visibility: f64,
    pub shots: u64,
    pub trials: usize,
    pub strategy: Strategy,
    pub seed: u64,
}

fn default_visibility() -> f64 {
    1.0
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        check_unit_interval("eta", self.eta_true)?;
        check_unit_interval("visibility", self.visibility)?;
        if !(0.0..=FRAC_PI_2).contains(&self.phi_true) {
            return Err(Error::Domain {
                name: "phi",
                value: self.phi_true,
                domain: "[0, pi/2]",
            });
        }
        if self.shots == 0 {
            return Err(Error::InvalidConfig("shots must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        Ok(())
    }

    pub fn params(&self) -> Result<VisibilityModelParams> {
        VisibilityModelParams::new(self.eta_true, self.visibility)
    }
}

/// Outcome of one simulated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub counts: Counts,
    pub eta_hat: f64,
    pub phi_hat: f64,
}

/// Estimator statistics against the Cramér–Rao bound, echoing the config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrbReport {
    pub strategy: Strategy,
    pub eta_true: f64,
    pub phi_true: f64,
    pub visibility: f64,
    pub shots: u64,
    pub trials: usize,
    pub seed: u64,
    pub variance: f64,
    pub bias: f64,
    pub crb: f64,
    pub ratio: f64,
}

impl CrbReport {
    pub const CSV_HEADER: &'static str =
        "strategy,eta_true,phi_true,visibility,shots,trials,seed,variance,bias,crb,ratio";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:e},{:e},{:e},{}",
            self.strategy,
            self.eta_true,
            self.phi_true,
            self.visibility,
            self.shots,
            self.trials,
            self.seed,
            self.variance,
            self.bias,
            self.crb,
            self.ratio
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

/// Runs a single trial with the given generator.
pub fn run_trial<R: Rng + ?Sized>(config: &ExperimentConfig, rng: &mut R) -> Result<TrialResult> {
    let params = config.params()?;
    let dist = model_probs(config.strategy, config.phi_true, params);
    let counts = Counts::new(config.strategy, sample_counts(&dist, config.shots, rng))?;
    // Local counts do not identify η; the true value is supplied as prior knowledge.
    let eta_hat = match config.strategy {
        Strategy::Local => config.eta_true,
        Strategy::Bell | Strategy::GroupedBell => estimate_eta(&counts)?,
    };
    let phi_hat = mle_phi(&counts, eta_hat, config.visibility)?;
    Ok(TrialResult {
        counts,
        eta_hat,
        phi_hat,
    })
}

/// All trials of an experiment, in trial-index order.
pub fn run_trials(config: &ExperimentConfig) -> Result<Vec<TrialResult>> {
    config.validate()?;
    (0..config.trials)
        .map(|i| run_trial(config, &mut substream(config.seed, i as u64)))
        .collect()
}

/// Sample mean and unbiased sample variance.
pub fn mean_and_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Runs `config.trials` experiments and compares the spread of `φ̂` with
/// `1/(N·F(φ_true))`.
pub fn run_monte_carlo(config: &ExperimentConfig) -> Result<CrbReport> {
    config.validate()?;
    let params = config.params()?;
    if params.contrast() == 0.0 {
        return Err(Error::FlatLikelihood {
            eta_v: params.contrast(),
        });
    }
    let fisher = classical_fisher(&model_probs(config.strategy, config.phi_true, params))?;
    let bound = crb(fisher, config.shots)?;
    let trials = run_trials(config)?;
    let phis: Vec<f64> = trials.iter().map(|t| t.phi_hat).collect();
    let (mean, variance) = mean_and_variance(&phis);
    Ok(CrbReport {
        strategy: config.strategy,
        eta_true: config.eta_true,
        phi_true: config.phi_true,
        visibility: config.visibility,
        shots: config.shots,
        trials: config.trials,
        seed: config.seed,
        variance,
        bias: mean - config.phi_true,
        crb: bound,
        ratio: variance / bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurements::model_bell_probs;
    use std::f64::consts::FRAC_PI_4;

    fn bell(values: [u64; 4]) -> Counts {
        Counts::new(Strategy::Bell, values.to_vec()).unwrap()
    }

    #[test]
    fn point_mass_sampling() {
        let d = model_bell_probs(0.0, VisibilityModelParams::ideal(1.0).unwrap());
        let mut rng = substream(1, 0);
        assert_eq!(sample_counts(&d, 1000, &mut rng), vec![1000, 0, 0, 0]);
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = model_bell_probs(0.3, VisibilityModelParams::ideal(0.8).unwrap());
        let a = sample_counts(&d, 5000, &mut substream(42, 0));
        let b = sample_counts(&d, 5000, &mut substream(42, 0));
        assert_eq!(a, b);
        assert_eq!(a.iter().sum::<u64>(), 5000);
        let c = sample_counts(&d, 5000, &mut substream(42, 1));
        assert_ne!(a, c);
    }

    #[test]
    fn large_sample_frequencies() {
        let d = model_bell_probs(0.3, VisibilityModelParams::ideal(0.8).unwrap());
        let shots = 1_000_000u64;
        let counts = sample_counts(&d, shots, &mut substream(7, 0));
        for (&n, &p) in counts.iter().zip(d.probabilities()) {
            let sd = (p * (1.0 - p) / shots as f64).sqrt();
            assert!((n as f64 / shots as f64 - p).abs() <= 5.0 * sd);
        }
    }

    #[test]
    fn eta_examples() {
        assert_eq!(estimate_eta(&bell([100, 0, 0, 0])).unwrap(), 1.0);
        // η = 0.5: proportions (0.375 + x, 0.375 − x, 0.125, 0.125)
        assert_eq!(estimate_eta(&bell([375, 375, 125, 125])).unwrap(), 0.5);
        let grouped = Counts::new(Strategy::GroupedBell, vec![20, 20, 60]).unwrap();
        assert_eq!(estimate_eta(&grouped).unwrap(), 0.0);
        let local = Counts::new(Strategy::Local, vec![1, 1, 1, 1]).unwrap();
        assert!(matches!(estimate_eta(&local), Err(Error::NotIdentifiable { .. })));
    }

    #[test]
    fn mle_at_generating_parameter() {
        let d = model_bell_probs(FRAC_PI_4, VisibilityModelParams::ideal(0.8).unwrap());
        let values: Vec<u64> = d.probabilities().iter().map(|p| (p * 1e6).round() as u64).collect();
        let phi = mle_phi(&Counts::new(Strategy::Bell, values).unwrap(), 0.8, 1.0).unwrap();
        assert!((phi - FRAC_PI_4).abs() < 2e-3);
    }

    #[test]
    fn mle_boundary_at_zero() {
        assert_eq!(mle_phi(&bell([1000, 0, 0, 0]), 1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn mle_local_balanced_is_quarter_pi() {
        let c = Counts::new(Strategy::Local, vec![300, 250, 250, 200]).unwrap();
        let phi = mle_phi(&c, 0.7, 1.0).unwrap();
        assert!((phi - FRAC_PI_4).abs() < 1e-6, "{phi}");
    }

    #[test]
    fn mle_errors() {
        assert!(matches!(
            mle_phi(&bell([10, 10, 1, 1]), 0.0, 1.0),
            Err(Error::FlatLikelihood { .. })
        ));
        assert!(matches!(
            mle_phi(&bell([10, 10, 1, 1]), 0.5, 0.0),
            Err(Error::FlatLikelihood { .. })
        ));
        // η = 1 forbids B01/B11 outcomes entirely.
        assert!(matches!(
            mle_phi(&bell([10, 10, 1, 0]), 1.0, 1.0),
            Err(Error::InfeasibleCounts)
        ));
    }

    #[test]
    fn crb_examples() {
        assert!((crb(4.0, 10_000).unwrap() - 2.5e-5).abs() < 1e-20);
        assert_eq!(crb(1.0, 1).unwrap(), 1.0);
        assert!((crb(4.0 / 3.0, 300).unwrap() - 2.5e-3).abs() < 1e-15);
        assert!(matches!(crb(0.0, 10), Err(Error::NoBound { .. })));
        assert!(matches!(crb(-1.0, 10), Err(Error::NoBound { .. })));
    }

    #[test]
    fn counts_json_round_trip_and_labels() {
        let c = Counts::new(Strategy::Local, vec![1, 2, 3, 4]).unwrap();
        let json = c.to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["strategy"], "local");
        assert_eq!(v["counts"]["+-"], 2);
        assert_eq!(Counts::from_json(&json).unwrap(), c);
        let bad = r#"{"strategy": "bell", "counts": {"B22": 3}}"#;
        assert!(matches!(Counts::from_json(bad), Err(Error::UnknownLabel { .. })));
    }

    #[test]
    fn config_validation() {
        let mut cfg = ExperimentConfig {
            eta_true: 0.5,
            phi_true: FRAC_PI_4,
            visibility: 1.0,
            shots: 100,
            trials: 3,
            strategy: Strategy::Bell,
            seed: 1,
        };
        assert!(cfg.validate().is_ok());
        cfg.phi_true = 2.0;
        assert!(cfg.validate().is_err());
        cfg.phi_true = 0.5;
        cfg.shots = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn zero_eta_run_is_flat() {
        let cfg = ExperimentConfig {
            eta_true: 0.0,
            phi_true: FRAC_PI_4,
            visibility: 1.0,
            shots: 100,
            trials: 3,
            strategy: Strategy::Bell,
            seed: 1,
        };
        assert!(matches!(run_monte_carlo(&cfg), Err(Error::FlatLikelihood { .. })));
    }
}
