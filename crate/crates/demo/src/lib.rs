//! Browser bindings for the static demo page in `www/`.
//!
//! The `*_json` functions do the work and are plain Rust so they can be tested
//! natively; the `#[wasm_bindgen]` exports only convert errors.

use std::f64::consts::FRAC_PI_2;

use serde_json::json;
use wasm_bindgen::prelude::*;
use werner_metrology::prelude::*;

fn err(e: Error) -> String {
    e.to_string()
}

fn linspace(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, String> {
    if points < 2 {
        return Err(format!("need at least 2 points, got {points}"));
    }
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points).map(|i| if i == points - 1 { hi } else { lo + i as f64 * step }).collect())
}

/// Outcome probabilities over `φ ∈ [0, π/2]`:
/// `{"strategy", "phi": [...], "labels": [...], "p": [[...] per label]}`.
pub fn probability_curve_json(strategy: &str, eta: f64, visibility: f64, points: usize) -> Result<String, String> {
    let strategy: Strategy = strategy.parse().map_err(err)?;
    let params = VisibilityModelParams::new(eta, visibility).map_err(err)?;
    let phis = linspace(0.0, FRAC_PI_2, points)?;
    let labels = strategy.labels();
    let mut series = vec![Vec::with_capacity(points); labels.len()];
    for &phi in &phis {
        for (k, &p) in model_probs(strategy, phi, params).probabilities().iter().enumerate() {
            series[k].push(p);
        }
    }
    Ok(json!({ "strategy": strategy, "phi": phis, "labels": labels, "p": series }).to_string())
}

/// Fisher information against `η` at fixed `φ`:
/// `{"eta": [...], "bell": [...], "local": [...], "qfi": [...]}`.
pub fn fisher_curve_json(phi: f64, visibility: f64, points: usize) -> Result<String, String> {
    let etas = linspace(0.0, 1.0, points)?;
    let (mut bell, mut local, mut qfi) = (Vec::new(), Vec::new(), Vec::new());
    for &eta in &etas {
        let params = VisibilityModelParams::new(eta, visibility).map_err(err)?;
        bell.push(classical_fisher(&model_bell_probs(phi, params)).map_err(err)?);
        local.push(classical_fisher(&model_local_probs(phi, params)).map_err(err)?);
        qfi.push(qfi_coherent_closed(eta).map_err(err)?);
    }
    Ok(json!({ "phi": phi, "visibility": visibility, "eta": etas, "bell": bell, "local": local, "qfi": qfi }).to_string())
}

/// Monte Carlo run: the report plus every trial's estimates,
/// `{"report": {...}, "phi_hat": [...], "eta_hat": [...]}`.
pub fn simulate_json(
    strategy: &str,
    eta: f64,
    phi: f64,
    visibility: f64,
    shots: u32,
    trials: u32,
    seed: u32,
) -> Result<String, String> {
    let config = ExperimentConfig {
        eta_true: eta,
        phi_true: phi,
        visibility,
        shots: shots as u64,
        trials: trials as usize,
        strategy: strategy.parse().map_err(err)?,
        seed: seed as u64,
    };
    let report = run_monte_carlo(&config).map_err(err)?;
    let results = run_trials(&config).map_err(err)?;
    let phi_hat: Vec<f64> = results.iter().map(|t| t.phi_hat).collect();
    let eta_hat: Vec<f64> = results.iter().map(|t| t.eta_hat).collect();
    Ok(json!({ "report": report, "phi_hat": phi_hat, "eta_hat": eta_hat }).to_string())
}

#[wasm_bindgen]
pub fn probability_curve(strategy: &str, eta: f64, visibility: f64, points: usize) -> Result<String, JsError> {
    probability_curve_json(strategy, eta, visibility, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn fisher_curve(phi: f64, visibility: f64, points: usize) -> Result<String, JsError> {
    fisher_curve_json(phi, visibility, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn simulate(
    strategy: &str,
    eta: f64,
    phi: f64,
    visibility: f64,
    shots: u32,
    trials: u32,
    seed: u32,
) -> Result<String, JsError> {
    simulate_json(strategy, eta, phi, visibility, shots, trials, seed).map_err(|e| JsError::new(&e))
}
