//! Browser bindings for the demo page in `www/`.

use qgame_core::entangler::{EntanglerFamily, EntanglerSpec};
use qgame_core::equilibrium::{linspace, sweep_beta, MeshSpec};
use qgame_core::game::{final_state, GameTable};
use qgame_core::qutrit::{entangled_vacuum, is_qutrit_max_entangled};
use qgame_core::strategy::StrategyAngles;
use wasm_bindgen::prelude::*;

fn table(name: &str) -> Result<GameTable, String> {
    GameTable::builtin(name).ok_or_else(|| format!("unknown game `{name}`"))
}

/// Payoffs over an n×n grid of (θ₁, θ₂) with the azimuths held fixed.
/// Row-major in θ₁; player 1's grid followed by player 2's.
pub fn landscape(
    game: &str,
    beta: f64,
    phi1: f64,
    alpha1: f64,
    phi2: f64,
    alpha2: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    if n < 2 {
        return Err("grid needs at least 2 points per side".into());
    }
    let table = table(game)?;
    let j = EntanglerSpec::j1(beta).map_err(|e| e.to_string())?.matrix();
    let thetas = linspace(0.0, std::f64::consts::PI, n);
    let mut out = vec![0.0; 2 * n * n];
    for (a, &t1) in thetas.iter().enumerate() {
        let g1 = StrategyAngles::wrapped(phi1, alpha1, t1);
        for (b, &t2) in thetas.iter().enumerate() {
            let g2 = StrategyAngles::wrapped(phi2, alpha2, t2);
            let sq = final_state(&j, &g1, &g2).map_err(|e| e.to_string())?.sq();
            let p = table.payoffs_from_sq(&sq);
            out[a * n + b] = p.p1;
            out[n * n + a * n + b] = p.p2;
        }
    }
    Ok(out)
}

/// Equilibrium sweep over `steps` values of β in [0, π/2], as JSON.
pub fn sweep_report(game: &str, steps: usize, mesh: &str) -> Result<String, String> {
    let table = table(game)?;
    let mesh: MeshSpec = mesh.parse().map_err(|e: qgame_core::Error| e.to_string())?;
    if steps == 0 {
        return Err("need at least one step".into());
    }
    let betas = linspace(0.0, std::f64::consts::FRAC_PI_2, steps);
    let report = sweep_beta(&table, EntanglerFamily::J1, &mesh, &betas).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&report).expect("plain data serializes"))
}

/// |amplitude|² of the nine components of J(β)|00⟩, then 1.0 if the state is
/// maximally entangled and 0.0 otherwise.
pub fn qutrit_probabilities(beta: f64) -> Vec<f64> {
    let s = entangled_vacuum(beta);
    let mut out: Vec<f64> = s.amplitudes().as_slice().iter().map(|z| z.norm_sqr()).collect();
    out.push(if is_qutrit_max_entangled(&s, 1e-9) { 1.0 } else { 0.0 });
    out
}

#[wasm_bindgen]
pub fn payoff_landscape(
    game: &str,
    beta: f64,
    phi1: f64,
    alpha1: f64,
    phi2: f64,
    alpha2: f64,
    n: usize,
) -> Result<Vec<f64>, JsError> {
    landscape(game, beta, phi1, alpha1, phi2, alpha2, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sweep(game: &str, steps: usize, mesh: &str) -> Result<String, JsError> {
    sweep_report(game, steps, mesh).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn qutrit_amplitudes(beta: f64) -> Vec<f64> {
    qutrit_probabilities(beta)
}
