//! Browser bindings. Each export takes plain arguments and returns a JSON
//! string; failures come back as `{"error": "..."}`.

use serde::Serialize;
use statebound::bounds::{exact_bound_from_spectra, spectrum, unitary_bounds};
use statebound::channels::PhaseCycleScheme;
use statebound::expr::OperatorExpr;
use statebound::permutodesign::{operator_design, verify_design, DesignRecord};
use statebound::protocols::{pc_method, PcOptions};
use statebound::SpinSystem;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct BoundsView {
    spins: usize,
    eta_lower: f64,
    eta_upper: f64,
    exact_bound: f64,
    tight_partial_sums: Vec<usize>,
    design: DesignRecord,
}

#[derive(Serialize)]
struct PcPoint {
    t: f64,
    eta: f64,
}

#[derive(Serialize)]
struct PcView {
    points: Vec<PcPoint>,
    fixed_point_eta: Option<f64>,
    bound: f64,
}

#[derive(Serialize)]
struct OrderFactor {
    order: i32,
    re: f64,
    im: f64,
    magnitude: f64,
}

#[derive(Serialize)]
struct FilterView {
    phases_deg: Vec<f64>,
    signs: Vec<i8>,
    factors: Vec<OrderFactor>,
}

fn respond<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| error_json(&e.to_string())),
        Err(e) => error_json(&e),
    }
}

fn error_json(message: &str) -> String {
    serde_json::json!({ "error": message }).to_string()
}

fn text<E: ToString>(e: E) -> String {
    e.to_string()
}

/// Unitary bounds, exact mixed-unitary bound and a minimal design for two operator expressions.
#[wasm_bindgen]
pub fn permutohedron_bounds(rho: &str, sigma: &str, system: &str) -> String {
    respond((|| {
        let system = SpinSystem::preset(system).ok_or_else(|| format!("unknown system '{system}'"))?;
        let n = system.n;
        let rho = OperatorExpr::parse(rho).and_then(|e| e.evaluate(n, Some(&system))).map_err(text)?;
        let sigma = OperatorExpr::parse(sigma).and_then(|e| e.evaluate(n, Some(&system))).map_err(text)?.traceless_part();
        let (eta_lower, eta_upper) = unitary_bounds(&rho, &sigma).map_err(text)?;
        let (exact_bound, tight_partial_sums) = exact_bound_from_spectra(&spectrum(&rho), &spectrum(&sigma)).map_err(text)?;
        let d = operator_design(&rho, &sigma).map_err(text)?;
        let report = verify_design(&d, &rho, &sigma).map_err(text)?;
        Ok(BoundsView { spins: n, eta_lower, eta_upper, exact_bound, tight_partial_sums, design: DesignRecord::new(&d, report.residual_norm) })
    })())
}

/// Efficiency after each permutation-cycling loop on CHCl₃.
#[wasm_bindgen]
pub fn pc_trajectory(tau: f64, loops: u32, cross_relaxation: f64) -> String {
    respond((|| {
        if !(tau.is_finite() && tau >= 0.0) || loops > 5000 {
            return Err("tau must be non-negative and loops at most 5000".to_string());
        }
        let r = pc_method(&SpinSystem::chcl3(), tau, loops as usize, PcOptions { cross_relaxation }).map_err(text)?;
        let points = r.trajectory.unwrap_or_default().into_iter().map(|row| PcPoint { t: row.t, eta: row.eta }).collect();
        Ok(PcView { points, fixed_point_eta: r.extras.get("fixed_point_eta").copied(), bound: r.report.exact_bound })
    })())
}

/// Scaling factor applied to each coherence order by a K-step phase cycle on `n` spins.
#[wasm_bindgen]
pub fn phase_cycle_filter(n: u32, k: u32, alternating: bool) -> String {
    respond((|| {
        if n == 0 || n > 12 {
            return Err("n must be between 1 and 12".to_string());
        }
        let scheme = if alternating { PhaseCycleScheme::alternating(k as usize) } else { PhaseCycleScheme::uniform(k as usize) }
            .map_err(text)?;
        let n = n as i32;
        let factors = (-n..=n)
            .map(|o| {
                let f = scheme.factor(o as f64);
                OrderFactor { order: o, re: clean(f.re), im: clean(f.im), magnitude: clean(f.norm()) }
            })
            .collect();
        Ok(FilterView { phases_deg: scheme.phases().iter().map(|p| p.to_degrees()).collect(), signs: scheme.signs().to_vec(), factors })
    })())
}

fn clean(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x
    }
}
