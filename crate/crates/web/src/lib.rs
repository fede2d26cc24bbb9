//! Browser bindings. Every export takes plain numbers or strings and returns
//! a JSON string; the page in `www/` draws it on a canvas.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use coopsec::allocator::allocate;
use coopsec::harness::{run_sweep, ExperimentConfig};
use coopsec::protocol::{negotiate, ConstraintMode};
use coopsec::{Geometry, ScenarioConfig, ScenarioKind};

#[derive(Debug, Serialize)]
pub struct Curve {
    pub scenario: ScenarioKind,
    pub x: Vec<f64>,
    pub cs1: Vec<f64>,
    pub cs2: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct Curves {
    pub preset: String,
    pub axis: String,
    pub curves: Vec<Curve>,
}

/// Secrecy-rate curves of one figure preset, in nats.
pub fn curves(preset: &str) -> Result<Curves, String> {
    let cfg = ExperimentConfig::preset(preset).map_err(|e| e.to_string())?;
    let table = run_sweep(&cfg).map_err(|e| e.to_string())?;
    let axis = serde_json::to_value(table.axis)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default();
    let curves = cfg
        .scenarios
        .iter()
        .map(|&kind| {
            let rows = table.series(kind);
            Curve {
                scenario: kind,
                x: rows.iter().map(|r| r.axis).collect(),
                cs1: rows.iter().map(|r| r.cs1_nat).collect(),
                cs2: rows.iter().map(|r| r.cs2_nat).collect(),
            }
        })
        .collect();
    Ok(Curves {
        preset: preset.to_owned(),
        axis,
        curves,
    })
}

#[derive(Debug, Serialize)]
pub struct ConstraintMap {
    pub mode: ConstraintMode,
    pub d_ae: Vec<f64>,
    pub d_je: Vec<f64>,
    /// Row-major over `d_je` then `d_ae`: the negotiated output (1..=4).
    pub output: Vec<u8>,
}

/// Negotiated output over a square of Eve positions, `d_ae` and `d_je` in
/// `[lo, hi]`, with the rest of the default geometry.
pub fn map(mode: &str, lo: f64, hi: f64, n: usize) -> Result<ConstraintMap, String> {
    let mode: ConstraintMode = mode.parse().map_err(|e: coopsec::Error| e.to_string())?;
    if !(lo > 0.0 && hi >= lo) || !(2..=400).contains(&n) {
        return Err(format!("need 0 < lo <= hi and 2 <= n <= 400, got lo={lo} hi={hi} n={n}"));
    }
    let axis: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let cfg = ExperimentConfig::default();
    let policy = cfg.negotiation_policy();
    let scenario = cfg.scenario();
    let mut output = Vec::with_capacity(n * n);
    for &d_je in &axis {
        for &d_ae in &axis {
            let geo = Geometry { d_ae, d_je, ..cfg.geometry };
            let n = negotiate(&policy, &scenario, &geo, mode).map_err(|e| e.to_string())?;
            output.push(n.output);
        }
    }
    Ok(ConstraintMap {
        mode,
        d_ae: axis.clone(),
        d_je: axis,
        output,
    })
}

#[derive(Debug, Serialize)]
pub struct Allocation {
    pub scenario: ScenarioKind,
    pub p_a: f64,
    pub p_j: f64,
    pub p_ab: f64,
    pub p_jb: f64,
    pub cs1: f64,
    pub cs2: f64,
    pub provenance: String,
}

/// Optimal powers of all four scenarios at the reference gains.
pub fn allocations(lambda: f64, alpha: f64, p_a_max: f64, p_j_max: f64) -> Result<Vec<Allocation>, String> {
    let cfg = ScenarioConfig::reference()
        .with_lambda(lambda)
        .and_then(|c| c.with_alpha(alpha))
        .and_then(|c| c.with_budgets(p_a_max, p_j_max))
        .map_err(|e| e.to_string())?;
    ScenarioKind::ALL
        .into_iter()
        .map(|kind| {
            let a = allocate(kind, &cfg).map_err(|e| e.to_string())?;
            Ok(Allocation {
                scenario: kind,
                p_a: a.p_a,
                p_j: a.p_j,
                p_ab: a.p_ab,
                p_jb: a.p_jb,
                cs1: a.cs.cs1,
                cs2: a.cs.cs2,
                provenance: a.provenance_label(),
            })
        })
        .collect()
}

fn to_js<T: Serialize>(value: Result<T, String>) -> Result<String, JsValue> {
    value
        .and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn secrecy_curves(preset: &str) -> Result<String, JsValue> {
    to_js(curves(preset))
}

#[wasm_bindgen]
pub fn constraint_map(mode: &str, lo: f64, hi: f64, n: usize) -> Result<String, JsValue> {
    to_js(map(mode, lo, hi, n))
}

#[wasm_bindgen]
pub fn optimal_allocations(lambda: f64, alpha: f64, p_a_max: f64, p_j_max: f64) -> Result<String, JsValue> {
    to_js(allocations(lambda, alpha, p_a_max, p_j_max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_has_curves() {
        for preset in coopsec::harness::PRESETS {
            let c = curves(preset).unwrap();
            assert!(!c.curves.is_empty());
            assert!(c.curves.iter().all(|k| k.x.len() == k.cs1.len() && !k.x.is_empty()));
        }
        assert_eq!(curves("fig3").unwrap().axis, "alice-power");
        assert!(curves("fig0").is_err());
    }

    #[test]
    fn map_flips_beyond_the_radius() {
        let m = map("corrected", 1.0, 4.0, 7).unwrap();
        assert_eq!(m.output.len(), 49);
        // Eve near both transmitters: relaying; far from both: no cooperation.
        assert_eq!(m.output[0], 1);
        assert_eq!(*m.output.last().unwrap(), 4);
        assert!(map("loose", 1.0, 4.0, 7).is_err());
        assert!(map("paper", 0.0, 4.0, 7).is_err());
    }

    #[test]
    fn allocations_cover_all_scenarios() {
        let a = allocations(0.01, 0.8, 10.0, 10.0).unwrap();
        assert_eq!(a.len(), 4);
        let noncoop = a.iter().find(|x| x.scenario == ScenarioKind::NonCoop).unwrap();
        assert!((noncoop.p_a - 6.2216).abs() < 1e-3);
        assert!(allocations(-1.0, 0.8, 10.0, 10.0).is_err());
    }

    #[test]
    fn json_is_well_formed() {
        let s = serde_json::to_string(&allocations(1.0, 1.0, 5.0, 5.0).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 4);
        assert!(v[0]["scenario"].is_string());
    }
}
