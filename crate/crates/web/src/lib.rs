//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every function takes the scenario as JSON text and returns JSON text, so
//! the page needs no glue beyond `JSON.parse`. Errors come back as the
//! message the CLI would print.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use fsolink::budget::LinkKind;
use fsolink::scenario::DEFAULT_SCENARIO_JSON;
use fsolink::{parse_scenario, render_table, run_sweep, Decibels, PowerValue, Scenario, SweepDef, TableFormat};

fn scenario(text: &str) -> Result<Scenario, String> {
    parse_scenario(text).map_err(|e| format!("invalid scenario: {e}"))
}

fn db(name: &str, v: f64) -> Result<Decibels, String> {
    Decibels::new(v).map_err(|e| format!("{name}: {e}"))
}

fn watts(v: f64) -> Result<PowerValue, String> {
    PowerValue::from_watts(v).map_err(|e| format!("transmit power: {e}"))
}

fn evaluate(s: &Scenario, sweep: &SweepDef) -> Result<String, String> {
    let rows = run_sweep(&s.setup(), sweep).map_err(|e| e.to_string())?;
    let table = render_table(sweep.kind(), &rows, TableFormat::Markdown).map_err(|e| e.to_string())?;
    let out: Value = json!({ "kind": sweep.kind().as_str(), "rows": rows, "table": table });
    Ok(out.to_string())
}

/// The reference scenario, pretty-printed.
#[wasm_bindgen]
pub fn default_scenario() -> String {
    DEFAULT_SCENARIO_JSON.to_string()
}

/// Required transmit power over inter-satellite distances from `start_km`
/// to `stop_km` in `points` steps.
#[wasm_bindgen]
pub fn distance_sweep(scenario_json: &str, start_km: f64, stop_km: f64, points: u32, margin_db: f64) -> Result<String, String> {
    let s = scenario(scenario_json)?;
    if !(start_km > 0.0 && stop_km > start_km && (2..=2000).contains(&points)) {
        return Err("need 0 < start < stop and 2 to 2000 points".into());
    }
    let step = (stop_km - start_km) / f64::from(points - 1);
    let sweep = SweepDef::IslDistance {
        distances_km: (0..points).map(|i| start_km + f64::from(i) * step).collect(),
        margin: db("margin", margin_db)?,
    };
    evaluate(&s, &sweep)
}

/// Required transmit power and atmospheric losses over elevation, from
/// `min_elevation_deg` to 90° in 1° steps, at a fixed satellite altitude.
#[wasm_bindgen]
pub fn elevation_sweep(scenario_json: &str, sat_altitude_km: f64, min_elevation_deg: f64, margin_db: f64) -> Result<String, String> {
    let s = scenario(scenario_json)?;
    if !(1.0..90.0).contains(&min_elevation_deg) {
        return Err("minimum elevation must lie in [1, 90) degrees".into());
    }
    let first = min_elevation_deg.ceil() as u32;
    let sweep = SweepDef::Elevation {
        elevations_deg: (first..=90).map(f64::from).collect(),
        sat_altitude_km,
        margin: db("margin", margin_db)?,
    };
    evaluate(&s, &sweep)
}

/// Longest inter-satellite and up/down links that close at `tx_power_w`,
/// for margin floors 0 to `max_margin_db` dB in 1 dB steps. The up/down
/// rows are skipped when the scenario has no ground block.
#[wasm_bindgen]
pub fn max_range(scenario_json: &str, tx_power_w: f64, max_margin_db: f64) -> Result<String, String> {
    let s = scenario(scenario_json)?;
    if !(0.0..=60.0).contains(&max_margin_db) {
        return Err("maximum margin must lie in [0, 60] dB".into());
    }
    let mut links = vec![LinkKind::InterSatellite];
    if s.ground.is_some() && s.atmosphere.is_some() {
        links.push(LinkKind::UpDown);
    }
    let sweep = SweepDef::MaxRange {
        links,
        margin_floors: (0..=max_margin_db.floor() as u32)
            .map(|m| db("margin", f64::from(m)))
            .collect::<Result<_, _>>()?,
        tx_power_cap: watts(tx_power_w)?,
    };
    evaluate(&s, &sweep)
}
