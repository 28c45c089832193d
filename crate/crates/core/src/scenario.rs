//! Scenario files: a strict JSON description of the terminals, the ground
//! segment, and an optional sweep.
//!
//! Every numeric key carries its unit (`wavelength_nm`, `pointing_error_urad`,
//! ...). Unknown keys are rejected, so a key with the wrong unit suffix is an
//! error rather than a silently ignored value. Only `earth.radius_km` has a
//! default.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::atmosphere::AtmosphereSpec;
use crate::budget::{LinkKind, Terminals};
use crate::geometry::{EarthModel, GroundSite, EARTH_RADIUS_KM};
use crate::optics::{LinkSpec, Modulation, ReceiverSpec, TransmitterSpec};
use crate::quantities::{Decibels, PowerValue};
use crate::sweep::{LinkSetup, SweepDef, SweepKind};

/// The reference parameter set: 1550 nm OOK terminals, a ground station at
/// 1 km looking up at 40°, thin cirrus.
pub const DEFAULT_SCENARIO_JSON: &str = include_str!("../data/default_scenario.json");

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    /// A field is missing, unknown, mistyped, or violates a model invariant.
    #[error("{field}: {message}")]
    Semantic { field: String, message: String },
}

impl ScenarioError {
    fn semantic(field: impl Into<String>, message: impl Into<String>) -> Self {
        ScenarioError::Semantic {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn field(&self) -> Option<&str> {
        match self {
            ScenarioError::Semantic { field, .. } => Some(field),
            ScenarioError::Syntax { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModulationKey {
    #[serde(rename = "ook")]
    Ook,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkBlock {
    pub wavelength_nm: f64,
    pub data_rate_gbps: f64,
    pub bit_error_rate: f64,
    pub modulation: ModulationKey,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransmitterBlock {
    pub optics_efficiency: f64,
    pub divergence_full_angle_urad: f64,
    pub pointing_error_urad: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiverBlock {
    pub optics_efficiency: f64,
    pub telescope_diameter_mm: f64,
    pub pointing_error_urad: f64,
    pub sensitivity_dbm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundBlock {
    pub altitude_km: f64,
    pub elevation_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtmosphereBlock {
    pub liquid_water_content_g_per_m3: f64,
    pub cloud_number_concentration_per_cm3: f64,
    pub particle_size_coefficient: f64,
    pub troposphere_height_km: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EarthBlock {
    pub radius_km: f64,
}

impl Default for EarthBlock {
    fn default() -> Self {
        EarthBlock {
            radius_km: EARTH_RADIUS_KM,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

/// Sweep axis: an explicit list, or an inclusive `start..=stop` by `step`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Values(Vec<f64>),
    Range(AxisRange),
}

/// Margins for a margin sweep: one list shared by every axis value, or one
/// list per axis value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MarginGrid {
    Shared(Vec<f64>),
    PerRow(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinkTypeKey {
    InterSatellite,
    UpDown,
}

impl From<LinkTypeKey> for LinkKind {
    fn from(k: LinkTypeKey) -> Self {
        match k {
            LinkTypeKey::InterSatellite => LinkKind::InterSatellite,
            LinkTypeKey::UpDown => LinkKind::UpDown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub kind: SweepKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance_km: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sat_altitude_km: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elevation_deg: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_sat_altitude_km: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margins_db: Option<MarginGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tx_power_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link_types: Option<Vec<LinkTypeKey>>,
}

/// The on-disk form of a scenario, in the units of its keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub link: LinkBlock,
    pub transmitter: TransmitterBlock,
    pub receiver: ReceiverBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground: Option<GroundBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atmosphere: Option<AtmosphereBlock>,
    #[serde(default)]
    pub earth: EarthBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepBlock>,
}

/// A validated scenario: the document it came from plus the model objects
/// built from it.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    document: ScenarioDocument,
    pub terminals: Terminals,
    pub ground: Option<GroundSite>,
    pub atmosphere: Option<AtmosphereSpec>,
    pub earth: EarthModel,
    pub sweep: Option<SweepDef>,
}

const NM: f64 = 1e-9;
const MM: f64 = 1e-3;
const URAD: f64 = 1e-6;

fn at<T>(field: &str, r: crate::Result<T>) -> Result<T, ScenarioError> {
    r.map_err(|e| ScenarioError::semantic(field, e.to_string()))
}

impl Scenario {
    /// The shipped reference scenario.
    pub fn reference() -> Scenario {
        parse_scenario(DEFAULT_SCENARIO_JSON).expect("shipped scenario is valid")
    }

    pub fn document(&self) -> &ScenarioDocument {
        &self.document
    }

    pub fn setup(&self) -> LinkSetup {
        LinkSetup {
            terminals: self.terminals,
            ground: self.ground,
            atmosphere: self.atmosphere,
            earth: self.earth,
        }
    }

    /// Pretty JSON, LF line endings, trailing newline. Parsing the result
    /// yields an identical scenario.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.document).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_document(document: ScenarioDocument) -> Result<Scenario, ScenarioError> {
        let d = &document;
        let link = at(
            "link",
            LinkSpec::new(
                d.link.wavelength_nm * NM,
                d.link.data_rate_gbps,
                d.link.bit_error_rate,
                match d.link.modulation {
                    ModulationKey::Ook => Modulation::OnOffKeying,
                },
            ),
        )?;
        let transmitter = at(
            "transmitter",
            TransmitterSpec::new(
                d.transmitter.optics_efficiency,
                d.transmitter.divergence_full_angle_urad * URAD,
                d.transmitter.pointing_error_urad * URAD,
            ),
        )?;
        let sensitivity = at("receiver.sensitivity_dbm", Decibels::new(d.receiver.sensitivity_dbm))?;
        let receiver = at(
            "receiver",
            ReceiverSpec::new(
                d.receiver.optics_efficiency,
                d.receiver.telescope_diameter_mm * MM,
                d.receiver.pointing_error_urad * URAD,
                sensitivity,
            ),
        )?;
        let ground = d
            .ground
            .as_ref()
            .map(|g| {
                let field = if g.altitude_km.is_finite() && (0.0..=5.0).contains(&g.altitude_km) {
                    "ground.elevation_deg"
                } else {
                    "ground.altitude_km"
                };
                at(field, GroundSite::new(g.altitude_km, g.elevation_deg))
            })
            .transpose()?;
        let atmosphere = d
            .atmosphere
            .as_ref()
            .map(|a| {
                at(
                    "atmosphere",
                    AtmosphereSpec::new(
                        a.liquid_water_content_g_per_m3,
                        a.cloud_number_concentration_per_cm3,
                        a.particle_size_coefficient,
                        a.troposphere_height_km,
                    ),
                )
            })
            .transpose()?;
        if let (Some(g), Some(a)) = (&ground, &atmosphere) {
            if a.troposphere_height_km() <= g.altitude_km() {
                return Err(ScenarioError::semantic(
                    "atmosphere.troposphere_height_km",
                    "must exceed ground.altitude_km",
                ));
            }
        }
        let earth = at("earth.radius_km", EarthModel::new(d.earth.radius_km))?;
        let sweep = d
            .sweep
            .as_ref()
            .map(|s| resolve_sweep(s, ground.is_some(), atmosphere.is_some()))
            .transpose()?;
        Ok(Scenario {
            document,
            terminals: Terminals {
                transmitter,
                receiver,
                link,
            },
            ground,
            atmosphere,
            earth,
            sweep,
        })
    }
}

fn expand_axis(field: &str, axis: &Axis) -> Result<Vec<f64>, ScenarioError> {
    let values = match axis {
        Axis::Values(v) => v.clone(),
        Axis::Range(AxisRange { start, stop, step }) => {
            if !(step.is_finite() && *step > 0.0) {
                return Err(ScenarioError::semantic(format!("{field}.step"), "must be finite and > 0"));
            }
            if !(start.is_finite() && stop.is_finite() && start <= stop) {
                return Err(ScenarioError::semantic(field, "needs finite start <= stop"));
            }
            // Tolerate stop landing a hair off the grid.
            let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
            (0..n).map(|i| start + i as f64 * step).collect()
        }
    };
    if values.is_empty() {
        return Err(ScenarioError::semantic(field, "axis must not be empty"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(ScenarioError::semantic(field, "axis values must be finite"));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ScenarioError::semantic(field, "axis values must be strictly increasing"));
    }
    Ok(values)
}

fn margins(grid: &MarginGrid, rows: usize) -> Result<Vec<Vec<Decibels>>, ScenarioError> {
    let field = "sweep.margins_db";
    let to_db = |v: &[f64]| -> Result<Vec<Decibels>, ScenarioError> {
        v.iter().map(|&x| at(field, Decibels::new(x))).collect()
    };
    match grid {
        MarginGrid::Shared(v) => {
            let row = to_db(v)?;
            Ok(vec![row; rows])
        }
        MarginGrid::PerRow(rows_v) => {
            if rows_v.len() != rows {
                return Err(ScenarioError::semantic(
                    field,
                    format!("has {} rows but the sweep axis has {} values", rows_v.len(), rows),
                ));
            }
            rows_v.iter().map(|r| to_db(r)).collect()
        }
    }
}

fn resolve_sweep(s: &SweepBlock, has_ground: bool, has_atmosphere: bool) -> Result<SweepDef, ScenarioError> {
    let kind = s.kind;
    let needs_ground = kind.needs_ground()
        || (kind == SweepKind::MaxRange
            && s.link_types.as_ref().is_some_and(|l| l.contains(&LinkTypeKey::UpDown)));
    let isl_only = matches!(kind, SweepKind::IslDistance | SweepKind::MarginIsl)
        || (kind == SweepKind::MaxRange && !needs_ground);
    if needs_ground {
        if !has_ground {
            return Err(ScenarioError::semantic("ground", format!("ground required by sweep kind {}", kind.as_str())));
        }
        if !has_atmosphere {
            return Err(ScenarioError::semantic(
                "atmosphere",
                format!("atmosphere required by sweep kind {}", kind.as_str()),
            ));
        }
    } else if isl_only && (has_ground || has_atmosphere) {
        let field = if has_ground { "ground" } else { "atmosphere" };
        return Err(ScenarioError::semantic(
            field,
            format!("must be omitted for inter-satellite sweep kind {}", kind.as_str()),
        ));
    }

    let allowed: &[&str] = match kind {
        SweepKind::IslDistance => &["distance_km", "margin_db"],
        SweepKind::SlantAltitude => &["sat_altitude_km", "margin_db"],
        SweepKind::Elevation => &["elevation_deg", "fixed_sat_altitude_km", "margin_db"],
        SweepKind::MarginIsl => &["distance_km", "margins_db", "tx_power_w"],
        SweepKind::MarginUpDown => &["sat_altitude_km", "margins_db", "tx_power_w"],
        SweepKind::MaxRange => &["link_types", "margins_db", "tx_power_w"],
    };
    let present = [
        ("distance_km", s.distance_km.is_some()),
        ("sat_altitude_km", s.sat_altitude_km.is_some()),
        ("elevation_deg", s.elevation_deg.is_some()),
        ("fixed_sat_altitude_km", s.fixed_sat_altitude_km.is_some()),
        ("margin_db", s.margin_db.is_some()),
        ("margins_db", s.margins_db.is_some()),
        ("tx_power_w", s.tx_power_w.is_some()),
        ("link_types", s.link_types.is_some()),
    ];
    for (key, is_present) in present {
        if is_present && !allowed.contains(&key) {
            return Err(ScenarioError::semantic(
                format!("sweep.{key}"),
                format!("not used by sweep kind {}", kind.as_str()),
            ));
        }
        if !is_present && allowed.contains(&key) {
            return Err(ScenarioError::semantic(
                format!("sweep.{key}"),
                format!("required by sweep kind {}", kind.as_str()),
            ));
        }
    }

    let axis = |field: &str, a: &Option<Axis>| expand_axis(&format!("sweep.{field}"), a.as_ref().expect("checked"));
    let margin = || at("sweep.margin_db", Decibels::new(s.margin_db.expect("checked")));
    let cap = || at("sweep.tx_power_w", PowerValue::from_watts(s.tx_power_w.expect("checked")));

    Ok(match kind {
        SweepKind::IslDistance => {
            let distances_km = axis("distance_km", &s.distance_km)?;
            if distances_km[0] <= 0.0 {
                return Err(ScenarioError::semantic("sweep.distance_km", "distances must be > 0"));
            }
            SweepDef::IslDistance {
                distances_km,
                margin: margin()?,
            }
        }
        SweepKind::SlantAltitude => SweepDef::SlantAltitude {
            sat_altitudes_km: axis("sat_altitude_km", &s.sat_altitude_km)?,
            margin: margin()?,
        },
        SweepKind::Elevation => {
            let elevations_deg = axis("elevation_deg", &s.elevation_deg)?;
            if elevations_deg[0] < 1.0 || *elevations_deg.last().expect("non-empty") > 90.0 {
                return Err(ScenarioError::semantic(
                    "sweep.elevation_deg",
                    "elevations must lie in [1, 90] degrees; csc(elevation) is singular at 0",
                ));
            }
            SweepDef::Elevation {
                elevations_deg,
                sat_altitude_km: s.fixed_sat_altitude_km.expect("checked"),
                margin: margin()?,
            }
        }
        SweepKind::MarginIsl => {
            let distances_km = axis("distance_km", &s.distance_km)?;
            let margins = margins(s.margins_db.as_ref().expect("checked"), distances_km.len())?;
            SweepDef::MarginIsl {
                distances_km,
                margins,
                tx_power_cap: cap()?,
            }
        }
        SweepKind::MarginUpDown => {
            let sat_altitudes_km = axis("sat_altitude_km", &s.sat_altitude_km)?;
            let margins = margins(s.margins_db.as_ref().expect("checked"), sat_altitudes_km.len())?;
            SweepDef::MarginUpDown {
                sat_altitudes_km,
                margins,
                tx_power_cap: cap()?,
            }
        }
        SweepKind::MaxRange => {
            let links: Vec<LinkKind> = s.link_types.as_ref().expect("checked").iter().map(|&l| l.into()).collect();
            if links.is_empty() {
                return Err(ScenarioError::semantic("sweep.link_types", "must not be empty"));
            }
            let floors = match s.margins_db.as_ref().expect("checked") {
                MarginGrid::Shared(v) => v.iter().map(|&x| at("sweep.margins_db", Decibels::new(x))).collect::<Result<Vec<_>, _>>()?,
                MarginGrid::PerRow(_) => {
                    return Err(ScenarioError::semantic("sweep.margins_db", "max-range takes a flat list of margin floors"))
                }
            };
            SweepDef::MaxRange {
                links,
                margin_floors: floors,
                tx_power_cap: cap()?,
            }
        }
    })
}

fn syntax_error(e: &serde_json::Error) -> ScenarioError {
    ScenarioError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn document_from_value(value: Value) -> Result<ScenarioDocument, ScenarioError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { "<document>".to_string() } else { path };
        ScenarioError::semantic(field, e.into_inner().to_string())
    })
}

fn parse_value(text: &str) -> Result<Value, ScenarioError> {
    serde_json::from_str::<Value>(text).map_err(|e| syntax_error(&e))
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    parse_scenario_with_overrides(text, &[])
}

/// Parses a scenario after applying `key=value` overrides (dotted keys,
/// e.g. `receiver.sensitivity_dbm`).
pub fn parse_scenario_with_overrides(text: &str, overrides: &[(String, String)]) -> Result<Scenario, ScenarioError> {
    let mut value = parse_value(text)?;
    for (key, raw) in overrides {
        apply_override(&mut value, key, raw)?;
    }
    Scenario::from_document(document_from_value(value)?)
}

/// Splits `key=value`.
pub fn parse_override(spec: &str) -> Result<(String, String), ScenarioError> {
    match spec.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(ScenarioError::semantic(spec, "override must have the form key=value")),
    }
}

/// Sets a dotted key in a JSON document. `raw` is read as JSON when it
/// parses (numbers, lists, objects), otherwise as a string. Whether the key
/// is part of the schema is decided when the document is deserialized.
pub fn apply_override(doc: &mut Value, key: &str, raw: &str) -> Result<(), ScenarioError> {
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(ScenarioError::semantic(key, "override key has an empty path segment"));
    }
    let value = serde_json::from_str::<Value>(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = doc;
    for (i, part) in parts.iter().enumerate() {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| ScenarioError::semantic(parts[..i].join("."), "is not an object"))?;
        if i + 1 == parts.len() {
            obj.insert((*part).to_string(), value);
            return Ok(());
        }
        node = obj
            .entry((*part).to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    unreachable!("loop returns on the last segment")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn without(key: &str) -> String {
        let mut v: Value = serde_json::from_str(DEFAULT_SCENARIO_JSON).unwrap();
        v.as_object_mut().unwrap().remove(key);
        v.to_string()
    }

    fn with_sweep(base: &str, sweep: &str) -> String {
        let mut v: Value = serde_json::from_str(base).unwrap();
        v["sweep"] = serde_json::from_str(sweep).unwrap();
        v.to_string()
    }

    fn semantic_field(r: Result<Scenario, ScenarioError>) -> String {
        match r {
            Err(ScenarioError::Semantic { field, .. }) => field,
            other => panic!("expected semantic error, got {other:?}"),
        }
    }

    #[test]
    fn reference_scenario_holds_reference_values() {
        let s = Scenario::reference();
        let t = &s.terminals;
        assert!((t.link.wavelength_m() - 1550e-9).abs() < 1e-21);
        assert_eq!(t.link.data_rate_gbps(), 10.0);
        assert_eq!(t.link.bit_error_rate(), 1e-12);
        assert_eq!(t.transmitter.optics_efficiency(), 0.8);
        assert!((t.transmitter.divergence_full_angle_rad() - 15e-6).abs() < 1e-20);
        assert!((t.transmitter.pointing_error_rad() - 1e-6).abs() < 1e-20);
        assert_eq!(t.receiver.optics_efficiency(), 0.8);
        assert!((t.receiver.telescope_diameter_m() - 0.08).abs() < 1e-16);
        assert_eq!(t.receiver.sensitivity_dbm().value(), -35.5);
        let g = s.ground.unwrap();
        assert_eq!((g.altitude_km(), g.elevation_deg()), (1.0, 40.0));
        let a = s.atmosphere.unwrap();
        assert_eq!(a.liquid_water_content_g_per_m3() * a.cloud_number_concentration_per_cm3(), 3.128e-4 * 0.5);
        assert_eq!(a.particle_size_coefficient(), 1.6);
        assert_eq!(a.troposphere_height_km(), 20.0);
        assert_eq!(s.earth.radius_km(), 6378.1);
        assert!(s.sweep.is_none());
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_scenario("{\n  \"link\": {,\n}").unwrap_err();
        match err {
            ScenarioError::Syntax { line, column, .. } => {
                assert_eq!(line, 2);
                assert!(column > 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_unit_suffix_rejected() {
        let text = DEFAULT_SCENARIO_JSON.replace("wavelength_nm", "wavelength_um");
        let err = parse_scenario(&text).unwrap_err();
        assert_eq!(err.field(), Some("link.wavelength_um"));
        assert!(err.to_string().contains("wavelength_um"), "{err}");
    }

    #[test]
    fn missing_atmosphere_for_up_down_sweep() {
        let text = with_sweep(&without("atmosphere"), r#"{"kind":"slant-altitude","sat_altitude_km":[300,400],"margin_db":3}"#);
        let err = parse_scenario(&text).unwrap_err();
        assert!(err.to_string().contains("atmosphere required"), "{err}");
    }

    #[test]
    fn zero_elevation_rejected() {
        let err = parse_scenario_with_overrides(DEFAULT_SCENARIO_JSON, &[("ground.elevation_deg".into(), "0".into())]).unwrap_err();
        assert_eq!(err.field(), Some("ground.elevation_deg"));
        assert!(err.to_string().contains("csc"), "{err}");
    }

    #[test]
    fn site_above_mie_validity_rejected() {
        let err = parse_scenario_with_overrides(DEFAULT_SCENARIO_JSON, &[("ground.altitude_km".into(), "7".into())]).unwrap_err();
        assert_eq!(err.field(), Some("ground.altitude_km"));
        assert!(err.to_string().contains("Mie"), "{err}");
    }

    #[test]
    fn isl_sweep_refuses_ground_blocks() {
        let text = with_sweep(DEFAULT_SCENARIO_JSON, r#"{"kind":"isl-distance","distance_km":[1000],"margin_db":3}"#);
        assert_eq!(semantic_field(parse_scenario(&text)), "ground");
        let bare = without("ground");
        let bare = {
            let mut v: Value = serde_json::from_str(&bare).unwrap();
            v.as_object_mut().unwrap().remove("atmosphere");
            v.to_string()
        };
        let text = with_sweep(&bare, r#"{"kind":"isl-distance","distance_km":{"start":1000,"stop":3000,"step":1000},"margin_db":3}"#);
        let s = parse_scenario(&text).unwrap();
        assert_eq!(
            s.sweep,
            Some(SweepDef::IslDistance {
                distances_km: vec![1000.0, 2000.0, 3000.0],
                margin: Decibels::new(3.0).unwrap()
            })
        );
    }

    #[test]
    fn sweep_keys_checked_against_kind() {
        let text = with_sweep(DEFAULT_SCENARIO_JSON, r#"{"kind":"elevation","elevation_deg":[10,20],"margin_db":3}"#);
        assert_eq!(semantic_field(parse_scenario(&text)), "sweep.fixed_sat_altitude_km");
        let text = with_sweep(
            DEFAULT_SCENARIO_JSON,
            r#"{"kind":"elevation","elevation_deg":[10,20],"fixed_sat_altitude_km":550,"margin_db":3,"tx_power_w":1}"#,
        );
        assert_eq!(semantic_field(parse_scenario(&text)), "sweep.tx_power_w");
    }

    #[test]
    fn axis_invariants() {
        for axis in [r#"[]"#, r#"[10, 10]"#, r#"[20, 10]"#, r#"{"start":10,"stop":50,"step":0}"#, r#"{"start":50,"stop":10,"step":5}"#] {
            let sweep = format!(r#"{{"kind":"slant-altitude","sat_altitude_km":{axis},"margin_db":3}}"#);
            let err = parse_scenario(&with_sweep(DEFAULT_SCENARIO_JSON, &sweep)).unwrap_err();
            assert!(err.field().unwrap().starts_with("sweep.sat_altitude_km"), "{axis}: {err}");
        }
        let sweep = r#"{"kind":"elevation","elevation_deg":[0,10],"fixed_sat_altitude_km":550,"margin_db":3}"#;
        assert_eq!(semantic_field(parse_scenario(&with_sweep(DEFAULT_SCENARIO_JSON, sweep))), "sweep.elevation_deg");
    }

    #[test]
    fn margin_grids() {
        let sweep = r#"{"kind":"margin-updown","sat_altitude_km":[600,700],"margins_db":[1,2],"tx_power_w":1}"#;
        let s = parse_scenario(&with_sweep(DEFAULT_SCENARIO_JSON, sweep)).unwrap();
        match s.sweep.unwrap() {
            SweepDef::MarginUpDown { margins, .. } => assert_eq!(margins.len(), 2),
            other => panic!("{other:?}"),
        }
        let sweep = r#"{"kind":"margin-updown","sat_altitude_km":[600,700],"margins_db":[[1,2]],"tx_power_w":1}"#;
        assert_eq!(semantic_field(parse_scenario(&with_sweep(DEFAULT_SCENARIO_JSON, sweep))), "sweep.margins_db");
    }

    #[test]
    fn max_range_with_up_down_needs_ground() {
        let sweep = r#"{"kind":"max-range","link_types":["inter-satellite","up-down"],"margins_db":[3,0],"tx_power_w":1}"#;
        assert!(parse_scenario(&with_sweep(DEFAULT_SCENARIO_JSON, sweep)).is_ok());
        let err = parse_scenario(&with_sweep(&without("ground"), sweep)).unwrap_err();
        assert!(err.to_string().contains("ground required"));
    }

    #[test]
    fn overrides() {
        let s = parse_scenario_with_overrides(
            DEFAULT_SCENARIO_JSON,
            &[parse_override("receiver.sensitivity_dbm=-40").unwrap(), parse_override("earth.radius_km = 6371").unwrap()],
        )
        .unwrap();
        assert_eq!(s.terminals.receiver.sensitivity_dbm().value(), -40.0);
        assert_eq!(s.earth.radius_km(), 6371.0);
        assert_eq!(s.document().receiver.sensitivity_dbm, -40.0);

        let err = parse_scenario_with_overrides(DEFAULT_SCENARIO_JSON, &[parse_override("receiver.gain_db=3").unwrap()]).unwrap_err();
        assert_eq!(err.field(), Some("receiver.gain_db"));
        assert!(parse_override("no-equals").is_err());
        assert!(parse_override("=3").is_err());
        let mut v: Value = serde_json::from_str(DEFAULT_SCENARIO_JSON).unwrap();
        assert!(apply_override(&mut v, "link.wavelength_nm.x", "1").is_err());
        assert!(apply_override(&mut v, "link..x", "1").is_err());
    }

    #[test]
    fn earth_radius_defaults() {
        let mut v: Value = serde_json::from_str(DEFAULT_SCENARIO_JSON).unwrap();
        v.as_object_mut().unwrap().remove("earth");
        let s = parse_scenario(&v.to_string()).unwrap();
        assert_eq!(s.earth.radius_km(), 6378.1);
    }

    #[test]
    fn serialize_round_trip() {
        let sweeps = [
            r#"{"kind":"margin-updown","sat_altitude_km":{"start":600,"stop":900,"step":100},"margins_db":[[17,18],[15,16],[14,15],[13,14]],"tx_power_w":1}"#,
            r#"{"kind":"elevation","elevation_deg":[10,45.5,90],"fixed_sat_altitude_km":550,"margin_db":3}"#,
        ];
        for sweep in sweeps {
            let s = parse_scenario(&with_sweep(DEFAULT_SCENARIO_JSON, sweep)).unwrap();
            let again = parse_scenario(&s.to_json()).unwrap();
            assert_eq!(s, again);
            assert_eq!(s.to_json(), again.to_json());
        }
    }
}
