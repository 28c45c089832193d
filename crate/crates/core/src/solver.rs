//! Inverse feasibility queries: the longest link that still closes with a
//! given transmit-power cap and margin floor.
//!
//! At a fixed elevation the atmospheric loss does not depend on distance, so
//! path loss is the only distance-dependent term and the maximum distance
//! has a closed form. [`bisect`] is kept as a general monotone root finder
//! for cross-checking.

use std::f64::consts::PI;

use serde::Serialize;

use crate::atmosphere::{atmospheric_loss, AtmosphereSpec};
use crate::budget::Terminals;
use crate::error::{Error, Result};
use crate::geometry::{altitude_from_slant_km, EarthModel, GroundSite};
use crate::quantities::{Decibels, PowerValue};

/// Relative tolerance on the independent variable.
pub const DEFAULT_BISECTION_TOLERANCE: f64 = 1e-9;

pub const MAX_BISECTION_ITERATIONS: usize = 200;

/// Ground end of an up/down link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroundSegment {
    pub site: GroundSite,
    pub atmosphere: AtmosphereSpec,
    pub earth: EarthModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibilityQuery {
    pub tx_power_cap: PowerValue,
    pub margin_floor: Decibels,
    pub terminals: Terminals,
    /// Present for up/down links, absent for inter-satellite links.
    pub ground: Option<GroundSegment>,
    /// Links shorter than this are not considered; if even this distance
    /// cannot close, the query is infeasible.
    pub min_distance_km: f64,
}

impl FeasibilityQuery {
    pub fn inter_satellite(tx_power_cap: PowerValue, margin_floor: Decibels, terminals: Terminals) -> Self {
        FeasibilityQuery {
            tx_power_cap,
            margin_floor,
            terminals,
            ground: None,
            min_distance_km: 0.0,
        }
    }

    pub fn up_down(tx_power_cap: PowerValue, margin_floor: Decibels, terminals: Terminals, ground: GroundSegment) -> Self {
        FeasibilityQuery {
            tx_power_cap,
            margin_floor,
            terminals,
            ground: Some(ground),
            min_distance_km: 0.0,
        }
    }

    pub fn with_min_distance_km(mut self, min_distance_km: f64) -> Self {
        self.min_distance_km = min_distance_km;
        self
    }
}

/// Outcome of a feasibility query. Infeasibility is an answer, not an error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Feasibility<T> {
    Feasible(T),
    Infeasible,
}

impl<T> Feasibility<T> {
    pub fn feasible(self) -> Option<T> {
        match self {
            Feasibility::Feasible(t) => Some(t),
            Feasibility::Infeasible => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlantLimit {
    pub slant_distance_km: f64,
    pub sat_altitude_km: f64,
}

/// Largest distance at which `cap · terminals · atmospheric · (λ/4πd)²`
/// still reaches `sensitivity + floor`.
fn closed_form_distance_km(q: &FeasibilityQuery, atmospheric: f64) -> Result<f64> {
    let t = &q.terminals;
    let available = q.tx_power_cap.dbm()
        + Decibels::of_ratio("terminal gain", t.factors().product())?
        + Decibels::of_ratio("atmospheric loss", atmospheric)?;
    let required = t.receiver.sensitivity_dbm() + q.margin_floor;
    // (λ/4πd)² = 10^((required − available)/10)
    let excess_db = (available - required).value();
    let d_m = t.link.wavelength_m() / (4.0 * PI) * 10f64.powf(excess_db / 20.0);
    Ok(d_m / 1e3)
}

fn check_min_distance(q: &FeasibilityQuery) -> Result<()> {
    if q.min_distance_km.is_finite() && q.min_distance_km >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain("minimum link distance (km)", q.min_distance_km, "must be finite and >= 0"))
    }
}

/// Longest inter-satellite link that meets the margin floor at the power cap.
pub fn max_isl_distance_km(q: &FeasibilityQuery) -> Result<Feasibility<f64>> {
    if q.ground.is_some() {
        return Err(Error::Config(
            "inter-satellite range query must not carry a ground segment".into(),
        ));
    }
    check_min_distance(q)?;
    let d = closed_form_distance_km(q, 1.0)?;
    if d.is_finite() && d > 0.0 && d >= q.min_distance_km {
        Ok(Feasibility::Feasible(d))
    } else {
        Ok(Feasibility::Infeasible)
    }
}

/// Longest slant distance (and the matching satellite altitude) at the
/// query's elevation angle.
pub fn max_slant_distance_km(q: &FeasibilityQuery) -> Result<Feasibility<SlantLimit>> {
    let ground = q.ground.as_ref().ok_or_else(|| {
        Error::Config("up/down range query requires a ground site and atmosphere".into())
    })?;
    check_min_distance(q)?;
    let atmospheric = atmospheric_loss(&ground.site, &ground.atmosphere, &q.terminals.link)?.total();
    let d = closed_form_distance_km(q, atmospheric)?;
    if !(d.is_finite() && d > 0.0 && d >= q.min_distance_km) {
        return Ok(Feasibility::Infeasible);
    }
    Ok(Feasibility::Feasible(SlantLimit {
        slant_distance_km: d,
        sat_altitude_km: altitude_from_slant_km(&ground.site, d, &ground.earth)?,
    }))
}

/// Root of a monotone function on `[lo, hi]` by bisection.
///
/// Stops when the bracket shrinks below `tolerance` relative to its largest
/// endpoint magnitude (absolute near zero), when `f` hits zero exactly, or
/// after [`MAX_BISECTION_ITERATIONS`].
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, tolerance: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::domain("bisection bracket", hi - lo, "needs finite lo < hi"));
    }
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::domain("bisection tolerance", tolerance, "must be finite and > 0"));
    }
    let (mut lo, mut hi) = (lo, hi);
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket { lo, hi, f_lo, f_hi });
    }
    let lo_negative = f_lo < 0.0;
    for _ in 0..MAX_BISECTION_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
        let scale = lo.abs().max(hi.abs()).max(1.0);
        if hi - lo <= tolerance * scale {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::{achievable_margin, LinkGeometry};
    use crate::optics::{LinkSpec, Modulation, ReceiverSpec, TransmitterSpec};

    const URAD: f64 = 1e-6;

    fn dbv(x: f64) -> Decibels {
        Decibels::new(x).unwrap()
    }

    fn terminals() -> Terminals {
        Terminals {
            transmitter: TransmitterSpec::new(0.8, 15.0 * URAD, URAD).unwrap(),
            receiver: ReceiverSpec::new(0.8, 0.080, URAD, dbv(-35.5)).unwrap(),
            link: LinkSpec::new(1550e-9, 10.0, 1e-12, Modulation::OnOffKeying).unwrap(),
        }
    }

    fn ground(el: f64) -> GroundSegment {
        GroundSegment {
            site: GroundSite::new(1.0, el).unwrap(),
            atmosphere: AtmosphereSpec::new(3.128e-4, 0.5, 1.6, 20.0).unwrap(),
            earth: EarthModel::default(),
        }
    }

    fn one_watt() -> PowerValue {
        PowerValue::from_watts(1.0).unwrap()
    }

    #[test]
    fn bisect_simple_roots() {
        let x = bisect(|x| x - 2.0, 0.0, 10.0, 1e-12).unwrap();
        assert!((x - 2.0).abs() < 1e-11);
        let x = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((x - std::f64::consts::SQRT_2).abs() < 1e-11);
        // decreasing function
        let x = bisect(|x| 3.0 - x, 0.0, 10.0, 1e-12).unwrap();
        assert!((x - 3.0).abs() < 1e-11);
    }

    #[test]
    fn bisect_needs_sign_change() {
        let err = bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-9).unwrap_err();
        assert!(matches!(err, Error::Bracket { .. }));
        assert!(bisect(|x| x, 1.0, 0.0, 1e-9).is_err());
        assert!(bisect(|x| x, -1.0, 1.0, 0.0).is_err());
        assert_eq!(bisect(|x| x, 0.0, 1.0, 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn isl_range_reference_points() {
        let q = FeasibilityQuery::inter_satellite(one_watt(), dbv(3.0), terminals());
        let d = max_isl_distance_km(&q).unwrap().feasible().unwrap();
        assert!((d - 5419.0).abs() <= 5.0, "{d}");
        let q0 = FeasibilityQuery::inter_satellite(one_watt(), dbv(0.0), terminals());
        let d0 = max_isl_distance_km(&q0).unwrap().feasible().unwrap();
        assert!((d0 - 7654.0).abs() <= 5.0, "{d0}");

        let g = LinkGeometry::inter_satellite(d).unwrap();
        let m = achievable_margin(one_watt(), &terminals(), &g, None).unwrap();
        assert!((m.value() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn isl_range_agrees_with_bisection() {
        let q = FeasibilityQuery::inter_satellite(one_watt(), dbv(3.0), terminals());
        let closed = max_isl_distance_km(&q).unwrap().feasible().unwrap();
        let oracle = bisect(
            |d| {
                let g = LinkGeometry::inter_satellite(d).unwrap();
                achievable_margin(one_watt(), &terminals(), &g, None).unwrap().value() - 3.0
            },
            100.0,
            50_000.0,
            DEFAULT_BISECTION_TOLERANCE,
        )
        .unwrap();
        assert!((closed - oracle).abs() < 1e-3, "{closed} vs {oracle}");
    }

    #[test]
    fn slant_range_reference_points() {
        let q = FeasibilityQuery::up_down(one_watt(), dbv(3.0), terminals(), ground(40.0));
        let s = max_slant_distance_km(&q).unwrap().feasible().unwrap();
        assert!((s.slant_distance_km - 5125.0).abs() <= 5.0, "{s:?}");
        assert!((s.sat_altitude_km - 4062.0).abs() <= 5.0, "{s:?}");

        let q = FeasibilityQuery::up_down(one_watt(), dbv(0.0), terminals(), ground(40.0));
        let s = max_slant_distance_km(&q).unwrap().feasible().unwrap();
        assert!((s.slant_distance_km - 7240.0).abs() <= 5.0, "{s:?}");
        assert!((s.sat_altitude_km - 5970.0).abs() <= 5.0, "{s:?}");

        let q90 = FeasibilityQuery::up_down(one_watt(), dbv(3.0), terminals(), ground(90.0));
        let q40 = FeasibilityQuery::up_down(one_watt(), dbv(3.0), terminals(), ground(40.0));
        let s90 = max_slant_distance_km(&q90).unwrap().feasible().unwrap();
        let s40 = max_slant_distance_km(&q40).unwrap().feasible().unwrap();
        assert!(s90.slant_distance_km > s40.slant_distance_km);
    }

    #[test]
    fn infeasible_is_a_value() {
        let q = FeasibilityQuery::inter_satellite(one_watt(), dbv(3.0), terminals()).with_min_distance_km(10_000.0);
        assert_eq!(max_isl_distance_km(&q).unwrap(), Feasibility::Infeasible);
        let q = FeasibilityQuery::up_down(one_watt(), dbv(40.0), terminals(), ground(40.0)).with_min_distance_km(500.0);
        assert_eq!(max_slant_distance_km(&q).unwrap(), Feasibility::Infeasible);
    }

    #[test]
    fn query_kind_mismatch_is_a_config_error() {
        let q = FeasibilityQuery::up_down(one_watt(), dbv(3.0), terminals(), ground(40.0));
        assert!(matches!(max_isl_distance_km(&q), Err(Error::Config(_))));
        let q = FeasibilityQuery::inter_satellite(one_watt(), dbv(3.0), terminals());
        assert!(matches!(max_slant_distance_km(&q), Err(Error::Config(_))));
    }

    #[test]
    fn boundary_is_tight() {
        let q = FeasibilityQuery::inter_satellite(one_watt(), dbv(3.0), terminals());
        let d = max_isl_distance_km(&q).unwrap().feasible().unwrap();
        let margin = |d: f64| {
            achievable_margin(one_watt(), &terminals(), &LinkGeometry::inter_satellite(d).unwrap(), None)
                .unwrap()
                .value()
        };
        assert!(margin(d) >= 3.0 - 1e-9);
        assert!(margin(d + 1.0) < 3.0);
    }

    #[test]
    fn range_monotone_in_floor_and_cap() {
        let mut last = f64::INFINITY;
        for floor in [-5.0, 0.0, 3.0, 6.0, 12.0] {
            let q = FeasibilityQuery::inter_satellite(one_watt(), dbv(floor), terminals());
            let d = max_isl_distance_km(&q).unwrap().feasible().unwrap();
            assert!(d < last);
            last = d;
        }
        let mut last = 0.0;
        for cap in [0.1, 0.5, 1.0, 2.0, 10.0] {
            let q = FeasibilityQuery::up_down(PowerValue::from_watts(cap).unwrap(), dbv(3.0), terminals(), ground(40.0));
            let s = max_slant_distance_km(&q).unwrap().feasible().unwrap();
            assert!(s.slant_distance_km > last);
            last = s.slant_distance_km;
        }
    }
}
