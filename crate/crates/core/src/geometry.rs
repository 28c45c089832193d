//! Earth / satellite / ground-station geometry on a spherical Earth.

use serde::Serialize;

use crate::error::{positive, Error, Result};

/// Mean Earth radius used throughout the model, km.
pub const EARTH_RADIUS_KM: f64 = 6378.1;

/// Ground stations are limited to the altitude band where the Mie
/// extinction polynomial is valid.
pub const MAX_SITE_ALTITUDE_KM: f64 = 5.0;

/// Lowest accepted elevation; the atmospheric path length and the Mie term
/// both divide by `sin(elevation)`.
pub const MIN_ELEVATION_DEG: f64 = 1.0;

/// A ground station: altitude above mean sea level and elevation angle
/// toward the satellite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroundSite {
    altitude_km: f64,
    elevation_deg: f64,
}

impl GroundSite {
    pub fn new(altitude_km: f64, elevation_deg: f64) -> Result<Self> {
        if !(altitude_km.is_finite() && (0.0..=MAX_SITE_ALTITUDE_KM).contains(&altitude_km)) {
            return Err(Error::domain(
                "ground site altitude (km)",
                altitude_km,
                "must lie in [0, 5] km, the validity range of the Mie extinction model",
            ));
        }
        if !(elevation_deg.is_finite() && (MIN_ELEVATION_DEG..=90.0).contains(&elevation_deg)) {
            return Err(Error::domain(
                "elevation angle (deg)",
                elevation_deg,
                "must lie in [1, 90] degrees; csc(elevation) is singular at 0",
            ));
        }
        Ok(GroundSite {
            altitude_km,
            elevation_deg,
        })
    }

    pub fn altitude_km(&self) -> f64 {
        self.altitude_km
    }

    pub fn elevation_deg(&self) -> f64 {
        self.elevation_deg
    }

    /// Same site, different elevation.
    pub fn with_elevation(&self, elevation_deg: f64) -> Result<Self> {
        GroundSite::new(self.altitude_km, elevation_deg)
    }

    pub(crate) fn elevation_rad(&self) -> f64 {
        self.elevation_deg.to_radians()
    }

    pub(crate) fn is_zenith(&self) -> bool {
        self.elevation_deg == 90.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EarthModel {
    radius_km: f64,
}

impl EarthModel {
    pub fn new(radius_km: f64) -> Result<Self> {
        positive("earth radius (km)", radius_km).map(|radius_km| EarthModel { radius_km })
    }

    pub fn radius_km(&self) -> f64 {
        self.radius_km
    }
}

impl Default for EarthModel {
    fn default() -> Self {
        EarthModel {
            radius_km: EARTH_RADIUS_KM,
        }
    }
}

/// Line-of-sight distance from the ground site to a satellite at
/// `sat_altitude_km`, in km.
///
/// With `R = R_E + h_E` and `H = h_S - h_E` this is
/// `R·(sqrt(((R+H)/R)² − cos²θ) − sin θ)`, evaluated in the equivalent
/// cancellation-free form `(2RH + H²) / (sqrt(R²sin²θ + 2RH + H²) + R sin θ)`.
/// At zenith the result is exactly `h_S − h_E`.
pub fn slant_distance_km(site: &GroundSite, sat_altitude_km: f64, earth: &EarthModel) -> Result<f64> {
    if !(sat_altitude_km.is_finite() && sat_altitude_km > site.altitude_km) {
        return Err(Error::SatelliteBelowSite {
            sat_altitude_km,
            site_altitude_km: site.altitude_km,
        });
    }
    let h = sat_altitude_km - site.altitude_km;
    if site.is_zenith() {
        return Ok(h);
    }
    let r = earth.radius_km + site.altitude_km;
    let r_sin = r * site.elevation_rad().sin();
    let numerator = h * (2.0 * r + h);
    Ok(numerator / ((r_sin * r_sin + numerator).sqrt() + r_sin))
}

/// Satellite altitude that puts it `slant_distance_km` away from the site
/// along the site's elevation angle (law of cosines). Inverse of
/// [`slant_distance_km`].
pub fn altitude_from_slant_km(site: &GroundSite, slant_distance_km: f64, earth: &EarthModel) -> Result<f64> {
    let d = positive("slant distance (km)", slant_distance_km)?;
    if site.is_zenith() {
        return Ok(d + site.altitude_km);
    }
    let r = earth.radius_km + site.altitude_km;
    let sin_e = site.elevation_rad().sin();
    // H = sqrt(R² + d² + 2Rd sinθ) − R, rewritten to avoid subtracting R.
    let numerator = d * (d + 2.0 * r * sin_e);
    let h = numerator / ((r * r + numerator).sqrt() + r);
    Ok(h + site.altitude_km)
}

/// Distance the beam travels through the troposphere,
/// `(h_A − h_E) / sin θ_E`, in km.
pub fn atmospheric_path_length_km(site: &GroundSite, troposphere_height_km: f64) -> Result<f64> {
    if !(troposphere_height_km.is_finite() && troposphere_height_km > site.altitude_km) {
        return Err(Error::domain(
            "troposphere height (km)",
            troposphere_height_km,
            "must exceed the ground site altitude",
        ));
    }
    let thickness = troposphere_height_km - site.altitude_km;
    if site.is_zenith() {
        return Ok(thickness);
    }
    Ok(thickness / site.elevation_rad().sin())
}
