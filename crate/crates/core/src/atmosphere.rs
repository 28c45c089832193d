//! Atmospheric attenuation for ground up/downlinks.
//!
//! Two scattering mechanisms multiply into the total loss:
//!
//! * Mie scattering: an empirical cubic in site altitude gives the zenith
//!   extinction ratio `ρ`, scaled by `csc θ_E`.
//! * Geometrical scattering: visibility from cloud liquid water content and
//!   number concentration, Kim's wavelength scaling for the attenuation
//!   coefficient, and Beer–Lambert decay over the tropospheric path.
//!
//! The Mie polynomials take wavelength in micrometres; Kim's scaling takes
//! it in nanometres relative to 550 nm. Each entry point names its unit.

use log::warn;
use serde::Serialize;

use crate::error::{non_negative, positive, Error, Result};
use crate::geometry::{atmospheric_path_length_km, GroundSite, MAX_SITE_ALTITUDE_KM, MIN_ELEVATION_DEG};
use crate::optics::LinkSpec;
use crate::quantities::Decibels;

/// Visibility model constants, `V = 1.002 / (L_W·N)^0.6473`.
const VISIBILITY_SCALE_KM: f64 = 1.002;
const VISIBILITY_EXPONENT: f64 = 0.6473;

/// Kim's model: `θ_A = (3.91 / V)·(λ / 550 nm)^−φ`.
const KIM_NUMERATOR: f64 = 3.91;
const KIM_REFERENCE_WAVELENGTH_NM: f64 = 550.0;

/// Wavelength band (µm) where the Mie coefficient fit is meaningful.
const MIE_BAND_UM: (f64, f64) = (0.5, 2.5);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtmosphereSpec {
    liquid_water_content_g_per_m3: f64,
    cloud_number_concentration_per_cm3: f64,
    particle_size_coefficient: f64,
    troposphere_height_km: f64,
}

impl AtmosphereSpec {
    /// `particle_size_coefficient` is Kim's φ; zero gives a flat spectrum.
    pub fn new(
        liquid_water_content_g_per_m3: f64,
        cloud_number_concentration_per_cm3: f64,
        particle_size_coefficient: f64,
        troposphere_height_km: f64,
    ) -> Result<Self> {
        Ok(AtmosphereSpec {
            liquid_water_content_g_per_m3: positive("liquid water content (g/m^3)", liquid_water_content_g_per_m3)?,
            cloud_number_concentration_per_cm3: positive(
                "cloud number concentration (cm^-3)",
                cloud_number_concentration_per_cm3,
            )?,
            particle_size_coefficient: non_negative("particle size coefficient", particle_size_coefficient)?,
            troposphere_height_km: positive("troposphere height (km)", troposphere_height_km)?,
        })
    }

    pub fn liquid_water_content_g_per_m3(&self) -> f64 {
        self.liquid_water_content_g_per_m3
    }

    pub fn cloud_number_concentration_per_cm3(&self) -> f64 {
        self.cloud_number_concentration_per_cm3
    }

    pub fn particle_size_coefficient(&self) -> f64 {
        self.particle_size_coefficient
    }

    pub fn troposphere_height_km(&self) -> f64 {
        self.troposphere_height_km
    }
}

/// Coefficients of the cubic `ρ(h) = a·h³ + b·h² + c·h + d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MieCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

pub fn mie_coefficients(wavelength_um: f64) -> MieCoefficients {
    if !(MIE_BAND_UM.0..=MIE_BAND_UM.1).contains(&wavelength_um) {
        warn!(
            "wavelength {wavelength_um} um is outside the {}-{} um band of the Mie coefficient fit",
            MIE_BAND_UM.0, MIE_BAND_UM.1
        );
    }
    let l = wavelength_um;
    MieCoefficients {
        a: (-0.000545 * l + 0.002) * l - 0.0038,
        b: (0.00628 * l - 0.0232) * l + 0.00439,
        c: (-0.028 * l + 0.101) * l - 0.18,
        d: ((-0.228 * l + 0.922) * l - 1.26) * l + 0.719,
    }
}

/// Zenith extinction ratio `ρ` at a site `site_altitude_km` above sea level.
pub fn mie_extinction_ratio(site_altitude_km: f64, coeffs: &MieCoefficients) -> Result<f64> {
    if !(site_altitude_km.is_finite() && (0.0..=MAX_SITE_ALTITUDE_KM).contains(&site_altitude_km)) {
        return Err(Error::domain(
            "ground site altitude (km)",
            site_altitude_km,
            "the Mie extinction model is valid only for sites between 0 and 5 km",
        ));
    }
    let h = site_altitude_km;
    let MieCoefficients { a, b, c, d } = *coeffs;
    Ok(((a * h + b) * h + c) * h + d)
}

/// `I_m = exp(−ρ / sin θ_E)`.
pub fn mie_attenuation(rho: f64, elevation_deg: f64) -> Result<f64> {
    if !(elevation_deg.is_finite() && (MIN_ELEVATION_DEG..=90.0).contains(&elevation_deg)) {
        return Err(Error::domain(
            "elevation angle (deg)",
            elevation_deg,
            "must lie in [1, 90] degrees",
        ));
    }
    let rho = non_negative("Mie extinction ratio", rho)?;
    let sin_e = if elevation_deg == 90.0 { 1.0 } else { elevation_deg.to_radians().sin() };
    Ok((-rho / sin_e).exp())
}

/// Visibility in km from cloud liquid water content and number
/// concentration.
pub fn visibility_km(atmos: &AtmosphereSpec) -> f64 {
    let density = atmos.liquid_water_content_g_per_m3 * atmos.cloud_number_concentration_per_cm3;
    VISIBILITY_SCALE_KM / density.powf(VISIBILITY_EXPONENT)
}

/// Kim's-model attenuation coefficient in km⁻¹.
pub fn attenuation_coefficient_per_km(visibility_km: f64, wavelength_nm: f64, particle_size_coefficient: f64) -> f64 {
    (KIM_NUMERATOR / visibility_km) * (wavelength_nm / KIM_REFERENCE_WAVELENGTH_NM).powf(-particle_size_coefficient)
}

/// Beer–Lambert transmission `exp(−θ_A·d_A)`.
pub fn geometric_attenuation(coefficient_per_km: f64, path_length_km: f64) -> f64 {
    (-coefficient_per_km * path_length_km).exp()
}

/// Atmospheric transmission and its two constituents, all linear in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtmosphericLoss {
    pub mie: f64,
    pub geometric: f64,
    pub path_length_km: f64,
}

impl AtmosphericLoss {
    /// `L_A = I_m · I_g`.
    pub fn total(&self) -> f64 {
        self.mie * self.geometric
    }

    pub fn mie_db(&self) -> Decibels {
        Decibels::of_ratio("Mie attenuation", self.mie).expect("attenuation is positive")
    }

    pub fn geometric_db(&self) -> Decibels {
        Decibels::of_ratio("geometric attenuation", self.geometric).expect("attenuation is positive")
    }

    pub fn total_db(&self) -> Decibels {
        Decibels::of_ratio("atmospheric loss", self.total()).expect("attenuation is positive")
    }
}

/// Combined Mie and geometrical scattering loss for a ground site.
/// Depends on the site and the atmosphere only, never on how far away the
/// satellite is.
pub fn atmospheric_loss(site: &GroundSite, atmos: &AtmosphereSpec, link: &LinkSpec) -> Result<AtmosphericLoss> {
    let coeffs = mie_coefficients(link.wavelength_um());
    let rho = mie_extinction_ratio(site.altitude_km(), &coeffs)?;
    if rho <= 0.0 {
        return Err(Error::domain(
            "Mie extinction ratio",
            rho,
            "must be > 0 at this wavelength and site altitude",
        ));
    }
    let mie = mie_attenuation(rho, site.elevation_deg())?;
    let path_length_km = atmospheric_path_length_km(site, atmos.troposphere_height_km)?;
    let theta_a = attenuation_coefficient_per_km(
        visibility_km(atmos),
        link.wavelength_nm(),
        atmos.particle_size_coefficient,
    );
    Ok(AtmosphericLoss {
        mie,
        geometric: geometric_attenuation(theta_a, path_length_km),
        path_length_km,
    })
}
