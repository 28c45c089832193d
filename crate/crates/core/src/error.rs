use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the link-budget model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A quantity fell outside the domain of the model that consumes it.
    #[error("{quantity} = {value} is out of range: {constraint}")]
    Domain {
        quantity: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("satellite below site: satellite altitude {sat_altitude_km} km must exceed ground site altitude {site_altitude_km} km")]
    SatelliteBelowSite {
        sat_altitude_km: f64,
        site_altitude_km: f64,
    },

    /// The inputs do not describe a coherent link (e.g. an atmosphere on an
    /// inter-satellite link).
    #[error("configuration error: {0}")]
    Config(String),

    #[error("no sign change on bracket [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
}

impl Error {
    pub(crate) fn domain(quantity: &'static str, value: f64, constraint: &'static str) -> Self {
        Error::Domain {
            quantity,
            value,
            constraint,
        }
    }
}

/// Rejects NaN and infinities.
pub(crate) fn finite(quantity: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::domain(quantity, value, "must be finite"))
    }
}

pub(crate) fn positive(quantity: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(quantity, value, "must be finite and > 0"))
    }
}

pub(crate) fn non_negative(quantity: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(quantity, value, "must be finite and >= 0"))
    }
}
