//! Decibel and power-unit algebra.
//!
//! The model multiplies linear factors at full precision; decibels are the
//! interchange and presentation layer. Every dB/linear crossing in the crate
//! goes through the functions here.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Neg, Sub};

use serde::Serialize;

use crate::error::{finite, Error, Result};

/// Milliwatt reference for dBm.
const MILLIWATT: f64 = 1e-3;

/// A finite decibel value. Whether it is a ratio (dB) or referenced to 1 mW
/// (dBm) is carried by the name of the field or function that holds it.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize)]
#[serde(transparent)]
pub struct Decibels(f64);

impl Decibels {
    pub const ZERO: Decibels = Decibels(0.0);

    pub fn new(db: f64) -> Result<Self> {
        finite("decibel value", db).map(Decibels)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Decibels of a strictly positive linear ratio, with the ratio named in
    /// the error if it is out of domain.
    pub fn of_ratio(quantity: &'static str, ratio: f64) -> Result<Self> {
        if ratio.is_finite() && ratio > 0.0 {
            Ok(Decibels(10.0 * ratio.log10()))
        } else {
            Err(Error::domain(
                quantity,
                ratio,
                "decibels need a finite ratio > 0",
            ))
        }
    }

    /// Linear ratio `10^(dB/10)`.
    #[inline]
    pub fn to_linear(self) -> f64 {
        10f64.powf(self.0 / 10.0)
    }
}

impl fmt::Display for Decibels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "{:.*} dB", p, self.0),
            None => write!(f, "{} dB", self.0),
        }
    }
}

impl Add for Decibels {
    type Output = Decibels;
    fn add(self, rhs: Decibels) -> Decibels {
        Decibels(self.0 + rhs.0)
    }
}

impl Sub for Decibels {
    type Output = Decibels;
    fn sub(self, rhs: Decibels) -> Decibels {
        Decibels(self.0 - rhs.0)
    }
}

impl Neg for Decibels {
    type Output = Decibels;
    fn neg(self) -> Decibels {
        Decibels(-self.0)
    }
}

impl Sum for Decibels {
    fn sum<I: Iterator<Item = Decibels>>(iter: I) -> Decibels {
        Decibels(iter.map(|d| d.0).sum())
    }
}

/// Optical power, strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct PowerValue {
    watts: f64,
}

impl PowerValue {
    pub fn from_watts(watts: f64) -> Result<Self> {
        if watts.is_finite() && watts > 0.0 {
            Ok(PowerValue { watts })
        } else {
            Err(Error::domain("power (W)", watts, "must be finite and > 0"))
        }
    }

    pub fn from_dbm(dbm: Decibels) -> Self {
        PowerValue {
            watts: dbm.to_linear() * MILLIWATT,
        }
    }

    #[inline]
    pub fn watts(self) -> f64 {
        self.watts
    }

    pub fn dbm(self) -> Decibels {
        Decibels(10.0 * (self.watts / MILLIWATT).log10())
    }
}

/// `10·log10(x)` for `x > 0`.
pub fn db_from_linear(x: f64) -> Result<Decibels> {
    Decibels::of_ratio("linear ratio", x)
}

/// `10^(d/10)`.
pub fn linear_from_db(d: Decibels) -> f64 {
    d.to_linear()
}

/// Power in dBm, `10·log10(P / 1 mW)`.
pub fn dbm_from_watts(p: PowerValue) -> Decibels {
    p.dbm()
}

/// Power from a dBm level.
pub fn watts_from_dbm(d: Decibels) -> PowerValue {
    PowerValue::from_dbm(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn identity_and_decades() {
        assert_eq!(db_from_linear(1.0).unwrap().value(), 0.0);
        assert_eq!(db_from_linear(100.0).unwrap().value(), 20.0);
        assert_eq!(linear_from_db(Decibels::ZERO), 1.0);
    }

    #[test]
    fn pointing_factor_in_db() {
        // 10*log10(0.931358) = -0.308843..., evaluated with mpmath at 30 digits
        let d = db_from_linear(0.931358).unwrap().value();
        assert!((d - (-0.308843)).abs() < 1e-5, "{d}");
        assert!((d - (-0.3088)).abs() < 5e-5);
    }

    #[test]
    fn dbm_reference_points() {
        let mw = PowerValue::from_watts(1e-3).unwrap();
        assert_eq!(dbm_from_watts(mw).value(), 0.0);
        let w = PowerValue::from_watts(1.0).unwrap();
        assert_eq!(dbm_from_watts(w).value(), 30.0);
        let p = watts_from_dbm(Decibels::new(30.0).unwrap());
        assert_relative_eq!(p.watts(), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn dbm_matches_printed_power_columns() {
        // 3.41 W printed beside 35.32 dBm; both columns rounded independently.
        let p = PowerValue::from_watts(3.41).unwrap();
        assert!((p.dbm().value() - 35.33).abs() <= 0.02);
        assert!((p.dbm().value() - 35.32).abs() <= 0.02);
        // 15.32 dBm printed beside 34.05 mW.
        let w = watts_from_dbm(Decibels::new(15.32).unwrap()).watts();
        assert!((w - 0.03404).abs() / 0.03404 < 5e-3, "{w}");
        assert!((w - 34.05e-3).abs() / 34.05e-3 < 5e-3, "{w}");
    }

    #[test]
    fn rejects_out_of_domain() {
        for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            let err = db_from_linear(bad).unwrap_err();
            assert!(err.to_string().contains("linear ratio"), "{err}");
            assert!(PowerValue::from_watts(bad).is_err());
        }
        assert!(Decibels::new(f64::NAN).is_err());
        assert!(Decibels::new(f64::NEG_INFINITY).is_err());
        let err = Decibels::of_ratio("pointing loss", -0.5).unwrap_err();
        assert!(err.to_string().contains("pointing loss"));
    }

    #[test]
    fn decibel_arithmetic() {
        let a = Decibels::new(3.0).unwrap();
        let b = Decibels::new(-1.5).unwrap();
        assert_eq!((a + b).value(), 1.5);
        assert_eq!((a - b).value(), 4.5);
        assert_eq!((-a).value(), -3.0);
        assert_eq!([a, b, a].into_iter().sum::<Decibels>().value(), 4.5);
        assert_eq!(format!("{:.2}", b), "-1.50 dB");
    }

    proptest! {
        #[test]
        fn round_trip(exp in -30.0f64..30.0, mantissa in 1.0f64..10.0) {
            let x = mantissa * 10f64.powf(exp);
            let back = linear_from_db(db_from_linear(x).unwrap());
            prop_assert!(((back - x) / x).abs() <= 1e-12);
        }

        #[test]
        fn additive(a in 1e-15f64..1e15, b in 1e-15f64..1e15) {
            let lhs = db_from_linear(a * b).unwrap().value();
            let rhs = db_from_linear(a).unwrap().value() + db_from_linear(b).unwrap().value();
            prop_assert!((lhs - rhs).abs() <= 1e-9);
        }

        #[test]
        fn monotone(x in 1e-20f64..1e20, factor in 1.000001f64..1e6) {
            let y = x * factor;
            prop_assert!(db_from_linear(x).unwrap() < db_from_linear(y).unwrap());
        }
    }
}
