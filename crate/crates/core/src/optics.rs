//! Optical terminal gains and pointing losses.
//!
//! Units are SI internally (metres, radians). Configuration layers convert
//! from the customary nm / mm / µrad at their boundary.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{non_negative, positive, Error, Result};
use crate::quantities::Decibels;

fn efficiency(quantity: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 && value <= 1.0 {
        Ok(value)
    } else {
        Err(Error::domain(quantity, value, "must lie in (0, 1]"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransmitterSpec {
    optics_efficiency: f64,
    divergence_full_angle_rad: f64,
    pointing_error_rad: f64,
}

impl TransmitterSpec {
    /// `divergence_full_angle_rad` is the full beam divergence, not the
    /// half angle.
    pub fn new(optics_efficiency: f64, divergence_full_angle_rad: f64, pointing_error_rad: f64) -> Result<Self> {
        Ok(TransmitterSpec {
            optics_efficiency: efficiency("transmitter optics efficiency", optics_efficiency)?,
            divergence_full_angle_rad: positive("transmitter divergence (rad)", divergence_full_angle_rad)?,
            pointing_error_rad: non_negative("transmitter pointing error (rad)", pointing_error_rad)?,
        })
    }

    pub fn optics_efficiency(&self) -> f64 {
        self.optics_efficiency
    }

    pub fn divergence_full_angle_rad(&self) -> f64 {
        self.divergence_full_angle_rad
    }

    pub fn pointing_error_rad(&self) -> f64 {
        self.pointing_error_rad
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReceiverSpec {
    optics_efficiency: f64,
    telescope_diameter_m: f64,
    pointing_error_rad: f64,
    sensitivity_dbm: Decibels,
}

impl ReceiverSpec {
    pub fn new(
        optics_efficiency: f64,
        telescope_diameter_m: f64,
        pointing_error_rad: f64,
        sensitivity_dbm: Decibels,
    ) -> Result<Self> {
        Ok(ReceiverSpec {
            optics_efficiency: efficiency("receiver optics efficiency", optics_efficiency)?,
            telescope_diameter_m: positive("receiver telescope diameter (m)", telescope_diameter_m)?,
            pointing_error_rad: non_negative("receiver pointing error (rad)", pointing_error_rad)?,
            sensitivity_dbm,
        })
    }

    pub fn optics_efficiency(&self) -> f64 {
        self.optics_efficiency
    }

    pub fn telescope_diameter_m(&self) -> f64 {
        self.telescope_diameter_m
    }

    pub fn pointing_error_rad(&self) -> f64 {
        self.pointing_error_rad
    }

    /// Minimum received power for the target bit error rate at the link's
    /// data rate.
    pub fn sensitivity_dbm(&self) -> Decibels {
        self.sensitivity_dbm
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Modulation {
    OnOffKeying,
}

/// Carrier description. Data rate, bit error rate and modulation are
/// metadata: they explain where the receiver sensitivity came from but no
/// part of the budget reads them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkSpec {
    wavelength_m: f64,
    data_rate_gbps: f64,
    bit_error_rate: f64,
    modulation: Modulation,
}

impl LinkSpec {
    pub fn new(wavelength_m: f64, data_rate_gbps: f64, bit_error_rate: f64, modulation: Modulation) -> Result<Self> {
        Ok(LinkSpec {
            wavelength_m: positive("wavelength (m)", wavelength_m)?,
            data_rate_gbps: positive("data rate (Gbps)", data_rate_gbps)?,
            bit_error_rate: positive("bit error rate", bit_error_rate)?,
            modulation,
        })
    }

    pub fn wavelength_m(&self) -> f64 {
        self.wavelength_m
    }

    pub fn wavelength_nm(&self) -> f64 {
        self.wavelength_m * 1e9
    }

    pub fn wavelength_um(&self) -> f64 {
        self.wavelength_m * 1e6
    }

    pub fn data_rate_gbps(&self) -> f64 {
        self.data_rate_gbps
    }

    pub fn bit_error_rate(&self) -> f64 {
        self.bit_error_rate
    }

    pub fn modulation(&self) -> Modulation {
        self.modulation
    }
}

/// `16 / Θ²` for full divergence angle `Θ`.
pub fn transmitter_gain(tx: &TransmitterSpec) -> f64 {
    16.0 / (tx.divergence_full_angle_rad * tx.divergence_full_angle_rad)
}

/// `(π·D / λ)²`.
pub fn receiver_gain(rx: &ReceiverSpec, link: &LinkSpec) -> f64 {
    let x = PI * rx.telescope_diameter_m / link.wavelength_m;
    x * x
}

/// `exp(−G·θ²)`, in (0, 1].
pub fn pointing_loss(gain: f64, pointing_error_rad: f64) -> f64 {
    (-gain * pointing_error_rad * pointing_error_rad).exp()
}

/// The six distance-independent factors shared by every link kind, linear.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TerminalFactors {
    pub tx_efficiency: f64,
    pub rx_efficiency: f64,
    pub tx_gain: f64,
    pub rx_gain: f64,
    pub tx_pointing: f64,
    pub rx_pointing: f64,
}

impl TerminalFactors {
    pub fn new(tx: &TransmitterSpec, rx: &ReceiverSpec, link: &LinkSpec) -> Self {
        let tx_gain = transmitter_gain(tx);
        let rx_gain = receiver_gain(rx, link);
        TerminalFactors {
            tx_efficiency: tx.optics_efficiency,
            rx_efficiency: rx.optics_efficiency,
            tx_gain,
            rx_gain,
            tx_pointing: pointing_loss(tx_gain, tx.pointing_error_rad),
            rx_pointing: pointing_loss(rx_gain, rx.pointing_error_rad),
        }
    }

    pub fn product(&self) -> f64 {
        self.tx_efficiency * self.rx_efficiency * self.tx_gain * self.rx_gain * self.tx_pointing * self.rx_pointing
    }
}

/// `η_T·η_R·G_T·G_R·L_T·L_R` in dB.
pub fn static_gain_db(tx: &TransmitterSpec, rx: &ReceiverSpec, link: &LinkSpec) -> Decibels {
    let factors = TerminalFactors::new(tx, rx, link);
    // All factors are strictly positive, finite by construction.
    Decibels::of_ratio("static terminal gain", factors.product()).expect("terminal factors are positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantities::db_from_linear;
    use proptest::prelude::*;

    const URAD: f64 = 1e-6;

    fn table1_tx() -> TransmitterSpec {
        TransmitterSpec::new(0.8, 15.0 * URAD, 1.0 * URAD).unwrap()
    }

    fn table1_rx() -> ReceiverSpec {
        ReceiverSpec::new(0.8, 0.080, 1.0 * URAD, Decibels::new(-35.5).unwrap()).unwrap()
    }

    fn c_band() -> LinkSpec {
        LinkSpec::new(1550e-9, 10.0, 1e-12, Modulation::OnOffKeying).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn transmitter_gain_values() {
        // 16 / (15e-6)² = 7.1111...e10, 108.519374645 dB
        let g = transmitter_gain(&table1_tx());
        assert!(rel(g, 7.111_111_111_111_111e10) < 1e-14);
        assert!((db_from_linear(g).unwrap().value() - 108.519374645).abs() < 1e-8);
        let unit = TransmitterSpec::new(1.0, 4.0, 0.0).unwrap();
        assert_eq!(transmitter_gain(&unit), 1.0);
        let wide = TransmitterSpec::new(0.8, 30.0 * URAD, 0.0).unwrap();
        assert!(rel(transmitter_gain(&wide), 1.777_777_777_777_778e10) < 1e-14);
    }

    #[test]
    fn receiver_gain_values() {
        // (π·0.08/1550e-9)² = 2.62915580299570843e10, 104.198163230 dB
        let g = receiver_gain(&table1_rx(), &c_band());
        assert!(rel(g, 2.629_155_802_995_708_4e10) < 1e-13);
        assert!((db_from_linear(g).unwrap().value() - 104.198163230).abs() < 1e-8);
        let lam = c_band().wavelength_m();
        let unit = ReceiverSpec::new(1.0, lam / PI, 0.0, Decibels::ZERO).unwrap();
        assert!((receiver_gain(&unit, &c_band()) - 1.0).abs() < 1e-14);
        let big = ReceiverSpec::new(0.8, 0.160, 0.0, Decibels::ZERO).unwrap();
        assert!(rel(receiver_gain(&big, &c_band()), 1.051_662_321_198_283_4e11) < 1e-13);
    }

    #[test]
    fn pointing_loss_values() {
        assert_eq!(pointing_loss(7.1e10, 0.0), 1.0);
        // exp(-0.0711111) = 0.931358402111, exp(-0.0262916) = 0.974051055798
        let lt = pointing_loss(transmitter_gain(&table1_tx()), URAD);
        assert!((lt - 0.931_358_402_111_352).abs() < 1e-12);
        assert!((db_from_linear(lt).unwrap().value() - (-0.309)).abs() < 5e-4);
        let lr = pointing_loss(receiver_gain(&table1_rx(), &c_band()), URAD);
        assert!((lr - 0.974_051_055_797_686).abs() < 1e-12);
        assert!((db_from_linear(lr).unwrap().value() - (-0.114)).abs() < 5e-4);
    }

    #[test]
    fn static_gain_for_reference_terminals() {
        // 108.519 + 104.198 - 0.969 - 0.969 - 0.309 - 0.114 = 210.356323198 dB
        let g = static_gain_db(&table1_tx(), &table1_rx(), &c_band()).value();
        assert!((g - 210.356_323_198_294).abs() < 1e-9, "{g}");
        assert!((g - 210.36).abs() <= 0.01);
    }

    #[test]
    fn lossless_terminals_are_pure_gain() {
        let tx = TransmitterSpec::new(1.0, 15.0 * URAD, 0.0).unwrap();
        let rx = ReceiverSpec::new(1.0, 0.080, 0.0, Decibels::ZERO).unwrap();
        let expect = db_from_linear(transmitter_gain(&tx) * receiver_gain(&rx, &c_band())).unwrap();
        assert_eq!(static_gain_db(&tx, &rx, &c_band()), expect);

        let lam = c_band().wavelength_m();
        let tx = TransmitterSpec::new(1.0, 4.0, 0.0).unwrap();
        let rx = ReceiverSpec::new(1.0, lam / PI, 0.0, Decibels::ZERO).unwrap();
        assert!(static_gain_db(&tx, &rx, &c_band()).value().abs() < 1e-12);
    }

    #[test]
    fn invalid_terminals_rejected() {
        assert!(TransmitterSpec::new(0.0, 1e-5, 0.0).is_err());
        assert!(TransmitterSpec::new(1.1, 1e-5, 0.0).is_err());
        assert!(TransmitterSpec::new(0.8, 0.0, 0.0).is_err());
        assert!(TransmitterSpec::new(0.8, 1e-5, -1e-6).is_err());
        assert!(ReceiverSpec::new(0.8, 0.0, 0.0, Decibels::ZERO).is_err());
        assert!(LinkSpec::new(0.0, 10.0, 1e-12, Modulation::OnOffKeying).is_err());
    }

    proptest! {
        #[test]
        fn pointing_loss_bounded_and_decreasing(gain in 1.0f64..1e12, theta in 0.0f64..1e-5, bump in 1.01f64..2.0) {
            let l = pointing_loss(gain, theta);
            prop_assert!(l > 0.0 || gain * theta * theta > 700.0);
            prop_assert!(l <= 1.0);
            if theta > 0.0 && l > 0.0 {
                prop_assert!(pointing_loss(gain, theta * bump) < l || pointing_loss(gain, theta * bump) == 0.0);
                prop_assert!(pointing_loss(gain * bump, theta) < l || pointing_loss(gain * bump, theta) == 0.0);
            }
        }

        #[test]
        fn gain_scaling(div in 1e-6f64..1e-3, dia in 1e-3f64..1.0) {
            let t1 = TransmitterSpec::new(1.0, div, 0.0).unwrap();
            let t2 = TransmitterSpec::new(1.0, div / 2.0, 0.0).unwrap();
            prop_assert!(rel(transmitter_gain(&t2), 4.0 * transmitter_gain(&t1)) < 1e-12);
            let r1 = ReceiverSpec::new(1.0, dia, 0.0, Decibels::ZERO).unwrap();
            let r2 = ReceiverSpec::new(1.0, 2.0 * dia, 0.0, Decibels::ZERO).unwrap();
            prop_assert!(rel(receiver_gain(&r2, &c_band()), 4.0 * receiver_gain(&r1, &c_band())) < 1e-12);
        }

        #[test]
        fn efficiency_placement_is_irrelevant(a in 0.05f64..1.0, b in 0.05f64..1.0) {
            let tx1 = TransmitterSpec::new(a, 15.0 * URAD, URAD).unwrap();
            let rx1 = ReceiverSpec::new(b, 0.08, URAD, Decibels::ZERO).unwrap();
            let tx2 = TransmitterSpec::new(b, 15.0 * URAD, URAD).unwrap();
            let rx2 = ReceiverSpec::new(a, 0.08, URAD, Decibels::ZERO).unwrap();
            let g1 = static_gain_db(&tx1, &rx1, &c_band()).value();
            let g2 = static_gain_db(&tx2, &rx2, &c_band()).value();
            prop_assert!((g1 - g2).abs() < 1e-12);
        }
    }
}
