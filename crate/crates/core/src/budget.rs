//! Link budgets: received power, path loss, link margin, and the closed-form
//! inversions for required transmit power and achievable margin.
//!
//! Inter-satellite links multiply transmit power by the terminal factors and
//! the free-space path loss. Up/downlinks additionally multiply by the
//! atmospheric transmission of the ground site.

use std::f64::consts::PI;

use serde::Serialize;

use crate::atmosphere::{atmospheric_loss, AtmosphereSpec};
use crate::error::{positive, Error, Result};
use crate::geometry::{altitude_from_slant_km, slant_distance_km, EarthModel, GroundSite};
use crate::optics::{LinkSpec, ReceiverSpec, TerminalFactors, TransmitterSpec};
use crate::quantities::{Decibels, PowerValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinkKind {
    InterSatellite,
    UpDown,
}

impl LinkKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LinkKind::InterSatellite => "inter-satellite",
            LinkKind::UpDown => "up-down",
        }
    }
}

/// Where the two ends of a link are.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkGeometry {
    kind: LinkKind,
    distance_km: f64,
    site: Option<GroundSite>,
    sat_altitude_km: Option<f64>,
}

impl LinkGeometry {
    pub fn inter_satellite(distance_km: f64) -> Result<Self> {
        Ok(LinkGeometry {
            kind: LinkKind::InterSatellite,
            distance_km: positive("inter-satellite distance (km)", distance_km)?,
            site: None,
            sat_altitude_km: None,
        })
    }

    /// Ground site looking at a satellite at `sat_altitude_km`.
    pub fn up_down(site: GroundSite, sat_altitude_km: f64, earth: &EarthModel) -> Result<Self> {
        let distance_km = slant_distance_km(&site, sat_altitude_km, earth)?;
        Ok(LinkGeometry {
            kind: LinkKind::UpDown,
            distance_km,
            site: Some(site),
            sat_altitude_km: Some(sat_altitude_km),
        })
    }

    /// Ground site looking at a satellite `slant_distance_km` away.
    pub fn up_down_at_slant(site: GroundSite, slant_distance_km: f64, earth: &EarthModel) -> Result<Self> {
        let sat_altitude_km = altitude_from_slant_km(&site, slant_distance_km, earth)?;
        Ok(LinkGeometry {
            kind: LinkKind::UpDown,
            distance_km: slant_distance_km,
            site: Some(site),
            sat_altitude_km: Some(sat_altitude_km),
        })
    }

    pub fn kind(&self) -> LinkKind {
        self.kind
    }

    pub fn distance_km(&self) -> f64 {
        self.distance_km
    }

    pub fn site(&self) -> Option<&GroundSite> {
        self.site.as_ref()
    }

    pub fn sat_altitude_km(&self) -> Option<f64> {
        self.sat_altitude_km
    }
}

/// Both optical terminals and the carrier they share.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Terminals {
    pub transmitter: TransmitterSpec,
    pub receiver: ReceiverSpec,
    pub link: LinkSpec,
}

impl Terminals {
    pub fn factors(&self) -> TerminalFactors {
        TerminalFactors::new(&self.transmitter, &self.receiver, &self.link)
    }
}

/// Every gain and loss of a link in decibels. The line items close
/// exactly: `rx_power_dbm = tx_power_dbm + Σ items`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BudgetBreakdown {
    pub kind: LinkKind,
    pub distance_km: f64,
    pub tx_power_dbm: Decibels,
    pub tx_efficiency_db: Decibels,
    pub rx_efficiency_db: Decibels,
    pub tx_gain_db: Decibels,
    pub rx_gain_db: Decibels,
    pub tx_pointing_db: Decibels,
    pub rx_pointing_db: Decibels,
    pub path_loss_db: Decibels,
    /// Zero for inter-satellite links.
    pub atmospheric_db: Decibels,
    pub rx_power_dbm: Decibels,
    pub sensitivity_dbm: Decibels,
    pub margin_db: Decibels,
}

impl BudgetBreakdown {
    /// Gain/loss terms between transmit and receive power, in ledger order.
    pub fn line_items(&self) -> [(&'static str, Decibels); 8] {
        [
            ("transmitter optics efficiency", self.tx_efficiency_db),
            ("receiver optics efficiency", self.rx_efficiency_db),
            ("transmitter gain", self.tx_gain_db),
            ("receiver gain", self.rx_gain_db),
            ("transmitter pointing loss", self.tx_pointing_db),
            ("receiver pointing loss", self.rx_pointing_db),
            ("free-space path loss", self.path_loss_db),
            ("atmospheric loss", self.atmospheric_db),
        ]
    }

    /// Sum of all line items, i.e. `rx_power_dbm − tx_power_dbm` up to
    /// rounding.
    pub fn net_gain_db(&self) -> Decibels {
        self.line_items().iter().map(|(_, d)| *d).sum()
    }
}

/// Free-space path loss `(λ / 4πd)²`, linear.
pub fn path_loss(link: &LinkSpec, geom: &LinkGeometry) -> f64 {
    let x = link.wavelength_m() / (4.0 * PI * geom.distance_km * 1e3);
    x * x
}

fn db(quantity: &'static str, linear: f64) -> Result<Decibels> {
    Decibels::of_ratio(quantity, linear)
}

/// Atmospheric transmission for `geom`, enforcing that an atmosphere is
/// given exactly for up/downlinks.
fn atmospheric_factor(geom: &LinkGeometry, atmos: Option<&AtmosphereSpec>, link: &LinkSpec) -> Result<f64> {
    match (geom.kind, atmos, geom.site.as_ref()) {
        (LinkKind::InterSatellite, None, _) => Ok(1.0),
        (LinkKind::InterSatellite, Some(_), _) => Err(Error::Config(
            "an atmosphere was supplied for an inter-satellite link, which propagates in vacuum".into(),
        )),
        (LinkKind::UpDown, None, _) => Err(Error::Config(
            "an up/down link requires an atmosphere description".into(),
        )),
        (LinkKind::UpDown, Some(a), Some(site)) => Ok(atmospheric_loss(site, a, link)?.total()),
        (LinkKind::UpDown, Some(_), None) => unreachable!("up/down geometry always carries a site"),
    }
}

fn compose(tx_power: PowerValue, terminals: &Terminals, geom: &LinkGeometry, atmospheric: f64) -> Result<BudgetBreakdown> {
    let f = terminals.factors();
    let path = path_loss(&terminals.link, geom);
    let rx_watts = tx_power.watts() * f.product() * path * atmospheric;
    let rx_power_dbm = PowerValue::from_watts(rx_watts)
        .map_err(|_| Error::domain("received power (W)", rx_watts, "underflowed to zero"))?
        .dbm();
    let sensitivity_dbm = terminals.receiver.sensitivity_dbm();
    Ok(BudgetBreakdown {
        kind: geom.kind,
        distance_km: geom.distance_km,
        tx_power_dbm: tx_power.dbm(),
        tx_efficiency_db: db("transmitter optics efficiency", f.tx_efficiency)?,
        rx_efficiency_db: db("receiver optics efficiency", f.rx_efficiency)?,
        tx_gain_db: db("transmitter gain", f.tx_gain)?,
        rx_gain_db: db("receiver gain", f.rx_gain)?,
        tx_pointing_db: db("transmitter pointing loss", f.tx_pointing)?,
        rx_pointing_db: db("receiver pointing loss", f.rx_pointing)?,
        path_loss_db: db("free-space path loss", path)?,
        atmospheric_db: if atmospheric == 1.0 { Decibels::ZERO } else { db("atmospheric loss", atmospheric)? },
        rx_power_dbm,
        sensitivity_dbm,
        margin_db: link_margin_db(rx_power_dbm, sensitivity_dbm),
    })
}

/// Full budget at transmit power `tx_power`. `atmos` must be `Some` for
/// up/down links and `None` for inter-satellite links.
pub fn received_power(
    tx_power: PowerValue,
    terminals: &Terminals,
    geom: &LinkGeometry,
    atmos: Option<&AtmosphereSpec>,
) -> Result<BudgetBreakdown> {
    let atmospheric = atmospheric_factor(geom, atmos, &terminals.link)?;
    compose(tx_power, terminals, geom, atmospheric)
}

/// Up/down budget with a caller-supplied atmospheric transmission in (0, 1]
/// in place of the scattering model.
pub fn received_power_with_atmospheric_loss(
    tx_power: PowerValue,
    terminals: &Terminals,
    geom: &LinkGeometry,
    atmospheric_loss: f64,
) -> Result<BudgetBreakdown> {
    if geom.kind != LinkKind::UpDown {
        return Err(Error::Config(
            "an atmospheric loss only applies to up/down links".into(),
        ));
    }
    if !(atmospheric_loss > 0.0 && atmospheric_loss <= 1.0) {
        return Err(Error::domain("atmospheric loss", atmospheric_loss, "must lie in (0, 1]"));
    }
    compose(tx_power, terminals, geom, atmospheric_loss)
}

/// Margin of received power over receiver sensitivity, in dB.
pub fn link_margin_db(rx_power_dbm: Decibels, sensitivity_dbm: Decibels) -> Decibels {
    rx_power_dbm - sensitivity_dbm
}

/// Transmit power that lands exactly `target_margin` above the receiver
/// sensitivity. Closed form: the budget is linear in transmit power.
pub fn required_tx_power(
    target_margin: Decibels,
    terminals: &Terminals,
    geom: &LinkGeometry,
    atmos: Option<&AtmosphereSpec>,
) -> Result<PowerValue> {
    let atmospheric = atmospheric_factor(geom, atmos, &terminals.link)?;
    let net = Decibels::of_ratio(
        "link transmission",
        terminals.factors().product() * path_loss(&terminals.link, geom) * atmospheric,
    )?;
    let required_rx = terminals.receiver.sensitivity_dbm() + target_margin;
    let tx = PowerValue::from_dbm(required_rx - net);
    PowerValue::from_watts(tx.watts())
}

/// Margin available when transmitting at `tx_power`.
pub fn achievable_margin(
    tx_power: PowerValue,
    terminals: &Terminals,
    geom: &LinkGeometry,
    atmos: Option<&AtmosphereSpec>,
) -> Result<Decibels> {
    received_power(tx_power, terminals, geom, atmos).map(|b| b.margin_db)
}
