//! Parameter sweeps over the budget and solver, one row per axis value.

use serde::{Deserialize, Serialize};

use crate::atmosphere::{atmospheric_loss, AtmosphereSpec};
use crate::budget::{path_loss, received_power, required_tx_power, LinkGeometry, LinkKind, Terminals};
use crate::error::{Error, Result};
use crate::geometry::{slant_distance_km, EarthModel, GroundSite};
use crate::quantities::{Decibels, PowerValue};
use crate::solver::{max_isl_distance_km, max_slant_distance_km, Feasibility, FeasibilityQuery, GroundSegment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    /// Required transmit power against inter-satellite distance.
    IslDistance,
    /// Required transmit power against satellite altitude at fixed elevation.
    SlantAltitude,
    /// Required transmit power against elevation at fixed altitude.
    Elevation,
    /// Required power over a margin grid per distance, plus the margin at
    /// the power cap.
    MarginIsl,
    /// As `MarginIsl`, per satellite altitude on an up/down link.
    #[serde(rename = "margin-updown")]
    MarginUpDown,
    /// Longest closing link at a power cap, per margin floor.
    MaxRange,
}

impl SweepKind {
    pub const ALL: [SweepKind; 6] = [
        SweepKind::IslDistance,
        SweepKind::SlantAltitude,
        SweepKind::Elevation,
        SweepKind::MarginIsl,
        SweepKind::MarginUpDown,
        SweepKind::MaxRange,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SweepKind::IslDistance => "isl-distance",
            SweepKind::SlantAltitude => "slant-altitude",
            SweepKind::Elevation => "elevation",
            SweepKind::MarginIsl => "margin-isl",
            SweepKind::MarginUpDown => "margin-updown",
            SweepKind::MaxRange => "max-range",
        }
    }

    /// Whether rows of this kind need a ground site and atmosphere.
    pub fn needs_ground(self) -> bool {
        matches!(self, SweepKind::SlantAltitude | SweepKind::Elevation | SweepKind::MarginUpDown)
    }
}

/// A fully resolved sweep: axis values expanded, fixed values typed.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepDef {
    IslDistance {
        distances_km: Vec<f64>,
        margin: Decibels,
    },
    SlantAltitude {
        sat_altitudes_km: Vec<f64>,
        margin: Decibels,
    },
    Elevation {
        elevations_deg: Vec<f64>,
        sat_altitude_km: f64,
        margin: Decibels,
    },
    MarginIsl {
        distances_km: Vec<f64>,
        /// One margin list per distance.
        margins: Vec<Vec<Decibels>>,
        tx_power_cap: PowerValue,
    },
    MarginUpDown {
        sat_altitudes_km: Vec<f64>,
        margins: Vec<Vec<Decibels>>,
        tx_power_cap: PowerValue,
    },
    MaxRange {
        links: Vec<LinkKind>,
        margin_floors: Vec<Decibels>,
        tx_power_cap: PowerValue,
    },
}

fn db(x: f64) -> Decibels {
    Decibels::new(x).expect("finite literal")
}

fn watts(w: f64) -> PowerValue {
    PowerValue::from_watts(w).expect("positive literal")
}

fn grid(values: &[f64]) -> Vec<Decibels> {
    values.iter().copied().map(db).collect()
}

impl SweepDef {
    pub fn kind(&self) -> SweepKind {
        match self {
            SweepDef::IslDistance { .. } => SweepKind::IslDistance,
            SweepDef::SlantAltitude { .. } => SweepKind::SlantAltitude,
            SweepDef::Elevation { .. } => SweepKind::Elevation,
            SweepDef::MarginIsl { .. } => SweepKind::MarginIsl,
            SweepDef::MarginUpDown { .. } => SweepKind::MarginUpDown,
            SweepDef::MaxRange { .. } => SweepKind::MaxRange,
        }
    }

    /// The published grids: 3 dB margin, 1 W cap, 40° elevation from the
    /// scenario's ground block, 550 km for the elevation sweep.
    pub fn reference_grid(kind: SweepKind) -> SweepDef {
        match kind {
            SweepKind::IslDistance => SweepDef::IslDistance {
                distances_km: vec![
                    1000.0, 2000.0, 3000.0, 4000.0, 4500.0, 5000.0, 5500.0, 6000.0, 7000.0, 8000.0, 9000.0, 10000.0,
                ],
                margin: db(3.0),
            },
            SweepKind::SlantAltitude => SweepDef::SlantAltitude {
                sat_altitudes_km: (3..=15).map(|h| f64::from(h) * 100.0).collect(),
                margin: db(3.0),
            },
            SweepKind::Elevation => SweepDef::Elevation {
                elevations_deg: (1..=9).map(|e| f64::from(e) * 10.0).collect(),
                sat_altitude_km: 550.0,
                margin: db(3.0),
            },
            SweepKind::MarginIsl => SweepDef::MarginIsl {
                distances_km: vec![4000.0, 4500.0, 5000.0, 5500.0],
                margins: vec![
                    grid(&[4.0, 5.0, 6.0, 7.0]),
                    grid(&[3.0, 4.0, 5.0, 6.0]),
                    grid(&[2.0, 3.0, 4.0, 5.0]),
                    grid(&[1.0, 2.0, 3.0, 4.0]),
                ],
                tx_power_cap: watts(1.0),
            },
            SweepKind::MarginUpDown => SweepDef::MarginUpDown {
                sat_altitudes_km: vec![600.0, 700.0, 800.0, 900.0],
                margins: vec![
                    grid(&[17.0, 18.0, 19.0, 20.0]),
                    grid(&[15.0, 16.0, 18.0, 19.0]),
                    grid(&[14.0, 15.0, 16.0, 17.0]),
                    grid(&[13.0, 14.0, 16.0, 17.0]),
                ],
                tx_power_cap: watts(1.0),
            },
            SweepKind::MaxRange => SweepDef::MaxRange {
                links: vec![LinkKind::InterSatellite, LinkKind::UpDown],
                margin_floors: grid(&[3.0, 0.0]),
                tx_power_cap: watts(1.0),
            },
        }
    }
}

/// How a margin-sweep row was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarginBasis {
    /// Transmit power solved for a fixed margin.
    FixedMargin,
    /// Margin available at the transmit-power cap.
    PowerCap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IslDistanceRow {
    pub distance_km: f64,
    pub path_loss_db: Decibels,
    pub tx_power: PowerValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UpDownRow {
    pub sat_altitude_km: f64,
    pub elevation_deg: f64,
    pub slant_distance_km: f64,
    pub atmospheric_path_km: f64,
    pub path_loss_db: Decibels,
    pub mie_db: Decibels,
    pub geometric_db: Decibels,
    pub atmospheric_db: Decibels,
    pub tx_power: PowerValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginRow {
    /// Inter-satellite distance or slant distance.
    pub distance_km: f64,
    /// Present on up/down rows.
    pub sat_altitude_km: Option<f64>,
    pub margin_db: Decibels,
    pub rx_power_dbm: Decibels,
    pub tx_power: PowerValue,
    pub basis: MarginBasis,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RangeRow {
    pub link: LinkKind,
    pub tx_power_cap: PowerValue,
    pub margin_floor_db: Decibels,
    /// Elevation of the ground site on up/down rows.
    pub elevation_deg: Option<f64>,
    pub max_distance_km: Option<f64>,
    pub sat_altitude_km: Option<f64>,
}

impl RangeRow {
    pub fn is_feasible(&self) -> bool {
        self.max_distance_km.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SweepRow {
    IslDistance(IslDistanceRow),
    SlantAltitude(UpDownRow),
    Elevation(UpDownRow),
    MarginIsl(MarginRow),
    #[serde(rename = "margin-updown")]
    MarginUpDown(MarginRow),
    MaxRange(RangeRow),
}

impl SweepRow {
    pub fn kind(&self) -> SweepKind {
        match self {
            SweepRow::IslDistance(_) => SweepKind::IslDistance,
            SweepRow::SlantAltitude(_) => SweepKind::SlantAltitude,
            SweepRow::Elevation(_) => SweepKind::Elevation,
            SweepRow::MarginIsl(_) => SweepKind::MarginIsl,
            SweepRow::MarginUpDown(_) => SweepKind::MarginUpDown,
            SweepRow::MaxRange(_) => SweepKind::MaxRange,
        }
    }
}

/// The model inputs a sweep runs against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSetup {
    pub terminals: Terminals,
    pub ground: Option<GroundSite>,
    pub atmosphere: Option<AtmosphereSpec>,
    pub earth: EarthModel,
}

impl LinkSetup {
    fn ground_segment(&self) -> Result<GroundSegment> {
        match (self.ground, self.atmosphere) {
            (Some(site), Some(atmosphere)) => Ok(GroundSegment {
                site,
                atmosphere,
                earth: self.earth,
            }),
            _ => Err(Error::Config(
                "up/down sweeps require both a ground site and an atmosphere".into(),
            )),
        }
    }
}

fn updown_row(setup: &LinkSetup, segment: &GroundSegment, site: GroundSite, sat_altitude_km: f64, margin: Decibels) -> Result<UpDownRow> {
    let geom = LinkGeometry::up_down(site, sat_altitude_km, &segment.earth)?;
    let atmos = atmospheric_loss(&site, &segment.atmosphere, &setup.terminals.link)?;
    let tx_power = required_tx_power(margin, &setup.terminals, &geom, Some(&segment.atmosphere))?;
    Ok(UpDownRow {
        sat_altitude_km,
        elevation_deg: site.elevation_deg(),
        slant_distance_km: geom.distance_km(),
        atmospheric_path_km: atmos.path_length_km,
        path_loss_db: Decibels::of_ratio("free-space path loss", path_loss(&setup.terminals.link, &geom))?,
        mie_db: atmos.mie_db(),
        geometric_db: atmos.geometric_db(),
        atmospheric_db: atmos.total_db(),
        tx_power,
    })
}

/// Rows for one distance of a margin sweep: one per fixed margin, plus the
/// power-cap row, ordered by margin.
fn margin_rows(
    setup: &LinkSetup,
    geom: &LinkGeometry,
    atmos: Option<&AtmosphereSpec>,
    margins: &[Decibels],
    cap: PowerValue,
) -> Result<Vec<MarginRow>> {
    let t = &setup.terminals;
    let mut rows = margins
        .iter()
        .map(|&m| {
            let tx_power = required_tx_power(m, t, geom, atmos)?;
            Ok(MarginRow {
                distance_km: geom.distance_km(),
                sat_altitude_km: geom.sat_altitude_km(),
                margin_db: m,
                rx_power_dbm: t.receiver.sensitivity_dbm() + m,
                tx_power,
                basis: MarginBasis::FixedMargin,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let at_cap = received_power(cap, t, geom, atmos)?;
    rows.push(MarginRow {
        distance_km: geom.distance_km(),
        sat_altitude_km: geom.sat_altitude_km(),
        margin_db: at_cap.margin_db,
        rx_power_dbm: at_cap.rx_power_dbm,
        tx_power: cap,
        basis: MarginBasis::PowerCap,
    });
    // Stable: a fixed margin equal to the cap margin stays first.
    rows.sort_by(|a, b| a.margin_db.value().total_cmp(&b.margin_db.value()));
    Ok(rows)
}

/// Evaluates every row of `sweep`, in axis order.
pub fn run_sweep(setup: &LinkSetup, sweep: &SweepDef) -> Result<Vec<SweepRow>> {
    let t = &setup.terminals;
    match sweep {
        SweepDef::IslDistance { distances_km, margin } => distances_km
            .iter()
            .map(|&d| {
                let geom = LinkGeometry::inter_satellite(d)?;
                Ok(SweepRow::IslDistance(IslDistanceRow {
                    distance_km: d,
                    path_loss_db: Decibels::of_ratio("free-space path loss", path_loss(&t.link, &geom))?,
                    tx_power: required_tx_power(*margin, t, &geom, None)?,
                }))
            })
            .collect(),
        SweepDef::SlantAltitude { sat_altitudes_km, margin } => {
            let segment = setup.ground_segment()?;
            sat_altitudes_km
                .iter()
                .map(|&h| updown_row(setup, &segment, segment.site, h, *margin).map(SweepRow::SlantAltitude))
                .collect()
        }
        SweepDef::Elevation { elevations_deg, sat_altitude_km, margin } => {
            let segment = setup.ground_segment()?;
            elevations_deg
                .iter()
                .map(|&el| {
                    let site = segment.site.with_elevation(el)?;
                    updown_row(setup, &segment, site, *sat_altitude_km, *margin).map(SweepRow::Elevation)
                })
                .collect()
        }
        SweepDef::MarginIsl { distances_km, margins, tx_power_cap } => {
            check_margin_grid(distances_km.len(), margins)?;
            let mut out = Vec::new();
            for (&d, ms) in distances_km.iter().zip(margins) {
                let geom = LinkGeometry::inter_satellite(d)?;
                out.extend(margin_rows(setup, &geom, None, ms, *tx_power_cap)?.into_iter().map(SweepRow::MarginIsl));
            }
            Ok(out)
        }
        SweepDef::MarginUpDown { sat_altitudes_km, margins, tx_power_cap } => {
            check_margin_grid(sat_altitudes_km.len(), margins)?;
            let segment = setup.ground_segment()?;
            let mut out = Vec::new();
            for (&h, ms) in sat_altitudes_km.iter().zip(margins) {
                let geom = LinkGeometry::up_down(segment.site, h, &segment.earth)?;
                out.extend(
                    margin_rows(setup, &geom, Some(&segment.atmosphere), ms, *tx_power_cap)?
                        .into_iter()
                        .map(SweepRow::MarginUpDown),
                );
            }
            Ok(out)
        }
        SweepDef::MaxRange { links, margin_floors, tx_power_cap } => {
            let mut out = Vec::new();
            for &link in links {
                for &floor in margin_floors {
                    out.push(SweepRow::MaxRange(range_row(setup, link, floor, *tx_power_cap)?));
                }
            }
            Ok(out)
        }
    }
}

fn check_margin_grid(axis_len: usize, margins: &[Vec<Decibels>]) -> Result<()> {
    if margins.len() == axis_len {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "margin grid has {} rows but the axis has {} values",
            margins.len(),
            axis_len
        )))
    }
}

/// Shortest inter-satellite link a max-range row accepts. A budget that
/// only closes below this is reported infeasible.
pub const MIN_ISL_DISTANCE_KM: f64 = 1.0;

/// Lowest satellite altitude a max-range row accepts on an up/down link.
pub const MIN_SAT_ALTITUDE_KM: f64 = 100.0;

fn range_row(setup: &LinkSetup, link: LinkKind, floor: Decibels, cap: PowerValue) -> Result<RangeRow> {
    let t = setup.terminals;
    match link {
        LinkKind::InterSatellite => {
            let q = FeasibilityQuery::inter_satellite(cap, floor, t).with_min_distance_km(MIN_ISL_DISTANCE_KM);
            let d = max_isl_distance_km(&q)?.feasible();
            Ok(RangeRow {
                link,
                tx_power_cap: cap,
                margin_floor_db: floor,
                elevation_deg: None,
                max_distance_km: d,
                sat_altitude_km: None,
            })
        }
        LinkKind::UpDown => {
            let segment = setup.ground_segment()?;
            let shortest = slant_distance_km(&segment.site, MIN_SAT_ALTITUDE_KM, &segment.earth)?;
            let q = FeasibilityQuery::up_down(cap, floor, t, segment).with_min_distance_km(shortest);
            let (d, h) = match max_slant_distance_km(&q)? {
                Feasibility::Feasible(s) => (Some(s.slant_distance_km), Some(s.sat_altitude_km)),
                Feasibility::Infeasible => (None, None),
            };
            Ok(RangeRow {
                link,
                tx_power_cap: cap,
                margin_floor_db: floor,
                elevation_deg: Some(segment.site.elevation_deg()),
                max_distance_km: d,
                sat_altitude_km: h,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::{LinkSpec, Modulation, ReceiverSpec, TransmitterSpec};

    fn setup() -> LinkSetup {
        LinkSetup {
            terminals: Terminals {
                transmitter: TransmitterSpec::new(0.8, 15e-6, 1e-6).unwrap(),
                receiver: ReceiverSpec::new(0.8, 0.08, 1e-6, db(-35.5)).unwrap(),
                link: LinkSpec::new(1550e-9, 10.0, 1e-12, Modulation::OnOffKeying).unwrap(),
            },
            ground: Some(GroundSite::new(1.0, 40.0).unwrap()),
            atmosphere: Some(AtmosphereSpec::new(3.128e-4, 0.5, 1.6, 20.0).unwrap()),
            earth: EarthModel::default(),
        }
    }

    #[test]
    fn reference_grids_have_published_sizes() {
        let sizes: Vec<usize> = SweepKind::ALL
            .iter()
            .map(|&k| run_sweep(&setup(), &SweepDef::reference_grid(k)).unwrap().len())
            .collect();
        // 12 distances, 13 altitudes, 9 elevations, 4x(4+1), 4x(4+1), 2 links x 2 floors
        assert_eq!(sizes, vec![12, 13, 9, 20, 20, 4]);
    }

    #[test]
    fn rows_match_their_kind() {
        for k in SweepKind::ALL {
            let rows = run_sweep(&setup(), &SweepDef::reference_grid(k)).unwrap();
            assert!(rows.iter().all(|r| r.kind() == k));
        }
    }

    #[test]
    fn power_cap_row_sorted_into_place() {
        let rows = run_sweep(&setup(), &SweepDef::reference_grid(SweepKind::MarginIsl)).unwrap();
        let first: Vec<_> = rows[..5]
            .iter()
            .map(|r| match r {
                SweepRow::MarginIsl(m) => (m.margin_db.value(), m.basis),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(first[2].1, MarginBasis::PowerCap);
        assert!((first[2].0 - 5.6).abs() < 0.05);
        assert!(first.windows(2).all(|w| w[0].0 <= w[1].0));
    }

    #[test]
    fn up_down_sweeps_need_ground() {
        let mut s = setup();
        s.atmosphere = None;
        for k in [SweepKind::SlantAltitude, SweepKind::Elevation, SweepKind::MarginUpDown] {
            assert!(matches!(run_sweep(&s, &SweepDef::reference_grid(k)), Err(Error::Config(_))));
        }
        assert!(run_sweep(&s, &SweepDef::reference_grid(SweepKind::IslDistance)).is_ok());
    }

    #[test]
    fn range_below_floor_is_infeasible() {
        let sweep = SweepDef::MaxRange {
            links: vec![LinkKind::InterSatellite, LinkKind::UpDown],
            margin_floors: grid(&[3.0]),
            tx_power_cap: watts(1e-9),
        };
        let rows = run_sweep(&setup(), &sweep).unwrap();
        assert!(rows.iter().all(|r| matches!(r, SweepRow::MaxRange(r) if !r.is_feasible())));
        // 1e-9 W still closes over ~170 m, which is below both floors.
        let q = FeasibilityQuery::inter_satellite(watts(1e-9), db(3.0), setup().terminals);
        let d = max_isl_distance_km(&q).unwrap().feasible().unwrap();
        assert!(d > 0.0 && d < MIN_ISL_DISTANCE_KM, "{d}");
    }

    #[test]
    fn margin_grid_shape_checked() {
        let sweep = SweepDef::MarginIsl {
            distances_km: vec![1000.0, 2000.0],
            margins: vec![grid(&[1.0])],
            tx_power_cap: watts(1.0),
        };
        assert!(run_sweep(&setup(), &sweep).is_err());
    }
}
