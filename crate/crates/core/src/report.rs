//! Table rendering for sweep rows.
//!
//! Output is byte-deterministic: fixed column order, dB to two decimals,
//! Watts in engineering notation, LF line endings. Rounding is half away
//! from zero and never yields a negative zero.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantities::{Decibels, PowerValue};
use crate::sweep::{IslDistanceRow, MarginBasis, MarginRow, RangeRow, SweepKind, SweepRow, UpDownRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    Csv,
    Markdown,
}

impl TableFormat {
    pub fn extension(self) -> &'static str {
        match self {
            TableFormat::Csv => "csv",
            TableFormat::Markdown => "md",
        }
    }
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "md" | "markdown" => Ok(TableFormat::Markdown),
            other => Err(Error::Config(format!("unknown table format {other:?}; expected csv or md"))),
        }
    }
}

/// Column headers for a sweep kind.
pub fn columns(kind: SweepKind) -> &'static [&'static str] {
    match kind {
        SweepKind::IslDistance => &["d_SS (km)", "L_PS (dB)", "P_T (dBm)", "P_T (W)"],
        SweepKind::SlantAltitude => &[
            "h_S (km)", "d_GS (km)", "L_PG (dB)", "I_m (dB)", "I_g (dB)", "L_A (dB)", "P_T (dBm)", "P_T (W)",
        ],
        SweepKind::Elevation => &[
            "theta_E (deg)", "d_GS (km)", "d_A (km)", "L_PG (dB)", "I_m (dB)", "I_g (dB)", "L_A (dB)", "P_T (dBm)",
            "P_T (W)",
        ],
        SweepKind::MarginIsl => &["d_SS (km)", "LM (dB)", "P_R (dBm)", "P_T (dBm)", "P_T (W)", "basis"],
        SweepKind::MarginUpDown => &[
            "h_S (km)", "d_GS (km)", "LM (dB)", "P_R (dBm)", "P_T (dBm)", "P_T (W)", "basis",
        ],
        SweepKind::MaxRange => &["link", "P_T cap (W)", "LM floor (dB)", "theta_E (deg)", "d_max (km)", "h_S (km)"],
    }
}

/// Rounds half away from zero to `decimals` places and formats, folding
/// `-0.00` into `0.00`.
pub fn fixed(value: f64, decimals: usize) -> String {
    let scale = 10f64.powi(decimals as i32);
    let mut r = (value * scale).round() / scale;
    if r == 0.0 {
        r = 0.0;
    }
    format!("{r:.decimals$}")
}

pub fn format_db(d: Decibels) -> String {
    fixed(d.value(), 2)
}

pub fn format_km(km: f64) -> String {
    fixed(km, 1)
}

/// Axis values print as given: integers without decimals, anything else in
/// shortest round-trip form.
pub fn format_axis(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// Engineering notation with a two-decimal mantissa: `34.05e-3`, `1.03`.
pub fn format_watts(p: PowerValue) -> String {
    let w = p.watts();
    let mut exp = (w.log10() / 3.0).floor() as i32 * 3;
    let mut mantissa: f64 = fixed(w / 10f64.powi(exp), 2).parse().expect("formatted number");
    if mantissa >= 1000.0 {
        exp += 3;
        mantissa = fixed(w / 10f64.powi(exp), 2).parse().expect("formatted number");
    }
    if exp == 0 {
        format!("{mantissa:.2}")
    } else {
        format!("{mantissa:.2}e{exp}")
    }
}

fn basis(b: MarginBasis) -> &'static str {
    match b {
        MarginBasis::FixedMargin => "fixed-margin",
        MarginBasis::PowerCap => "power-cap",
    }
}

fn isl_cells(r: &IslDistanceRow) -> Vec<String> {
    vec![
        format_axis(r.distance_km),
        format_db(r.path_loss_db),
        format_db(r.tx_power.dbm()),
        format_watts(r.tx_power),
    ]
}

fn dbm(p: PowerValue) -> String {
    format_db(p.dbm())
}

fn updown_cells(r: &UpDownRow, by_elevation: bool) -> Vec<String> {
    let mut cells = if by_elevation {
        vec![format_axis(r.elevation_deg), format_km(r.slant_distance_km), format_km(r.atmospheric_path_km)]
    } else {
        vec![format_axis(r.sat_altitude_km), format_km(r.slant_distance_km)]
    };
    cells.extend([
        format_db(r.path_loss_db),
        format_db(r.mie_db),
        format_db(r.geometric_db),
        format_db(r.atmospheric_db),
        dbm(r.tx_power),
        format_watts(r.tx_power),
    ]);
    cells
}

fn margin_cells(r: &MarginRow, updown: bool) -> Vec<String> {
    let mut cells = match (updown, r.sat_altitude_km) {
        (true, Some(h)) => vec![format_axis(h), format_km(r.distance_km)],
        _ => vec![format_axis(r.distance_km)],
    };
    cells.extend([
        format_db(r.margin_db),
        format_db(r.rx_power_dbm),
        dbm(r.tx_power),
        format_watts(r.tx_power),
        basis(r.basis).to_string(),
    ]);
    cells
}

fn range_cells(r: &RangeRow) -> Vec<String> {
    vec![
        r.link.as_str().to_string(),
        format_watts(r.tx_power_cap),
        format_db(r.margin_floor_db),
        r.elevation_deg.map(format_axis).unwrap_or_default(),
        r.max_distance_km.map(format_km).unwrap_or_else(|| "infeasible".to_string()),
        r.sat_altitude_km.map(format_km).unwrap_or_default(),
    ]
}

/// Formatted cells of one row, in `columns(row.kind())` order.
pub fn cells(row: &SweepRow) -> Vec<String> {
    match row {
        SweepRow::IslDistance(r) => isl_cells(r),
        SweepRow::SlantAltitude(r) => updown_cells(r, false),
        SweepRow::Elevation(r) => updown_cells(r, true),
        SweepRow::MarginIsl(r) => margin_cells(r, false),
        SweepRow::MarginUpDown(r) => margin_cells(r, true),
        SweepRow::MaxRange(r) => range_cells(r),
    }
}

fn render_csv(header: &[&str], body: &[Vec<String>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let internal = |e: csv::Error| Error::Config(format!("csv writer: {e}"));
    w.write_record(header).map_err(internal)?;
    for row in body {
        w.write_record(row).map_err(internal)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(format!("csv writer: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn render_markdown(header: &[&str], body: &[Vec<String>]) -> String {
    let escape = |s: &str| s.replace('|', "\\|");
    let mut widths: Vec<usize> = header.iter().map(|h| escape(h).chars().count().max(3)).collect();
    for row in body {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(escape(c).chars().count());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: &mut dyn Iterator<Item = String>| {
        out.push('|');
        for (c, w) in cells.zip(&widths) {
            let _ = write!(out, " {c:<w$} |");
        }
        out.push('\n');
    };
    line(&mut out, &mut header.iter().map(|h| escape(h)));
    line(&mut out, &mut widths.iter().map(|&w| "-".repeat(w)));
    for row in body {
        line(&mut out, &mut row.iter().map(|c| escape(c)));
    }
    out
}

/// Renders rows of a single kind as a table. An empty row list produces the
/// header alone.
pub fn render_table(kind: SweepKind, rows: &[SweepRow], format: TableFormat) -> Result<String> {
    if let Some(bad) = rows.iter().find(|r| r.kind() != kind) {
        return Err(Error::Config(format!(
            "cannot render a {} row in a {} table",
            bad.kind().as_str(),
            kind.as_str()
        )));
    }
    let header = columns(kind);
    let body: Vec<Vec<String>> = rows.iter().map(cells).collect();
    match format {
        TableFormat::Csv => render_csv(header, &body),
        TableFormat::Markdown => Ok(render_markdown(header, &body)),
    }
}
