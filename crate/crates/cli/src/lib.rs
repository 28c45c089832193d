//! The `fsolink` command line: load a scenario, run one sweep or query, and
//! write a table.
//!
//! Exit codes: 0 on success, 2 when the input is invalid, 1 on an internal
//! failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use fsolink::budget::{received_power, LinkGeometry, LinkKind};
use fsolink::scenario::{parse_override, DEFAULT_SCENARIO_JSON};
use fsolink::{
    parse_scenario_with_overrides, render_table, run_sweep, Decibels, Error, PowerValue, Scenario,
    ScenarioError, SweepDef, SweepKind, TableFormat, MODEL_VERSION,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fsolink", version, about = "Free-space optical satellite link budgets")]
pub struct Cli {
    /// Scenario JSON file. Defaults to the built-in reference scenario.
    #[arg(long, global = true, value_name = "PATH")]
    pub scenario: Option<PathBuf>,

    /// Override a scenario key, e.g. `--set receiver.sensitivity_dbm=-40`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,

    /// Output table format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file; with `--paper-tables`, an output directory.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Write every reference table (distance, altitude, elevation, both
    /// margin tables, max range).
    #[arg(long)]
    pub paper_tables: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Md,
}

impl From<Format> for TableFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => TableFormat::Csv,
            Format::Md => TableFormat::Markdown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LinkArg {
    InterSatellite,
    UpDown,
}

impl From<LinkArg> for LinkKind {
    fn from(l: LinkArg) -> Self {
        match l {
            LinkArg::InterSatellite => LinkKind::InterSatellite,
            LinkArg::UpDown => LinkKind::UpDown,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Required transmit power against inter-satellite distance.
    IslSweep(IslSweepArgs),
    /// Required transmit power against satellite altitude at a fixed elevation.
    SlantSweep(SlantSweepArgs),
    /// Required transmit power against elevation at a fixed altitude.
    ElevationSweep(ElevationSweepArgs),
    /// Required power over a grid of margins, plus the margin at the power cap.
    MarginSweep(MarginSweepArgs),
    /// Longest link that closes at a power cap and margin floor.
    MaxRange(MaxRangeArgs),
    /// Line-by-line budget of a single link.
    Explain(ExplainArgs),
}

#[derive(Debug, Args)]
pub struct IslSweepArgs {
    /// Distances: comma list or start:stop:step.
    #[arg(long, value_name = "AXIS")]
    pub distance_km: Option<String>,
    /// Link margin (dB). Defaults to the scenario sweep or 3.
    #[arg(long, allow_negative_numbers = true)]
    pub margin_db: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SlantSweepArgs {
    /// Satellite altitudes: comma list or start:stop:step.
    #[arg(long, value_name = "AXIS")]
    pub altitude_km: Option<String>,
    /// Ground elevation angle (deg); overrides `ground.elevation_deg`.
    #[arg(long)]
    pub elevation_deg: Option<f64>,
    /// Link margin (dB). Defaults to the scenario sweep or 3.
    #[arg(long, allow_negative_numbers = true)]
    pub margin_db: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ElevationSweepArgs {
    /// Elevations: comma list or start:stop:step.
    #[arg(long, value_name = "AXIS")]
    pub elevation_deg: Option<String>,
    /// Fixed satellite altitude (km).
    #[arg(long)]
    pub altitude_km: Option<f64>,
    /// Link margin (dB). Defaults to the scenario sweep or 3.
    #[arg(long, allow_negative_numbers = true)]
    pub margin_db: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MarginSweepArgs {
    /// Link type; `--altitude-km` requires up-down.
    #[arg(long, value_enum, default_value_t = LinkArg::InterSatellite)]
    pub link: LinkArg,
    /// Inter-satellite distances (comma list or start:stop:step).
    #[arg(long, value_name = "AXIS", conflicts_with = "altitude_km")]
    pub distance_km: Option<String>,
    /// Satellite altitudes for up/down links.
    #[arg(long, value_name = "AXIS")]
    pub altitude_km: Option<String>,
    /// Margins applied at every axis value (comma list).
    #[arg(long, value_name = "LIST", allow_negative_numbers = true)]
    pub margin_db: Option<String>,
    /// Transmit power cap (W).
    #[arg(long)]
    pub tx_power_w: Option<f64>,
    /// Ground elevation angle (deg); overrides `ground.elevation_deg`.
    #[arg(long)]
    pub elevation_deg: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MaxRangeArgs {
    /// Restrict to one link type; both by default.
    #[arg(long, value_enum)]
    pub link: Option<LinkArg>,
    /// Transmit power cap (W).
    #[arg(long)]
    pub tx_power_w: Option<f64>,
    /// Margin floors (comma list).
    #[arg(long, value_name = "LIST", allow_negative_numbers = true)]
    pub margin_db: Option<String>,
    /// Ground elevation angle (deg); overrides `ground.elevation_deg`.
    #[arg(long)]
    pub elevation_deg: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ExplainArgs {
    /// Link type.
    #[arg(long, value_enum, default_value_t = LinkArg::InterSatellite)]
    pub link: LinkArg,
    /// Inter-satellite distance (km). Defaults to 2000.
    #[arg(long, conflicts_with = "altitude_km")]
    pub distance_km: Option<f64>,
    /// Satellite altitude for up/down links (km). Defaults to 550.
    #[arg(long)]
    pub altitude_km: Option<f64>,
    /// Transmit power (W). Defaults to 1.
    #[arg(long)]
    pub tx_power_w: Option<f64>,
    /// Ground elevation angle (deg); overrides `ground.elevation_deg`.
    #[arg(long)]
    pub elevation_deg: Option<f64>,
}

/// Failure of a run, split by exit code.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        Failure::Validation(format!("invalid scenario: {e}"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Bracket { .. } => Failure::Internal(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn validation(msg: impl Into<String>) -> Failure {
    Failure::Validation(msg.into())
}

/// Parses an axis: `a,b,c` or `start:stop:step`.
pub fn parse_axis(flag: &str, text: &str) -> Outcome<Vec<f64>> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| validation(format!("--{flag}: {s:?} is not a number")))
    };
    let values: Vec<f64> = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(validation(format!("--{flag}: a range is start:stop:step")));
        };
        let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
        if !(step > 0.0 && step.is_finite() && start <= stop) {
            return Err(validation(format!("--{flag}: need step > 0 and start <= stop")));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| start + i as f64 * step).collect()
    } else {
        text.split(',').map(num).collect::<Outcome<_>>()?
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(validation(format!("--{flag}: axis must hold finite numbers")));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(validation(format!("--{flag}: axis must be strictly increasing")));
    }
    Ok(values)
}

fn db(flag: &str, v: f64) -> Outcome<Decibels> {
    Decibels::new(v).map_err(|e| validation(format!("--{flag}: {e}")))
}

fn watts(flag: &str, v: f64) -> Outcome<PowerValue> {
    PowerValue::from_watts(v).map_err(|e| validation(format!("--{flag}: {e}")))
}

fn db_list(flag: &str, text: &str) -> Outcome<Vec<Decibels>> {
    text.split(',')
        .map(|s| {
            let v = s
                .trim()
                .parse::<f64>()
                .map_err(|_| validation(format!("--{flag}: {s:?} is not a number")))?;
            db(flag, v)
        })
        .collect()
}

/// The scenario a run works from, with provenance for the output header.
struct Loaded {
    scenario: Scenario,
    source: String,
    hash: String,
    overrides: Vec<(String, String)>,
}

fn load(cli: &Cli, extra: &[(String, String)]) -> Outcome<Loaded> {
    let (text, source) = match &cli.scenario {
        Some(path) => (
            fs::read_to_string(path)
                .map_err(|e| validation(format!("cannot read scenario {}: {e}", path.display())))?,
            path.display().to_string(),
        ),
        None => (DEFAULT_SCENARIO_JSON.to_string(), "built-in reference".to_string()),
    };
    let mut overrides = cli
        .overrides
        .iter()
        .map(|s| parse_override(s).map_err(Failure::from))
        .collect::<Outcome<Vec<_>>>()?;
    overrides.extend_from_slice(extra);
    let scenario = parse_scenario_with_overrides(&text, &overrides)?;
    let hash = hex::encode(Sha256::digest(scenario.to_json().as_bytes()));
    Ok(Loaded {
        scenario,
        source,
        hash,
        overrides,
    })
}

fn elevation_override(elevation_deg: Option<f64>) -> Vec<(String, String)> {
    elevation_deg
        .map(|e| vec![("ground.elevation_deg".to_string(), format!("{e}"))])
        .unwrap_or_default()
}

/// The scenario's own sweep if it has the requested kind, else the
/// reference grid.
fn base_sweep(scenario: &Scenario, kind: SweepKind) -> SweepDef {
    match &scenario.sweep {
        Some(s) if s.kind() == kind => s.clone(),
        _ => SweepDef::reference_grid(kind),
    }
}

fn header(loaded: &Loaded, command: &str, format: TableFormat) -> String {
    let mut lines = vec![
        format!("model: {MODEL_VERSION}"),
        format!("scenario: {} sha256:{}", loaded.source, loaded.hash),
    ];
    for (k, v) in &loaded.overrides {
        lines.push(format!("set: {k}={v}"));
    }
    lines.push(format!("command: {command}"));
    let mut out = String::new();
    for l in lines {
        match format {
            TableFormat::Csv => out.push_str(&format!("# {l}\n")),
            TableFormat::Markdown => out.push_str(&format!("<!-- {l} -->\n")),
        }
    }
    if format == TableFormat::Markdown {
        out.push('\n');
    }
    out
}

fn table(loaded: &Loaded, sweep: &SweepDef, command: &str, format: TableFormat) -> Outcome<String> {
    let rows = run_sweep(&loaded.scenario.setup(), sweep)?;
    let body = render_table(sweep.kind(), &rows, format).map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(header(loaded, command, format) + &body)
}

fn fmt_opt<T: std::fmt::Display>(name: &str, v: &Option<T>) -> String {
    v.as_ref().map(|v| format!(" --{name} {v}")).unwrap_or_default()
}

fn isl_sweep(cli: &Cli, a: &IslSweepArgs, format: TableFormat) -> Outcome<String> {
    let loaded = load(cli, &[])?;
    let SweepDef::IslDistance { mut distances_km, mut margin } = base_sweep(&loaded.scenario, SweepKind::IslDistance)
    else {
        unreachable!("kind matched")
    };
    if let Some(axis) = &a.distance_km {
        distances_km = parse_axis("distance-km", axis)?;
    }
    if let Some(m) = a.margin_db {
        margin = db("margin-db", m)?;
    }
    let command = format!("isl-sweep{}{}", fmt_opt("distance-km", &a.distance_km), fmt_opt("margin-db", &a.margin_db));
    table(&loaded, &SweepDef::IslDistance { distances_km, margin }, &command, format)
}

fn slant_sweep(cli: &Cli, a: &SlantSweepArgs, format: TableFormat) -> Outcome<String> {
    let loaded = load(cli, &elevation_override(a.elevation_deg))?;
    let SweepDef::SlantAltitude { mut sat_altitudes_km, mut margin } = base_sweep(&loaded.scenario, SweepKind::SlantAltitude)
    else {
        unreachable!("kind matched")
    };
    if let Some(axis) = &a.altitude_km {
        sat_altitudes_km = parse_axis("altitude-km", axis)?;
    }
    if let Some(m) = a.margin_db {
        margin = db("margin-db", m)?;
    }
    let command = format!(
        "slant-sweep{}{}{}",
        fmt_opt("altitude-km", &a.altitude_km),
        fmt_opt("elevation-deg", &a.elevation_deg),
        fmt_opt("margin-db", &a.margin_db)
    );
    table(&loaded, &SweepDef::SlantAltitude { sat_altitudes_km, margin }, &command, format)
}

fn elevation_sweep(cli: &Cli, a: &ElevationSweepArgs, format: TableFormat) -> Outcome<String> {
    let loaded = load(cli, &[])?;
    let SweepDef::Elevation { mut elevations_deg, mut sat_altitude_km, mut margin } =
        base_sweep(&loaded.scenario, SweepKind::Elevation)
    else {
        unreachable!("kind matched")
    };
    if let Some(axis) = &a.elevation_deg {
        elevations_deg = parse_axis("elevation-deg", axis)?;
    }
    if let Some(h) = a.altitude_km {
        sat_altitude_km = h;
    }
    if let Some(m) = a.margin_db {
        margin = db("margin-db", m)?;
    }
    let command = format!(
        "elevation-sweep{}{}{}",
        fmt_opt("elevation-deg", &a.elevation_deg),
        fmt_opt("altitude-km", &a.altitude_km),
        fmt_opt("margin-db", &a.margin_db)
    );
    let sweep = SweepDef::Elevation {
        elevations_deg,
        sat_altitude_km,
        margin,
    };
    table(&loaded, &sweep, &command, format)
}

fn margin_sweep(cli: &Cli, a: &MarginSweepArgs, format: TableFormat) -> Outcome<String> {
    let link: LinkKind = a.link.into();
    let loaded = load(cli, &elevation_override(a.elevation_deg))?;
    if link == LinkKind::InterSatellite && a.altitude_km.is_some() {
        return Err(validation("--altitude-km applies to --link up-down; use --distance-km"));
    }
    if link == LinkKind::UpDown && a.distance_km.is_some() {
        return Err(validation("--distance-km applies to --link inter-satellite; use --altitude-km"));
    }
    let kind = match link {
        LinkKind::InterSatellite => SweepKind::MarginIsl,
        LinkKind::UpDown => SweepKind::MarginUpDown,
    };
    let (mut axis, mut margins, mut cap) = match base_sweep(&loaded.scenario, kind) {
        SweepDef::MarginIsl { distances_km, margins, tx_power_cap } => (distances_km, margins, tx_power_cap),
        SweepDef::MarginUpDown { sat_altitudes_km, margins, tx_power_cap } => (sat_altitudes_km, margins, tx_power_cap),
        _ => unreachable!("kind matched"),
    };
    let axis_flag = a.distance_km.as_ref().map(|s| ("distance-km", s)).or(a.altitude_km.as_ref().map(|s| ("altitude-km", s)));
    if let Some((flag, text)) = axis_flag {
        axis = parse_axis(flag, text)?;
        if a.margin_db.is_none() && margins.len() != axis.len() {
            // Per-axis grid no longer lines up; keep the first row's margins.
            margins = vec![margins[0].clone(); axis.len()];
        }
    }
    if let Some(list) = &a.margin_db {
        margins = vec![db_list("margin-db", list)?; axis.len()];
    }
    if let Some(w) = a.tx_power_w {
        cap = watts("tx-power-w", w)?;
    }
    let sweep = match kind {
        SweepKind::MarginIsl => SweepDef::MarginIsl {
            distances_km: axis,
            margins,
            tx_power_cap: cap,
        },
        _ => SweepDef::MarginUpDown {
            sat_altitudes_km: axis,
            margins,
            tx_power_cap: cap,
        },
    };
    let command = format!(
        "margin-sweep --link {}{}{}{}{}{}",
        link.as_str(),
        fmt_opt("distance-km", &a.distance_km),
        fmt_opt("altitude-km", &a.altitude_km),
        fmt_opt("margin-db", &a.margin_db),
        fmt_opt("tx-power-w", &a.tx_power_w),
        fmt_opt("elevation-deg", &a.elevation_deg)
    );
    table(&loaded, &sweep, &command, format)
}

fn max_range(cli: &Cli, a: &MaxRangeArgs, format: TableFormat) -> Outcome<String> {
    let mut loaded = load(cli, &elevation_override(a.elevation_deg))?;
    let SweepDef::MaxRange { mut links, mut margin_floors, mut tx_power_cap } = base_sweep(&loaded.scenario, SweepKind::MaxRange)
    else {
        unreachable!("kind matched")
    };
    if let Some(l) = a.link {
        links = vec![l.into()];
    } else if loaded.scenario.ground.is_none() || loaded.scenario.atmosphere.is_none() {
        links.retain(|l| *l == LinkKind::InterSatellite);
    }
    if let Some(list) = &a.margin_db {
        margin_floors = db_list("margin-db", list)?;
    }
    if let Some(w) = a.tx_power_w {
        tx_power_cap = watts("tx-power-w", w)?;
    }
    if links.is_empty() {
        links.push(LinkKind::InterSatellite);
    }
    let command = format!(
        "max-range{}{}{}{}",
        fmt_opt("link", &a.link.map(|l| LinkKind::from(l).as_str())),
        fmt_opt("tx-power-w", &a.tx_power_w),
        fmt_opt("margin-db", &a.margin_db),
        fmt_opt("elevation-deg", &a.elevation_deg)
    );
    loaded.scenario.sweep = None;
    let sweep = SweepDef::MaxRange {
        links,
        margin_floors,
        tx_power_cap,
    };
    table(&loaded, &sweep, &command, format)
}

fn explain(cli: &Cli, a: &ExplainArgs, format: TableFormat) -> Outcome<String> {
    let link: LinkKind = a.link.into();
    let loaded = load(cli, &elevation_override(a.elevation_deg))?;
    let s = &loaded.scenario;
    let tx = watts("tx-power-w", a.tx_power_w.unwrap_or(1.0))?;
    let (geom, atmos) = match link {
        LinkKind::InterSatellite => {
            if a.altitude_km.is_some() {
                return Err(validation("--altitude-km applies to --link up-down; use --distance-km"));
            }
            (LinkGeometry::inter_satellite(a.distance_km.unwrap_or(2000.0))?, None)
        }
        LinkKind::UpDown => {
            if a.distance_km.is_some() {
                return Err(validation("--distance-km applies to --link inter-satellite; use --altitude-km"));
            }
            let site = s.ground.ok_or_else(|| validation("ground: ground required for an up-down link"))?;
            let atmos = s
                .atmosphere
                .ok_or_else(|| validation("atmosphere: atmosphere required for an up-down link"))?;
            (LinkGeometry::up_down(site, a.altitude_km.unwrap_or(550.0), &s.earth)?, Some(atmos))
        }
    };
    let b = received_power(tx, &s.terminals, &geom, atmos.as_ref())?;
    let command = format!(
        "explain --link {}{}{}{}{}",
        link.as_str(),
        fmt_opt("distance-km", &a.distance_km),
        fmt_opt("altitude-km", &a.altitude_km),
        fmt_opt("tx-power-w", &a.tx_power_w),
        fmt_opt("elevation-deg", &a.elevation_deg)
    );
    let mut out = header(&loaded, &command, format);
    let v = |d: Decibels| format!("{:.4}", d.value());
    let mut lines: Vec<(String, String)> = vec![
        ("link".into(), link.as_str().into()),
        ("distance (km)".into(), format!("{:.3}", b.distance_km)),
    ];
    if let Some(h) = geom.sat_altitude_km() {
        lines.push(("satellite altitude (km)".into(), format!("{h:.3}")));
    }
    lines.push(("transmit power (dBm)".into(), v(b.tx_power_dbm)));
    for (name, d) in b.line_items() {
        lines.push((format!("{name} (dB)"), v(d)));
    }
    lines.push(("received power (dBm)".into(), v(b.rx_power_dbm)));
    lines.push(("receiver sensitivity (dBm)".into(), v(b.sensitivity_dbm)));
    lines.push(("link margin (dB)".into(), v(b.margin_db)));
    match format {
        TableFormat::Csv => {
            out.push_str("item,value\n");
            for (k, val) in lines {
                out.push_str(&format!("{k},{val}\n"));
            }
        }
        TableFormat::Markdown => {
            let w = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(4);
            let vw = lines.iter().map(|(_, v)| v.len()).max().unwrap_or(5).max(5);
            out.push_str(&format!("| {:<w$} | {:>vw$} |\n", "item", "value"));
            out.push_str(&format!("| {} | {}: |\n", "-".repeat(w), "-".repeat(vw - 1)));
            for (k, val) in lines {
                out.push_str(&format!("| {k:<w$} | {val:>vw$} |\n"));
            }
        }
    }
    Ok(out)
}

/// File stems and kinds written by `--paper-tables`.
pub const PAPER_TABLES: [(&str, SweepKind); 6] = [
    ("table2", SweepKind::IslDistance),
    ("table4", SweepKind::SlantAltitude),
    ("table5", SweepKind::Elevation),
    ("table6", SweepKind::MarginIsl),
    ("table7", SweepKind::MarginUpDown),
    ("max-range", SweepKind::MaxRange),
];

/// Renders every reference table with the reference grids.
pub fn paper_tables(cli: &Cli) -> Outcome<Vec<(String, String)>> {
    let mut loaded = load(cli, &[])?;
    loaded.scenario.sweep = None;
    let format: TableFormat = cli.format.into();
    PAPER_TABLES
        .iter()
        .map(|(stem, kind)| {
            let doc = table(&loaded, &SweepDef::reference_grid(*kind), &format!("--paper-tables {stem}"), format)?;
            Ok((format!("{stem}.{}", format.extension()), doc))
        })
        .collect()
}

fn write_file(path: &Path, text: &str) -> Outcome<()> {
    fs::write(path, text).map_err(|e| Failure::Internal(format!("cannot write {}: {e}", path.display())))
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Outcome<()> {
    let format: TableFormat = cli.format.into();
    let emit = |text: &str, stdout: &mut dyn Write| -> Outcome<()> {
        match &cli.out {
            Some(path) => write_file(path, text),
            None => stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Internal(format!("cannot write output: {e}"))),
        }
    };
    if cli.paper_tables && cli.command.is_some() {
        return Err(validation("--paper-tables cannot be combined with a subcommand"));
    }
    if cli.paper_tables {
        let tables = paper_tables(cli)?;
        return match &cli.out {
            Some(dir) => {
                fs::create_dir_all(dir)
                    .map_err(|e| Failure::Internal(format!("cannot create {}: {e}", dir.display())))?;
                tables.iter().try_for_each(|(name, doc)| write_file(&dir.join(name), doc))
            }
            None => {
                let joined = tables.iter().map(|(_, d)| d.as_str()).collect::<Vec<_>>().join("\n");
                emit(&joined, stdout)
            }
        };
    }
    let text = match &cli.command {
        Some(Command::IslSweep(a)) => isl_sweep(cli, a, format)?,
        Some(Command::SlantSweep(a)) => slant_sweep(cli, a, format)?,
        Some(Command::ElevationSweep(a)) => elevation_sweep(cli, a, format)?,
        Some(Command::MarginSweep(a)) => margin_sweep(cli, a, format)?,
        Some(Command::MaxRange(a)) => max_range(cli, a, format)?,
        Some(Command::Explain(a)) => explain(cli, a, format)?,
        None => return Err(validation("a subcommand or --paper-tables is required (see --help)")),
    };
    emit(&text, stdout)
}

/// Runs the command line `args` (program name first). Returns the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_VALIDATION
                }
            };
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "fsolink: {}", f.message());
            f.exit_code()
        }
    }
}
