//! Text file formats: design records (TOML), sample tables, front exports,
//! archive snapshots, histories and cash flows (CSV), JSON documents.
//!
//! Every writer renders the whole file in memory first, so a failure never
//! leaves a partial file behind. Floats use the shortest representation
//! that parses back to the same value.

use std::collections::BTreeMap;
use std::path::Path;

use hpmr_core::design::{DesignVector, DIM, FIELD_NAMES, FIELD_UNITS};
use hpmr_core::econ::{CashFlowSchedule, EconParams};
use hpmr_core::env::SampleTable;
use hpmr_core::metrics::{FrontPoint, FrontReport, StepRecord};
use hpmr_core::pareto::BufferEntry;
use hpmr_core::pearl::UpdateRecord;
use serde::Serialize;

use crate::error::{Error, Result};

pub const QOI_COLUMNS: [&str; 4] = ["lifetime", "sdm", "f_dh", "q_max"];
pub const FRONT_COLUMNS: [&str; 6] = ["agent", "id", "feasible", "penalty", "lcoe", "f_dh"];
pub const HISTORY_COLUMNS: [&str; 7] = ["agent", "step", "reward", "feasible", "penalty", "lcoe", "f_dh"];

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::parse(path, e))?;
    text.push('\n');
    write_text(path, &text)
}

fn csv_string(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn num(path: &Path, line: usize, column: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::parse(path, format!("line {line}: `{column}` is not a number: `{s}`")))
}

fn boolean(path: &Path, line: usize, s: &str) -> Result<bool> {
    match s.trim() {
        "true" | "1" => Ok(true),
        "false" | "0" => Ok(false),
        other => Err(Error::parse(path, format!("line {line}: `{other}` is not a boolean"))),
    }
}

fn integer<T: std::str::FromStr>(path: &Path, line: usize, column: &str, s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::parse(path, format!("line {line}: `{column}` is not an integer: `{s}`")))
}

fn csv_rows(path: &Path, text: &str) -> Result<(Vec<String>, Vec<csv::StringRecord>)> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = r
        .headers()
        .map_err(|e| Error::parse(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let rows = r
        .records()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::parse(path, e))?;
    Ok((header, rows))
}

// ---------------------------------------------------------------- designs

pub fn design_to_toml(d: &DesignVector) -> String {
    let mut s = String::from("# Design record.\n");
    for (name, unit) in FIELD_NAMES.iter().zip(FIELD_UNITS) {
        s.push_str(&format!("# {name}: {unit}\n"));
    }
    for (name, v) in FIELD_NAMES.iter().zip(d.to_array()) {
        s.push_str(&format!("{name} = {v:?}\n"));
    }
    s
}

/// Parses a flat key-value design record. Every field must be present
/// exactly once and no other key is allowed; bounds are not checked here.
pub fn parse_design(text: &str, origin: &Path) -> Result<DesignVector> {
    let table: BTreeMap<String, toml::Value> = toml::from_str(text).map_err(|e| Error::parse(origin, e))?;
    if let Some(k) = table.keys().find(|k| !FIELD_NAMES.contains(&k.as_str())) {
        return Err(Error::parse(origin, format!("unknown field `{k}`")));
    }
    let mut v = [0.0; DIM];
    for (i, name) in FIELD_NAMES.iter().enumerate() {
        v[i] = match table.get(*name) {
            Some(toml::Value::Float(x)) => *x,
            Some(toml::Value::Integer(x)) => *x as f64,
            Some(_) => return Err(Error::parse(origin, format!("`{name}` must be a number"))),
            None => return Err(Error::parse(origin, format!("missing field `{name}`"))),
        };
    }
    Ok(DesignVector::from_array(v))
}

pub fn read_design(path: &Path) -> Result<DesignVector> {
    parse_design(&read_text(path)?, path)
}

pub fn write_design(path: &Path, d: &DesignVector) -> Result<()> {
    write_text(path, &design_to_toml(d))
}

// ----------------------------------------------------------- sample tables

pub fn sample_table_header(itc: bool) -> Vec<String> {
    let mut h: Vec<String> = FIELD_NAMES.iter().chain(QOI_COLUMNS.iter()).map(|s| s.to_string()).collect();
    if itc {
        h.push("itc".into());
    }
    h
}

pub fn sample_table_to_csv(t: &SampleTable) -> String {
    let rows: Vec<Vec<String>> = (0..t.len())
        .map(|i| {
            let mut r: Vec<String> = t.designs[i]
                .to_array()
                .iter()
                .chain(t.qoi[i].iter())
                .map(f64::to_string)
                .collect();
            if let Some(itc) = &t.itc {
                r.push(itc[i].to_string());
            }
            r
        })
        .collect();
    csv_string(&sample_table_header(t.itc.is_some()), &rows)
}

/// Header must list the seven design fields then `lifetime,sdm,f_dh,q_max`,
/// optionally followed by `itc`.
pub fn parse_sample_table(text: &str, origin: &Path) -> Result<SampleTable> {
    let (header, rows) = csv_rows(origin, text)?;
    let itc = header.len() == DIM + 5;
    if header != sample_table_header(itc) {
        return Err(Error::parse(
            origin,
            format!("header must be `{}`[,itc]", sample_table_header(false).join(",")),
        ));
    }
    let mut designs = Vec::with_capacity(rows.len());
    let mut qoi = Vec::with_capacity(rows.len());
    let mut itcs = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let line = i + 2;
        let v = r
            .iter()
            .zip(&header)
            .map(|(s, h)| num(origin, line, h, s))
            .collect::<Result<Vec<f64>>>()?;
        designs.push(DesignVector::from_slice(&v[..DIM])?);
        qoi.push([v[DIM], v[DIM + 1], v[DIM + 2], v[DIM + 3]]);
        if itc {
            itcs.push(v[DIM + 4]);
        }
    }
    Ok(SampleTable::new(designs, qoi, itc.then_some(itcs))?)
}

pub fn read_sample_table(path: &Path) -> Result<SampleTable> {
    parse_sample_table(&read_text(path)?, path)
}

pub fn write_sample_table(path: &Path, t: &SampleTable) -> Result<()> {
    write_text(path, &sample_table_to_csv(t))
}

// ------------------------------------------------------------------ fronts

fn design_columns(width: usize) -> Vec<String> {
    if width == DIM {
        FIELD_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        (0..width).map(|i| format!("u{i}")).collect()
    }
}

fn design_width(points: &[&FrontPoint]) -> Result<usize> {
    let width = points.first().map_or(DIM, |p| p.design.len());
    if points.iter().any(|p| p.design.len() != width) {
        return Err(Error::Config("front points carry designs of different lengths".into()));
    }
    Ok(width)
}

fn front_row(p: &FrontPoint) -> Vec<String> {
    let mut r = vec![
        p.agent.to_string(),
        p.id.to_string(),
        p.feasible.to_string(),
        p.penalty.to_string(),
        p.objectives[0].to_string(),
        p.objectives[1].to_string(),
    ];
    r.extend(p.design.iter().map(f64::to_string));
    r
}

/// Front export with the report fields as leading `# key = value` lines.
pub fn front_report_to_csv(report: &FrontReport) -> Result<String> {
    let refs: Vec<&FrontPoint> = report.points.iter().collect();
    let width = design_width(&refs)?;
    let mut header: Vec<String> = FRONT_COLUMNS.iter().map(|s| s.to_string()).collect();
    header.extend(design_columns(width));
    let rows: Vec<Vec<String>> = report.points.iter().map(front_row).collect();
    let mut s = format!(
        "# label = {}\n# reference = {},{}\n# hypervolume = {}\n# feasible_count = {}\n",
        report.label, report.reference[0], report.reference[1], report.hypervolume, report.feasible_count
    );
    s.push_str(&csv_string(&header, &rows));
    Ok(s)
}

fn parse_front_rows(path: &Path, header: &[String], rows: &[csv::StringRecord], extra: usize) -> Result<Vec<FrontPoint>> {
    if header.len() < FRONT_COLUMNS.len() + extra || header[..FRONT_COLUMNS.len()] != FRONT_COLUMNS {
        return Err(Error::parse(path, format!("header must start with `{}`", FRONT_COLUMNS.join(","))));
    }
    let design_end = header.len() - extra;
    let mut out = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let line = i + 2;
        let f = |k: usize| &r[k];
        let design = (FRONT_COLUMNS.len()..design_end)
            .map(|k| num(path, line, &header[k], f(k)))
            .collect::<Result<Vec<f64>>>()?;
        out.push(FrontPoint {
            agent: integer(path, line, "agent", f(0))?,
            id: integer(path, line, "id", f(1))?,
            feasible: boolean(path, line, f(2))?,
            penalty: num(path, line, "penalty", f(3))?,
            objectives: [num(path, line, "lcoe", f(4))?, num(path, line, "f_dh", f(5))?],
            design,
        });
    }
    Ok(out)
}

pub fn parse_front_report(text: &str, origin: &Path) -> Result<FrontReport> {
    let mut meta = BTreeMap::new();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        if let Some((k, v)) = line[1..].split_once('=') {
            meta.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    let get = |k: &str| {
        meta.get(k)
            .ok_or_else(|| Error::parse(origin, format!("missing `# {k} = ...` line")))
    };
    let reference: Vec<f64> = get("reference")?
        .split(',')
        .map(|s| num(origin, 2, "reference", s))
        .collect::<Result<_>>()?;
    if reference.len() != 2 {
        return Err(Error::parse(origin, "reference must have two components"));
    }
    let (header, rows) = csv_rows(origin, text)?;
    Ok(FrontReport {
        label: get("label")?.clone(),
        points: parse_front_rows(origin, &header, &rows, 0)?,
        reference: [reference[0], reference[1]],
        hypervolume: num(origin, 3, "hypervolume", get("hypervolume")?)?,
        feasible_count: integer(origin, 4, "feasible_count", get("feasible_count")?)?,
    })
}

pub fn write_front_report(path: &Path, report: &FrontReport) -> Result<()> {
    write_text(path, &front_report_to_csv(report)?)
}

pub fn read_front_report(path: &Path) -> Result<FrontReport> {
    parse_front_report(&read_text(path)?, path)
}

/// One archive member with its zero-based front index and within-front
/// distance.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotRow {
    pub point: FrontPoint,
    pub front: usize,
    pub distance: f64,
}

pub fn snapshot_rows(agent: usize, entries: &[BufferEntry]) -> Vec<SnapshotRow> {
    entries
        .iter()
        .map(|e| SnapshotRow {
            point: FrontPoint::from_objective_point(agent, &e.point),
            front: e.front,
            distance: e.distance,
        })
        .collect()
}

/// Archive snapshot: front columns followed by `front,distance`.
pub fn buffer_snapshot_to_csv(rows: &[SnapshotRow]) -> Result<String> {
    let width = design_width(&rows.iter().map(|r| &r.point).collect::<Vec<_>>())?;
    let mut header: Vec<String> = FRONT_COLUMNS.iter().map(|s| s.to_string()).collect();
    header.extend(design_columns(width));
    header.push("front".into());
    header.push("distance".into());
    let out: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut v = front_row(&r.point);
            v.push(r.front.to_string());
            v.push(r.distance.to_string());
            v
        })
        .collect();
    Ok(csv_string(&header, &out))
}

pub fn parse_buffer_snapshot(text: &str, origin: &Path) -> Result<Vec<SnapshotRow>> {
    let (header, rows) = csv_rows(origin, text)?;
    let n = header.len();
    if n < 2 || header[n - 2] != "front" || header[n - 1] != "distance" {
        return Err(Error::parse(origin, "header must end with `front,distance`"));
    }
    let points = parse_front_rows(origin, &header, &rows, 2)?;
    points
        .into_iter()
        .zip(&rows)
        .enumerate()
        .map(|(i, (point, r))| {
            Ok(SnapshotRow {
                point,
                front: integer(origin, i + 2, "front", &r[n - 2])?,
                distance: num(origin, i + 2, "distance", &r[n - 1])?,
            })
        })
        .collect()
}

// --------------------------------------------------------------- histories

pub fn history_to_csv(history: &[StepRecord]) -> String {
    let header: Vec<String> = HISTORY_COLUMNS.iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<String>> = history
        .iter()
        .map(|h| {
            vec![
                h.agent.to_string(),
                h.step.to_string(),
                h.reward.to_string(),
                h.feasible.to_string(),
                h.penalty.to_string(),
                h.objectives[0].to_string(),
                h.objectives[1].to_string(),
            ]
        })
        .collect();
    csv_string(&header, &rows)
}

pub fn parse_history(text: &str, origin: &Path) -> Result<Vec<StepRecord>> {
    let (header, rows) = csv_rows(origin, text)?;
    if header != HISTORY_COLUMNS {
        return Err(Error::parse(origin, format!("header must be `{}`", HISTORY_COLUMNS.join(","))));
    }
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let line = i + 2;
            Ok(StepRecord {
                agent: integer(origin, line, "agent", &r[0])?,
                step: integer(origin, line, "step", &r[1])?,
                reward: num(origin, line, "reward", &r[2])?,
                feasible: boolean(origin, line, &r[3])?,
                penalty: num(origin, line, "penalty", &r[4])?,
                objectives: [num(origin, line, "lcoe", &r[5])?, num(origin, line, "f_dh", &r[6])?],
            })
        })
        .collect()
}

pub fn updates_to_csv(updates: &[UpdateRecord]) -> String {
    let header: Vec<String> = ["step", "entropy", "loss", "grad_norm", "skipped"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows: Vec<Vec<String>> = updates
        .iter()
        .map(|u| {
            vec![
                u.step.to_string(),
                u.entropy.to_string(),
                u.stats.loss.total.to_string(),
                u.stats.grad_norm.to_string(),
                u.stats.skipped.to_string(),
            ]
        })
        .collect();
    csv_string(&header, &rows)
}

// -------------------------------------------------------------- cash flows

/// Yearly undiscounted flows by category, their total, the discount factor
/// and the discounted total.
pub fn cash_flows_to_csv(schedule: &CashFlowSchedule, econ: &EconParams) -> String {
    let header: Vec<String> = [
        "year",
        "capital",
        "reflector",
        "reactivity_control",
        "fuel",
        "om",
        "total",
        "discount_factor",
        "discounted_total",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let rows: Vec<Vec<String>> = schedule
        .years
        .iter()
        .map(|y| {
            let df = econ.discount_factor(y.year);
            vec![
                y.year.to_string(),
                y.capital.to_string(),
                y.reflector.to_string(),
                y.reactivity_control.to_string(),
                y.fuel.to_string(),
                y.om.to_string(),
                y.total().to_string(),
                df.to_string(),
                (y.total() * df).to_string(),
            ]
        })
        .collect();
    csv_string(&header, &rows)
}
