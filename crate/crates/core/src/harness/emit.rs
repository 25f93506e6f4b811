use super::config::ScenarioConfig;
use super::metrics::ErrorCurve;
use super::sweep::{CurveRecord, MetricRecord, SweepKind, SweepResult};
use crate::absolute::Representation;
use crate::{Result, SncError};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Serialize, Deserialize)]
struct RecordRow {
    sweep_value: f64,
    scenario: String,
    model: String,
    metric: String,
    value: Option<f64>,
    at_dt_orbits: Option<f64>,
    err_1: f64,
    err_2: f64,
    err_3: f64,
    err_4: f64,
    err_5: f64,
    err_6: f64,
    excluded: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct CurveRow {
    sweep_value: f64,
    scenario: String,
    model: String,
    representation: Representation,
    dt_orbits: f64,
    err_1: f64,
    err_2: f64,
    err_3: f64,
    err_4: f64,
    err_5: f64,
    err_6: f64,
    /// Six 0/1 digits marking diagonals under the std floor.
    floored: String,
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> SncError + '_ {
    move |e| match e.into_kind() {
        csv::ErrorKind::Io(io) => SncError::io(path, io),
        other => SncError::Format(format!("{}: {other:?}", path.display())),
    }
}

fn create(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).map_err(csv_err(path))
}

/// Writes the metric records of `res`; an empty result gives a header-only file.
pub fn write_records(res: &SweepResult, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    if res.records.is_empty() {
        w.write_record([
            "sweep_value", "scenario", "model", "metric", "value", "at_dt_orbits", "err_1", "err_2", "err_3", "err_4",
            "err_5", "err_6", "excluded",
        ])
        .map_err(csv_err(path))?;
    }
    for r in &res.records {
        let e = r.errors;
        w.serialize(RecordRow {
            sweep_value: r.sweep_value,
            scenario: r.scenario.clone(),
            model: r.model.clone(),
            metric: r.metric.to_string(),
            value: r.value,
            at_dt_orbits: r.at_dt_orbits,
            err_1: e[0],
            err_2: e[1],
            err_3: e[2],
            err_4: e[3],
            err_5: e[4],
            err_6: e[5],
            excluded: r.excluded.clone(),
        })
        .map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| SncError::io(path, e))
}

/// Writes one row per (curve, grid point).
pub fn write_curves(res: &SweepResult, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    if res.curves.iter().all(|c| c.curve.dt_orbits.is_empty()) {
        w.write_record([
            "sweep_value", "scenario", "model", "representation", "dt_orbits", "err_1", "err_2", "err_3", "err_4",
            "err_5", "err_6", "floored",
        ])
        .map_err(csv_err(path))?;
    }
    for c in &res.curves {
        for (k, &dt) in c.curve.dt_orbits.iter().enumerate() {
            let e = c.curve.errors[k];
            w.serialize(CurveRow {
                sweep_value: c.sweep_value,
                scenario: c.scenario.clone(),
                model: c.model.clone(),
                representation: c.curve.representation,
                dt_orbits: dt,
                err_1: e[0],
                err_2: e[1],
                err_3: e[2],
                err_4: e[3],
                err_5: e[4],
                err_6: e[5],
                floored: c.curve.floored[k].iter().map(|&b| if b { '1' } else { '0' }).collect(),
            })
            .map_err(csv_err(path))?;
        }
    }
    w.flush().map_err(|e| SncError::io(path, e))
}

pub fn read_records(path: &Path) -> Result<Vec<MetricRecord>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    r.deserialize::<RecordRow>()
        .map(|row| {
            let row = row.map_err(csv_err(path))?;
            Ok(MetricRecord {
                sweep_value: row.sweep_value,
                scenario: row.scenario,
                model: row.model,
                metric: row.metric.parse()?,
                value: row.value,
                at_dt_orbits: row.at_dt_orbits,
                errors: [row.err_1, row.err_2, row.err_3, row.err_4, row.err_5, row.err_6],
                excluded: row.excluded,
            })
        })
        .collect()
}

/// Rebuilds curves from a curves file; consecutive rows with the same key form one curve.
pub fn read_curves(path: &Path) -> Result<Vec<CurveRecord>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let mut out: Vec<CurveRecord> = Vec::new();
    for row in r.deserialize::<CurveRow>() {
        let row = row.map_err(csv_err(path))?;
        let bits: Vec<bool> = row.floored.chars().map(|c| c == '1').collect();
        if bits.len() != 6 {
            return Err(SncError::Format(format!("{}: bad floored mask '{}'", path.display(), row.floored)));
        }
        let same = out.last().is_some_and(|c| {
            c.sweep_value == row.sweep_value
                && c.scenario == row.scenario
                && c.model == row.model
                && c.curve.representation == row.representation
        });
        if !same {
            out.push(CurveRecord {
                sweep_value: row.sweep_value,
                scenario: row.scenario.clone(),
                model: row.model.clone(),
                curve: ErrorCurve::new(row.representation),
            });
        }
        let c = &mut out.last_mut().expect("pushed above").curve;
        c.dt_orbits.push(row.dt_orbits);
        c.errors.push([row.err_1, row.err_2, row.err_3, row.err_4, row.err_5, row.err_6]);
        c.floored.push(std::array::from_fn(|i| bits[i]));
    }
    Ok(out)
}

pub fn records_path(dir: &Path, kind: SweepKind) -> PathBuf {
    dir.join(format!("{}_sweep.csv", kind.name()))
}

pub fn curves_path(dir: &Path, kind: SweepKind) -> PathBuf {
    dir.join(format!("{}_curves.csv", kind.name()))
}

/// Writes the records file and, if `with_curves`, the curves file into `dir`.
pub fn write_sweep(res: &SweepResult, dir: &Path, with_curves: bool) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| SncError::io(dir, e))?;
    let rec = records_path(dir, res.kind);
    write_records(res, &rec)?;
    let mut files = vec![rec];
    if with_curves {
        let cur = curves_path(dir, res.kind);
        write_curves(res, &cur)?;
        files.push(cur);
    }
    Ok(files)
}

/// Wall-clock time spent on one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTiming {
    pub sweep: SweepKind,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub package: String,
    pub version: String,
    pub config_hash: String,
    pub config: ScenarioConfig,
    /// Seconds since the Unix epoch when the manifest was written.
    pub written_unix: u64,
    pub timing: Vec<SweepTiming>,
    pub files: Vec<String>,
    pub record_counts: Vec<(SweepKind, usize)>,
}

/// Writes every sweep (records and curves) plus `manifest.json` into `dir`.
pub fn emit_results(
    results: &[SweepResult],
    cfg: &ScenarioConfig,
    timing: &[SweepTiming],
    dir: &Path,
    with_curves: bool,
) -> Result<Manifest> {
    let mut files = Vec::new();
    for res in results {
        files.extend(write_sweep(res, dir, with_curves)?);
    }
    let manifest = Manifest {
        package: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_hash: cfg.hash(),
        config: cfg.clone(),
        written_unix: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        timing: timing.to_vec(),
        files: files.iter().filter_map(|p| p.file_name()).map(|f| f.to_string_lossy().into_owned()).collect(),
        record_counts: results.iter().map(|r| (r.kind, r.records.len())).collect(),
    };
    let path = dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| SncError::Format(e.to_string()))?;
    std::fs::write(&path, json).map_err(|e| SncError::io(&path, e))?;
    Ok(manifest)
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let text = std::fs::read_to_string(path).map_err(|e| SncError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| SncError::Format(format!("{}: {e}", path.display())))
}
