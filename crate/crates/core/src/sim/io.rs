//! CSV and JSON outputs.
//!
//! * `truth.csv`: `k,target,px,vx,py,vy`; a step with no target has one row
//!   with empty `target` and state columns.
//! * `measurements.csv`: `k,cell_index,range_centroid,azimuth_centroid,power`
//!   with one row per cell per scan; `grid.json` holds the grid.
//! * `estimates.csv`: `k,n_hat,label,exist,px,vx,py,vy`; a step with
//!   `n_hat = 0` has one row with empty label and state columns.
//! * `aggregate.csv`: `k,true_n,mean_n_hat,std_n_hat,mean_ospa,std_ospa`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::radar::{GridSpec, PowerMeasurement, SensorGrid};
use crate::rfs::{Label, LabeledSet, LabeledState};
use crate::sacphd::FilterDiagnostics;
use crate::tracker::TrackEstimate;

use super::run::{McResult, StepRecord};

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_truth_csv(path: &Path, truth: &[LabeledSet]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["k", "target", "px", "vx", "py", "vy"])?;
    for (i, set) in truth.iter().enumerate() {
        let k = (i + 1).to_string();
        if set.is_empty() {
            w.write_record([k.as_str(), "", "", "", "", ""])?;
        }
        for e in set {
            let mut row = vec![k.clone(), e.label.to_string()];
            row.extend(e.x.iter().take(4).map(|v| v.to_string()));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Config(format!("bad {what} '{s}'")))
}

fn parse_k(s: &str) -> Result<u32> {
    s.trim().parse().map_err(|_| Error::Config(format!("bad step '{s}'")))
}

/// Rows grouped by step `k = 1..=max k`; missing steps are empty.
fn grouped<T>(rows: Vec<(u32, Option<T>)>) -> Vec<Vec<T>> {
    let n = rows.iter().map(|r| r.0).max().unwrap_or(0) as usize;
    let mut out: Vec<Vec<T>> = (0..n).map(|_| Vec::new()).collect();
    for (k, item) in rows {
        if k == 0 {
            continue;
        }
        if let Some(v) = item {
            out[k as usize - 1].push(v);
        }
    }
    out
}

pub fn read_truth_csv(path: &Path) -> Result<Vec<LabeledSet>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let k = parse_k(&rec[0])?;
        let item = if rec[1].trim().is_empty() {
            None
        } else {
            let label: Label = rec[1].parse().map_err(Error::Config)?;
            let x: Vec<f64> = (2..6).map(|i| parse_f64(&rec[i], "state")).collect::<Result<_>>()?;
            Some(LabeledState::new(DVector::from_vec(x), label))
        };
        rows.push((k, item));
    }
    grouped(rows).into_iter().map(LabeledSet::new).collect()
}

pub fn write_measurements(dir: &Path, spec: &GridSpec, grid: &SensorGrid, z: &[PowerMeasurement]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    serde_json::to_writer_pretty(BufWriter::new(File::create(dir.join("grid.json"))?), spec)?;
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(dir.join("measurements.csv"))?));
    w.write_record(["k", "cell_index", "range_centroid", "azimuth_centroid", "power"])?;
    for m in z {
        for (c, v) in m.values.iter().enumerate() {
            let (r, a, _) = grid.cell_centroid(c);
            w.write_record([m.k.to_string(), c.to_string(), r.to_string(), a.to_string(), v.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads `measurements.csv`; each scan must list every cell of the grid.
pub fn read_measurements(path: &Path, cell_count: usize) -> Result<Vec<PowerMeasurement>> {
    let mut r = csv::Reader::from_reader(BufReader::new(File::open(path)?));
    let mut scans: Vec<PowerMeasurement> = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let k = parse_k(&rec[0])?;
        let c: usize = rec[1].trim().parse().map_err(|_| Error::Config(format!("bad cell '{}'", &rec[1])))?;
        let v = parse_f64(&rec[4], "power")?;
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::Config(format!("scan {k} cell {c}: power must be finite and nonnegative, got {v}")));
        }
        if scans.last().is_none_or(|s| s.k != k) {
            scans.push(PowerMeasurement { k, values: vec![f64::NAN; cell_count] });
        }
        let s = scans.last_mut().expect("pushed above");
        if c >= cell_count {
            return Err(Error::MeasurementSize { expected: cell_count, got: c + 1 });
        }
        s.values[c] = v;
    }
    for s in &scans {
        if s.values.iter().any(|v| v.is_nan()) {
            return Err(Error::Config(format!("scan {} does not cover every cell", s.k)));
        }
    }
    Ok(scans)
}

pub fn write_estimates_csv(path: &Path, estimates: &[TrackEstimate]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["k", "n_hat", "label", "exist", "px", "vx", "py", "vy"])?;
    for e in estimates {
        let (k, n) = (e.k.to_string(), e.n_hat.to_string());
        if e.tracks.is_empty() {
            w.write_record([k.as_str(), n.as_str(), "", "", "", "", "", ""])?;
        }
        for t in &e.tracks {
            let mut row = vec![k.clone(), n.clone(), t.label.to_string(), t.existence.to_string()];
            row.extend((0..4).map(|i| opt(t.mean.get(i).copied())));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Estimated planar positions per step from `estimates.csv`.
pub fn read_estimate_positions(path: &Path) -> Result<Vec<Vec<Vec<f64>>>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let k = parse_k(&rec[0])?;
        let item = if rec[2].trim().is_empty() {
            None
        } else {
            Some(vec![parse_f64(&rec[4], "px")?, parse_f64(&rec[6], "py")?])
        };
        rows.push((k, item));
    }
    Ok(grouped(rows))
}

/// Per-step tracker telemetry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepDiagnostics {
    pub k: u32,
    pub n_eff: f64,
    pub support_violations: usize,
    pub incompatible: usize,
    pub filter: Option<FilterDiagnostics>,
}

pub fn write_diagnostics(path: &Path, steps: &[StepRecord]) -> Result<()> {
    let d: Vec<StepDiagnostics> = steps
        .iter()
        .map(|s| StepDiagnostics {
            k: s.k,
            n_eff: s.n_eff,
            support_violations: s.support_violations,
            incompatible: s.incompatible,
            filter: s.filter.clone(),
        })
        .collect();
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, &d)?;
    f.flush()?;
    Ok(())
}

/// Writes `aggregate.csv` and `summary.json` into `dir`.
pub fn write_mc(dir: &Path, mc: &McResult, seed: u64) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("aggregate.csv"))?;
    w.write_record(["k", "true_n", "mean_n_hat", "std_n_hat", "mean_ospa", "std_ospa"])?;
    for (i, a) in mc.aggregate.iter().enumerate() {
        w.write_record([
            (i + 1).to_string(),
            mc.true_n.get(i).copied().unwrap_or(0).to_string(),
            a.mean_n_hat.to_string(),
            a.std_n_hat.to_string(),
            a.mean_ospa.to_string(),
            a.std_ospa.to_string(),
        ])?;
    }
    w.flush()?;
    let mut f = BufWriter::new(File::create(dir.join("summary.json"))?);
    serde_json::to_writer_pretty(&mut f, &mc.summary(seed))?;
    f.flush()?;
    Ok(())
}
