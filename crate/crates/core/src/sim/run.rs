use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exec;
use crate::metrics::{aggregate, ospa, StepAggregate};
use crate::radar::PowerMeasurement;
use crate::rfs::LabeledSet;
use crate::rng::{derive_seed, Purpose};
use crate::sacphd::FilterDiagnostics;
use crate::tracker::{TrackEstimate, Tracker};

use super::scenario::{build_sensor, generate_truth, simulate_measurements, transition_model};
use super::SimConfig;

/// Per-step outcome of one run.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub k: u32,
    pub n_true: usize,
    pub n_hat: usize,
    pub ospa: f64,
    pub n_eff: f64,
    pub support_violations: usize,
    pub incompatible: usize,
    pub estimate: TrackEstimate,
    pub filter: Option<FilterDiagnostics>,
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub seed: u64,
    pub truth: Vec<LabeledSet>,
    pub steps: Vec<StepRecord>,
}

/// Planar positions `(px, py)` of a labeled set.
pub fn positions(set: &LabeledSet) -> Vec<Vec<f64>> {
    set.iter().map(|e| vec![e.x[0], e.x[2]]).collect()
}

pub fn estimate_positions(est: &TrackEstimate) -> Vec<Vec<f64>> {
    est.tracks.iter().map(|t| vec![t.mean[0], t.mean[2]]).collect()
}

/// Root seed of Monte Carlo run `r`.
pub fn run_seed(root: u64, r: usize) -> u64 {
    derive_seed(root, Purpose::Run, 0, r as u64)
}

/// Track a given measurement sequence against a given truth.
pub fn track(
    cfg: &SimConfig,
    measurements: &[PowerMeasurement],
    truth: &[LabeledSet],
    seed: u64,
) -> Result<Vec<StepRecord>> {
    let sensor = build_sensor(&cfg.scenario)?;
    let model = transition_model(&cfg.scenario)?;
    let mut tracker = Tracker::new(&sensor, model, cfg.run.tracker_config(&cfg.scenario, seed))?;
    let mut steps = Vec::with_capacity(measurements.len());
    for (i, z) in measurements.iter().enumerate() {
        sensor.check_measurement(z)?;
        let out = tracker.step(z)?;
        let truth_k = truth.get(i).cloned().unwrap_or_default();
        let d = ospa(&estimate_positions(&out.estimate), &positions(&truth_k), &cfg.run.ospa);
        steps.push(StepRecord {
            k: out.estimate.k,
            n_true: truth_k.len(),
            n_hat: out.estimate.n_hat,
            ospa: d,
            n_eff: out.n_eff,
            support_violations: out.support_violations,
            incompatible: out.incompatible,
            estimate: out.estimate,
            filter: out.filter,
        });
    }
    Ok(steps)
}

/// Simulate truth and measurements, then track, all from `seed`.
pub fn run_once(cfg: &SimConfig, seed: u64) -> Result<RunRecord> {
    let truth = generate_truth(&cfg.scenario, seed)?;
    let sensor = build_sensor(&cfg.scenario)?;
    let z = simulate_measurements(&sensor, &truth, seed);
    let steps = track(cfg, &z, &truth, seed)?;
    Ok(RunRecord { seed, truth, steps })
}

/// Aggregated Monte Carlo outcome.
#[derive(Debug, Clone)]
pub struct McResult {
    pub runs: Vec<RunRecord>,
    pub aggregate: Vec<StepAggregate>,
    pub true_n: Vec<usize>,
}

/// Per-step summary written alongside the aggregate CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub runs: usize,
    pub seed: u64,
    pub k: Vec<u32>,
    pub true_n: Vec<usize>,
    pub mean_n_hat: Vec<f64>,
    pub std_n_hat: Vec<f64>,
    pub mean_ospa: Vec<f64>,
    pub std_ospa: Vec<f64>,
    pub support_violations: usize,
    pub incompatible: usize,
    pub min_n_eff: f64,
}

/// `runs` independent runs with seeds derived from `root`; aggregation is
/// a serial reduce in run order.
pub fn run_mc(cfg: &SimConfig, runs: usize, root: u64) -> Result<McResult> {
    let records: Vec<Result<RunRecord>> = exec::map_range(runs, |r| run_once(cfg, run_seed(root, r)));
    let runs = records.into_iter().collect::<Result<Vec<_>>>()?;
    let series: Vec<Vec<(f64, f64)>> =
        runs.iter().map(|r| r.steps.iter().map(|s| (s.n_hat as f64, s.ospa)).collect()).collect();
    let aggregate = aggregate(&series)?;
    let true_n = (1..=cfg.scenario.k_max).map(|k| cfg.scenario.true_count(k)).collect();
    Ok(McResult { runs, aggregate, true_n })
}

impl McResult {
    pub fn summary(&self, seed: u64) -> Summary {
        let steps = self.runs.iter().flat_map(|r| &r.steps);
        Summary {
            runs: self.runs.len(),
            seed,
            k: (1..=self.aggregate.len() as u32).collect(),
            true_n: self.true_n.clone(),
            mean_n_hat: self.aggregate.iter().map(|a| a.mean_n_hat).collect(),
            std_n_hat: self.aggregate.iter().map(|a| a.std_n_hat).collect(),
            mean_ospa: self.aggregate.iter().map(|a| a.mean_ospa).collect(),
            std_ospa: self.aggregate.iter().map(|a| a.std_ospa).collect(),
            support_violations: steps.clone().map(|s| s.support_violations).sum(),
            incompatible: steps.clone().map(|s| s.incompatible).sum(),
            min_n_eff: steps.map(|s| s.n_eff).fold(f64::INFINITY, f64::min),
        }
    }
}
