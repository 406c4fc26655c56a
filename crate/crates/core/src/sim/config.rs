use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::OspaParams;
use crate::radar::{GridSpec, MeasCoords, PhaseModel};
use crate::sacphd::{Clamps, DEFAULT_COV_FLOOR};
use crate::tracker::{FilterConfig, ProposalKind, TrackerConfig, VovoWeightMode};

/// A target appearing at `time` with state `[px, vx, py, vy]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirthEvent {
    pub time: u32,
    pub state: Vec<f64>,
}

/// Target `target` (1-based position in the birth schedule) is absent
/// from `time` on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeathEvent {
    pub time: u32,
    pub target: usize,
}

/// Scenario, sensor and multi-target model constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Number of scans.
    pub k_max: u32,
    pub dt: f64,
    pub birth_schedule: Vec<BirthEvent>,
    pub death_schedule: Vec<DeathEvent>,
    pub snr_db: f64,
    pub grid: GridSpec,
    /// Acceleration noise intensity of the motion model.
    pub accel_noise_psd: f64,
    /// Propagate truth with process noise instead of noiselessly.
    #[serde(default)]
    pub truth_process_noise: bool,
    pub birth_mean: Vec<f64>,
    /// Standard deviations; the birth covariance is their squared diagonal.
    pub birth_std: Vec<f64>,
    pub p_birth: f64,
    pub p_survival: f64,
    #[serde(default = "one")]
    pub birth_labels_per_step: u32,
    #[serde(default)]
    pub phase_model: PhaseModel,
    #[serde(default = "default_gate")]
    pub gate: usize,
}

fn one() -> u32 {
    1
}

fn default_gate() -> usize {
    crate::radar::DEFAULT_GATE
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let ev = |time, state: [f64; 4]| BirthEvent { time, state: state.to_vec() };
        Self {
            k_max: 24,
            dt: 1.0,
            birth_schedule: vec![
                ev(1, [1260.0, -11.0, 1240.0, -9.0]),
                ev(3, [1250.0, -10.0, 1250.0, -10.0]),
                ev(5, [1240.0, -9.0, 1260.0, -11.0]),
            ],
            death_schedule: vec![
                DeathEvent { time: 15, target: 1 },
                DeathEvent { time: 20, target: 2 },
                DeathEvent { time: 24, target: 3 },
            ],
            snr_db: 10.0,
            grid: GridSpec::default(),
            accel_noise_psd: 1.0,
            truth_process_noise: false,
            birth_mean: vec![1250.0, -5.0, 1250.0, -5.0],
            birth_std: vec![7.5, 10.0, 7.5, 10.0],
            p_birth: 0.05,
            p_survival: 0.95,
            birth_labels_per_step: 1,
            phase_model: PhaseModel::PerTarget,
            gate: crate::radar::DEFAULT_GATE,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.k_max == 0 {
            return bad("k_max must be positive".into());
        }
        if !(self.dt > 0.0) {
            return Err(Error::NonPositiveTimeStep(self.dt));
        }
        if !(0.0..=1.0).contains(&self.p_birth) || !(0.0..=1.0).contains(&self.p_survival) {
            return bad("probabilities must lie in [0, 1]".into());
        }
        if self.birth_mean.len() != 4 || self.birth_std.len() != 4 {
            return bad("birth mean and std must have 4 entries".into());
        }
        if self.birth_std.iter().any(|s| !(*s > 0.0)) {
            return bad("birth std must be positive".into());
        }
        let in_range = |t: u32| (1..=self.k_max).contains(&t);
        for (i, b) in self.birth_schedule.iter().enumerate() {
            if !in_range(b.time) {
                return Err(Error::Schedule(format!(
                    "target {} born at {} outside [1, {}]",
                    i + 1,
                    b.time,
                    self.k_max
                )));
            }
            if b.state.len() != 4 {
                return bad(format!("target {} state must have 4 entries", i + 1));
            }
            let c = MeasCoords::of(&b.state);
            let deg = c.azimuth.to_degrees();
            let (r, a) = (&self.grid.range_m, &self.grid.azimuth_deg);
            if c.range < r.min || c.range > r.max || deg < a.min || deg > a.max {
                return bad(format!("target {} starts outside the grid", i + 1));
            }
        }
        let mut seen = vec![false; self.birth_schedule.len()];
        for d in &self.death_schedule {
            if d.target == 0 || d.target > self.birth_schedule.len() {
                return Err(Error::Schedule(format!("death refers to unknown target {}", d.target)));
            }
            if std::mem::replace(&mut seen[d.target - 1], true) {
                return Err(Error::Schedule(format!("target {} dies twice", d.target)));
            }
            if !in_range(d.time) || d.time <= self.birth_schedule[d.target - 1].time {
                return Err(Error::Schedule(format!("target {} death at {} is not after its birth", d.target, d.time)));
            }
        }
        Ok(())
    }

    /// Death time of target `t` (0-based), if any.
    pub fn death_of(&self, t: usize) -> Option<u32> {
        self.death_schedule.iter().find(|d| d.target == t + 1).map(|d| d.time)
    }

    /// Number of targets alive at step `k`.
    pub fn true_count(&self, k: u32) -> usize {
        (0..self.birth_schedule.len())
            .filter(|&t| self.birth_schedule[t].time <= k && self.death_of(t).is_none_or(|d| k < d))
            .count()
    }
}

/// Tracker and Monte Carlo settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub proposal: ProposalKind,
    pub n_particles: usize,
    pub n_birth_particles: usize,
    pub seed: u64,
    pub mc_runs: usize,
    pub vovo_weight_mode: VovoWeightMode,
    pub clamps: Clamps,
    /// Noise standard deviation of the approximate filter; defaults to the
    /// power-noise standard deviation `2 sigma_w^2`.
    pub sigma_n: Option<f64>,
    pub ospa: OspaParams,
    pub n_max: usize,
    pub cov_floor: f64,
    pub rescale_phd_mass: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let f = FilterConfig::default();
        Self {
            proposal: ProposalKind::Vovo,
            n_particles: 3000,
            n_birth_particles: f.n_birth_particles,
            seed: 1,
            mc_runs: 50,
            vovo_weight_mode: VovoWeightMode::SingleParticle,
            clamps: Clamps::default(),
            sigma_n: None,
            ospa: OspaParams::default(),
            n_max: f.n_max,
            cov_floor: DEFAULT_COV_FLOOR,
            rescale_phd_mass: false,
        }
    }
}

impl RunConfig {
    /// Tracker settings for a run with the given seed.
    pub fn tracker_config(&self, scenario: &ScenarioConfig, seed: u64) -> TrackerConfig {
        TrackerConfig {
            n_particles: self.n_particles,
            proposal: self.proposal,
            vovo_weight_mode: self.vovo_weight_mode,
            seed,
            filter: FilterConfig {
                n_birth_particles: self.n_birth_particles,
                n_max: self.n_max,
                clamps: self.clamps,
                cov_floor: self.cov_floor,
                noise_std: self.sigma_n.unwrap_or(2.0 * scenario.grid.noise_variance),
                rescale_phd_mass: self.rescale_phd_mass,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mc_runs == 0 {
            return Err(Error::Config("mc_runs must be at least 1".into()));
        }
        self.ospa.validate()?;
        self.tracker_config(&ScenarioConfig::default(), self.seed).validate()
    }
}

/// Complete configuration document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    #[serde(default)]
    pub scenario: ScenarioConfig,
    #[serde(default)]
    pub run: RunConfig,
}

impl SimConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&s)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.run.validate()
    }
}
