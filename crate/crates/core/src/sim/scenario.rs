use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::gaussian::Gaussian;
use crate::motion::{build_ncv, NcvModel};
use crate::radar::{amplitude_from_snr, Amplitude, PowerMeasurement, RadarSensor, SensorGrid};
use crate::rfs::{Label, LabeledSet, LabeledState};
use crate::rng::{stream, Purpose};
use crate::tracker::{BirthModel, TransitionModel};

use super::ScenarioConfig;

/// Truth label of target `t` (0-based): born at its birth time with index `t`.
pub fn truth_label(scenario: &ScenarioConfig, t: usize) -> Label {
    Label::new(scenario.birth_schedule[t].time, t as u32)
}

pub fn motion_model(scenario: &ScenarioConfig) -> Result<NcvModel> {
    build_ncv(scenario.dt, scenario.accel_noise_psd, None)
}

pub fn build_sensor(scenario: &ScenarioConfig) -> Result<RadarSensor> {
    let grid = SensorGrid::from_spec(&scenario.grid)?;
    let a = amplitude_from_snr(scenario.snr_db, grid.noise_variance());
    let mut s = RadarSensor::new(grid, Amplitude::Known(a));
    s.gate = scenario.gate;
    s.phase_model = scenario.phase_model;
    Ok(s)
}

pub fn transition_model(scenario: &ScenarioConfig) -> Result<TransitionModel> {
    let cov = DMatrix::from_diagonal(&DVector::from_iterator(4, scenario.birth_std.iter().map(|s| s * s)));
    Ok(TransitionModel {
        motion: motion_model(scenario)?,
        p_s: scenario.p_survival,
        birth: BirthModel {
            existence: scenario.p_birth,
            density: Gaussian::new(DVector::from_vec(scenario.birth_mean.clone()), cov)?,
            labels_per_step: scenario.birth_labels_per_step,
        },
    })
}

/// Ground-truth labeled sets for `k = 1..=k_max` (index `k - 1`). Each
/// target takes its scheduled state at its birth time and then moves with
/// the constant-velocity model, noiselessly unless configured otherwise.
pub fn generate_truth(scenario: &ScenarioConfig, seed: u64) -> Result<Vec<LabeledSet>> {
    scenario.validate()?;
    let motion = motion_model(scenario)?;
    let mut out = Vec::with_capacity(scenario.k_max as usize);
    let mut states: Vec<Option<DVector<f64>>> = vec![None; scenario.birth_schedule.len()];
    for k in 1..=scenario.k_max {
        let mut elems = Vec::new();
        for (t, b) in scenario.birth_schedule.iter().enumerate() {
            let alive = b.time <= k && scenario.death_of(t).is_none_or(|d| k < d);
            let next = if !alive {
                None
            } else if b.time == k {
                Some(DVector::from_vec(b.state.clone()))
            } else {
                let prev = states[t].as_ref().map(|x| x.as_slice()).unwrap_or(&b.state);
                Some(if scenario.truth_process_noise {
                    let mut rng = stream(seed, Purpose::Truth, k as u64, t as u64);
                    motion.sample_transition(prev, &mut rng)?
                } else {
                    motion.propagate_mean(prev)
                })
            };
            if let Some(x) = &next {
                elems.push(LabeledState::new(x.clone(), truth_label(scenario, t)));
            }
            states[t] = next;
        }
        out.push(LabeledSet::new(elems)?);
    }
    Ok(out)
}

/// One simulated scan per truth set; scan `k` uses its own stream.
pub fn simulate_measurements(sensor: &RadarSensor, truth: &[LabeledSet], seed: u64) -> Vec<PowerMeasurement> {
    truth
        .iter()
        .enumerate()
        .map(|(i, set)| {
            let k = i as u32 + 1;
            let mut rng = stream(seed, Purpose::Measurement, k as u64, 0);
            sensor.simulate_measurement(k, set, &mut rng)
        })
        .collect()
}
