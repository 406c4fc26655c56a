//! Scenario configuration, truth and measurement simulation, single and
//! Monte Carlo runs, and file outputs.

mod config;
pub mod io;
mod run;
mod scenario;

pub use config::{BirthEvent, DeathEvent, RunConfig, ScenarioConfig, SimConfig};
pub use run::{
    estimate_positions, positions, run_mc, run_once, run_seed, track, McResult, RunRecord, StepRecord, Summary,
};
pub use scenario::{build_sensor, generate_truth, motion_model, simulate_measurements, transition_model, truth_label};
