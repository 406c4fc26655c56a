//! Superpositional radar power-return model.

mod bessel;
mod grid;
mod model;

pub use bessel::{bessel_i0e, log_bessel_i0};
pub use grid::{AxisSpec, GridSpec, MeasCoords, SensorGrid};
pub use model::{
    amplitude_from_snr, cell_log_likelihood_ratio, Amplitude, CellMap, PhaseModel, PowerMeasurement, RadarSensor,
    DEFAULT_GATE,
};
