//! The sensor interface consumed by the auxiliary CPHD filter and the
//! particle tracker.

use crate::rfs::LabeledSet;

/// A sensor whose output depends on the sum of per-target contributions.
pub trait SuperpositionalSensor: Sync {
    type Measurement: Sync;

    /// `ln g(z | X)` up to an additive constant that does not depend on `X`.
    fn log_likelihood(&self, z: &Self::Measurement, set: &LabeledSet) -> f64;

    /// Sparse additive contribution `gamma(x)`, sorted by cell index.
    fn gamma(&self, x: &[f64]) -> Vec<(usize, f64)>;

    /// Length of the measurement vector.
    fn cell_count(&self) -> usize;

    /// The measurement mapped into the additive zero-mean-noise domain used
    /// by the approximate CPHD update.
    fn additive_measurement(&self, z: &Self::Measurement) -> Vec<f64>;
}
