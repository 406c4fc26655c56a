use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::bessel::log_bessel_i0;
use super::grid::SensorGrid;
use crate::error::{Error, Result};
use crate::rfs::LabeledSet;
use crate::sensor::SuperpositionalSensor;

/// Template half-width in cells per axis.
pub const DEFAULT_GATE: usize = 3;

/// Known echo amplitude for a given SNR (dB): `sqrt(2 sigma_w^2 10^(SNR/10))`.
pub fn amplitude_from_snr(snr_db: f64, noise_variance: f64) -> f64 {
    (2.0 * noise_variance * 10f64.powf(snr_db / 10.0)).sqrt()
}

/// How the echo amplitude of a target is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Amplitude {
    /// Same known amplitude for every target.
    Known(f64),
    /// Read from the fifth state component.
    FromState,
}

impl Amplitude {
    pub fn of(&self, x: &[f64]) -> f64 {
        match self {
            Amplitude::Known(a) => *a,
            Amplitude::FromState => x.get(4).copied().unwrap_or(0.0),
        }
    }
}

/// Phase convention used when simulating the complex echoes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseModel {
    /// One uniform phase per target per scan, shared by that target's cells.
    #[default]
    PerTarget,
    /// One phase per scan shared by every target.
    Common,
}

/// Per-cell power returns for one scan.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerMeasurement {
    pub k: u32,
    pub values: Vec<f64>,
}

/// Sparse per-cell signal, sorted by cell index.
pub type CellMap = Vec<(usize, f64)>;

/// Radar power-return sensor: grid, amplitude model and template gate.
#[derive(Debug, Clone)]
pub struct RadarSensor {
    pub grid: SensorGrid,
    pub amplitude: Amplitude,
    pub gate: usize,
    pub phase_model: PhaseModel,
}

impl RadarSensor {
    pub fn new(grid: SensorGrid, amplitude: Amplitude) -> Self {
        Self { grid, amplitude, gate: DEFAULT_GATE, phase_model: PhaseModel::PerTarget }
    }

    /// Template cells with `A h` per target.
    fn echoes<'a>(&'a self, set: &'a LabeledSet) -> impl Iterator<Item = (usize, Vec<(usize, f64)>)> + 'a {
        set.iter().enumerate().map(move |(t, e)| {
            let a = self.amplitude.of(e.x.as_slice());
            let cells = self.grid.psf(e.x.as_slice(), self.gate).into_iter().map(|(c, h)| (c, a * h)).collect();
            (t, cells)
        })
    }

    /// `z_hat(i) = |sum_{x: i in C(x)} A_x h_i(x)|^2` on the union of templates.
    pub fn deterministic_signal(&self, set: &LabeledSet) -> CellMap {
        let mut acc: Vec<(usize, f64)> = Vec::with_capacity(set.len() * 49);
        for (_, cells) in self.echoes(set) {
            acc.extend(cells);
        }
        acc.sort_unstable_by_key(|&(c, _)| c);
        let mut out: CellMap = Vec::with_capacity(acc.len());
        for (c, v) in acc {
            match out.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += v,
                _ => out.push((c, v)),
            }
        }
        for (_, v) in &mut out {
            *v *= *v;
        }
        out
    }

    /// Simulate one scan of power returns.
    pub fn simulate_measurement<R: Rng + ?Sized>(&self, k: u32, set: &LabeledSet, rng: &mut R) -> PowerMeasurement {
        let m = self.grid.cell_count();
        let mut re = vec![0.0; m];
        let mut im = vec![0.0; m];
        let common: f64 = rng.random::<f64>() * std::f64::consts::TAU;
        for (_, cells) in self.echoes(set) {
            let theta = match self.phase_model {
                PhaseModel::PerTarget => rng.random::<f64>() * std::f64::consts::TAU,
                PhaseModel::Common => common,
            };
            let (s, c) = theta.sin_cos();
            for (cell, ah) in cells {
                re[cell] += ah * c;
                im[cell] += ah * s;
            }
        }
        let sd = self.grid.noise_variance().sqrt();
        let values = re
            .iter()
            .zip(&im)
            .map(|(r, i)| {
                let wr: f64 = rng.sample::<f64, _>(StandardNormal) * sd;
                let wi: f64 = rng.sample::<f64, _>(StandardNormal) * sd;
                (r + wr).powi(2) + (i + wi).powi(2)
            })
            .collect();
        PowerMeasurement { k, values }
    }

    /// `ln g(z|X)` as a sum of per-cell log likelihood ratios over the union
    /// of templates; 0 for the empty set.
    pub fn log_likelihood(&self, z: &PowerMeasurement, set: &LabeledSet) -> f64 {
        let s2 = self.grid.noise_variance();
        self.deterministic_signal(set).iter().map(|&(c, zh)| cell_log_likelihood_ratio(z.values[c], zh, s2)).sum()
    }

    /// Additive contribution `A^2 h^2` on the template cells.
    pub fn gamma_map(&self, x: &[f64]) -> CellMap {
        let a2 = self.amplitude.of(x).powi(2);
        self.grid.psf(x, self.gate).into_iter().map(|(c, h)| (c, a2 * h * h)).collect()
    }

    /// Dense version of [`RadarSensor::gamma_map`].
    pub fn gamma_map_dense(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.grid.cell_count()];
        for (c, v) in self.gamma_map(x) {
            out[c] = v;
        }
        out
    }

    pub fn check_measurement(&self, z: &PowerMeasurement) -> Result<()> {
        if z.values.len() != self.grid.cell_count() {
            return Err(Error::MeasurementSize { expected: self.grid.cell_count(), got: z.values.len() });
        }
        Ok(())
    }
}

/// Log of the non-central to central chi-square (2 dof) density ratio for
/// one cell: `-z_hat/(2 s2) + ln I0(sqrt(z z_hat)/s2)`.
pub fn cell_log_likelihood_ratio(z: f64, z_hat: f64, noise_variance: f64) -> f64 {
    -0.5 * z_hat / noise_variance + log_bessel_i0((z * z_hat).sqrt() / noise_variance)
}

impl SuperpositionalSensor for RadarSensor {
    type Measurement = PowerMeasurement;

    fn log_likelihood(&self, z: &PowerMeasurement, set: &LabeledSet) -> f64 {
        RadarSensor::log_likelihood(self, z, set)
    }

    fn gamma(&self, x: &[f64]) -> CellMap {
        self.gamma_map(x)
    }

    fn cell_count(&self) -> usize {
        self.grid.cell_count()
    }

    /// Power minus the noise-floor mean `2 sigma_w^2`.
    fn additive_measurement(&self, z: &PowerMeasurement) -> Vec<f64> {
        let floor = 2.0 * self.grid.noise_variance();
        z.values.iter().map(|v| v - floor).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radar::GridSpec;
    use crate::rfs::{Label, LabeledState};
    use nalgebra::DVector;

    fn sensor() -> RadarSensor {
        RadarSensor::new(SensorGrid::from_spec(&GridSpec::default()).unwrap(), Amplitude::Known(3.0))
    }

    fn on_centroid(g: &SensorGrid, ri: usize, ai: usize) -> DVector<f64> {
        let (r, b) = (g.range_centroids()[ri], g.azimuth_centroids()[ai]);
        DVector::from_vec(vec![r * b.cos(), 0.0, r * b.sin(), 0.0])
    }

    fn set_of(xs: Vec<DVector<f64>>) -> LabeledSet {
        LabeledSet::new(
            xs.into_iter().enumerate().map(|(i, x)| LabeledState::new(x, Label::new(0, i as u32))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn snr_amplitude() {
        assert!((amplitude_from_snr(10.0, 1.0) - 20f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn deterministic_signal_examples() {
        let s = sensor();
        assert!(s.deterministic_signal(&LabeledSet::empty()).is_empty());
        let x = on_centroid(&s.grid, 50, 15);
        let peak = s.grid.cell_index(50, 15, 0);
        let one = s.deterministic_signal(&set_of(vec![x.clone()]));
        let v = one.iter().find(|(c, _)| *c == peak).unwrap().1;
        assert!((v - 9.0).abs() < 1e-9);
        let two = s.deterministic_signal(&set_of(vec![x.clone(), x]));
        let v2 = two.iter().find(|(c, _)| *c == peak).unwrap().1;
        assert!((v2 - 36.0).abs() < 1e-9);
    }

    #[test]
    fn gamma_examples() {
        let s = sensor();
        let x1 = on_centroid(&s.grid, 50, 15);
        let x2 = on_centroid(&s.grid, 52, 16);
        let peak = s.grid.cell_index(50, 15, 0);
        let g1 = s.gamma_map_dense(x1.as_slice());
        assert!((g1[peak] - 9.0).abs() < 1e-9);
        assert_eq!(g1[s.grid.cell_index(90, 2, 0)], 0.0);
        let g2 = s.gamma_map_dense(x2.as_slice());
        // additivity is by construction: the set contribution is the sum
        let total: Vec<f64> = g1.iter().zip(&g2).map(|(a, b)| a + b).collect();
        for c in 0..total.len() {
            assert_eq!(total[c], g1[c] + g2[c]);
        }
    }

    #[test]
    fn likelihood_empty_set_and_zero_signal() {
        let s = sensor();
        let z = PowerMeasurement { k: 1, values: vec![2.0; s.grid.cell_count()] };
        assert_eq!(s.log_likelihood(&z, &LabeledSet::empty()), 0.0);
        assert_eq!(cell_log_likelihood_ratio(5.0, 0.0, 1.0), 0.0);
    }

    #[test]
    fn likelihood_ignores_cells_outside_templates() {
        let s = sensor();
        let x = set_of(vec![on_centroid(&s.grid, 50, 15)]);
        let mut z = PowerMeasurement { k: 1, values: vec![2.0; s.grid.cell_count()] };
        let a = s.log_likelihood(&z, &x);
        z.values[s.grid.cell_index(5, 5, 0)] = 1e6;
        assert_eq!(a, s.log_likelihood(&z, &x));
    }

    #[test]
    fn cell_ratio_monotone_in_power() {
        let mut last = f64::NEG_INFINITY;
        for i in 0..200 {
            let v = cell_log_likelihood_ratio(i as f64 * 0.5, 4.0, 1.0);
            assert!(v > last);
            last = v;
        }
    }
}
