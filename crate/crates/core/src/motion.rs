//! Nearly-constant-velocity single-target dynamics, optionally augmented
//! with a random-walk amplitude modulus.
//!
//! State layout is `(p_x, v_x, p_y, v_y)` and, in amplitude mode, a fifth
//! component holding the echo modulus.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::Gaussian;

/// Jitter added to `Q` before factorization so that `psd = 0` stays usable.
pub const Q_REGULARIZATION: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NcvParams {
    pub dt: f64,
    pub accel_noise_psd: f64,
    #[serde(default)]
    pub amplitude_walk_std: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct NcvModel {
    params: NcvParams,
    f: DMatrix<f64>,
    q: DMatrix<f64>,
    noise: Gaussian,
}

impl NcvModel {
    pub fn params(&self) -> NcvParams {
        self.params
    }

    pub fn state_dim(&self) -> usize {
        self.f.nrows()
    }

    pub fn transition_matrix(&self) -> &DMatrix<f64> {
        &self.f
    }

    pub fn process_noise(&self) -> &DMatrix<f64> {
        &self.q
    }

    /// `F x`.
    pub fn propagate_mean(&self, x: &[f64]) -> DVector<f64> {
        let d = self.state_dim();
        let mut out = DVector::zeros(d);
        self.propagate_into(x, out.as_mut_slice());
        out
    }

    fn propagate_into(&self, x: &[f64], out: &mut [f64]) {
        let dt = self.params.dt;
        out[0] = x[0] + dt * x[1];
        out[1] = x[1];
        out[2] = x[2] + dt * x[3];
        out[3] = x[3];
        if out.len() == 5 {
            out[4] = x[4];
        }
    }

    /// Draws `F x_prev + v`, `v ~ N(0, Q)`. The amplitude component is
    /// clamped at zero.
    pub fn sample_transition<R: Rng + ?Sized>(&self, x_prev: &[f64], rng: &mut R) -> Result<DVector<f64>> {
        self.check_dim(x_prev.len())?;
        let mean = self.propagate_mean(x_prev);
        let mut x = self.noise.sample_around(mean.as_slice(), rng);
        if x.len() == 5 && x[4] < 0.0 {
            x[4] = 0.0;
        }
        Ok(x)
    }

    /// `ln N(x_next; F x_prev, Q)`.
    pub fn log_transition_pdf(&self, x_next: &[f64], x_prev: &[f64]) -> f64 {
        let mut mean = [0.0f64; 5];
        let d = self.state_dim();
        self.propagate_into(x_prev, &mut mean[..d]);
        self.noise.log_pdf_centered(x_next, &mean[..d])
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.state_dim() {
            return Err(Error::DimensionMismatch { expected: self.state_dim(), got });
        }
        Ok(())
    }
}

/// Builds the discretized white-noise-acceleration NCV model.
///
/// Per axis `F = [[1, dt], [0, 1]]` and
/// `Q = psd [[dt^3/3, dt^2/2], [dt^2/2, dt]]`; with an amplitude walk a fifth
/// state is appended with `F = 1`, `Q = walk_std^2`.
pub fn build_ncv(dt: f64, accel_noise_psd: f64, amplitude_walk_std: Option<f64>) -> Result<NcvModel> {
    if !(dt > 0.0) {
        return Err(Error::NonPositiveTimeStep(dt));
    }
    if accel_noise_psd < 0.0 || amplitude_walk_std.is_some_and(|s| s < 0.0) {
        return Err(Error::Config("noise parameters must be nonnegative".into()));
    }
    let d = if amplitude_walk_std.is_some() { 5 } else { 4 };
    let mut f = DMatrix::identity(d, d);
    let mut q = DMatrix::zeros(d, d);
    let (q11, q12, q22) =
        (accel_noise_psd * dt.powi(3) / 3.0, accel_noise_psd * dt.powi(2) / 2.0, accel_noise_psd * dt);
    for axis in 0..2 {
        let o = 2 * axis;
        f[(o, o + 1)] = dt;
        q[(o, o)] = q11;
        q[(o, o + 1)] = q12;
        q[(o + 1, o)] = q12;
        q[(o + 1, o + 1)] = q22;
    }
    if let Some(s) = amplitude_walk_std {
        q[(4, 4)] = s * s;
    }
    let reg = &q + DMatrix::identity(d, d) * Q_REGULARIZATION;
    let noise = Gaussian::new(DVector::zeros(d), reg).map_err(|_| Error::DegenerateCovariance("NCV process noise"))?;
    Ok(NcvModel { params: NcvParams { dt, accel_noise_psd, amplitude_walk_std }, f, q, noise })
}

impl TryFrom<NcvParams> for NcvModel {
    type Error = Error;

    fn try_from(p: NcvParams) -> Result<Self> {
        build_ncv(p.dt, p.accel_noise_psd, p.amplitude_walk_std)
    }
}
