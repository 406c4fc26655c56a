//! Multivariate normal density on small state vectors.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// A multivariate Gaussian with a cached lower Cholesky factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
    // row-major lower factor, dim x dim
    chol: Vec<f64>,
    log_norm: f64,
}

impl Gaussian {
    /// Build from mean and covariance. The covariance must be positive
    /// definite; see [`Gaussian::regularized`] for a forgiving constructor.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let d = mean.len();
        if cov.nrows() != d || cov.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: cov.nrows() });
        }
        let sym = (&cov + cov.transpose()) * 0.5;
        let chol = nalgebra::Cholesky::new(sym.clone()).ok_or(Error::NotPositiveDefinite("gaussian covariance"))?;
        let l = chol.l();
        let mut flat = vec![0.0; d * d];
        let mut log_det = 0.0;
        for i in 0..d {
            for j in 0..=i {
                flat[i * d + j] = l[(i, j)];
            }
            log_det += 2.0 * l[(i, i)].ln();
        }
        Ok(Self { mean, cov: sym, chol: flat, log_norm: -0.5 * (d as f64 * LN_2PI + log_det) })
    }

    /// Like [`Gaussian::new`], but adds `floor * I` and then escalates the
    /// jitter until the factorization succeeds.
    pub fn regularized(mean: DVector<f64>, cov: DMatrix<f64>, floor: f64) -> Result<Self> {
        let d = mean.len();
        let mut jitter = floor.max(0.0);
        for _ in 0..12 {
            let c = &cov + DMatrix::identity(d, d) * jitter;
            if let Ok(g) = Self::new(mean.clone(), c) {
                return Ok(g);
            }
            jitter = if jitter == 0.0 { 1e-12 } else { jitter * 10.0 };
        }
        Err(Error::DegenerateCovariance("gaussian regularization"))
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Log-density at `x`.
    pub fn log_pdf(&self, x: &[f64]) -> f64 {
        self.log_pdf_centered(x, self.mean.as_slice())
    }

    /// Log-density of `x` under this covariance but centered at `center`.
    pub fn log_pdf_centered(&self, x: &[f64], center: &[f64]) -> f64 {
        let d = self.dim();
        debug_assert_eq!(x.len(), d);
        // forward substitution L y = x - center
        let mut y = [0.0f64; 8];
        let mut maha = 0.0;
        if d <= 8 {
            for i in 0..d {
                let mut s = x[i] - center[i];
                for j in 0..i {
                    s -= self.chol[i * d + j] * y[j];
                }
                y[i] = s / self.chol[i * d + i];
                maha += y[i] * y[i];
            }
        } else {
            let mut yv = vec![0.0; d];
            for i in 0..d {
                let mut s = x[i] - center[i];
                for j in 0..i {
                    s -= self.chol[i * d + j] * yv[j];
                }
                yv[i] = s / self.chol[i * d + i];
                maha += yv[i] * yv[i];
            }
        }
        self.log_norm - 0.5 * maha
    }

    /// Draw `mean + L n`, `n` standard normal.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        self.sample_around(self.mean.as_slice(), rng)
    }

    /// Draw `center + L n`.
    pub fn sample_around<R: Rng + ?Sized>(&self, center: &[f64], rng: &mut R) -> DVector<f64> {
        let d = self.dim();
        let n: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        DVector::from_fn(d, |i, _| {
            let mut s = center[i];
            for j in 0..=i {
                s += self.chol[i * d + j] * n[j];
            }
            s
        })
    }
}
