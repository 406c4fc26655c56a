use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

use super::CardinalityDistribution;

/// Sparse additive contribution over the active cell set.
pub type SparseGamma = Vec<(usize, f64)>;

/// First and second moments of `gamma(x)` under the normalized predicted
/// intensity, plus the cardinality moments, restricted to the active cells.
#[derive(Debug, Clone)]
pub struct Moments {
    /// Global cell index of each active dimension.
    pub cells: Vec<usize>,
    pub mu_hat: DVector<f64>,
    pub sigma_hat: DMatrix<f64>,
    /// Predicted mean cardinality `N`.
    pub n_mean: f64,
    /// Predicted cardinality variance.
    pub variance: f64,
    pub g2: f64,
    pub g3: f64,
}

/// Maps global cell indices to dense active indices.
#[derive(Debug, Clone)]
pub struct ActiveCells {
    pub cells: Vec<usize>,
    lookup: Vec<u32>,
}

impl ActiveCells {
    pub fn from_supports<'a>(supports: impl IntoIterator<Item = &'a SparseGamma>) -> Self {
        let mut cells: Vec<usize> = supports.into_iter().flat_map(|g| g.iter().map(|&(c, _)| c)).collect();
        cells.sort_unstable();
        cells.dedup();
        let len = cells.last().map_or(0, |c| c + 1);
        let mut lookup = vec![u32::MAX; len];
        for (i, &c) in cells.iter().enumerate() {
            lookup[c] = i as u32;
        }
        Self { cells, lookup }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Re-index a global sparse vector onto the active cells. Cells outside
    /// the active set are dropped.
    pub fn localize(&self, g: &SparseGamma) -> SparseGamma {
        g.iter()
            .filter_map(|&(c, v)| match self.lookup.get(c) {
                Some(&i) if i != u32::MAX => Some((i as usize, v)),
                _ => None,
            })
            .collect()
    }

    /// Dense sub-vector of a full-length measurement.
    pub fn restrict(&self, z: &[f64]) -> DVector<f64> {
        DVector::from_iterator(self.cells.len(), self.cells.iter().map(|&c| z[c]))
    }
}

impl Moments {
    /// Weighted Monte Carlo moments. `gammas` are already localized to
    /// `active`; weights need not be normalized.
    pub fn compute(
        active: &ActiveCells,
        gammas: &[SparseGamma],
        weights: &[f64],
        card: &CardinalityDistribution,
    ) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::ZeroMass);
        }
        let d = active.len();
        let mut mu = DVector::zeros(d);
        let mut sig = DMatrix::zeros(d, d);
        for (g, &w) in gammas.iter().zip(weights) {
            if w == 0.0 {
                continue;
            }
            let s = w / total;
            for &(a, va) in g {
                mu[a] += s * va;
                let sva = s * va;
                for &(b, vb) in g {
                    sig[(a, b)] += sva * vb;
                }
            }
        }
        Ok(Self {
            cells: active.cells.clone(),
            mu_hat: mu,
            sigma_hat: sig,
            n_mean: card.mean(),
            variance: card.variance(),
            g2: card.factorial_moment(2),
            g3: card.factorial_moment(3),
        })
    }

    pub fn dim(&self) -> usize {
        self.mu_hat.len()
    }

    /// `Sigma_hat - mu_hat mu_hat^T`.
    pub fn centered(&self) -> DMatrix<f64> {
        &self.sigma_hat - &self.mu_hat * self.mu_hat.transpose()
    }

    /// `(alpha, beta)` with `Sigma^n = alpha C + beta mu mu^T`.
    pub fn coeffs_n(&self, n: usize) -> (f64, f64) {
        (n as f64, 0.0)
    }

    /// Coefficients of `Sigma = N Sigma_hat + (sigma^2 - N) mu mu^T`.
    pub fn coeffs_sigma(&self) -> (f64, f64) {
        (self.n_mean, self.variance)
    }

    /// `G2 / N`.
    pub fn mu_o_scale(&self) -> f64 {
        if self.n_mean > 0.0 {
            self.g2 / self.n_mean
        } else {
            0.0
        }
    }

    /// Coefficients of `Sigma^o = a Sigma_hat + b mu mu^T`, `a = G2/N`,
    /// `b = G3/N - a^2`.
    pub fn coeffs_sigma_o(&self) -> (f64, f64) {
        if self.n_mean <= 0.0 {
            return (0.0, 0.0);
        }
        let a = self.g2 / self.n_mean;
        let b = self.g3 / self.n_mean - a * a;
        (a, a + b)
    }

    pub fn mu_o(&self) -> DVector<f64> {
        &self.mu_hat * self.mu_o_scale()
    }

    /// Dense `alpha C + beta mu mu^T`.
    pub fn dense(&self, (alpha, beta): (f64, f64)) -> DMatrix<f64> {
        self.centered() * alpha + &self.mu_hat * self.mu_hat.transpose() * beta
    }

    pub fn sigma_n(&self, n: usize) -> DMatrix<f64> {
        self.dense(self.coeffs_n(n))
    }

    pub fn sigma(&self) -> DMatrix<f64> {
        self.dense(self.coeffs_sigma())
    }

    pub fn sigma_o(&self) -> DMatrix<f64> {
        self.dense(self.coeffs_sigma_o())
    }
}

/// Eigendecomposition of `C = Sigma_hat - mu mu^T`, shared by every
/// covariance of the form `s0 I + alpha C + beta mu mu^T`.
#[derive(Debug, Clone)]
pub struct Spectral {
    vectors: DMatrix<f64>,
    values: Vec<f64>,
    mu_rot: DVector<f64>,
    s0: f64,
}

impl Spectral {
    pub fn new(m: &Moments, s0: f64) -> Result<Self> {
        if !(s0 > 0.0) || !s0.is_finite() {
            return Err(Error::DegenerateCovariance("measurement noise variance must be positive"));
        }
        let c = m.centered();
        let c = (&c + c.transpose()) * 0.5;
        let eig = SymmetricEigen::new(c);
        // C is positive semidefinite; clip roundoff.
        let values: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
        let mu_rot = eig.eigenvectors.transpose() * &m.mu_hat;
        Ok(Self { vectors: eig.eigenvectors, values, mu_rot, s0 })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Express a vector in the eigenbasis.
    pub fn rotate(&self, v: &DVector<f64>) -> DVector<f64> {
        self.vectors.transpose() * v
    }

    pub fn mu_rot(&self) -> &DVector<f64> {
        &self.mu_rot
    }

    pub fn covariance(&self, alpha: f64, beta: f64) -> Result<StructuredCov<'_>> {
        StructuredCov::new(self, alpha, beta)
    }
}

/// `s0 I + alpha C + beta mu mu^T`, evaluated through the shared
/// eigenbasis and the rank-one update identities.
#[derive(Debug, Clone)]
pub struct StructuredCov<'a> {
    sp: &'a Spectral,
    diag_inv: Vec<f64>,
    /// `A^{-1} mu` in the eigenbasis.
    a_inv_mu: DVector<f64>,
    beta: f64,
    denom: f64,
    log_det: f64,
}

const LN_2PI: f64 = 1.837_877_066_409_345_5;

impl<'a> StructuredCov<'a> {
    fn new(sp: &'a Spectral, alpha: f64, beta: f64) -> Result<Self> {
        let mut log_det = 0.0;
        let mut diag_inv = Vec::with_capacity(sp.dim());
        for &l in &sp.values {
            let v = sp.s0 + alpha * l;
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::DegenerateCovariance("structured covariance is not positive definite"));
            }
            log_det += v.ln();
            diag_inv.push(1.0 / v);
        }
        let a_inv_mu = DVector::from_iterator(sp.dim(), sp.mu_rot.iter().zip(&diag_inv).map(|(m, i)| m * i));
        let denom = 1.0 + beta * sp.mu_rot.dot(&a_inv_mu);
        if !(denom > 0.0) || !denom.is_finite() {
            return Err(Error::DegenerateCovariance("rank-one update is not positive definite"));
        }
        log_det += denom.ln();
        Ok(Self { sp, diag_inv, a_inv_mu, beta, denom, log_det })
    }

    pub fn log_det(&self) -> f64 {
        self.log_det
    }

    /// Gaussian log-density of a residual already expressed in the eigenbasis.
    pub fn log_pdf_rotated(&self, r: &DVector<f64>) -> f64 {
        let quad_a: f64 = r.iter().zip(&self.diag_inv).map(|(x, i)| x * x * i).sum();
        let t = r.dot(&self.a_inv_mu);
        let quad = quad_a - self.beta * t * t / self.denom;
        -0.5 * (self.sp.dim() as f64 * LN_2PI + self.log_det + quad)
    }

    /// Dense inverse in the original cell basis.
    pub fn inverse(&self) -> DMatrix<f64> {
        let u = &self.sp.vectors;
        let d = self.sp.dim();
        let mut scaled = u.clone();
        for j in 0..d {
            scaled.column_mut(j).scale_mut(self.diag_inv[j]);
        }
        let mut inv = scaled * u.transpose();
        let w = u * &self.a_inv_mu;
        inv -= &w * w.transpose() * (self.beta / self.denom);
        inv
    }
}

/// Evaluates `ln N_S(e - gamma)` for many sparse `gamma` sharing the same
/// covariance `S` and offset `e`.
#[derive(Debug, Clone)]
pub struct SparseResidualEvaluator {
    inv: DMatrix<f64>,
    inv_e: DVector<f64>,
    base: f64,
}

impl SparseResidualEvaluator {
    pub fn new(cov: &StructuredCov<'_>, e: &DVector<f64>) -> Self {
        let inv = cov.inverse();
        let inv_e = &inv * e;
        let quad_e = e.dot(&inv_e);
        let base = -0.5 * (cov.sp.dim() as f64 * LN_2PI + cov.log_det + quad_e);
        Self { inv, inv_e, base }
    }

    pub fn log_pdf(&self, gamma: &SparseGamma) -> f64 {
        let mut cross = 0.0;
        let mut quad = 0.0;
        for &(a, va) in gamma {
            cross += va * self.inv_e[a];
            for &(b, vb) in gamma {
                quad += va * self.inv[(a, b)] * vb;
            }
        }
        self.base - 0.5 * (quad - 2.0 * cross)
    }
}
