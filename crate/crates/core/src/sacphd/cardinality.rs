use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probability vector over the number of targets, `rho(0..=n_max)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CardinalityDistribution {
    probs: Vec<f64>,
}

impl CardinalityDistribution {
    /// Entries must be nonnegative and sum to 1 within 1e-9.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() || probs.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::Config("cardinality entries must be nonnegative".into()));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!("cardinality sums to {s}")));
        }
        Ok(Self { probs })
    }

    /// Normalizes a nonnegative vector. Falls back to `delta_0` if the mass
    /// is zero.
    pub fn normalized(mut probs: Vec<f64>) -> Self {
        let s: f64 = probs.iter().sum();
        if s > 0.0 && s.is_finite() {
            probs.iter_mut().for_each(|p| *p /= s);
        } else {
            probs.iter_mut().for_each(|p| *p = 0.0);
            probs[0] = 1.0;
        }
        Self { probs }
    }

    /// From unnormalized log weights.
    pub fn from_log_weights(logw: &[f64]) -> Self {
        let mx = logw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if mx == f64::NEG_INFINITY {
            return Self::normalized(vec![0.0; logw.len()]);
        }
        Self::normalized(logw.iter().map(|l| (l - mx).exp()).collect())
    }

    pub fn delta(n: usize, n_max: usize) -> Self {
        let mut probs = vec![0.0; n_max.max(n) + 1];
        probs[n] = 1.0;
        Self { probs }
    }

    /// `rho(n) ∝ sum of weights of sets with n elements`.
    pub fn from_sizes(sizes: impl IntoIterator<Item = (usize, f64)>, n_max: usize) -> Self {
        let mut probs = vec![0.0; n_max + 1];
        for (n, w) in sizes {
            let n = n.min(n_max);
            probs[n] += w;
        }
        Self::normalized(probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn n_max(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn get(&self, n: usize) -> f64 {
        self.probs.get(n).copied().unwrap_or(0.0)
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.probs.iter().enumerate().map(|(n, p)| (n as f64 - m).powi(2) * p).sum()
    }

    /// `G^(j)(1) = sum n (n-1) ... (n-j+1) rho(n)`.
    pub fn factorial_moment(&self, order: usize) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(n, p)| {
                let f: f64 = (0..order).map(|i| n as f64 - i as f64).product();
                f * p
            })
            .sum()
    }

    /// Most probable cardinality (smallest on ties).
    pub fn map_estimate(&self) -> usize {
        let mut best = 0;
        for (n, p) in self.probs.iter().enumerate() {
            if *p > self.probs[best] {
                best = n;
            }
        }
        best
    }

    /// Binomial thinning: each target independently kept with probability `p`.
    pub fn thin(&self, p: f64) -> Self {
        let n_max = self.n_max();
        let mut out = vec![0.0; n_max + 1];
        for (n, &rho) in self.probs.iter().enumerate() {
            if rho == 0.0 {
                continue;
            }
            // binomial(n, p) pmf by recurrence
            let mut pmf = vec![0.0; n + 1];
            pmf[0] = 1.0;
            for _ in 0..n {
                for j in (1..pmf.len()).rev() {
                    pmf[j] = pmf[j] * (1.0 - p) + pmf[j - 1] * p;
                }
                pmf[0] *= 1.0 - p;
            }
            for (j, b) in pmf.iter().enumerate() {
                out[j] += rho * b;
            }
        }
        Self::normalized(out)
    }

    /// Distribution of the sum of independent counts, truncated at
    /// `self.n_max()` and renormalized.
    pub fn convolve(&self, other: &CardinalityDistribution) -> Self {
        let n_max = self.n_max();
        let mut out = vec![0.0; n_max + 1];
        for (i, a) in self.probs.iter().enumerate() {
            for (j, b) in other.probs.iter().enumerate() {
                if i + j <= n_max {
                    out[i + j] += a * b;
                }
            }
        }
        Self::normalized(out)
    }

    /// Poisson-binomial distribution of independent Bernoulli existences.
    pub fn poisson_binomial(existence: &[f64], n_max: usize) -> Self {
        let mut pmf = vec![0.0; existence.len() + 1];
        pmf[0] = 1.0;
        for (i, &r) in existence.iter().enumerate() {
            for j in (1..=i + 1).rev() {
                pmf[j] = pmf[j] * (1.0 - r) + pmf[j - 1] * r;
            }
            pmf[0] *= 1.0 - r;
        }
        pmf.resize(n_max.max(existence.len()) + 1, 0.0);
        pmf.truncate(n_max + 1);
        Self::normalized(pmf)
    }

    /// Zero out `n > n` and renormalize.
    pub fn truncated(&self, n: usize) -> Self {
        let mut probs = self.probs.clone();
        for p in probs.iter_mut().skip(n + 1) {
            *p = 0.0;
        }
        Self::normalized(probs)
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}
