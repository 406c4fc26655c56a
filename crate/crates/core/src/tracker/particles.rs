use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::rfs::{Label, LabeledSet};

/// A weighted labeled-set hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiTargetParticle {
    pub set: LabeledSet,
    pub weight: f64,
}

/// Particle approximation of the labeled multi-target posterior at `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackerState {
    pub particles: Vec<MultiTargetParticle>,
    pub k: u32,
}

impl TrackerState {
    /// `n` empty-set particles with equal weight at `k = 0`.
    pub fn empty(n: usize) -> Self {
        let w = 1.0 / n as f64;
        Self { particles: vec![MultiTargetParticle { set: LabeledSet::empty(), weight: w }; n], k: 0 }
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    /// Sorted, deduplicated labels present in any particle.
    pub fn label_universe(&self) -> Vec<Label> {
        let mut ls: Vec<Label> = self.particles.iter().flat_map(|p| p.set.labels()).collect();
        ls.sort_unstable();
        ls.dedup();
        ls
    }
}

/// Normalize log weights in place into linear weights. Errors if every
/// entry is `-inf` or NaN.
pub fn normalize_log_weights(logw: &[f64], k: u32) -> Result<Vec<f64>> {
    let mx = logw.iter().copied().filter(|v| !v.is_nan()).fold(f64::NEG_INFINITY, f64::max);
    if !mx.is_finite() {
        return Err(Error::ParticleCollapse { k });
    }
    let mut w: Vec<f64> = logw.iter().map(|&l| if l.is_nan() { 0.0 } else { (l - mx).exp() }).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= s);
    Ok(w)
}

/// `1 / sum w^2` for normalized weights.
pub fn effective_sample_size(weights: impl IntoIterator<Item = f64>) -> f64 {
    let s2: f64 = weights.into_iter().map(|w| w * w).sum();
    if s2 > 0.0 {
        1.0 / s2
    } else {
        0.0
    }
}

/// Systematic resampling: ancestor indices for `n` offspring, in
/// nondecreasing order so copies of a particle are contiguous.
pub fn systematic_indices<R: Rng + ?Sized>(weights: &[f64], n: usize, rng: &mut R) -> Vec<usize> {
    let total: f64 = weights.iter().sum();
    let step = total / n as f64;
    let u0: f64 = rng.random::<f64>() * step;
    let mut out = Vec::with_capacity(n);
    let mut cum = 0.0;
    let mut j = 0;
    for i in 0..n {
        let u = u0 + i as f64 * step;
        while j + 1 < weights.len() && cum + weights[j] <= u {
            cum += weights[j];
            j += 1;
        }
        out.push(j);
    }
    out
}

/// Systematic resampling to `n` equally weighted copies.
pub fn resample<R: Rng + ?Sized>(particles: &[MultiTargetParticle], n: usize, rng: &mut R) -> Vec<MultiTargetParticle> {
    let w: Vec<f64> = particles.iter().map(|p| p.weight).collect();
    let eq = 1.0 / n as f64;
    systematic_indices(&w, n, rng)
        .into_iter()
        .map(|j| MultiTargetParticle { set: particles[j].set.clone(), weight: eq })
        .collect()
}

/// Estimated track.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelEstimate {
    pub label: Label,
    /// Total weight of particles containing the label.
    pub existence: f64,
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
}

/// Multi-target estimate at one step.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackEstimate {
    pub k: u32,
    /// Maximum a posteriori number of targets.
    pub n_hat: usize,
    /// Particle-derived cardinality distribution.
    pub cardinality: Vec<f64>,
    /// The `n_hat` labels with highest existence.
    pub tracks: Vec<LabelEstimate>,
}

/// MAP cardinality, then the `n_hat` labels of highest existence with
/// their weighted mean and covariance over the particles containing them.
pub fn estimate(particles: &[MultiTargetParticle], k: u32) -> TrackEstimate {
    let total: f64 = particles.iter().map(|p| p.weight).sum();
    let n_top = particles.iter().map(|p| p.set.len()).max().unwrap_or(0);
    let mut card = vec![0.0; n_top + 1];
    let mut stats: std::collections::BTreeMap<Label, (f64, DVector<f64>, DMatrix<f64>)> = Default::default();
    for p in particles {
        let w = p.weight / total;
        card[p.set.len()] += w;
        for e in &p.set {
            let d = e.x.len();
            let s = stats.entry(e.label).or_insert_with(|| (0.0, DVector::zeros(d), DMatrix::zeros(d, d)));
            s.0 += w;
            s.1.axpy(w, &e.x, 1.0);
            s.2.ger(w, &e.x, &e.x, 1.0);
        }
    }
    let mut n_hat = 0;
    for (n, &p) in card.iter().enumerate() {
        if p > card[n_hat] {
            n_hat = n;
        }
    }
    let mut ranked: Vec<(Label, f64)> = stats.iter().map(|(l, s)| (*l, s.0)).collect();
    // descending existence, ties by label
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked.truncate(n_hat);
    ranked.sort_by_key(|r| r.0);
    let tracks = ranked
        .into_iter()
        .map(|(label, r)| {
            let (_, sx, sxx) = &stats[&label];
            let mean = sx / r;
            let cov = sxx / r - &mean * mean.transpose();
            LabelEstimate { label, existence: r, mean, cov }
        })
        .collect();
    TrackEstimate { k, n_hat, cardinality: card, tracks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rfs::LabeledState;
    use crate::rng::{stream, Purpose};

    fn set(items: &[(u32, f64)]) -> LabeledSet {
        LabeledSet::new(
            items.iter().map(|&(i, x)| LabeledState::new(DVector::from_vec(vec![x, 0.0]), Label::new(0, i))).collect(),
        )
        .unwrap()
    }

    fn mtp(s: LabeledSet, w: f64) -> MultiTargetParticle {
        MultiTargetParticle { set: s, weight: w }
    }

    #[test]
    fn identical_particles_give_exact_estimate() {
        let ps = vec![mtp(set(&[(0, 1.5), (1, 3.0)]), 0.5); 2];
        let e = estimate(&ps, 1);
        assert_eq!(e.n_hat, 2);
        assert_eq!(e.tracks[0].existence, 1.0);
        assert_eq!(e.tracks[0].mean[0], 1.5);
        assert_eq!(e.tracks[1].mean[0], 3.0);
    }

    #[test]
    fn half_support_gives_half_existence() {
        let ps = vec![mtp(set(&[(0, 1.0)]), 0.5), mtp(set(&[(0, 3.0), (1, 2.0)]), 0.5)];
        let e = estimate(&ps, 1);
        assert_eq!(e.n_hat, 1);
        assert_eq!(e.tracks.len(), 1);
        assert_eq!(e.tracks[0].label, Label::new(0, 0));
        assert_eq!(e.tracks[0].mean[0], 2.0);
        assert!((e.tracks[0].cov[(0, 0)] - 1.0).abs() < 1e-12);
        let second: f64 = ps.iter().filter(|p| p.set.contains_label(Label::new(0, 1))).map(|p| p.weight).sum();
        assert_eq!(second, 0.5);
    }

    #[test]
    fn empty_particles_estimate_nothing() {
        let e = estimate(&TrackerState::empty(4).particles, 0);
        assert_eq!(e.n_hat, 0);
        assert!(e.tracks.is_empty());
    }

    #[test]
    fn one_heavy_weight_takes_all_copies() {
        let mut rng = stream(1, Purpose::Test, 0, 0);
        let idx = systematic_indices(&[0.0, 1.0, 0.0], 7, &mut rng);
        assert_eq!(idx, vec![1; 7]);
    }

    #[test]
    fn equal_weights_copy_each_once() {
        let mut rng = stream(2, Purpose::Test, 0, 0);
        let idx = systematic_indices(&[0.25; 4], 4, &mut rng);
        assert_eq!(idx, vec![0, 1, 2, 3]);
    }

    #[test]
    fn collapse_is_reported() {
        assert!(matches!(normalize_log_weights(&[f64::NEG_INFINITY; 3], 4), Err(Error::ParticleCollapse { k: 4 })));
        let w = normalize_log_weights(&[0.0, f64::NEG_INFINITY, 0.0], 1).unwrap();
        assert_eq!(w, vec![0.5, 0.0, 0.5]);
    }

    #[test]
    fn ess_bounds() {
        assert_eq!(effective_sample_size([0.25; 4]), 4.0);
        assert_eq!(effective_sample_size([1.0, 0.0]), 1.0);
    }
}
