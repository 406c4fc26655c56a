//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use sptrack::gaussian::Gaussian;
use sptrack::motion::build_ncv;
use sptrack::proposal::{build_vovo, VovoProposal};
use sptrack::rfs::{Label, LabeledSet, LabeledState};
use sptrack::rng::{stream, Purpose};
use sptrack::sacphd::{CardinalityDistribution, ClusterKind, GaussianCluster};
use sptrack::sensor::SuperpositionalSensor;
use sptrack::sim::SimConfig;
use sptrack::tracker::{
    BirthModel, FilterConfig, MultiTargetParticle, ProposalKind, Tracker, TrackerConfig, TrackerState, TransitionModel,
    VovoWeightMode,
};

/// `e_n` as an explicit sum over all `n`-subsets.
pub fn brute_esf(values: &[f64], n: usize) -> f64 {
    (0u32..1 << values.len())
        .filter(|m| m.count_ones() as usize == n)
        .map(|m| (0..values.len()).filter(|i| m >> i & 1 == 1).map(|i| values[i]).product::<f64>())
        .sum()
}

/// Every subset of `0..n` as a sorted index list.
pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |m| (0..n).filter(|i| m >> i & 1 == 1).collect())
}

/// `rho(|L|) prod r / e_|L|(r)` computed from scratch.
pub fn exact_subset_prob(rho: &[f64], r: &[f64], idx: &[usize]) -> f64 {
    let n = idx.len();
    rho.get(n).copied().unwrap_or(0.0) * idx.iter().map(|&i| r[i]).product::<f64>() / brute_esf(r, n)
}

pub struct VovoCase {
    pub labels: Vec<Label>,
    /// Normalized existences.
    pub r: Vec<f64>,
    /// Cardinality truncated to the number of labels.
    pub card: CardinalityDistribution,
    pub q: VovoProposal,
}

/// Proposal over `n_labels` labels with unequal cluster masses and a
/// cardinality distribution that extends past the label count.
pub fn vovo_case(n_labels: usize) -> VovoCase {
    let labels: Vec<Label> = (0..n_labels as u32).map(|i| Label::new(1, i)).collect();
    let masses: Vec<f64> = (0..n_labels).map(|i| 0.3 + 0.5 * i as f64).collect();
    let total: f64 = masses.iter().sum();
    let r: Vec<f64> = masses.iter().map(|m| m / total).collect();
    let card = CardinalityDistribution::normalized((0..=n_labels + 2).map(|n| 1.0 + n as f64).collect());
    let clusters: Vec<GaussianCluster> = labels
        .iter()
        .zip(&masses)
        .map(|(&label, &mass)| GaussianCluster {
            label,
            density: Gaussian::new(DVector::from_vec(vec![label.birth_index as f64, 0.0]), DMatrix::identity(2, 2))
                .unwrap(),
            raw_mass: mass,
            mass,
            kind: ClusterKind::Survival,
        })
        .collect();
    let q = build_vovo(&card, &clusters, &labels).unwrap();
    VovoCase { labels, r, card: card.truncated(n_labels), q }
}

/// OSPA by minimizing over every injection of the smaller set.
pub fn brute_ospa(x: &[Vec<f64>], y: &[Vec<f64>], c: f64, p: f64) -> f64 {
    let (small, large) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    let n = large.len();
    if n == 0 {
        return 0.0;
    }
    let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt().min(c).powf(p);
    fn best(small: &[Vec<f64>], large: &[Vec<f64>], used: &mut Vec<bool>, d: &dyn Fn(&[f64], &[f64]) -> f64) -> f64 {
        let Some((first, rest)) = small.split_first() else { return 0.0 };
        let mut out = f64::INFINITY;
        for j in 0..large.len() {
            if !used[j] {
                used[j] = true;
                out = out.min(d(first, &large[j]) + best(rest, large, used, d));
                used[j] = false;
            }
        }
        out
    }
    let matched = best(small, large, &mut vec![false; n], &d);
    ((matched + c.powf(p) * (n - small.len()) as f64) / n as f64).powf(1.0 / p)
}

/// Uniformly random 2-D point set of size `0..=max`.
pub fn random_points<R: Rng>(rng: &mut R, max: usize, half_width: f64) -> Vec<Vec<f64>> {
    let n = rng.random_range(0..=max);
    (0..n).map(|_| vec![rng.random_range(-half_width..half_width), rng.random_range(-half_width..half_width)]).collect()
}

/// `ln I0(x)` by trapezoidal quadrature of `(1/pi) int_0^pi exp(x cos t) dt`,
/// scaled by `exp(-x)` to stay finite.
pub fn log_i0_quadrature(x: f64) -> f64 {
    let n = 20_000;
    let h = std::f64::consts::PI / n as f64;
    let mut s = 0.0;
    for i in 0..=n {
        let t = i as f64 * h;
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        s += w * (x * (t.cos() - 1.0)).exp();
    }
    x + (s * h / std::f64::consts::PI).ln()
}

pub fn dense_log_pdf(r: &DVector<f64>, cov: &DMatrix<f64>) -> f64 {
    let ch = cov.clone().cholesky().unwrap();
    let sol = ch.solve(r);
    let log_det: f64 = 2.0 * ch.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
    -0.5 * (r.dot(&sol) + log_det + r.len() as f64 * (2.0 * std::f64::consts::PI).ln())
}

pub fn normal1(mean: f64, sd: f64) -> Gaussian {
    Gaussian::new(DVector::from_vec(vec![mean]), DMatrix::from_element(1, 1, sd * sd)).unwrap()
}

pub fn log_normal1(x: f64, mean: f64, sd: f64) -> f64 {
    let u = (x - mean) / sd;
    -0.5 * u * u - sd.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln()
}

/// Importance sampler over labeled sets: each candidate label present with
/// probability one half, 1-D kinematics from a wide normal around a center.
pub struct SetSampler {
    pub labels: Vec<(Label, f64)>,
    pub sd: f64,
}

impl SetSampler {
    pub fn draw<R: Rng>(&self, rng: &mut R) -> (LabeledSet, f64) {
        let mut elems = Vec::new();
        let mut log_q = 0.0;
        for &(l, c) in &self.labels {
            log_q += 0.5f64.ln();
            if rng.random::<bool>() {
                let x = c + self.sd * rng.sample::<f64, _>(rand_distr::StandardNormal);
                log_q += log_normal1(x, c, self.sd);
                elems.push(LabeledState::new(DVector::from_vec(vec![x]), l));
            }
        }
        (LabeledSet::new(elems).unwrap(), log_q)
    }
}

/// Scalar sensor observing the first state component of each target plus
/// Gaussian noise; one static target makes the posterior a Kalman filter.
pub struct LinearSensor {
    pub sigma: f64,
}

impl SuperpositionalSensor for LinearSensor {
    type Measurement = f64;

    fn log_likelihood(&self, z: &f64, set: &LabeledSet) -> f64 {
        let s: f64 = set.iter().map(|e| e.x[0]).sum();
        -0.5 * (z - s).powi(2) / (self.sigma * self.sigma)
    }

    fn gamma(&self, x: &[f64]) -> Vec<(usize, f64)> {
        vec![(0, x[0])]
    }

    fn cell_count(&self) -> usize {
        1
    }

    fn additive_measurement(&self, z: &f64) -> Vec<f64> {
        vec![*z]
    }
}

pub const KF_SIGMA: f64 = 1.0;
const KF_STEPS: usize = 10;
const KF_PSD: f64 = 1.0;

pub fn kf_model() -> TransitionModel {
    TransitionModel {
        motion: build_ncv(1.0, KF_PSD, None).unwrap(),
        p_s: 1.0,
        birth: BirthModel {
            existence: 0.5,
            density: Gaussian::new(DVector::zeros(4), DMatrix::identity(4, 4)).unwrap(),
            labels_per_step: 0,
        },
    }
}

fn kf_prior() -> Gaussian {
    Gaussian::new(
        DVector::from_vec(vec![48.0, 0.0, 20.0, 0.0]),
        DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 1.0, 4.0, 1.0])),
    )
    .unwrap()
}

pub fn kf_measurements(seed: u64) -> Vec<f64> {
    let mut rng = stream(seed, Purpose::Test, 0, 0);
    let n = Normal::new(0.0, KF_SIGMA).unwrap();
    (0..KF_STEPS).map(|_| 50.0 + n.sample(&mut rng)).collect()
}

/// Exact posterior mean and covariance after the last measurement.
pub fn kalman(zs: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
    let m = kf_model();
    let f = m.motion.transition_matrix().clone();
    let q = m.motion.process_noise().clone();
    let p0 = kf_prior();
    let (mut x, mut p) = (p0.mean().clone(), p0.cov().clone());
    let h = DMatrix::from_row_slice(1, 4, &[1.0, 0.0, 0.0, 0.0]);
    for z in zs {
        x = &f * &x;
        p = &f * &p * f.transpose() + &q;
        let s = (&h * &p * h.transpose())[(0, 0)] + KF_SIGMA * KF_SIGMA;
        let kg = &p * h.transpose() / s;
        let innov = z - x[0];
        x += &kg * innov;
        p = (DMatrix::identity(4, 4) - &kg * &h) * p;
    }
    (x, p)
}

/// Posterior mean of the single track after filtering `zs` from the prior.
pub fn kf_tracker_mean(proposal: ProposalKind, mode: VovoWeightMode, zs: &[f64], seed: u64) -> DVector<f64> {
    let n = 5000;
    let sensor = LinearSensor { sigma: KF_SIGMA };
    let p0 = kf_prior();
    let mut rng = stream(seed, Purpose::Test, 1, 0);
    let particles = (0..n)
        .map(|_| MultiTargetParticle {
            set: LabeledSet::new(vec![LabeledState::new(p0.sample(&mut rng), Label::new(0, 0))]).unwrap(),
            weight: 1.0 / n as f64,
        })
        .collect();
    let cfg = TrackerConfig {
        n_particles: n,
        proposal,
        vovo_weight_mode: mode,
        seed,
        filter: FilterConfig { n_birth_particles: 0, noise_std: KF_SIGMA, ..FilterConfig::default() },
    };
    let mut t = Tracker::with_state(&sensor, kf_model(), cfg, TrackerState { particles, k: 0 }).unwrap();
    let mut last = None;
    for z in zs {
        last = Some(t.step(z).unwrap());
    }
    let est = last.unwrap().estimate;
    assert_eq!(est.n_hat, 1);
    est.tracks[0].mean.clone()
}

/// Relative error of the tracker's posterior mean position against the
/// Kalman oracle, and the same error in oracle standard deviations.
pub fn kf_error(proposal: ProposalKind, mode: VovoWeightMode) -> (f64, f64) {
    let zs = kf_measurements(11);
    let (x, p) = kalman(&zs);
    let m = kf_tracker_mean(proposal, mode, &zs, 5);
    let err = (m[0] - x[0]).abs();
    (err / x[0].abs(), err / p[(0, 0)].sqrt())
}

/// Two targets on a small grid, few particles: fast end-to-end runs.
pub fn small_config(proposal: ProposalKind, mode: VovoWeightMode) -> SimConfig {
    let mut cfg = SimConfig::default();
    cfg.scenario.k_max = 6;
    cfg.scenario.birth_schedule.truncate(2);
    cfg.scenario.death_schedule.clear();
    cfg.scenario.grid.range_m.min = 1650.0;
    cfg.scenario.grid.range_m.max = 1850.0;
    cfg.scenario.grid.azimuth_deg.min = 38.0;
    cfg.scenario.grid.azimuth_deg.max = 52.0;
    cfg.run.proposal = proposal;
    cfg.run.vovo_weight_mode = mode;
    cfg.run.n_particles = 150;
    cfg.run.n_birth_particles = 200;
    cfg.validate().unwrap();
    cfg
}
