use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::Gaussian;
use crate::rfs::Label;

use super::PhdParticleCloud;

/// Default diagonal added to every cluster covariance.
pub const DEFAULT_COV_FLOOR: f64 = 1e-3;

/// Bounds applied to per-label PHD masses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Clamps {
    pub p_s_min: f64,
    pub p_s_max: f64,
    pub p_b_min: f64,
    pub p_b_max: f64,
}

impl Default for Clamps {
    fn default() -> Self {
        Self { p_s_min: 0.1, p_s_max: 0.99, p_b_min: 0.01, p_b_max: 0.99 }
    }
}

impl Clamps {
    pub fn validate(&self) -> Result<()> {
        let ok = |lo: f64, hi: f64| (0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi) && lo <= hi;
        if ok(self.p_s_min, self.p_s_max) && ok(self.p_b_min, self.p_b_max) {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid clamps {self:?}")))
        }
    }

    pub fn apply(&self, mass: f64, kind: ClusterKind) -> f64 {
        match kind {
            ClusterKind::Survival => mass.clamp(self.p_s_min, self.p_s_max),
            ClusterKind::Birth => mass.clamp(self.p_b_min, self.p_b_max),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClusterKind {
    Survival,
    Birth,
}

/// Per-label Gaussian summary of the updated PHD.
#[derive(Debug, Clone)]
pub struct GaussianCluster {
    pub label: Label,
    pub density: Gaussian,
    /// Sum of the label's particle weights.
    pub raw_mass: f64,
    /// `raw_mass` after clamping.
    pub mass: f64,
    pub kind: ClusterKind,
}

/// Group the cloud by label and fit a Gaussian to each group. Labels born
/// at `k` are birth clusters, all others survival clusters. Groups with zero
/// weight are dropped. Output is sorted by label.
pub fn extract_clusters(
    cloud: &PhdParticleCloud,
    k: u32,
    clamps: &Clamps,
    cov_floor: f64,
) -> Result<Vec<GaussianCluster>> {
    let mut groups: BTreeMap<Label, Vec<usize>> = BTreeMap::new();
    for (j, p) in cloud.particles.iter().enumerate() {
        groups.entry(p.label).or_default().push(j);
    }
    let mut out = Vec::with_capacity(groups.len());
    for (label, idx) in groups {
        let mass: f64 = idx.iter().map(|&j| cloud.particles[j].weight).sum();
        if !(mass > 0.0) {
            continue;
        }
        let d = cloud.particles[idx[0]].x.len();
        let mut mean = DVector::zeros(d);
        for &j in &idx {
            let p = &cloud.particles[j];
            mean.axpy(p.weight / mass, &p.x, 1.0);
        }
        let mut cov = DMatrix::zeros(d, d);
        for &j in &idx {
            let p = &cloud.particles[j];
            let e = &p.x - &mean;
            cov.ger(p.weight / mass, &e, &e, 1.0);
        }
        let kind = if label.born_at(k) { ClusterKind::Birth } else { ClusterKind::Survival };
        out.push(GaussianCluster {
            label,
            density: Gaussian::regularized(mean, cov, cov_floor)?,
            raw_mass: mass,
            mass: clamps.apply(mass, kind),
            kind,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sacphd::PhdParticle;

    fn particle(x: f64, w: f64, label: Label) -> PhdParticle {
        PhdParticle { x: DVector::from_vec(vec![x, 0.0]), weight: w, label }
    }

    #[test]
    fn single_particle_gives_floor_covariance() {
        let cloud = PhdParticleCloud::new(vec![particle(3.0, 1.0, Label::new(0, 0))]);
        let c = extract_clusters(&cloud, 2, &Clamps::default(), 1e-3).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].density.mean()[0], 3.0);
        assert!((c[0].density.cov() - DMatrix::identity(2, 2) * 1e-3).abs().max() < 1e-15);
    }

    #[test]
    fn masses_are_clamped_by_kind() {
        let cloud = PhdParticleCloud::new(vec![
            particle(0.0, 1.0, Label::new(1, 0)),
            particle(1.0, 0.7, Label::new(1, 0)),
            particle(5.0, 1e-6, Label::new(2, 0)),
            particle(9.0, 1e-6, Label::new(4, 0)),
        ]);
        let clamps = Clamps { p_s_min: 0.1, p_s_max: 0.99, p_b_min: 0.01, p_b_max: 0.99 };
        let c = extract_clusters(&cloud, 4, &clamps, 1e-3).unwrap();
        assert_eq!(c[0].mass, 0.99);
        assert_eq!(c[1].mass, 0.1);
        assert_eq!(c[2].kind, ClusterKind::Birth);
        assert_eq!(c[2].mass, 0.01);
        let raw: f64 = c.iter().map(|g| g.raw_mass).sum();
        assert_eq!(raw, cloud.total_mass());
    }

    #[test]
    fn zero_weight_labels_are_dropped() {
        let cloud =
            PhdParticleCloud::new(vec![particle(0.0, 0.0, Label::new(1, 0)), particle(1.0, 0.5, Label::new(2, 0))]);
        let c = extract_clusters(&cloud, 3, &Clamps::default(), 1e-3).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].label, Label::new(2, 0));
    }

    #[test]
    fn weighted_mean_and_covariance() {
        let l = Label::new(0, 0);
        let cloud = PhdParticleCloud::new(vec![particle(0.0, 1.0, l), particle(4.0, 3.0, l)]);
        let c = extract_clusters(&cloud, 1, &Clamps::default(), 0.0).unwrap();
        assert!((c[0].density.mean()[0] - 3.0).abs() < 1e-12);
        assert!((c[0].density.cov()[(0, 0)] - 3.0).abs() < 1e-9);
    }
}
