use rand::Rng;

use crate::error::{Error, Result};
use crate::rfs::{elementary_symmetric, suffix_esf_table, Label, LabeledSet, LabeledState};
use crate::sacphd::{CardinalityDistribution, GaussianCluster};

/// Single-term generalized labeled multi-Bernoulli proposal
/// `q(X) = Delta(X) w(L(X)) prod p(x; l)` with
/// `w(L) = rho(|L|) prod_{l in L} r(l) / e_{|L|}(r)`.
#[derive(Debug, Clone)]
pub struct VovoProposal {
    card: CardinalityDistribution,
    labels: Vec<Label>,
    existence: Vec<f64>,
    clusters: Vec<GaussianCluster>,
    esf: Vec<f64>,
    suffix: Vec<Vec<f64>>,
}

/// Build the proposal over the labels of `label_universe` that carry a
/// cluster with positive mass. Existences are the cluster masses
/// normalized to sum to one; `card` is truncated to the number of labels.
pub fn build_vovo(
    card: &CardinalityDistribution,
    clusters: &[GaussianCluster],
    label_universe: &[Label],
) -> Result<VovoProposal> {
    let mut universe = label_universe.to_vec();
    universe.sort_unstable();
    universe.dedup();
    let mut chosen: Vec<GaussianCluster> =
        clusters.iter().filter(|c| c.mass > 0.0 && universe.binary_search(&c.label).is_ok()).cloned().collect();
    chosen.sort_by_key(|c| c.label);
    if let Some(w) = chosen.windows(2).find(|w| w[0].label == w[1].label) {
        return Err(Error::DuplicateLabel(w[0].label));
    }
    let total: f64 = chosen.iter().map(|c| c.mass).sum();
    if chosen.is_empty() && card.get(0) < 1.0 {
        return Err(Error::ZeroClusterMass);
    }
    let existence: Vec<f64> = chosen.iter().map(|c| c.mass / total).collect();
    let n_labels = chosen.len();
    let esf = elementary_symmetric(&existence, n_labels)?;
    let suffix = suffix_esf_table(&existence);
    Ok(VovoProposal {
        card: card.truncated(n_labels),
        labels: chosen.iter().map(|c| c.label).collect(),
        existence,
        clusters: chosen,
        esf,
        suffix,
    })
}

impl VovoProposal {
    pub fn card(&self) -> &CardinalityDistribution {
        &self.card
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn existence(&self) -> &[f64] {
        &self.existence
    }

    pub fn esf(&self) -> &[f64] {
        &self.esf
    }

    pub fn clusters(&self) -> &[GaussianCluster] {
        &self.clusters
    }

    fn sample_cardinality<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last = 0;
        for (n, &p) in self.card.probs().iter().enumerate() {
            if p > 0.0 {
                last = n;
                acc += p;
                if u < acc {
                    return n;
                }
            }
        }
        last
    }

    /// Indices of a label subset of size `n`, drawn with probability
    /// `prod r / e_n` by sequential conditional inclusion.
    fn sample_subset<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<usize> {
        let mut chosen = Vec::with_capacity(n);
        let mut need = n;
        for i in 0..self.labels.len() {
            if need == 0 {
                break;
            }
            let rest = self.labels.len() - i;
            if rest == need {
                chosen.extend(i..self.labels.len());
                break;
            }
            let p = self.existence[i] * self.suffix[i + 1][need - 1] / self.suffix[i][need];
            let u: f64 = rng.random();
            if u < p {
                chosen.push(i);
                need -= 1;
            }
        }
        chosen
    }

    /// Draw cardinality, then labels, then kinematics.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> LabeledSet {
        let n = self.sample_cardinality(rng);
        let idx = self.sample_subset(n, rng);
        let elems = idx
            .into_iter()
            .map(|i| {
                let c = &self.clusters[i];
                LabeledState::new(c.density.sample(rng), c.label)
            })
            .collect();
        LabeledSet::from_sorted_unchecked(elems)
    }

    /// `ln w(L)`: the label-structure part of the density.
    pub fn log_label_weight(&self, labels: impl IntoIterator<Item = Label>) -> f64 {
        let mut n = 0;
        let mut sum = 0.0;
        for l in labels {
            match self.labels.binary_search(&l) {
                Ok(i) => sum += self.existence[i].ln(),
                Err(_) => return f64::NEG_INFINITY,
            }
            n += 1;
        }
        if n >= self.esf.len() {
            return f64::NEG_INFINITY;
        }
        self.card.get(n).ln() + sum - self.esf[n].ln()
    }

    /// `ln q(X)`; `-inf` for labels outside the proposal's label space.
    pub fn log_q(&self, x: &LabeledSet) -> f64 {
        let lw = self.log_label_weight(x.labels());
        if lw == f64::NEG_INFINITY {
            return lw;
        }
        let kin: f64 = x
            .iter()
            .map(|e| {
                // labels were checked above
                let i = self.labels.binary_search(&e.label).unwrap_or(0);
                self.clusters[i].density.log_pdf(e.x.as_slice())
            })
            .sum();
        lw + kin
    }
}
