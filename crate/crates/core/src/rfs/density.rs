use std::collections::BTreeMap;

use super::{Label, LabeledSet};
use crate::error::{Error, Result};
use crate::gaussian::Gaussian;

/// A normalized single-target density evaluated in the log domain.
pub trait SingleTargetDensity: Send + Sync {
    fn log_pdf(&self, x: &[f64]) -> f64;
}

impl SingleTargetDensity for Gaussian {
    fn log_pdf(&self, x: &[f64]) -> f64 {
        Gaussian::log_pdf(self, x)
    }
}

impl<F> SingleTargetDensity for F
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn log_pdf(&self, x: &[f64]) -> f64 {
        self(x)
    }
}

/// One Bernoulli component of an LMB density.
#[derive(Debug, Clone)]
pub struct LmbComponent<D> {
    pub existence: f64,
    pub density: D,
}

/// Labeled multi-Bernoulli parameters `{(r, p)}` indexed by label.
#[derive(Debug, Clone)]
pub struct LmbParams<D = Gaussian> {
    components: BTreeMap<Label, LmbComponent<D>>,
}

impl<D> Default for LmbParams<D> {
    fn default() -> Self {
        Self { components: BTreeMap::new() }
    }
}

impl<D: SingleTargetDensity> LmbParams<D> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a component; `existence` must be in `[0, 1]`.
    pub fn insert(&mut self, label: Label, existence: f64, density: D) -> Result<()> {
        if !(0.0..=1.0).contains(&existence) {
            return Err(Error::Config(format!("existence {existence} outside [0,1] for {label}")));
        }
        if self.components.contains_key(&label) {
            return Err(Error::DuplicateLabel(label));
        }
        self.components.insert(label, LmbComponent { existence, density });
        Ok(())
    }

    pub fn get(&self, label: Label) -> Option<&LmbComponent<D>> {
        self.components.get(&label)
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.components.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, &LmbComponent<D>)> {
        self.components.iter()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Log of the label weight `w(L)` for a sorted label list.
    ///
    /// Evaluated as `sum_{l not in L} ln(1-r) + sum_{l in L} ln r`, which is
    /// the same product without dividing by `1 - r`.
    pub fn log_label_weight(&self, labels: &[Label]) -> f64 {
        let mut total = 0.0;
        let mut it = labels.iter().peekable();
        for (l, c) in &self.components {
            if let Some(&&q) = it.peek() {
                if q < *l {
                    // label outside the component set
                    return f64::NEG_INFINITY;
                }
            }
            if it.peek() == Some(&l) {
                it.next();
                total += c.existence.ln();
            } else {
                total += (1.0 - c.existence).ln();
            }
        }
        if it.next().is_some() {
            return f64::NEG_INFINITY;
        }
        total
    }

    /// Log-density of the LMB at `set`.
    pub fn log_density(&self, set: &LabeledSet) -> f64 {
        let labels: Vec<Label> = set.labels().collect();
        let mut lp = self.log_label_weight(&labels);
        if lp == f64::NEG_INFINITY {
            return lp;
        }
        for e in set {
            lp += self.components[&e.label].density.log_pdf(e.x.as_slice());
        }
        lp
    }
}

/// `ln pi(X)` for an LMB; `-inf` for zero density.
pub fn lmb_log_density<D: SingleTargetDensity>(params: &LmbParams<D>, set: &LabeledSet) -> f64 {
    params.log_density(set)
}

/// A single-term Vo-Vo (generalized LMB) density: a label-set weight table
/// and one density per label.
#[derive(Debug, Clone)]
pub struct VovoSingleTerm<D = Gaussian> {
    weights: BTreeMap<Vec<Label>, f64>,
    densities: BTreeMap<Label, D>,
}

impl<D: SingleTargetDensity> VovoSingleTerm<D> {
    /// Weights are keyed by label sets (any order); they must be nonnegative
    /// and sum to 1 within 1e-9.
    pub fn new(weights: Vec<(Vec<Label>, f64)>, densities: BTreeMap<Label, D>) -> Result<Self> {
        let mut table = BTreeMap::new();
        let mut total = 0.0;
        for (mut ls, w) in weights {
            if w < 0.0 {
                return Err(Error::Config("negative label-set weight".into()));
            }
            ls.sort_unstable();
            if ls.windows(2).any(|p| p[0] == p[1]) {
                return Err(Error::DuplicateLabel(ls[0]));
            }
            if let Some(l) = ls.iter().find(|l| !densities.contains_key(l)) {
                return Err(Error::Config(format!("no density for label {l}")));
            }
            total += w;
            table.insert(ls, w);
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!("label-set weights sum to {total}, expected 1")));
        }
        Ok(Self { weights: table, densities })
    }

    pub fn log_density(&self, set: &LabeledSet) -> f64 {
        let labels: Vec<Label> = set.labels().collect();
        let Some(&w) = self.weights.get(&labels) else {
            return f64::NEG_INFINITY;
        };
        let mut lp = w.ln();
        for e in set {
            lp += self.densities[&e.label].log_pdf(e.x.as_slice());
        }
        lp
    }
}
