use nalgebra::DVector;

use super::Label;
use crate::error::{Error, Result};

/// A single-target state on kinematic space x label space.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledState {
    pub x: DVector<f64>,
    pub label: Label,
}

impl LabeledState {
    pub fn new(x: DVector<f64>, label: Label) -> Self {
        Self { x, label }
    }
}

/// Returns `true` when the labels in `elems` are pairwise distinct.
pub fn distinct_label_indicator(elems: &[LabeledState]) -> bool {
    let mut labels: Vec<Label> = elems.iter().map(|e| e.label).collect();
    labels.sort_unstable();
    labels.windows(2).all(|w| w[0] != w[1])
}

/// Finite set of labeled states with pairwise distinct labels, kept sorted
/// by label.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LabeledSet {
    elems: Vec<LabeledState>,
}

impl LabeledSet {
    pub fn empty() -> Self {
        Self { elems: Vec::new() }
    }

    /// Sorts by label; rejects repeated labels.
    pub fn new(mut elems: Vec<LabeledState>) -> Result<Self> {
        elems.sort_by_key(|e| e.label);
        if let Some(w) = elems.windows(2).find(|w| w[0].label == w[1].label) {
            return Err(Error::DuplicateLabel(w[0].label));
        }
        Ok(Self { elems })
    }

    /// Caller guarantees the elements are sorted with distinct labels.
    pub(crate) fn from_sorted_unchecked(elems: Vec<LabeledState>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0].label < w[1].label));
        Self { elems }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, LabeledState> {
        self.elems.iter()
    }

    pub fn as_slice(&self) -> &[LabeledState] {
        &self.elems
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.elems.iter().map(|e| e.label)
    }

    pub fn get(&self, label: Label) -> Option<&LabeledState> {
        self.elems.binary_search_by_key(&label, |e| e.label).ok().map(|i| &self.elems[i])
    }

    pub fn contains_label(&self, label: Label) -> bool {
        self.get(label).is_some()
    }

    /// Elements whose label satisfies `keep`.
    pub fn filter_labels(&self, mut keep: impl FnMut(Label) -> bool) -> LabeledSet {
        Self::from_sorted_unchecked(self.elems.iter().filter(|e| keep(e.label)).cloned().collect())
    }

    /// Union of two sets with disjoint labels (merge). Fails on a shared label.
    pub fn disjoint_union(&self, other: &LabeledSet) -> Result<LabeledSet> {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.elems.len() || j < other.elems.len() {
            let take_left = match (self.elems.get(i), other.elems.get(j)) {
                (Some(a), Some(b)) => {
                    if a.label == b.label {
                        return Err(Error::DuplicateLabel(a.label));
                    }
                    a.label < b.label
                }
                (Some(_), None) => true,
                _ => false,
            };
            if take_left {
                out.push(self.elems[i].clone());
                i += 1;
            } else {
                out.push(other.elems[j].clone());
                j += 1;
            }
        }
        Ok(Self::from_sorted_unchecked(out))
    }

    /// True if every label of `self` is in `other` (merge scan).
    pub fn labels_subset_of(&self, other: &LabeledSet) -> bool {
        let mut it = other.elems.iter().map(|e| e.label).peekable();
        'outer: for l in self.labels() {
            while let Some(&o) = it.peek() {
                if o == l {
                    it.next();
                    continue 'outer;
                }
                if o > l {
                    return false;
                }
                it.next();
            }
            return false;
        }
        true
    }
}

impl<'a> IntoIterator for &'a LabeledSet {
    type Item = &'a LabeledState;
    type IntoIter = std::slice::Iter<'a, LabeledState>;

    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

/// `prod_{x in X} h(x)`; 1 for the empty set.
pub fn multi_object_exponential(h: impl Fn(&LabeledState) -> f64, set: &LabeledSet) -> f64 {
    set.iter().map(h).product()
}
