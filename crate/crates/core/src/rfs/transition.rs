use super::{LabeledSet, LabeledState, LmbParams, SingleTargetDensity};

/// Log of the labeled multi-target transition density
/// `f(X_next | X_prev) = s(X_next ∩ survivors | X_prev) b(X_next ∩ births)`.
///
/// * `survive_prob(prev)` is `p_S(x, l)`;
/// * `kin_log(x_next, prev)` is `ln f(x_next | x_prev, l)`;
/// * `birth` is the LMB birth density on the labels born at this step.
///
/// Labels of `x_next` that are neither in `x_prev` nor in the birth space
/// give `-inf`.
pub fn labeled_transition_log_density<D, S, K>(
    x_prev: &LabeledSet,
    x_next: &LabeledSet,
    survive_prob: S,
    kin_log: K,
    birth: &LmbParams<D>,
) -> f64
where
    D: SingleTargetDensity,
    S: Fn(&LabeledState) -> f64,
    K: Fn(&[f64], &LabeledState) -> f64,
{
    let mut total = 0.0;
    let mut births: Vec<LabeledState> = Vec::new();
    let prev = x_prev.as_slice();
    let mut i = 0;
    for nx in x_next {
        while i < prev.len() && prev[i].label < nx.label {
            // died
            total += (1.0 - survive_prob(&prev[i])).ln();
            i += 1;
        }
        if i < prev.len() && prev[i].label == nx.label {
            total += survive_prob(&prev[i]).ln() + kin_log(nx.x.as_slice(), &prev[i]);
            i += 1;
        } else if birth.get(nx.label).is_some() {
            births.push(nx.clone());
        } else {
            return f64::NEG_INFINITY;
        }
    }
    for p in &prev[i..] {
        total += (1.0 - survive_prob(p)).ln();
    }
    if total == f64::NEG_INFINITY {
        return total;
    }
    total + birth.log_density(&LabeledSet::from_sorted_unchecked(births))
}
