use crate::error::Result;
use crate::exec;
use crate::gaussian::Gaussian;
use crate::proposal::{LmbProposal, VovoProposal};
use crate::rfs::{Label, LabeledSet, LmbParams};
use crate::rng::particle_stream;
use crate::sensor::SuperpositionalSensor;

use super::{MultiTargetParticle, TransitionModel, VovoWeightMode};

use rand::Rng;

/// The proposal used for one propagation step.
#[derive(Debug, Clone, Copy)]
pub enum StepProposal<'a> {
    Lmb(&'a LmbProposal),
    Vovo(&'a VovoProposal, VovoWeightMode),
    Transition,
}

/// Propagated particles with unnormalized log weights.
#[derive(Debug, Clone)]
pub struct Propagated {
    pub sets: Vec<LabeledSet>,
    pub log_weights: Vec<f64>,
    /// Particles whose `ln f - ln q` was not finite.
    pub support_violations: usize,
    /// Vo-Vo single-particle mode: no compatible previous particle.
    pub incompatible: usize,
}

/// Previous particles grouped by label set, for compatible-particle lookup.
struct LabelGroups {
    groups: Vec<(Vec<Label>, Vec<usize>)>,
}

impl LabelGroups {
    fn new(prev: &[MultiTargetParticle]) -> Self {
        let mut map: std::collections::BTreeMap<Vec<Label>, Vec<usize>> = Default::default();
        for (i, p) in prev.iter().enumerate() {
            map.entry(p.set.labels().collect()).or_default().push(i);
        }
        Self { groups: map.into_iter().collect() }
    }

    /// Uniform choice among particles whose labels contain `required`;
    /// `u` in `[0, 1)`.
    /// Uniform pick among the particles whose labels cover `required`,
    /// together with the number of such particles.
    fn pick(&self, required: &[Label], u: f64) -> Option<(usize, usize)> {
        let covers = |ls: &[Label]| required.iter().all(|r| ls.binary_search(r).is_ok());
        let count: usize = self.groups.iter().filter(|g| covers(&g.0)).map(|g| g.1.len()).sum();
        if count == 0 {
            return None;
        }
        let mut t = ((u * count as f64) as usize).min(count - 1);
        for (ls, members) in &self.groups {
            if covers(ls) {
                if t < members.len() {
                    return Some((members[t], count));
                }
                t -= members.len();
            }
        }
        None
    }
}

/// Distinct previous particles (contiguous runs of equal sets) with their
/// summed weights, normalized to one.
fn distinct_groups(prev: &[MultiTargetParticle]) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64)> = Vec::new();
    for (i, p) in prev.iter().enumerate() {
        match out.last_mut() {
            Some((j, w)) if prev[*j].set == p.set => *w += p.weight,
            _ => out.push((i, p.weight)),
        }
    }
    let total: f64 = out.iter().map(|g| g.1).sum();
    out.iter_mut().for_each(|g| g.1 /= total);
    out
}

fn log_sum_exp(v: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = v.collect();
    let mx = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if mx == f64::NEG_INFINITY {
        return mx;
    }
    mx + v.iter().map(|x| (x - mx).exp()).sum::<f64>().ln()
}

/// Draw one new labeled set per particle and compute its log importance
/// weight. Particle `i` uses its own stream for step `k`.
#[allow(clippy::too_many_arguments)]
pub fn propagate<S: SuperpositionalSensor>(
    prev: &[MultiTargetParticle],
    z: &S::Measurement,
    sensor: &S,
    model: &TransitionModel,
    birth_k: &LmbParams<Gaussian>,
    proposal: StepProposal<'_>,
    seed: u64,
    k: u32,
) -> Result<Propagated> {
    let label_groups = match proposal {
        StepProposal::Vovo(_, VovoWeightMode::SingleParticle) => Some(LabelGroups::new(prev)),
        _ => None,
    };
    let distinct = match proposal {
        StepProposal::Vovo(_, VovoWeightMode::FullSum) => distinct_groups(prev),
        _ => Vec::new(),
    };
    // (set, log weight, support violation, incompatible)
    let results: Vec<Result<(LabeledSet, f64, bool, bool)>> = exec::map_range(prev.len(), |i| {
        let mut rng = particle_stream(seed, k, i);
        let p = &prev[i];
        // (set, log prior weight, ln f - ln q)
        let (x, base, log_ratio) = match proposal {
            StepProposal::Transition => (model.sample(&p.set, k, &mut rng)?, p.weight.ln(), 0.0),
            StepProposal::Lmb(q) => {
                let x = q.sample(&p.set, &mut rng);
                let r = model.log_density(&x, &p.set, birth_k) - q.log_q(&x, &p.set);
                (x, p.weight.ln(), r)
            }
            StepProposal::Vovo(q, mode) => {
                let x = q.sample(&mut rng);
                let log_q = q.log_q(&x);
                let log_f = match mode {
                    VovoWeightMode::FullSum => log_sum_exp(
                        distinct.iter().map(|&(j, w)| w.ln() + model.log_density(&x, &prev[j].set, birth_k)),
                    ),
                    VovoWeightMode::SingleParticle => {
                        let survivors: Vec<Label> = x.labels().filter(|l| !l.born_at(k)).collect();
                        let u: f64 = rng.random();
                        match label_groups.as_ref().and_then(|g| g.pick(&survivors, u)) {
                            // Equal prior weights after resampling: C/N * f(X|X_m) is an
                            // unbiased estimate of the full sum.
                            Some((m, c)) => {
                                model.log_density(&x, &prev[m].set, birth_k) + (c as f64 / prev.len() as f64).ln()
                            }
                            None => return Ok((x, f64::NEG_INFINITY, false, true)),
                        }
                    }
                };
                (x, 0.0, log_f - log_q)
            }
        };
        let violation = !log_ratio.is_finite();
        let lw = if violation { f64::NEG_INFINITY } else { base + log_ratio + sensor.log_likelihood(z, &x) };
        Ok((x, lw, violation, false))
    });
    let mut out = Propagated {
        sets: Vec::with_capacity(prev.len()),
        log_weights: Vec::with_capacity(prev.len()),
        support_violations: 0,
        incompatible: 0,
    };
    for r in results {
        let (x, lw, v, inc) = r?;
        out.sets.push(x);
        out.log_weights.push(lw);
        out.support_violations += v as usize;
        out.incompatible += inc as usize;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rfs::LabeledState;
    use nalgebra::DVector;

    fn mtp(labels: &[Label], w: f64) -> MultiTargetParticle {
        let set = LabeledSet::new(labels.iter().map(|&l| LabeledState::new(DVector::zeros(1), l)).collect()).unwrap();
        MultiTargetParticle { set, weight: w }
    }

    #[test]
    fn compatible_pick_is_uniform_over_particles() {
        let a = Label::new(0, 0);
        let b = Label::new(1, 0);
        let prev = vec![mtp(&[a], 0.25), mtp(&[a, b], 0.25), mtp(&[b], 0.25), mtp(&[a], 0.25)];
        let g = LabelGroups::new(&prev);
        let picks: Vec<usize> = (0..3).map(|t| g.pick(&[a], (t as f64 + 0.5) / 3.0).unwrap().0).collect();
        let mut sorted = picks.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 3]);
        assert_eq!(g.pick(&[a, b], 0.9), Some((1, 1)));
        assert_eq!(g.pick(&[a], 0.1).unwrap().1, 3);
        assert_eq!(g.pick(&[Label::new(2, 0)], 0.1), None);
        assert!(g.pick(&[], 0.99).is_some());
    }

    #[test]
    fn distinct_groups_merge_contiguous_copies() {
        let a = Label::new(0, 0);
        let prev = vec![mtp(&[a], 0.25), mtp(&[a], 0.25), mtp(&[], 0.5)];
        let g = distinct_groups(&prev);
        assert_eq!(g, vec![(0, 0.5), (2, 0.5)]);
    }

    #[test]
    fn log_sum_exp_handles_empty_mass() {
        assert_eq!(log_sum_exp([f64::NEG_INFINITY, f64::NEG_INFINITY].into_iter()), f64::NEG_INFINITY);
        assert!((log_sum_exp([0.0, 0.0].into_iter()) - 2f64.ln()).abs() < 1e-15);
    }
}
