//! Runs are a pure function of the configuration and the seed, for every
//! proposal and any worker-thread count.

mod common;

use common::small_config;
use sptrack::sim::{run_once, RunRecord};
use sptrack::tracker::{ProposalKind, VovoWeightMode};

fn assert_same(a: &RunRecord, b: &RunRecord) {
    assert_eq!(a.truth, b.truth);
    assert_eq!(a.steps.len(), b.steps.len());
    for (x, y) in a.steps.iter().zip(&b.steps) {
        assert_eq!(x.estimate, y.estimate, "step {}", x.k);
        assert_eq!(x.ospa.to_bits(), y.ospa.to_bits());
        assert_eq!(x.n_eff.to_bits(), y.n_eff.to_bits());
        assert_eq!(x.filter, y.filter);
    }
}

const CASES: [(ProposalKind, VovoWeightMode); 4] = [
    (ProposalKind::Transition, VovoWeightMode::SingleParticle),
    (ProposalKind::Lmb, VovoWeightMode::SingleParticle),
    (ProposalKind::Vovo, VovoWeightMode::SingleParticle),
    (ProposalKind::Vovo, VovoWeightMode::FullSum),
];

#[test]
fn repeated_runs_are_bit_identical() {
    for (p, m) in CASES {
        let cfg = small_config(p, m);
        let a = run_once(&cfg, 17).unwrap();
        let b = run_once(&cfg, 17).unwrap();
        assert_same(&a, &b);
        assert_eq!(a.steps.len(), 6);
    }
}

#[test]
fn different_seeds_give_different_measurements() {
    let cfg = small_config(ProposalKind::Vovo, VovoWeightMode::FullSum);
    let a = run_once(&cfg, 1).unwrap();
    let b = run_once(&cfg, 2).unwrap();
    assert!(a.steps.iter().zip(&b.steps).any(|(x, y)| x.estimate != y.estimate));
}

#[cfg(feature = "parallel")]
#[test]
fn output_does_not_depend_on_thread_count() {
    let pool = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    for (p, m) in CASES {
        let cfg = small_config(p, m);
        let one = pool(1).install(|| run_once(&cfg, 23).unwrap());
        let four = pool(4).install(|| run_once(&cfg, 23).unwrap());
        assert_same(&one, &four);
    }
}
