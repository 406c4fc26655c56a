//! One static target seen by a scalar linear-Gaussian sensor: the exact
//! posterior is a Kalman filter, used here as the oracle for every proposal.

mod common;

use sptrack::tracker::{ProposalKind, VovoWeightMode};

fn check(proposal: ProposalKind, mode: VovoWeightMode) {
    let (rel, in_sd) = common::kf_error(proposal, mode);
    eprintln!("{proposal:?}/{mode:?}: relative error {rel:.2e}, {in_sd:.3} posterior sd");
    assert!(rel <= 0.02, "posterior mean off by {rel}");
}

#[test]
fn bootstrap_matches_kalman_oracle() {
    check(ProposalKind::Transition, VovoWeightMode::SingleParticle);
}

#[test]
fn lmb_matches_kalman_oracle() {
    check(ProposalKind::Lmb, VovoWeightMode::SingleParticle);
}

#[test]
fn vovo_full_sum_matches_kalman_oracle() {
    check(ProposalKind::Vovo, VovoWeightMode::FullSum);
}

#[test]
fn vovo_single_particle_matches_kalman_oracle() {
    check(ProposalKind::Vovo, VovoWeightMode::SingleParticle);
}
