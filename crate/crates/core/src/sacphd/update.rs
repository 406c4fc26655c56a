use nalgebra::DVector;

use crate::error::Result;
use crate::exec;

use super::moments::{ActiveCells, Moments, SparseGamma, SparseResidualEvaluator, Spectral};
use super::{CardinalityDistribution, PhdParticleCloud};

/// Result of one approximate CPHD update.
#[derive(Debug, Clone)]
pub struct UpdateOutcome {
    pub card: CardinalityDistribution,
    pub cloud: PhdParticleCloud,
    /// Number of cells carrying any predicted signal.
    pub active_cells: usize,
}

/// Approximate CPHD update for an additive-Gaussian superpositional sensor.
///
/// `z` is the full additive measurement, `gamma` the per-target sparse
/// contribution and `noise_var` the per-cell variance of the Gaussian
/// measurement noise. Only cells touched by some `gamma` enter the Gaussian
/// ratios: elsewhere every covariance equals `noise_var * I` and the ratios
/// cancel exactly. With `rescale_mass` the updated PHD is scaled so that its
/// mass equals the updated mean cardinality.
pub fn update<G>(
    card: &CardinalityDistribution,
    cloud: &PhdParticleCloud,
    z: &[f64],
    gamma: G,
    noise_var: f64,
    rescale_mass: bool,
) -> Result<UpdateOutcome>
where
    G: Fn(&[f64]) -> SparseGamma + Sync + Send,
{
    let unchanged = |active_cells| UpdateOutcome { card: card.clone(), cloud: cloud.clone(), active_cells };
    if cloud.is_empty() || cloud.total_mass() <= 0.0 {
        return Ok(unchanged(0));
    }
    let global: Vec<SparseGamma> = exec::map_slice(&cloud.particles, |p| gamma(p.x.as_slice()));
    let active = ActiveCells::from_supports(&global);
    if active.is_empty() {
        return Ok(unchanged(0));
    }
    let gammas: Vec<SparseGamma> = global.iter().map(|g| active.localize(g)).collect();
    let weights: Vec<f64> = cloud.particles.iter().map(|p| p.weight).collect();
    let m = Moments::compute(&active, &gammas, &weights, card)?;
    let sp = Spectral::new(&m, noise_var)?;

    let zr = active.restrict(z);
    let z_rot = sp.rotate(&zr);
    let mu_rot = sp.mu_rot().clone();

    let (a, b) = m.coeffs_sigma();
    let log_den = sp.covariance(a, b)?.log_pdf_rotated(&(&z_rot - &mu_rot * m.n_mean));

    let mut logw = vec![f64::NEG_INFINITY; card.n_max() + 1];
    for (n, lw) in logw.iter_mut().enumerate() {
        let p = card.get(n);
        if p <= 0.0 {
            continue;
        }
        let (a, b) = m.coeffs_n(n);
        let r: DVector<f64> = &z_rot - &mu_rot * n as f64;
        *lw = p.ln() + sp.covariance(a, b)?.log_pdf_rotated(&r) - log_den;
    }
    let new_card = CardinalityDistribution::from_log_weights(&logw);

    let (a, b) = m.coeffs_sigma_o();
    let cov_o = sp.covariance(a, b)?;
    let ev = SparseResidualEvaluator::new(&cov_o, &(&zr - m.mu_o()));
    let ratios: Vec<f64> = exec::map_slice(&gammas, |g| (ev.log_pdf(g) - log_den).exp());

    let mut out = cloud.clone();
    for (p, r) in out.particles.iter_mut().zip(&ratios) {
        p.weight *= r;
    }
    if rescale_mass {
        let total = out.total_mass();
        if total > 0.0 && total.is_finite() {
            let s = new_card.mean() / total;
            out.particles.iter_mut().for_each(|p| p.weight *= s);
        }
    }
    Ok(UpdateOutcome { card: new_card, cloud: out, active_cells: active.len() })
}
