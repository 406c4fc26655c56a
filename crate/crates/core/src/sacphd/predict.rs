use crate::error::Result;
use crate::exec;
use crate::gaussian::Gaussian;
use crate::motion::NcvModel;
use crate::rfs::LmbParams;
use crate::rng::{stream, Purpose};

use super::{CardinalityDistribution, PhdParticle, PhdParticleCloud};

/// CPHD prediction of the cardinality and of the particle PHD.
///
/// Cardinality: binomial thinning by `p_s`, then convolution with the
/// Poisson-binomial birth cardinality. PHD: each particle moved through
/// `motion` with weight times `p_s`, plus `n_birth` particles per birth
/// label drawn from its density with total mass equal to its existence.
#[allow(clippy::too_many_arguments)]
pub fn predict(
    card: &CardinalityDistribution,
    cloud: &PhdParticleCloud,
    p_s: f64,
    birth: &LmbParams<Gaussian>,
    n_birth: usize,
    motion: &NcvModel,
    seed: u64,
    k: u32,
) -> Result<(CardinalityDistribution, PhdParticleCloud)> {
    let existences: Vec<f64> = birth.iter().map(|(_, c)| c.existence).collect();
    let birth_card = CardinalityDistribution::poisson_binomial(&existences, card.n_max());
    let pred_card = card.thin(p_s).convolve(&birth_card);

    let survivors: Vec<Result<PhdParticle>> = exec::map_range(cloud.len(), |j| {
        let p = &cloud.particles[j];
        let mut rng = stream(seed, Purpose::PhdPredict, k as u64, j as u64);
        Ok(PhdParticle {
            x: motion.sample_transition(p.x.as_slice(), &mut rng)?,
            weight: p.weight * p_s,
            label: p.label,
        })
    });
    let mut particles = survivors.into_iter().collect::<Result<Vec<_>>>()?;

    for (b, (label, comp)) in birth.iter().enumerate() {
        if n_birth == 0 {
            break;
        }
        let w = comp.existence / n_birth as f64;
        let born = exec::map_range(n_birth, |j| {
            let mut rng = stream(seed, Purpose::PhdBirth, k as u64, (b * n_birth + j) as u64);
            PhdParticle { x: comp.density.sample(&mut rng), weight: w, label: *label }
        });
        particles.extend(born);
    }
    Ok((pred_card, PhdParticleCloud::new(particles)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motion::build_ncv;
    use crate::rfs::Label;
    use nalgebra::{DMatrix, DVector};

    fn one_particle() -> PhdParticleCloud {
        PhdParticleCloud::new(vec![PhdParticle {
            x: DVector::from_vec(vec![0.0, 1.0, 0.0, 1.0]),
            weight: 1.0,
            label: Label::new(0, 0),
        }])
    }

    #[test]
    fn no_birth_full_survival_keeps_cardinality() {
        let m = build_ncv(1.0, 1.0, None).unwrap();
        let c = CardinalityDistribution::new(vec![0.3, 0.7, 0.0]).unwrap();
        let (pc, cloud) = predict(&c, &one_particle(), 1.0, &LmbParams::new(), 100, &m, 1, 1).unwrap();
        assert_eq!(pc, c);
        assert_eq!(cloud.len(), 1);
        assert_eq!(cloud.particles[0].weight, 1.0);
    }

    #[test]
    fn no_survival_no_birth_is_empty() {
        let m = build_ncv(1.0, 1.0, None).unwrap();
        let c = CardinalityDistribution::new(vec![0.3, 0.7, 0.0]).unwrap();
        let (pc, _) = predict(&c, &one_particle(), 0.0, &LmbParams::new(), 100, &m, 1, 1).unwrap();
        assert_eq!(pc.get(0), 1.0);
    }

    #[test]
    fn birth_particles_carry_existence_mass() {
        let m = build_ncv(1.0, 1.0, None).unwrap();
        let mut birth = LmbParams::new();
        let g = Gaussian::new(DVector::zeros(4), DMatrix::identity(4, 4)).unwrap();
        birth.insert(Label::new(1, 0), 0.05, g).unwrap();
        let c = CardinalityDistribution::delta(1, 11);
        let (pc, cloud) = predict(&c, &one_particle(), 0.95, &birth, 500, &m, 1, 1).unwrap();
        assert!((pc.get(0) - 0.0475).abs() < 1e-12);
        assert!((pc.get(1) - 0.905).abs() < 1e-12);
        assert!((pc.get(2) - 0.0475).abs() < 1e-12);
        assert_eq!(cloud.len(), 501);
        assert!((cloud.total_mass() - 1.0).abs() < 1e-12);
        let born = cloud.particles.iter().filter(|p| p.label == Label::new(1, 0)).count();
        assert_eq!(born, 500);
    }
}
