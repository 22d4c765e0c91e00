//! Seeded synthetic samples from known densities, for validating estimators.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Normal};

/// One Gaussian component: weight, mean, standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component {
    pub weight: f64,
    pub mean: f64,
    pub sd: f64,
}

/// Three-component normal mixture supported well inside `[-1, 12]`.
pub const TRIMODAL: [Component; 3] = [
    Component {
        weight: 0.5,
        mean: 2.5,
        sd: 0.6,
    },
    Component {
        weight: 0.3,
        mean: 6.0,
        sd: 0.8,
    },
    Component {
        weight: 0.2,
        mean: 9.5,
        sd: 0.6,
    },
];

/// Parameters of the boundary-hugging lognormal: `exp(N(mu, sigma^2))`.
pub const LOGNORMAL_MU: f64 = 0.0;
pub const LOGNORMAL_SIGMA: f64 = 0.75;

pub fn mixture_sample(components: &[Component], n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: f64 = components.iter().map(|c| c.weight).sum();
    let normals: Vec<Normal<f64>> = components
        .iter()
        .map(|c| Normal::new(c.mean, c.sd).expect("valid component"))
        .collect();
    (0..n)
        .map(|_| {
            let mut u = rand::Rng::random::<f64>(&mut rng) * total;
            let mut k = 0;
            while k + 1 < components.len() && u >= components[k].weight {
                u -= components[k].weight;
                k += 1;
            }
            normals[k].sample(&mut rng)
        })
        .collect()
}

pub fn mixture_pdf(components: &[Component], x: f64) -> f64 {
    let total: f64 = components.iter().map(|c| c.weight).sum();
    components
        .iter()
        .map(|c| {
            let z = (x - c.mean) / c.sd;
            c.weight * (-0.5 * z * z).exp() / (c.sd * (2.0 * std::f64::consts::PI).sqrt())
        })
        .sum::<f64>()
        / total
}

pub fn trimodal_sample(n: usize, seed: u64) -> Vec<f64> {
    mixture_sample(&TRIMODAL, n, seed)
}

pub fn lognormal_sample(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = LogNormal::new(LOGNORMAL_MU, LOGNORMAL_SIGMA).expect("valid lognormal");
    (0..n).map(|_| dist.sample(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_reproducible() {
        assert_eq!(trimodal_sample(20, 7), trimodal_sample(20, 7));
        assert_ne!(trimodal_sample(20, 7), trimodal_sample(20, 8));
        assert!(lognormal_sample(200, 1).iter().all(|&v| v > 0.0));
    }

    #[test]
    fn mixture_component_frequencies() {
        let v = trimodal_sample(20_000, 3);
        let low = v.iter().filter(|&&x| x < 4.25).count() as f64 / v.len() as f64;
        assert!((low - 0.5).abs() < 0.02, "{low}");
    }

    #[test]
    fn mixture_pdf_integrates_to_one() {
        let dx = 1e-3;
        let total: f64 = (0..20_000)
            .map(|i| mixture_pdf(&TRIMODAL, -4.0 + i as f64 * dx) * dx)
            .sum();
        assert!((total - 1.0).abs() < 1e-6);
    }
}
