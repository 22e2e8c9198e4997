//! Seeded synthetic datasets for tests, benchmarks and the demo.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;

/// Gaussian blobs, one cluster per class, centers spread on a diagonal
/// grid. `spread` is the cluster standard deviation relative to the unit
/// center spacing; larger values mean more class overlap.
pub fn gaussian_blobs(
    n_samples: usize,
    n_features: usize,
    n_classes: usize,
    spread: f64,
    seed: u64,
) -> Dataset {
    assert!(n_features >= 1 && n_classes >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut features = Vec::with_capacity(n_samples);
    let mut labels = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let class = i % n_classes;
        let row: Vec<f64> = (0..n_features)
            .map(|f| {
                // alternate center sign per feature so classes separate in
                // every dimension
                let center = if f % 2 == 0 {
                    class as f64
                } else {
                    -(class as f64)
                };
                center + spread * normal(&mut rng)
            })
            .collect();
        features.push(row);
        labels.push(class);
    }
    let label_map = (0..n_classes).map(|c| c.to_string()).collect();
    Dataset::new(features, labels, label_map).expect("generated data is well formed")
}

/// Uniform features with labels drawn at random; nothing to learn, which
/// forces impurity everywhere and grows trees to their full depth.
pub fn noise_dataset(n_samples: usize, n_features: usize, n_classes: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let features = (0..n_samples)
        .map(|_| (0..n_features).map(|_| rng.random::<f64>()).collect())
        .collect();
    let labels = (0..n_samples)
        .map(|_| rng.random_range(0..n_classes))
        .collect();
    let label_map = (0..n_classes).map(|c| c.to_string()).collect();
    Dataset::new(features, labels, label_map).expect("generated data is well formed")
}

/// Standard normal via Box-Muller.
fn normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blobs_shape_and_determinism() {
        let a = gaussian_blobs(30, 3, 2, 0.3, 11);
        let b = gaussian_blobs(30, 3, 2, 0.3, 11);
        assert_eq!(a, b);
        assert_eq!(a.len(), 30);
        assert_eq!(a.n_features(), 3);
        assert_eq!(a.n_classes(), 2);
    }

    #[test]
    fn blob_classes_cycle() {
        let d = gaussian_blobs(9, 2, 3, 0.1, 0);
        assert_eq!(d.labels(), &[0, 1, 2, 0, 1, 2, 0, 1, 2]);
    }
}
