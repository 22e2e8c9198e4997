//! Accuracy-versus-steps curves and the normalized mean accuracy metric.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::forest::Forest;
use crate::order::{precompute_routing, RoutingTable, StepOrder};

/// Identifier of the normalization rule used by [`nma`], recorded in
/// reports so numbers stay comparable across versions.
pub const NMA_FORMULA_VERSION: &str = "nma-v1";

/// Entry `k` is the test accuracy when every sample is aborted after `k`
/// steps of the order; length `K + 1`.
pub fn accuracy_curve(forest: &Forest, order: &StepOrder, test: &Dataset) -> Result<Vec<f64>> {
    let routing = precompute_routing(forest, test)?;
    if order.budgets() != routing.budgets() {
        return Err(Error::OrderMismatch(format!(
            "order budgets {:?} vs tree depths {:?}",
            order.budgets(),
            routing.budgets()
        )));
    }
    Ok(accuracy_curve_routed(&routing, test.labels(), order))
}

/// [`accuracy_curve`] over a prebuilt routing table.
pub fn accuracy_curve_routed(
    routing: &RoutingTable,
    labels: &[usize],
    order: &StepOrder,
) -> Vec<f64> {
    let n = routing.n_samples() as f64;
    let mut counters = vec![0usize; order.n_trees()];
    let mut curve = Vec::with_capacity(order.total_steps() + 1);
    curve.push(routing.correct_count(labels, &counters) as f64 / n);
    for &tree in order.steps() {
        counters[tree] += 1;
        curve.push(routing.correct_count(labels, &counters) as f64 / n);
    }
    curve
}

/// Normalized mean accuracy: the curve mean (over all `K + 1` abort
/// points) divided by the final accuracy, so 1.0 means final quality at
/// every step. Undefined when the final accuracy is zero.
pub fn nma(curve: &[f64]) -> Result<f64> {
    let final_accuracy = *curve.last().ok_or(Error::ZeroFinalAccuracy)?;
    if final_accuracy == 0.0 {
        return Err(Error::ZeroFinalAccuracy);
    }
    let mean = curve.iter().sum::<f64>() / curve.len() as f64;
    Ok(mean / final_accuracy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::execute::execute;
    use crate::fixture;
    use crate::order::{mean_accuracy, random_order};
    use crate::synth::gaussian_blobs;
    use crate::train::{train_forest, TrainConfig};

    #[test]
    fn constant_curve_nma_is_one() {
        assert_eq!(nma(&[0.5, 0.5, 0.5]).unwrap(), 1.0);
        assert!((nma(&[0.7, 0.7, 0.7, 0.7]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_point_curve() {
        assert_eq!(nma(&[0.5, 1.0]).unwrap(), 0.75);
    }

    #[test]
    fn zero_final_accuracy_is_error() {
        assert!(matches!(nma(&[0.5, 0.0]), Err(Error::ZeroFinalAccuracy)));
        assert!(matches!(nma(&[]), Err(Error::ZeroFinalAccuracy)));
    }

    #[test]
    fn fixture_optimal_curve_on_ordering_set() {
        let forest = fixture::example_forest();
        let ordering = fixture::example_ordering();
        let order = crate::order::optimal_order(&forest, &ordering, 1 << 20).unwrap();
        let curve = accuracy_curve(&forest, &order, &ordering).unwrap();
        assert_eq!(curve.len(), 7);
        assert_eq!(*curve.last().unwrap(), 1.0);
        assert_eq!(nma(&curve).unwrap(), 6.0 / 7.0);
    }

    #[test]
    fn curve_ends_match_roots_and_full_accuracy() {
        let data = gaussian_blobs(100, 3, 3, 0.7, 5);
        let forest = train_forest(&data, &TrainConfig::new(4, 3, 6)).unwrap();
        let test = gaussian_blobs(30, 3, 3, 0.7, 99);
        let order = random_order(&forest.budgets(), 1);
        let curve = accuracy_curve(&forest, &order, &test).unwrap();
        assert_eq!(curve.len(), order.total_steps() + 1);

        // spot agreement with the executor at a few abort points
        for k in [0, curve.len() / 2, curve.len() - 1] {
            let mut correct = 0;
            for (sample, &label) in test.features().iter().zip(test.labels()) {
                let (class, _) = execute(&forest, &order, sample, k).unwrap();
                if class == label {
                    correct += 1;
                }
            }
            assert_eq!(curve[k], correct as f64 / test.len() as f64);
        }

        // the curve mean is the order's mean accuracy on the same samples
        let routing = precompute_routing(&forest, &test).unwrap();
        let mean = curve.iter().sum::<f64>() / curve.len() as f64;
        assert!((mean - mean_accuracy(&routing, test.labels(), &order)).abs() < 1e-12);
    }

    #[test]
    fn final_accuracy_identical_across_orders() {
        let data = gaussian_blobs(100, 3, 2, 0.7, 8);
        let forest = train_forest(&data, &TrainConfig::new(4, 3, 2)).unwrap();
        let test = gaussian_blobs(40, 3, 2, 0.7, 19);
        let budgets = forest.budgets();
        let final_accuracies: Vec<f64> = (0..5)
            .map(|seed| {
                let order = random_order(&budgets, seed);
                *accuracy_curve(&forest, &order, &test)
                    .unwrap()
                    .last()
                    .unwrap()
            })
            .collect();
        assert!(final_accuracies.windows(2).all(|w| w[0] == w[1]));
    }
}
