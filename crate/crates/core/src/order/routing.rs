//! Precomputed sample routing for constant-time state evaluation.
//!
//! The accuracy of a lattice state is a pure function of the per-tree step
//! counters: each sample sits at one node per tree and depth, so routing
//! every sample down every tree once lets any state be scored without
//! touching the forest again.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::forest::{argmax, Forest};
use crate::order::StepOrder;

/// Per-tree step counters; a vertex of the order-search lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeState {
    counters: Vec<usize>,
}

impl LatticeState {
    pub fn new(counters: Vec<usize>) -> Self {
        LatticeState { counters }
    }

    pub fn zeros(n_trees: usize) -> Self {
        LatticeState {
            counters: vec![0; n_trees],
        }
    }

    pub fn counters(&self) -> &[usize] {
        &self.counters
    }

    pub fn counter_mut(&mut self, tree: usize) -> &mut usize {
        &mut self.counters[tree]
    }
}

/// For every ordering sample, tree, and depth: the node the sample occupies
/// and that node's prediction vector. Samples that hit a leaf early repeat
/// the leaf at all deeper levels.
#[derive(Debug, Clone)]
pub struct RoutingTable {
    budgets: Vec<usize>,
    n_samples: usize,
    n_classes: usize,
    /// `node_ids[tree][depth][sample]`
    node_ids: Vec<Vec<Vec<u32>>>,
    /// `predictions[tree][depth]` is row-major `n_samples x n_classes`
    predictions: Vec<Vec<Vec<f64>>>,
}

impl RoutingTable {
    pub fn budgets(&self) -> &[usize] {
        &self.budgets
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn total_steps(&self) -> usize {
        self.budgets.iter().sum()
    }

    /// Node occupied by `sample` in `tree` after `depth` steps.
    pub fn node_at(&self, tree: usize, depth: usize, sample: usize) -> usize {
        self.node_ids[tree][depth][sample] as usize
    }

    /// Number of ordering samples classified correctly at the given
    /// counters. Integer-exact; `state_accuracy` is this over `n_samples`.
    pub fn correct_count(&self, labels: &[usize], counters: &[usize]) -> usize {
        assert_eq!(counters.len(), self.budgets.len(), "state/table tree count");
        assert_eq!(labels.len(), self.n_samples, "label/table sample count");
        debug_assert!(counters
            .iter()
            .zip(&self.budgets)
            .all(|(c, b)| c <= b));
        let c = self.n_classes;
        let mut summed = vec![0.0f64; c];
        let mut correct = 0usize;
        for (sample, &label) in labels.iter().enumerate() {
            summed.fill(0.0);
            for (tree, &depth) in counters.iter().enumerate() {
                let row = &self.predictions[tree][depth][sample * c..(sample + 1) * c];
                for (acc, p) in summed.iter_mut().zip(row) {
                    *acc += p;
                }
            }
            if argmax(&summed) == label {
                correct += 1;
            }
        }
        correct
    }
}

/// Routes every ordering sample down every tree once, recording the node
/// occupied at each depth from 0 to the tree's budget.
pub fn precompute_routing(forest: &Forest, ordering: &Dataset) -> Result<RoutingTable> {
    if ordering.is_empty() {
        return Err(Error::EmptyOrderingSet);
    }
    if ordering.n_features() != forest.n_features() {
        return Err(Error::DimensionMismatch {
            expected: forest.n_features(),
            got: ordering.n_features(),
        });
    }
    let n = ordering.len();
    let c = forest.n_classes();
    let budgets = forest.budgets();
    let mut node_ids = Vec::with_capacity(forest.n_trees());
    let mut predictions = Vec::with_capacity(forest.n_trees());
    for (tree, &budget) in forest.trees().iter().zip(&budgets) {
        let mut ids = vec![vec![0u32; n]; budget + 1];
        let mut preds = vec![vec![0.0f64; n * c]; budget + 1];
        for (sample, row) in ordering.features().iter().enumerate() {
            let mut node = 0usize;
            for depth in 0..=budget {
                if depth > 0 {
                    node = crate::forest::tree_step(tree, node, row)?;
                }
                ids[depth][sample] = node as u32;
                preds[depth][sample * c..(sample + 1) * c]
                    .copy_from_slice(&tree.nodes()[node].prediction);
            }
        }
        node_ids.push(ids);
        predictions.push(preds);
    }
    Ok(RoutingTable {
        budgets,
        n_samples: n,
        n_classes: c,
        node_ids,
        predictions,
    })
}

/// Fraction of ordering samples classified correctly at `state`.
pub fn state_accuracy(routing: &RoutingTable, labels: &[usize], state: &LatticeState) -> f64 {
    routing.correct_count(labels, state.counters()) as f64 / routing.n_samples() as f64
}

/// Mean of the state accuracies over all `K + 1` states an order visits,
/// including the all-roots start state.
pub fn mean_accuracy(routing: &RoutingTable, labels: &[usize], order: &StepOrder) -> f64 {
    let total = order_correct_sum(routing, labels, order);
    let states = order.total_steps() + 1;
    total as f64 / (routing.n_samples() * states) as f64
}

/// Integer numerator of [`mean_accuracy`]: summed correct counts over all
/// visited states. Exact, so order comparisons carry no rounding.
pub(crate) fn order_correct_sum(
    routing: &RoutingTable,
    labels: &[usize],
    order: &StepOrder,
) -> usize {
    assert_eq!(order.budgets(), routing.budgets(), "order/table budgets");
    let mut counters = vec![0usize; order.n_trees()];
    let mut total = routing.correct_count(labels, &counters);
    for &tree in order.steps() {
        counters[tree] += 1;
        total += routing.correct_count(labels, &counters);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    #[test]
    fn depth_zero_is_root() {
        let forest = fixture::example_forest();
        let ordering = fixture::example_ordering();
        let routing = precompute_routing(&forest, &ordering).unwrap();
        for tree in 0..3 {
            for sample in 0..8 {
                assert_eq!(routing.node_at(tree, 0, sample), 0);
            }
        }
    }

    #[test]
    fn early_leaf_repeats() {
        // a depth-1 stump inside a forest whose budget is 1
        let forest = crate::train::train_forest(
            &crate::synth::gaussian_blobs(16, 1, 2, 0.05, 3),
            &crate::train::TrainConfig {
                n_trees: 1,
                max_depth: 3,
                seed: 0,
                bootstrap: false,
                feature_subsample: crate::train::FeatureSubsample::All,
            },
        )
        .unwrap();
        let ordering = crate::synth::gaussian_blobs(10, 1, 2, 0.05, 4);
        let routing = precompute_routing(&forest, &ordering).unwrap();
        let budget = routing.budgets()[0];
        for sample in 0..10 {
            let mut node = routing.node_at(0, 0, sample);
            let mut prev = node;
            for depth in 1..=budget {
                node = routing.node_at(0, depth, sample);
                if forest.trees()[0].nodes()[prev].is_leaf() {
                    assert_eq!(node, prev);
                }
                prev = node;
            }
            assert!(forest.trees()[0].nodes()[node].is_leaf());
        }
    }

    #[test]
    fn constant_forest_has_constant_mean_accuracy() {
        // a pure training set makes every node predict the same class, so
        // every state scores the class-0 fraction of the ordering set
        let train = Dataset::new(
            vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]],
            vec![0, 0, 0, 0],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        let forest = crate::train::train_forest(
            &train,
            &crate::train::TrainConfig::new(3, 2, 1),
        )
        .unwrap();
        let ordering = Dataset::new(
            vec![vec![0.5], vec![1.5], vec![2.5], vec![3.5]],
            vec![0, 0, 1, 1],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        let routing = precompute_routing(&forest, &ordering).unwrap();
        let order = crate::order::random_order(&forest.budgets(), 3);
        assert_eq!(mean_accuracy(&routing, ordering.labels(), &order), 0.5);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let forest = fixture::example_forest();
        let ordering = crate::synth::gaussian_blobs(8, 2, 2, 0.1, 0);
        assert!(matches!(
            precompute_routing(&forest, &ordering),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn empty_ordering_rejected() {
        let forest = fixture::example_forest();
        let empty = Dataset::new(vec![], vec![], vec!["1".into(), "2".into()]).unwrap();
        assert!(matches!(
            precompute_routing(&forest, &empty),
            Err(Error::EmptyOrderingSet)
        ));
    }
}
