//! Anytime execution: runs a forest along a step order and can stop after
//! any number of whole steps, or at a wall-clock deadline, always leaving a
//! usable prediction behind.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::forest::{argmax, combined_prediction, tree_step, AnytimeState, Forest};
use crate::order::StepOrder;

/// Step-at-a-time runner for one sample. Keeps the summed prediction
/// vector up to date incrementally, so reading the current prediction is
/// O(n_classes) no matter how many trees there are.
pub struct Executor<'a> {
    forest: &'a Forest,
    order: &'a StepOrder,
    sample: &'a [f64],
    state: AnytimeState,
    summed: Vec<f64>,
    cursor: usize,
}

impl<'a> Executor<'a> {
    pub fn new(forest: &'a Forest, order: &'a StepOrder, sample: &'a [f64]) -> Result<Self> {
        if order.budgets() != forest.budgets().as_slice() {
            return Err(Error::OrderMismatch(format!(
                "order budgets {:?} vs tree depths {:?}",
                order.budgets(),
                forest.budgets()
            )));
        }
        if sample.len() != forest.n_features() {
            return Err(Error::DimensionMismatch {
                expected: forest.n_features(),
                got: sample.len(),
            });
        }
        let mut summed = vec![0.0; forest.n_classes()];
        for tree in forest.trees() {
            for (acc, p) in summed.iter_mut().zip(&tree.nodes()[0].prediction) {
                *acc += p;
            }
        }
        Ok(Executor {
            forest,
            order,
            sample,
            state: AnytimeState::at_roots(forest),
            summed,
            cursor: 0,
        })
    }

    /// Executes the next step of the order; false once the order is spent.
    pub fn step(&mut self) -> bool {
        let Some(&tree_index) = self.order.steps().get(self.cursor) else {
            return false;
        };
        let tree = &self.forest.trees()[tree_index];
        let old = self.state.node_index()[tree_index];
        let new = tree_step(tree, old, self.sample).expect("state node indices stay valid");
        if new != old {
            let old_pred = &tree.nodes()[old].prediction;
            let new_pred = &tree.nodes()[new].prediction;
            for ((acc, o), n) in self.summed.iter_mut().zip(old_pred).zip(new_pred) {
                *acc += n - o;
            }
        }
        self.state
            .advance_unchecked(tree_index, new);
        self.cursor += 1;
        true
    }

    /// Class the running sum currently favors, in O(n_classes). On exact
    /// ties the incrementally maintained sum can differ from a fresh
    /// summation by a rounding ulp; [`execute`] resolves its final answer
    /// through [`combined_prediction`] instead.
    pub fn prediction(&self) -> usize {
        argmax(&self.summed)
    }

    /// The running summed probability vector (not normalized).
    pub fn probabilities(&self) -> &[f64] {
        &self.summed
    }

    pub fn steps_executed(&self) -> usize {
        self.cursor
    }

    pub fn state(&self) -> &AnytimeState {
        &self.state
    }

    pub fn into_state(self) -> AnytimeState {
        self.state
    }
}

/// Runs the first `abort_after` entries of the order and returns the
/// combined prediction of the reached state together with the state
/// itself. Zero steps give the all-roots prediction; the full order
/// matches complete inference exactly, because the returned class comes
/// from the same tree-order summation [`combined_prediction`] uses.
pub fn execute(
    forest: &Forest,
    order: &StepOrder,
    sample: &[f64],
    abort_after: usize,
) -> Result<(usize, AnytimeState)> {
    if abort_after > order.total_steps() {
        return Err(Error::InvalidOrder(format!(
            "abort_after {abort_after} exceeds the order length {}",
            order.total_steps()
        )));
    }
    let mut executor = Executor::new(forest, order, sample)?;
    for _ in 0..abort_after {
        executor.step();
    }
    let state = executor.into_state();
    let (class, _) = combined_prediction(forest, &state);
    Ok((class, state))
}

/// Runs steps until the deadline is hit, checking once per whole step, and
/// returns the prediction plus the number of completed steps. Completing
/// zero steps is a legal outcome.
pub fn execute_with_budget(
    forest: &Forest,
    order: &StepOrder,
    sample: &[f64],
    budget: Duration,
) -> Result<(usize, usize)> {
    let deadline = Instant::now() + budget;
    let mut executor = Executor::new(forest, order, sample)?;
    while Instant::now() < deadline {
        if !executor.step() {
            break;
        }
    }
    let steps = executor.steps_executed();
    let (class, _) = combined_prediction(forest, executor.state());
    Ok((class, steps))
}

/// [`execute`] over a batch of samples.
pub fn execute_batch(
    forest: &Forest,
    order: &StepOrder,
    samples: &[Vec<f64>],
    abort_after: usize,
) -> Result<Vec<usize>> {
    samples
        .iter()
        .map(|sample| execute(forest, order, sample, abort_after).map(|(class, _)| class))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;
    use crate::forest::full_inference;
    use crate::order::{depth_order, random_order};
    use crate::synth::gaussian_blobs;
    use crate::train::{train_forest, TrainConfig};

    fn setup() -> (Forest, StepOrder, Vec<Vec<f64>>) {
        let data = gaussian_blobs(80, 3, 3, 0.7, 2);
        let forest = train_forest(&data, &TrainConfig::new(5, 4, 12)).unwrap();
        let order = random_order(&forest.budgets(), 5);
        let samples = gaussian_blobs(20, 3, 3, 0.7, 77)
            .features()
            .to_vec();
        (forest, order, samples)
    }

    #[test]
    fn completion_matches_full_inference() {
        let (forest, order, samples) = setup();
        let k = order.total_steps();
        for sample in &samples {
            let (class, _) = execute(&forest, &order, sample, k).unwrap();
            assert_eq!(class, full_inference(&forest, sample).unwrap());
        }
    }

    #[test]
    fn zero_steps_is_root_sum() {
        let (forest, order, samples) = setup();
        let mut roots = vec![0.0; forest.n_classes()];
        for tree in forest.trees() {
            for (acc, p) in roots.iter_mut().zip(&tree.nodes()[0].prediction) {
                *acc += p;
            }
        }
        let expect = argmax(&roots);
        for sample in &samples {
            let (class, state) = execute(&forest, &order, sample, 0).unwrap();
            assert_eq!(class, expect);
            assert_eq!(state, AnytimeState::at_roots(&forest));
        }
    }

    #[test]
    fn prefix_consistency() {
        let (forest, order, samples) = setup();
        let sample = &samples[0];
        let mut previous = execute(&forest, &order, sample, 0).unwrap().1;
        for k in 1..=order.total_steps() {
            let state = execute(&forest, &order, sample, k).unwrap().1;
            let diff: usize = state
                .steps_taken()
                .iter()
                .zip(previous.steps_taken())
                .map(|(a, b)| a - b)
                .sum();
            assert_eq!(diff, 1);
            previous = state;
        }
    }

    #[test]
    fn order_forest_mismatch_rejected() {
        let (forest, _, samples) = setup();
        let other = depth_order(&[0, 1], &[3, 3]).unwrap();
        assert!(matches!(
            execute(&forest, &other, &samples[0], 0),
            Err(Error::OrderMismatch(_))
        ));
    }

    #[test]
    fn abort_past_end_rejected() {
        let (forest, order, samples) = setup();
        let k = order.total_steps();
        assert!(execute(&forest, &order, &samples[0], k + 1).is_err());
    }

    #[test]
    fn generous_budget_saturates() {
        let (forest, order, samples) = setup();
        let (class, steps) =
            execute_with_budget(&forest, &order, &samples[0], Duration::from_secs(5)).unwrap();
        assert_eq!(steps, order.total_steps());
        assert_eq!(class, full_inference(&forest, &samples[0]).unwrap());
    }

    #[test]
    fn zero_budget_executes_nothing_like_roots() {
        let (forest, order, samples) = setup();
        let (class, steps) =
            execute_with_budget(&forest, &order, &samples[0], Duration::ZERO).unwrap();
        assert_eq!(steps, 0);
        let (root_class, _) = execute(&forest, &order, &samples[0], 0).unwrap();
        assert_eq!(class, root_class);
    }

    #[test]
    fn batch_matches_loop() {
        let (forest, order, samples) = setup();
        let k = order.total_steps() / 2;
        let batch = execute_batch(&forest, &order, &samples, k).unwrap();
        for (sample, &class) in samples.iter().zip(&batch) {
            assert_eq!(class, execute(&forest, &order, sample, k).unwrap().0);
        }
        assert!(execute_batch(&forest, &order, &[], k).unwrap().is_empty());
    }

    #[test]
    fn fixture_optimal_path_accuracies() {
        // walking one particular best order and aborting at each prefix
        // reproduces the per-state correct counts 4,7,7,7,7,8,8 of 8
        let forest = fixture::example_forest();
        let ordering = fixture::example_ordering();
        let order = StepOrder::new(vec![1, 0, 0, 2, 2, 1], forest.budgets()).unwrap();
        let expect = [4, 7, 7, 7, 7, 8, 8];
        for (k, &want) in expect.iter().enumerate() {
            let mut correct = 0;
            for (sample, &label) in ordering.features().iter().zip(ordering.labels()) {
                let (class, _) = execute(&forest, &order, sample, k).unwrap();
                if class == label {
                    correct += 1;
                }
            }
            assert_eq!(correct, want, "after {k} steps");
        }
    }
}
