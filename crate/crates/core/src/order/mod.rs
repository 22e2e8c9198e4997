//! Step orders: global schedules assigning every execution step to a tree.
//!
//! A step order for budgets `b_0..b_{t-1}` is a sequence of tree indices in
//! which tree `i` appears exactly `b_i` times; its length is `K = sum b_i`.
//! Generators range from the exact lattice search ([`optimal_order`]) over
//! the greedy squirrel heuristics to tree-sequence traversals and a random
//! baseline.

mod enumerate;
mod kind;
mod lattice;
mod routing;
mod sequence;
mod squirrel;

pub use enumerate::{enumerate_all_orders, order_count, OrderEnumeration, ENUMERATION_GUARD};
pub use kind::OrderKind;
pub use lattice::{
    optimal_order, optimal_order_routed, unoptimal_order, unoptimal_order_routed,
    DEFAULT_LATTICE_CAP,
};
pub use routing::{
    mean_accuracy, precompute_routing, state_accuracy, LatticeState, RoutingTable,
};
pub use sequence::{
    sequence_drep, sequence_drep_weighted, sequence_error_ambiguity,
    sequence_error_ambiguity_weighted, sequence_individual_error, sequence_qwyc,
    sequence_reduced_error, AMBIGUITY_WEIGHT, DREP_WEIGHT,
};
pub use squirrel::{
    backward_squirrel, backward_squirrel_routed, forward_squirrel, forward_squirrel_routed,
    SquirrelRun,
};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A complete execution schedule over a forest's step budgets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOrder {
    steps: Vec<usize>,
    budgets: Vec<usize>,
}

impl StepOrder {
    /// Validates the multiset invariant: tree `i` occurs exactly
    /// `budgets[i]` times.
    pub fn new(steps: Vec<usize>, budgets: Vec<usize>) -> Result<Self> {
        let mut seen = vec![0usize; budgets.len()];
        for &tree in &steps {
            if tree >= budgets.len() {
                return Err(Error::InvalidOrder(format!(
                    "tree index {tree} out of range for {} trees",
                    budgets.len()
                )));
            }
            seen[tree] += 1;
        }
        if seen != budgets {
            return Err(Error::InvalidOrder(format!(
                "step counts per tree {seen:?} do not match budgets {budgets:?}"
            )));
        }
        Ok(StepOrder { steps, budgets })
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn budgets(&self) -> &[usize] {
        &self.budgets
    }

    /// Total number of steps K.
    pub fn total_steps(&self) -> usize {
        self.steps.len()
    }

    pub fn n_trees(&self) -> usize {
        self.budgets.len()
    }

    /// Plain-text encoding: one `budgets:` line, one `steps:` line.
    pub fn to_text(&self) -> String {
        let budgets = join_spaced(&self.budgets);
        let steps = join_spaced(&self.steps);
        format!("budgets: {budgets}\nsteps: {steps}\n")
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut budgets = None;
        let mut steps = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("budgets:") {
                budgets = Some(parse_spaced(rest)?);
            } else if let Some(rest) = line.strip_prefix("steps:") {
                steps = Some(parse_spaced(rest)?);
            } else {
                return Err(Error::InvalidOrder(format!(
                    "unrecognized order file line {line:?}"
                )));
            }
        }
        match (steps, budgets) {
            (Some(steps), Some(budgets)) => StepOrder::new(steps, budgets),
            _ => Err(Error::InvalidOrder(
                "order file needs a budgets line and a steps line".into(),
            )),
        }
    }
}

fn join_spaced(values: &[usize]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_spaced(text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::InvalidOrder(format!("bad integer {tok:?} in order file")))
        })
        .collect()
}

fn check_sequence(sequence: &[usize], n_trees: usize) -> Result<()> {
    let mut seen = vec![false; n_trees];
    if sequence.len() != n_trees {
        return Err(Error::InvalidOrder(format!(
            "tree sequence has {} entries for {n_trees} trees",
            sequence.len()
        )));
    }
    for &tree in sequence {
        if tree >= n_trees || seen[tree] {
            return Err(Error::InvalidOrder(
                "tree sequence must be a permutation of the tree indices".into(),
            ));
        }
        seen[tree] = true;
    }
    Ok(())
}

/// Tree-at-a-time: runs each tree of the sequence down to its full budget
/// before moving on.
pub fn depth_order(sequence: &[usize], budgets: &[usize]) -> Result<StepOrder> {
    check_sequence(sequence, budgets.len())?;
    let mut steps = Vec::with_capacity(budgets.iter().sum());
    for &tree in sequence {
        steps.extend(std::iter::repeat_n(tree, budgets[tree]));
    }
    StepOrder::new(steps, budgets.to_vec())
}

/// Layer-at-a-time: one step in every tree of the sequence, then the next
/// layer; trees whose budget is exhausted drop out of later layers.
pub fn breadth_order(sequence: &[usize], budgets: &[usize]) -> Result<StepOrder> {
    check_sequence(sequence, budgets.len())?;
    let mut steps = Vec::with_capacity(budgets.iter().sum());
    let max_budget = budgets.iter().copied().max().unwrap_or(0);
    for layer in 0..max_budget {
        for &tree in sequence {
            if layer < budgets[tree] {
                steps.push(tree);
            }
        }
    }
    StepOrder::new(steps, budgets.to_vec())
}

/// Seeded uniform shuffle of the step multiset.
pub fn random_order(budgets: &[usize], seed: u64) -> StepOrder {
    let mut steps: Vec<usize> = budgets
        .iter()
        .enumerate()
        .flat_map(|(tree, &b)| std::iter::repeat_n(tree, b))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    steps.shuffle(&mut rng);
    StepOrder {
        steps,
        budgets: budgets.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_order_concatenates() {
        let order = depth_order(&[2, 0, 1], &[2, 2, 2]).unwrap();
        assert_eq!(order.steps(), &[2, 2, 0, 0, 1, 1]);
    }

    #[test]
    fn depth_order_single_tree() {
        let order = depth_order(&[0], &[2]).unwrap();
        assert_eq!(order.steps(), &[0, 0]);
    }

    #[test]
    fn breadth_order_round_robins() {
        let order = breadth_order(&[0, 1, 2], &[2, 2, 2]).unwrap();
        assert_eq!(order.steps(), &[0, 1, 2, 0, 1, 2]);
    }

    #[test]
    fn breadth_order_skips_exhausted() {
        let order = breadth_order(&[0, 1], &[2, 1]).unwrap();
        assert_eq!(order.steps(), &[0, 1, 0]);
    }

    #[test]
    fn random_order_deterministic_and_valid() {
        let a = random_order(&[3, 1, 2], 9);
        let b = random_order(&[3, 1, 2], 9);
        assert_eq!(a, b);
        assert_eq!(a.total_steps(), 6);
        StepOrder::new(a.steps().to_vec(), a.budgets().to_vec()).unwrap();
    }

    #[test]
    fn random_order_is_uniform_over_the_90_orders() {
        // chi-square over the 90 distinct orders for budgets (2,2,2) at
        // 10^5 seeded draws; 140 clears the 89-dof 99.9% quantile (~135)
        // and the statistic is deterministic for fixed seeds
        use std::collections::HashMap;
        let draws = 100_000u64;
        let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
        for seed in 0..draws {
            *counts
                .entry(random_order(&[2, 2, 2], seed).steps().to_vec())
                .or_default() += 1;
        }
        assert_eq!(counts.len(), 90);
        let expected = draws as f64 / 90.0;
        let statistic: f64 = counts
            .values()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        assert!(statistic < 140.0, "chi-square statistic {statistic}");
    }

    #[test]
    fn multiset_violations_rejected() {
        assert!(StepOrder::new(vec![0, 0, 1], vec![2, 2]).is_err());
        assert!(StepOrder::new(vec![0, 0, 5], vec![2, 1]).is_err());
        assert!(StepOrder::new(vec![], vec![0, 0]).is_ok());
    }

    #[test]
    fn text_round_trip() {
        let order = depth_order(&[1, 0], &[2, 3]).unwrap();
        let text = order.to_text();
        assert_eq!(text, "budgets: 2 3\nsteps: 1 1 1 0 0\n");
        assert_eq!(StepOrder::from_text(&text).unwrap(), order);
        // empty order round-trips too
        let empty = StepOrder::new(vec![], vec![0]).unwrap();
        assert_eq!(StepOrder::from_text(&empty.to_text()).unwrap(), empty);
    }

    #[test]
    fn bad_sequences_rejected() {
        assert!(depth_order(&[0, 0], &[1, 1]).is_err());
        assert!(depth_order(&[0], &[1, 1]).is_err());
        assert!(breadth_order(&[0, 2], &[1, 1]).is_err());
    }
}
