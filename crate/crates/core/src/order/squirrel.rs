//! Greedy one-step-lookahead order generation.
//!
//! Instead of searching the whole lattice, a squirrel walk only ever scores
//! the up-to-`t` neighbor states of where it stands, so nothing is
//! materialized and generation is polynomial. The forward walk climbs from
//! the all-roots state picking the best successor; the backward walk
//! descends from the all-leaves state picking the best predecessor, which
//! defers the most valuable step to the end.

use crate::dataset::Dataset;
use crate::error::Result;
use crate::forest::Forest;
use crate::order::routing::{precompute_routing, RoutingTable};
use crate::order::StepOrder;

/// A generated order plus how many candidate states were scored along the
/// way; the count is `sum over steps of the non-exhausted tree count`,
/// bounded by `d * t^2`.
#[derive(Debug, Clone)]
pub struct SquirrelRun {
    pub order: StepOrder,
    pub evaluations: usize,
}

pub fn forward_squirrel(forest: &Forest, ordering: &Dataset) -> Result<StepOrder> {
    let routing = precompute_routing(forest, ordering)?;
    Ok(forward_squirrel_routed(&routing, ordering.labels()).order)
}

pub fn backward_squirrel(forest: &Forest, ordering: &Dataset) -> Result<StepOrder> {
    let routing = precompute_routing(forest, ordering)?;
    Ok(backward_squirrel_routed(&routing, ordering.labels()).order)
}

/// Greedy walk from all-zeros to all-budgets. Each round scores every
/// state reachable by advancing one non-exhausted tree and moves to the
/// one with the most correct samples; ties go to the lowest tree index.
pub fn forward_squirrel_routed(routing: &RoutingTable, labels: &[usize]) -> SquirrelRun {
    let budgets = routing.budgets().to_vec();
    let total: usize = budgets.iter().sum();
    let mut counters = vec![0usize; budgets.len()];
    let mut steps = Vec::with_capacity(total);
    let mut evaluations = 0usize;
    for _ in 0..total {
        let mut best: Option<(usize, usize)> = None; // (correct, tree)
        for tree in 0..budgets.len() {
            if counters[tree] >= budgets[tree] {
                continue;
            }
            counters[tree] += 1;
            let correct = routing.correct_count(labels, &counters);
            counters[tree] -= 1;
            evaluations += 1;
            if best.is_none_or(|(c, _)| correct > c) {
                best = Some((correct, tree));
            }
        }
        let (_, tree) = best.expect("some tree is below budget until all steps are spent");
        counters[tree] += 1;
        steps.push(tree);
    }
    SquirrelRun {
        order: StepOrder {
            steps,
            budgets,
        },
        evaluations,
    }
}

/// Greedy walk from all-budgets back to all-zeros, scoring the states one
/// step back and retreating into the best one; ties go to the lowest tree
/// index. The visited trees, reversed, form the step order.
pub fn backward_squirrel_routed(routing: &RoutingTable, labels: &[usize]) -> SquirrelRun {
    let budgets = routing.budgets().to_vec();
    let total: usize = budgets.iter().sum();
    let mut counters = budgets.clone();
    let mut steps_reversed = Vec::with_capacity(total);
    let mut evaluations = 0usize;
    for _ in 0..total {
        let mut best: Option<(usize, usize)> = None;
        for tree in 0..budgets.len() {
            if counters[tree] == 0 {
                continue;
            }
            counters[tree] -= 1;
            let correct = routing.correct_count(labels, &counters);
            counters[tree] += 1;
            evaluations += 1;
            if best.is_none_or(|(c, _)| correct > c) {
                best = Some((correct, tree));
            }
        }
        let (_, tree) = best.expect("some tree has steps left until the walk reaches the start");
        counters[tree] -= 1;
        steps_reversed.push(tree);
    }
    steps_reversed.reverse();
    SquirrelRun {
        order: StepOrder {
            steps: steps_reversed,
            budgets,
        },
        evaluations,
    }
}
