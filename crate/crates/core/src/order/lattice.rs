//! Exact best- and worst-mean-accuracy step orders via shortest-path search
//! over the step-counter lattice.
//!
//! States are the per-tree step counters; every edge advances one tree by
//! one step and is weighted by the number of ordering samples the target
//! state gets wrong (or right, for the worst order). All complete paths
//! have the same length, so minimizing the summed miss count over visited
//! states maximizes the mean accuracy. Weights are integers, which keeps
//! the search exact.
//!
//! The lattice has `prod(budget_i + 1)` states and is only materialized as
//! it is reached; a configurable cap refuses oversized searches up front
//! instead of thrashing.

use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::forest::Forest;
use crate::order::routing::{precompute_routing, RoutingTable};
use crate::order::StepOrder;

/// Default refusal threshold on the state count.
pub const DEFAULT_LATTICE_CAP: u64 = 50_000_000;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Goal {
    Maximize,
    Minimize,
}

/// Step order with the highest mean accuracy on the ordering set.
pub fn optimal_order(forest: &Forest, ordering: &Dataset, lattice_cap: u64) -> Result<StepOrder> {
    let routing = precompute_routing(forest, ordering)?;
    optimal_order_routed(&routing, ordering.labels(), lattice_cap)
}

/// Step order with the lowest mean accuracy on the ordering set.
pub fn unoptimal_order(forest: &Forest, ordering: &Dataset, lattice_cap: u64) -> Result<StepOrder> {
    let routing = precompute_routing(forest, ordering)?;
    unoptimal_order_routed(&routing, ordering.labels(), lattice_cap)
}

/// [`optimal_order`] on a prebuilt routing table.
pub fn optimal_order_routed(
    routing: &RoutingTable,
    labels: &[usize],
    lattice_cap: u64,
) -> Result<StepOrder> {
    search(routing, labels, lattice_cap, Goal::Maximize)
}

/// [`unoptimal_order`] on a prebuilt routing table.
pub fn unoptimal_order_routed(
    routing: &RoutingTable,
    labels: &[usize],
    lattice_cap: u64,
) -> Result<StepOrder> {
    search(routing, labels, lattice_cap, Goal::Minimize)
}

/// Number of lattice states, if it fits in a u128.
fn state_count(budgets: &[usize]) -> Option<u128> {
    budgets
        .iter()
        .try_fold(1u128, |acc, &b| acc.checked_mul(b as u128 + 1))
}

struct StateInfo {
    distance: u64,
    /// miss count (or hit count when minimizing) of this state, cached so
    /// each state is scored once no matter how many edges lead into it
    weight: u32,
    prev: u64,
    step_tree: u32,
    settled: bool,
}

fn search(
    routing: &RoutingTable,
    labels: &[usize],
    lattice_cap: u64,
    goal: Goal,
) -> Result<StepOrder> {
    let budgets = routing.budgets().to_vec();
    let states = state_count(&budgets).unwrap_or(u128::MAX);
    if states > lattice_cap as u128 {
        return Err(Error::LatticeCapExceeded {
            states,
            cap: lattice_cap,
        });
    }
    let n_trees = budgets.len();
    let n_samples = routing.n_samples();
    // mixed-radix encoding: counter of tree i scaled by stride i
    let mut strides = vec![1u64; n_trees];
    for i in 1..n_trees {
        strides[i] = strides[i - 1] * (budgets[i - 1] as u64 + 1);
    }
    let final_state: u64 = budgets
        .iter()
        .zip(&strides)
        .map(|(&b, &s)| b as u64 * s)
        .sum();

    let weight_of = |counters: &[usize]| -> u32 {
        let correct = routing.correct_count(labels, counters) as u32;
        match goal {
            Goal::Maximize => n_samples as u32 - correct,
            Goal::Minimize => correct,
        }
    };

    let mut info: HashMap<u64, StateInfo> = HashMap::new();
    info.insert(
        0,
        StateInfo {
            distance: 0,
            weight: 0, // the start state is common to all paths
            prev: 0,
            step_tree: u32::MAX,
            settled: false,
        },
    );
    let mut heap: BinaryHeap<Reverse<(u64, u64)>> = BinaryHeap::new();
    heap.push(Reverse((0, 0)));
    let mut counters = vec![0usize; n_trees];
    let mut next_counters = vec![0usize; n_trees];

    while let Some(Reverse((distance, state))) = heap.pop() {
        {
            let entry = info.get_mut(&state).expect("popped state was inserted");
            if entry.settled {
                continue;
            }
            entry.settled = true;
        }
        if state == final_state {
            return reconstruct(&info, state, &budgets);
        }
        decode(state, &strides, &budgets, &mut counters);
        for tree in 0..n_trees {
            if counters[tree] >= budgets[tree] {
                continue;
            }
            let next = state + strides[tree];
            next_counters.copy_from_slice(&counters);
            next_counters[tree] += 1;
            let (weight, skip) = match info.entry(next) {
                Entry::Occupied(e) => {
                    let e = e.get();
                    (e.weight, e.settled)
                }
                Entry::Vacant(_) => (weight_of(&next_counters), false),
            };
            if skip {
                continue;
            }
            let candidate = distance + weight as u64;
            match info.entry(next) {
                Entry::Occupied(mut e) => {
                    let e = e.get_mut();
                    if candidate < e.distance {
                        e.distance = candidate;
                        e.prev = state;
                        e.step_tree = tree as u32;
                        heap.push(Reverse((candidate, next)));
                    }
                }
                Entry::Vacant(e) => {
                    e.insert(StateInfo {
                        distance: candidate,
                        weight,
                        prev: state,
                        step_tree: tree as u32,
                        settled: false,
                    });
                    heap.push(Reverse((candidate, next)));
                }
            }
        }
    }
    unreachable!("the final lattice state is always reachable")
}

fn decode(state: u64, strides: &[u64], budgets: &[usize], out: &mut [usize]) {
    for (i, (&stride, &budget)) in strides.iter().zip(budgets).enumerate() {
        out[i] = ((state / stride) % (budget as u64 + 1)) as usize;
    }
}

fn reconstruct(info: &HashMap<u64, StateInfo>, last: u64, budgets: &[usize]) -> Result<StepOrder> {
    let mut steps = Vec::new();
    let mut state = last;
    while state != 0 {
        let entry = &info[&state];
        steps.push(entry.step_tree as usize);
        state = entry.prev;
    }
    steps.reverse();
    StepOrder::new(steps, budgets.to_vec())
}
