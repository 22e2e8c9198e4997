//! Exhaustive enumeration of every distinct step order for small budgets.
//!
//! With budgets `b_i` and `K = sum b_i` there are `K! / prod(b_i!)`
//! distinct orders; the iterator walks them in lexicographic sequence via
//! repeated next-permutation, which visits each multiset permutation
//! exactly once.

use crate::error::{Error, Result};
use crate::order::StepOrder;

/// Refuse to enumerate more orders than this.
pub const ENUMERATION_GUARD: u64 = 1_000_000;

/// `K! / prod(b_i!)`, or `None` on u128 overflow. Computed as a product of
/// binomial coefficients, so every intermediate value is an exact integer.
pub fn order_count(budgets: &[usize]) -> Option<u128> {
    let mut remaining: usize = budgets.iter().sum();
    let mut count: u128 = 1;
    for &b in budgets {
        count = count.checked_mul(binomial(remaining, b)?)?;
        remaining -= b;
    }
    Some(count)
}

fn binomial(n: usize, k: usize) -> Option<u128> {
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 1..=k {
        result = result.checked_mul((n - k + i) as u128)?;
        result /= i as u128; // divides exactly: result is C(n-k+i, i) * i! / i!
    }
    Some(result)
}

/// Iterator over all distinct step orders for the given budgets.
#[derive(Debug)]
pub struct OrderEnumeration {
    budgets: Vec<usize>,
    current: Option<Vec<usize>>,
}

/// Starts the enumeration, refusing when the order count exceeds
/// [`ENUMERATION_GUARD`].
pub fn enumerate_all_orders(budgets: &[usize]) -> Result<OrderEnumeration> {
    let count = order_count(budgets).unwrap_or(u128::MAX);
    if count > ENUMERATION_GUARD as u128 {
        return Err(Error::EnumerationTooLarge {
            count,
            guard: ENUMERATION_GUARD,
        });
    }
    let mut first: Vec<usize> = Vec::with_capacity(budgets.iter().sum());
    for (tree, &b) in budgets.iter().enumerate() {
        first.extend(std::iter::repeat_n(tree, b));
    }
    Ok(OrderEnumeration {
        budgets: budgets.to_vec(),
        current: Some(first),
    })
}

impl Iterator for OrderEnumeration {
    type Item = StepOrder;

    fn next(&mut self) -> Option<StepOrder> {
        let current = self.current.as_mut()?;
        let order = StepOrder {
            steps: current.clone(),
            budgets: self.budgets.clone(),
        };
        if !next_permutation(current) {
            self.current = None;
        }
        Some(order)
    }
}

/// In-place lexicographic successor; false when `values` was the last
/// (non-increasing) permutation.
fn next_permutation(values: &mut [usize]) -> bool {
    if values.len() < 2 {
        return false;
    }
    let Some(pivot) = (0..values.len() - 1).rev().find(|&i| values[i] < values[i + 1]) else {
        return false;
    };
    let successor = (pivot + 1..values.len())
        .rev()
        .find(|&j| values[j] > values[pivot])
        .expect("pivot has a successor by construction");
    values.swap(pivot, successor);
    values[pivot + 1..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn count_matches_formula() {
        assert_eq!(order_count(&[2, 2, 2]), Some(90)); // 6! / 2!^3
        assert_eq!(order_count(&[1, 1, 1]), Some(6));
        assert_eq!(order_count(&[3]), Some(1));
        assert_eq!(order_count(&[]), Some(1));
    }

    #[test]
    fn enumerates_90_distinct_orders() {
        let orders: Vec<_> = enumerate_all_orders(&[2, 2, 2]).unwrap().collect();
        assert_eq!(orders.len(), 90);
        let distinct: HashSet<Vec<usize>> =
            orders.iter().map(|o| o.steps().to_vec()).collect();
        assert_eq!(distinct.len(), 90);
        for order in &orders {
            StepOrder::new(order.steps().to_vec(), order.budgets().to_vec()).unwrap();
        }
    }

    #[test]
    fn single_tree_yields_one_order() {
        let orders: Vec<_> = enumerate_all_orders(&[4]).unwrap().collect();
        assert_eq!(orders.len(), 1);
        assert_eq!(orders[0].steps(), &[0, 0, 0, 0]);
    }

    #[test]
    fn depth_one_yields_factorial_many() {
        let orders: Vec<_> = enumerate_all_orders(&[1, 1, 1]).unwrap().collect();
        assert_eq!(orders.len(), 6);
    }

    #[test]
    fn guard_refuses_large_spaces() {
        // budgets of 8 across 8 trees: 64!/8!^8 is astronomically large
        let err = enumerate_all_orders(&[8; 8]).unwrap_err();
        assert!(matches!(err, Error::EnumerationTooLarge { .. }));
    }
}
