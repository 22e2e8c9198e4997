//! A small hand-built forest with a known lattice: three depth-2 trees and
//! eight labeled samples, four per class. Every state accuracy is known
//! exactly, the best achievable mean accuracy is 48/56 = 6/7, and the
//! greedy walks take known first and last steps, which makes this the
//! reference workload for tests and the demo.
//!
//! Construction: sample `i` routes through tree `j` purely via feature `j`,
//! and the node memberships below pin every prediction vector. Classes:
//! samples 0..4 are class 0, samples 4..8 are class 1.
//!
//! ```text
//! tree 0 (feature 0): {4,5} vs {0,1,2,3,6,7}; then {4}|{5} and {6}|{0,1,2,3,7}
//! tree 1 (feature 1): {0,4,5,6,7} vs {1,2,3}; then {4}|{0,5,6,7} and {1}|{2,3}
//! tree 2 (feature 2): {0,1,4,5} vs {2,3,6,7}; then {0,4}|{1,5} and {6,7}|{2,3}
//! ```

use crate::dataset::Dataset;
use crate::forest::{Forest, Node, Split, Tree};

fn node(
    members: &[usize],
    split: Option<(usize, f64, usize, usize)>,
) -> Node {
    let labels = [0usize, 0, 0, 0, 1, 1, 1, 1];
    let count = members.len() as u64;
    let class0 = members.iter().filter(|&&s| labels[s] == 0).count() as f64;
    let prediction = vec![class0 / count as f64, (count as f64 - class0) / count as f64];
    match split {
        None => Node::leaf(prediction, count),
        Some((feature, threshold, left, right)) => Node::inner(
            Split {
                feature,
                threshold,
                left,
                right,
            },
            prediction,
            count,
        ),
    }
}

/// The three-tree example forest. Node layout per tree: 0 root, 1 left,
/// 2/3 its children, 4 right, 5/6 its children.
pub fn example_forest() -> Forest {
    let all: Vec<usize> = (0..8).collect();
    let tree0 = Tree::new(
        vec![
            node(&all, Some((0, 2.5, 1, 4))),
            node(&[4, 5], Some((0, 1.5, 2, 3))),
            node(&[4], None),
            node(&[5], None),
            node(&[0, 1, 2, 3, 6, 7], Some((0, 3.5, 5, 6))),
            node(&[6], None),
            node(&[0, 1, 2, 3, 7], None),
        ],
        2,
    )
    .expect("example tree 0 is well formed");
    let tree1 = Tree::new(
        vec![
            node(&all, Some((1, 5.5, 1, 4))),
            node(&[0, 4, 5, 6, 7], Some((1, 1.5, 2, 3))),
            node(&[4], None),
            node(&[0, 5, 6, 7], None),
            node(&[1, 2, 3], Some((1, 6.5, 5, 6))),
            node(&[1], None),
            node(&[2, 3], None),
        ],
        2,
    )
    .expect("example tree 1 is well formed");
    let tree2 = Tree::new(
        vec![
            node(&all, Some((2, 4.5, 1, 4))),
            node(&[0, 1, 4, 5], Some((2, 2.5, 2, 3))),
            node(&[0, 4], None),
            node(&[1, 5], None),
            node(&[2, 3, 6, 7], Some((2, 6.5, 5, 6))),
            node(&[6, 7], None),
            node(&[2, 3], None),
        ],
        2,
    )
    .expect("example tree 2 is well formed");
    Forest::new(
        vec![tree0, tree1, tree2],
        2,
        3,
        vec!["1".into(), "2".into()],
    )
    .expect("example forest is well formed")
}

/// The eight ordering samples the example forest's lattice is scored on.
pub fn example_ordering() -> Dataset {
    let features = vec![
        vec![4.0, 2.0, 1.0],
        vec![5.0, 6.0, 3.0],
        vec![6.0, 7.0, 7.0],
        vec![7.0, 8.0, 8.0],
        vec![1.0, 1.0, 2.0],
        vec![2.0, 3.0, 4.0],
        vec![3.0, 4.0, 5.0],
        vec![8.0, 5.0, 6.0],
    ];
    let labels = vec![0, 0, 0, 0, 1, 1, 1, 1];
    Dataset::new(features, labels, vec!["1".into(), "2".into()])
        .expect("example samples are well formed")
}

/// Correct counts (of 8) for all 27 lattice states of the example forest,
/// keyed by the per-tree step counters.
pub fn example_state_counts() -> Vec<(Vec<usize>, usize)> {
    vec![
        (vec![0, 0, 0], 4),
        (vec![0, 0, 1], 4),
        (vec![0, 1, 0], 7),
        (vec![1, 0, 0], 6),
        (vec![0, 0, 2], 6),
        (vec![0, 1, 1], 7),
        (vec![0, 2, 0], 7),
        (vec![1, 0, 1], 6),
        (vec![1, 1, 0], 7),
        (vec![2, 0, 0], 7),
        (vec![0, 1, 2], 7),
        (vec![0, 2, 1], 7),
        (vec![1, 0, 2], 8),
        (vec![1, 1, 1], 7),
        (vec![1, 2, 0], 7),
        (vec![2, 0, 1], 7),
        (vec![2, 1, 0], 7),
        (vec![0, 2, 2], 7),
        (vec![1, 1, 2], 7),
        (vec![1, 2, 1], 7),
        (vec![2, 0, 2], 8),
        (vec![2, 1, 1], 7),
        (vec![2, 2, 0], 7),
        (vec![1, 2, 2], 7),
        (vec![2, 1, 2], 8),
        (vec![2, 2, 1], 7),
        (vec![2, 2, 2], 8),
    ]
}
