//! Forest model where every node, inner or leaf, carries a class-probability
//! vector, so a prediction can be read off at any point during inference.

use crate::error::{Error, Result};

/// Tolerance for a prediction vector summing to one.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;

/// Split rule of an inner node: go left when `sample[feature] <= threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    pub left: usize,
    pub right: usize,
}

/// A single tree node. Inner nodes carry a [`Split`]; leaves do not.
/// Both kinds store the empirical class distribution of the training
/// samples that reached them, and how many there were.
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub split: Option<Split>,
    pub prediction: Vec<f64>,
    pub sample_count: u64,
}

impl Node {
    pub fn leaf(prediction: Vec<f64>, sample_count: u64) -> Self {
        Node {
            split: None,
            prediction,
            sample_count,
        }
    }

    pub fn inner(split: Split, prediction: Vec<f64>, sample_count: u64) -> Self {
        Node {
            split: Some(split),
            prediction,
            sample_count,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.split.is_none()
    }
}

/// A decision tree stored as a flat node array with node 0 as the root and
/// explicit child indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    nodes: Vec<Node>,
    max_depth_steps: usize,
}

impl Tree {
    /// Validates the node array and computes the depth budget.
    ///
    /// Checks: node 0 is the only root, every other node has exactly one
    /// parent and is reachable from the root, prediction vectors are valid
    /// distributions over `n_classes`, and inner-node sample counts equal
    /// the sum of their children's.
    pub fn new(nodes: Vec<Node>, n_classes: usize) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidModel("tree has no nodes".into()));
        }
        let len = nodes.len();
        let mut parents = vec![0usize; len];
        for (id, node) in nodes.iter().enumerate() {
            if node.prediction.len() != n_classes {
                return Err(Error::InvalidModel(format!(
                    "node {id}: prediction has {} entries, expected {n_classes}",
                    node.prediction.len()
                )));
            }
            let sum: f64 = node.prediction.iter().sum();
            if node.prediction.iter().any(|&p| !p.is_finite() || p < 0.0) {
                return Err(Error::InvalidModel(format!(
                    "node {id}: prediction entries must be finite and nonnegative"
                )));
            }
            if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
                return Err(Error::InvalidModel(format!(
                    "node {id}: prediction sums to {sum}, expected 1"
                )));
            }
            if let Some(split) = &node.split {
                for child in [split.left, split.right] {
                    if child >= len {
                        return Err(Error::InvalidModel(format!(
                            "node {id}: child index {child} out of range"
                        )));
                    }
                    parents[child] += 1;
                }
                if !split.threshold.is_finite() {
                    return Err(Error::InvalidModel(format!(
                        "node {id}: split threshold must be finite"
                    )));
                }
                let child_sum = nodes[split.left]
                    .sample_count
                    .checked_add(nodes[split.right].sample_count);
                if child_sum != Some(node.sample_count) {
                    return Err(Error::InvalidModel(format!(
                        "node {id}: sample count {} does not equal the sum of its children's",
                        node.sample_count
                    )));
                }
            }
        }
        if parents[0] != 0 {
            return Err(Error::InvalidModel("node 0 must be the root".into()));
        }
        if let Some(id) = (1..len).find(|&id| parents[id] != 1) {
            return Err(Error::InvalidModel(format!(
                "node {id} has {} parents, expected exactly one",
                parents[id]
            )));
        }
        // Parent counts alone admit cycles detached from the root; a
        // breadth-first walk establishes reachability and the depth budget.
        let mut depth = vec![usize::MAX; len];
        depth[0] = 0;
        let mut queue = std::collections::VecDeque::from([0usize]);
        let mut seen = 1usize;
        let mut max_depth_steps = 0usize;
        while let Some(id) = queue.pop_front() {
            if let Some(split) = &nodes[id].split {
                for child in [split.left, split.right] {
                    depth[child] = depth[id] + 1;
                    max_depth_steps = max_depth_steps.max(depth[child]);
                    seen += 1;
                    queue.push_back(child);
                }
            }
        }
        if seen != len {
            return Err(Error::InvalidModel(
                "tree contains nodes unreachable from the root".into(),
            ));
        }
        Ok(Tree {
            nodes,
            max_depth_steps,
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> Result<&Node> {
        self.nodes.get(id).ok_or(Error::InvalidNodeIndex {
            node: id,
            len: self.nodes.len(),
        })
    }

    /// Longest root-to-leaf path in edges; the tree's step budget.
    pub fn max_depth_steps(&self) -> usize {
        self.max_depth_steps
    }

    /// Walks the sample all the way down to its leaf.
    pub fn leaf_for(&self, sample: &[f64]) -> Result<usize> {
        let mut id = 0usize;
        loop {
            match &self.nodes[id].split {
                Some(_) => id = tree_step(self, id, sample)?,
                None => return Ok(id),
            }
        }
    }
}

/// A random forest: trees plus the shared class/feature dimensions and the
/// original label values the class indices map back to.
#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    trees: Vec<Tree>,
    n_classes: usize,
    n_features: usize,
    class_labels: Vec<String>,
}

impl Forest {
    pub fn new(
        trees: Vec<Tree>,
        n_classes: usize,
        n_features: usize,
        class_labels: Vec<String>,
    ) -> Result<Self> {
        if trees.is_empty() {
            return Err(Error::InvalidModel("forest has no trees".into()));
        }
        if n_classes == 0 {
            return Err(Error::InvalidModel("forest has no classes".into()));
        }
        if class_labels.len() != n_classes {
            return Err(Error::InvalidModel(format!(
                "{} class labels for {n_classes} classes",
                class_labels.len()
            )));
        }
        for (ti, tree) in trees.iter().enumerate() {
            for (ni, node) in tree.nodes().iter().enumerate() {
                if node.prediction.len() != n_classes {
                    return Err(Error::InvalidModel(format!(
                        "tree {ti} node {ni}: wrong prediction length"
                    )));
                }
                if let Some(split) = &node.split {
                    if split.feature >= n_features {
                        return Err(Error::InvalidModel(format!(
                            "tree {ti} node {ni}: feature index {} out of range",
                            split.feature
                        )));
                    }
                }
            }
        }
        Ok(Forest {
            trees,
            n_classes,
            n_features,
            class_labels,
        })
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn class_labels(&self) -> &[String] {
        &self.class_labels
    }

    /// Per-tree step budget: each tree's own depth.
    pub fn budgets(&self) -> Vec<usize> {
        self.trees.iter().map(Tree::max_depth_steps).collect()
    }

    /// Total number of steps K across all trees.
    pub fn total_steps(&self) -> usize {
        self.trees.iter().map(Tree::max_depth_steps).sum()
    }

    fn check_sample(&self, sample: &[f64]) -> Result<()> {
        if sample.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: sample.len(),
            });
        }
        Ok(())
    }
}

/// Per-inference cursor: the current node in every tree and how many steps
/// each tree has been commanded so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnytimeState {
    node_index: Vec<usize>,
    steps_taken: Vec<usize>,
}

impl AnytimeState {
    /// All trees at their roots, zero steps taken.
    pub fn at_roots(forest: &Forest) -> Self {
        let t = forest.n_trees();
        AnytimeState {
            node_index: vec![0; t],
            steps_taken: vec![0; t],
        }
    }

    pub fn node_index(&self) -> &[usize] {
        &self.node_index
    }

    pub fn steps_taken(&self) -> &[usize] {
        &self.steps_taken
    }

    /// Advances one tree by one step. Stepping a tree already at a leaf is
    /// a no-op on the node but still counts against the step tally, so a
    /// fixed step budget can always be consumed in full.
    pub fn advance(&mut self, forest: &Forest, tree: usize, sample: &[f64]) -> Result<()> {
        forest.check_sample(sample)?;
        let t = &forest.trees()[tree];
        if self.steps_taken[tree] >= t.max_depth_steps() {
            return Err(Error::InvalidOrder(format!(
                "tree {tree} already exhausted its budget of {}",
                t.max_depth_steps()
            )));
        }
        self.node_index[tree] = tree_step(t, self.node_index[tree], sample)?;
        self.steps_taken[tree] += 1;
        Ok(())
    }

    /// Records a step already taken by the executor, which has validated
    /// the order against the forest up front.
    pub(crate) fn advance_unchecked(&mut self, tree: usize, node: usize) {
        self.node_index[tree] = node;
        self.steps_taken[tree] += 1;
    }
}

/// One execution step: evaluates the split at `node_id` and returns the
/// child the sample moves to. Left when the feature value is less than or
/// equal to the threshold. On a leaf the step is a no-op and the same
/// index comes back.
pub fn tree_step(tree: &Tree, node_id: usize, sample: &[f64]) -> Result<usize> {
    let node = tree.node(node_id)?;
    match &node.split {
        None => Ok(node_id),
        Some(split) => {
            let value = sample.get(split.feature).ok_or(Error::DimensionMismatch {
                expected: split.feature + 1,
                got: sample.len(),
            })?;
            if *value <= split.threshold {
                Ok(split.left)
            } else {
                Ok(split.right)
            }
        }
    }
}

/// Index of the largest entry; ties go to the lowest class index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Prediction of a partially executed forest: the element-wise sum of the
/// prediction vectors at each tree's current node, and its argmax class.
pub fn combined_prediction(forest: &Forest, state: &AnytimeState) -> (usize, Vec<f64>) {
    let mut summed = vec![0.0; forest.n_classes()];
    for (tree, &node) in forest.trees().iter().zip(state.node_index()) {
        for (acc, p) in summed.iter_mut().zip(&tree.nodes()[node].prediction) {
            *acc += p;
        }
    }
    (argmax(&summed), summed)
}

/// Complete inference: every tree runs to its leaf, leaf vectors are
/// summed, highest class wins.
pub fn full_inference(forest: &Forest, sample: &[f64]) -> Result<usize> {
    forest.check_sample(sample)?;
    let mut summed = vec![0.0; forest.n_classes()];
    for tree in forest.trees() {
        let leaf = tree.leaf_for(sample)?;
        for (acc, p) in summed.iter_mut().zip(&tree.nodes()[leaf].prediction) {
            *acc += p;
        }
    }
    Ok(argmax(&summed))
}
