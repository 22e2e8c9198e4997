//! Tree sequencing for depth/breadth traversal, adapted from ensemble
//! ranking and pruning ideas. All trees are kept; only the visit sequence
//! is derived. Scores are computed on the ordering set with fully
//! evaluated trees (leaf predictions).

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::forest::{argmax, Forest};

/// Diversity weight in the error-ambiguity score.
pub const AMBIGUITY_WEIGHT: f64 = 0.5;
/// Diversity weight in the drep score.
pub const DREP_WEIGHT: f64 = 0.5;

/// Leaf prediction vectors and argmax classes for every tree and sample,
/// plus the full-ensemble prediction.
struct LeafTable {
    n_trees: usize,
    n_samples: usize,
    n_classes: usize,
    /// `vectors[tree]` is row-major `n_samples x n_classes`
    vectors: Vec<Vec<f64>>,
    /// per-tree argmax class per sample
    classes: Vec<Vec<usize>>,
    /// full-forest prediction per sample
    ensemble: Vec<usize>,
}

impl LeafTable {
    fn build(forest: &Forest, ordering: &Dataset) -> Result<LeafTable> {
        if ordering.is_empty() {
            return Err(Error::EmptyOrderingSet);
        }
        let n = ordering.len();
        let c = forest.n_classes();
        let mut vectors = Vec::with_capacity(forest.n_trees());
        let mut classes = Vec::with_capacity(forest.n_trees());
        for tree in forest.trees() {
            let mut rows = vec![0.0f64; n * c];
            let mut cls = vec![0usize; n];
            for (s, features) in ordering.features().iter().enumerate() {
                let leaf = tree.leaf_for(features)?;
                let prediction = &tree.nodes()[leaf].prediction;
                rows[s * c..(s + 1) * c].copy_from_slice(prediction);
                cls[s] = argmax(prediction);
            }
            vectors.push(rows);
            classes.push(cls);
        }
        let mut ensemble = vec![0usize; n];
        let mut summed = vec![0.0f64; c];
        for s in 0..n {
            summed.fill(0.0);
            for rows in &vectors {
                for (acc, p) in summed.iter_mut().zip(&rows[s * c..(s + 1) * c]) {
                    *acc += p;
                }
            }
            ensemble[s] = argmax(&summed);
        }
        Ok(LeafTable {
            n_trees: forest.n_trees(),
            n_samples: n,
            n_classes: c,
            vectors,
            classes,
            ensemble,
        })
    }

    fn tree_accuracy(&self, tree: usize, labels: &[usize]) -> f64 {
        let hits = self.classes[tree]
            .iter()
            .zip(labels)
            .filter(|(p, l)| p == l)
            .count();
        hits as f64 / self.n_samples as f64
    }

    fn tree_error(&self, tree: usize, labels: &[usize]) -> f64 {
        let misses = self.classes[tree]
            .iter()
            .zip(labels)
            .filter(|(p, l)| p != l)
            .count();
        misses as f64 / self.n_samples as f64
    }

    /// Fraction of samples where the tree disagrees with `reference`.
    fn disagreement(&self, tree: usize, reference: &[usize]) -> f64 {
        let differs = self.classes[tree]
            .iter()
            .zip(reference)
            .filter(|(p, r)| p != r)
            .count();
        differs as f64 / self.n_samples as f64
    }
}

/// Sorts trees by stand-alone accuracy on the ordering set, best first;
/// ties keep the lower tree index.
pub fn sequence_individual_error(forest: &Forest, ordering: &Dataset) -> Result<Vec<usize>> {
    let table = LeafTable::build(forest, ordering)?;
    Ok(rank_by_score(
        (0..table.n_trees)
            .map(|t| table.tree_accuracy(t, ordering.labels()))
            .collect(),
    ))
}

/// Individual-error ranking with a diversity bonus: score = accuracy +
/// weight * disagreement with the full-ensemble prediction.
pub fn sequence_error_ambiguity(forest: &Forest, ordering: &Dataset) -> Result<Vec<usize>> {
    sequence_error_ambiguity_weighted(forest, ordering, AMBIGUITY_WEIGHT)
}

pub fn sequence_error_ambiguity_weighted(
    forest: &Forest,
    ordering: &Dataset,
    weight: f64,
) -> Result<Vec<usize>> {
    let table = LeafTable::build(forest, ordering)?;
    Ok(rank_by_score(
        (0..table.n_trees)
            .map(|t| {
                table.tree_accuracy(t, ordering.labels())
                    + weight * table.disagreement(t, &table.ensemble)
            })
            .collect(),
    ))
}

/// Stable descending sort by score; equal scores keep index order.
fn rank_by_score(scores: Vec<f64>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order
}

/// Greedy accuracy maximization: each round appends the tree that lifts
/// the combined prediction accuracy of the prefix the most; ties keep the
/// lower index. All trees are placed.
pub fn sequence_reduced_error(forest: &Forest, ordering: &Dataset) -> Result<Vec<usize>> {
    let table = LeafTable::build(forest, ordering)?;
    let labels = ordering.labels();
    let (n, c) = (table.n_samples, table.n_classes);
    let mut summed = vec![0.0f64; n * c];
    let mut placed = Vec::with_capacity(table.n_trees);
    let mut remaining: Vec<usize> = (0..table.n_trees).collect();
    while !remaining.is_empty() {
        let mut best: Option<(usize, usize)> = None; // (hits, tree)
        for &tree in &remaining {
            let rows = &table.vectors[tree];
            let mut hits = 0usize;
            for s in 0..n {
                let base = &summed[s * c..(s + 1) * c];
                let add = &rows[s * c..(s + 1) * c];
                let mut best_class = 0usize;
                let mut best_value = base[0] + add[0];
                for k in 1..c {
                    let v = base[k] + add[k];
                    if v > best_value {
                        best_value = v;
                        best_class = k;
                    }
                }
                if best_class == labels[s] {
                    hits += 1;
                }
            }
            if best.is_none_or(|(h, _)| hits > h) {
                best = Some((hits, tree));
            }
        }
        let (_, tree) = best.expect("remaining is non-empty");
        for (acc, p) in summed.iter_mut().zip(&table.vectors[tree]) {
            *acc += p;
        }
        placed.push(tree);
        remaining.retain(|&t| t != tree);
    }
    Ok(placed)
}

/// Greedy selection balancing individual error against diversity: after
/// seeding with the best stand-alone tree, each round appends the tree
/// minimizing `error - weight * disagreement(prefix prediction)`.
pub fn sequence_drep(forest: &Forest, ordering: &Dataset) -> Result<Vec<usize>> {
    sequence_drep_weighted(forest, ordering, DREP_WEIGHT)
}

pub fn sequence_drep_weighted(
    forest: &Forest,
    ordering: &Dataset,
    weight: f64,
) -> Result<Vec<usize>> {
    let table = LeafTable::build(forest, ordering)?;
    let labels = ordering.labels();
    let (n, c) = (table.n_samples, table.n_classes);
    let errors: Vec<f64> = (0..table.n_trees)
        .map(|t| table.tree_error(t, labels))
        .collect();

    let first = rank_by_score(
        (0..table.n_trees)
            .map(|t| table.tree_accuracy(t, labels))
            .collect(),
    )[0];
    let mut placed = vec![first];
    let mut summed = table.vectors[first].clone();
    let mut remaining: Vec<usize> = (0..table.n_trees).filter(|&t| t != first).collect();
    let mut prefix_pred = vec![0usize; n];
    while !remaining.is_empty() {
        for s in 0..n {
            prefix_pred[s] = argmax(&summed[s * c..(s + 1) * c]);
        }
        let mut best: Option<(f64, usize)> = None; // (score, tree), minimized
        for &tree in &remaining {
            let score = errors[tree] - weight * table.disagreement(tree, &prefix_pred);
            if best.is_none_or(|(s, _)| score < s) {
                best = Some((score, tree));
            }
        }
        let (_, tree) = best.expect("remaining is non-empty");
        for (acc, p) in summed.iter_mut().zip(&table.vectors[tree]) {
            *acc += p;
        }
        placed.push(tree);
        remaining.retain(|&t| t != tree);
    }
    Ok(placed)
}

/// Quit-when-you-can sequencing for binary forests: each round appends the
/// tree that makes the most ordering samples irreversibly decided, meaning
/// the margin between the two summed class probabilities exceeds what the
/// remaining unplaced trees could still contribute. Ties prefer higher
/// stand-alone accuracy, then the lower index.
pub fn sequence_qwyc(forest: &Forest, ordering: &Dataset) -> Result<Vec<usize>> {
    if forest.n_classes() != 2 {
        return Err(Error::BinaryOnly {
            n_classes: forest.n_classes(),
        });
    }
    let table = LeafTable::build(forest, ordering)?;
    let labels = ordering.labels();
    let (n, c) = (table.n_samples, table.n_classes);
    debug_assert_eq!(c, 2);
    let accuracies: Vec<f64> = (0..table.n_trees)
        .map(|t| table.tree_accuracy(t, labels))
        .collect();

    let mut summed = vec![0.0f64; n * 2];
    let mut placed = Vec::with_capacity(table.n_trees);
    let mut remaining: Vec<usize> = (0..table.n_trees).collect();
    while !remaining.is_empty() {
        // each later tree adds a probability vector summing to 1, so the
        // reachable swing of the margin is one per unplaced tree
        let slack = (remaining.len() - 1) as f64;
        let mut best: Option<(usize, f64, usize)> = None; // (decided, accuracy, tree)
        for &tree in &remaining {
            let rows = &table.vectors[tree];
            let mut decided = 0usize;
            for s in 0..n {
                let p0 = summed[s * 2] + rows[s * 2];
                let p1 = summed[s * 2 + 1] + rows[s * 2 + 1];
                if (p0 - p1).abs() > slack {
                    decided += 1;
                }
            }
            let better = match best {
                None => true,
                Some((d, a, _)) => decided > d || (decided == d && accuracies[tree] > a),
            };
            if better {
                best = Some((decided, accuracies[tree], tree));
            }
        }
        let (_, _, tree) = best.expect("remaining is non-empty");
        for (acc, p) in summed.iter_mut().zip(&table.vectors[tree]) {
            *acc += p;
        }
        placed.push(tree);
        remaining.retain(|&t| t != tree);
    }
    Ok(placed)
}
