//! CART forest training that keeps the empirical class distribution in
//! every node, not just the leaves.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::forest::{Forest, Node, Split, Tree};

/// How many features to consider at each split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureSubsample {
    All,
    /// ceil(sqrt(n_features)), the usual forest default.
    Sqrt,
    Count(usize),
}

#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub n_trees: usize,
    pub max_depth: usize,
    pub seed: u64,
    pub bootstrap: bool,
    pub feature_subsample: FeatureSubsample,
}

impl TrainConfig {
    pub fn new(n_trees: usize, max_depth: usize, seed: u64) -> Self {
        TrainConfig {
            n_trees,
            max_depth,
            seed,
            bootstrap: true,
            feature_subsample: FeatureSubsample::Sqrt,
        }
    }
}

/// Grows `n_trees` CART trees by recursive Gini splitting. Splitting stops
/// at `max_depth`, at pure nodes, and at nodes with fewer than two samples.
/// Every node records the class distribution and count of the samples that
/// reached it. Bootstrap resampling and per-node feature subsampling use a
/// per-tree generator seeded deterministically from `(seed, tree index)`.
pub fn train_forest(train: &Dataset, config: &TrainConfig) -> Result<Forest> {
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if config.n_trees < 1 {
        return Err(Error::InvalidParameter("n_trees must be at least 1".into()));
    }
    if config.max_depth < 1 {
        return Err(Error::InvalidParameter(
            "max_depth must be at least 1".into(),
        ));
    }
    let n_features = train.n_features();
    if n_features == 0 {
        return Err(Error::InvalidParameter("dataset has no features".into()));
    }
    let k_features = match config.feature_subsample {
        FeatureSubsample::All => n_features,
        FeatureSubsample::Sqrt => (n_features as f64).sqrt().ceil() as usize,
        FeatureSubsample::Count(k) => {
            if k == 0 {
                return Err(Error::InvalidParameter(
                    "feature subsample count must be at least 1".into(),
                ));
            }
            k.min(n_features)
        }
    };

    let mut trees = Vec::with_capacity(config.n_trees);
    for tree_index in 0..config.n_trees {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_tree_seed(config.seed, tree_index));
        let indices: Vec<usize> = if config.bootstrap {
            (0..train.len())
                .map(|_| rng.random_range(0..train.len()))
                .collect()
        } else {
            (0..train.len()).collect()
        };
        let mut grower = TreeGrower {
            data: train,
            max_depth: config.max_depth,
            k_features,
            rng,
            nodes: Vec::new(),
        };
        grower.grow(indices, 0);
        trees.push(Tree::new(grower.nodes, train.n_classes())?);
    }
    Forest::new(
        trees,
        train.n_classes(),
        n_features,
        train.label_map().to_vec(),
    )
}

/// Mixes the forest seed with the tree index (splitmix64 finalizer) so
/// trees can be grown independently, in any order.
fn derive_tree_seed(seed: u64, tree_index: usize) -> u64 {
    let mut z = seed ^ (tree_index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct TreeGrower<'a> {
    data: &'a Dataset,
    max_depth: usize,
    k_features: usize,
    rng: ChaCha8Rng,
    nodes: Vec<Node>,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    decrease: f64,
}

impl TreeGrower<'_> {
    /// Grows the subtree for `indices` and returns its node id. Nodes are
    /// appended in preorder, so the root lands at index 0.
    fn grow(&mut self, indices: Vec<usize>, depth: usize) -> usize {
        let n_classes = self.data.n_classes();
        let mut counts = vec![0u64; n_classes];
        for &i in &indices {
            counts[self.data.labels()[i]] += 1;
        }
        let total = indices.len() as u64;
        let prediction: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();

        let id = self.nodes.len();
        self.nodes.push(Node::leaf(prediction, total));

        let pure = counts.contains(&total);
        if depth >= self.max_depth || pure || indices.len() < 2 {
            return id;
        }
        let Some(best) = self.best_split(&indices, &counts) else {
            return id;
        };
        let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
            .into_iter()
            .partition(|&i| self.data.row(i)[best.feature] <= best.threshold);
        // a midpoint can collapse onto a sample value through rounding;
        // an empty side means there was no real split
        if left_idx.is_empty() || right_idx.is_empty() {
            return id;
        }
        let left = self.grow(left_idx, depth + 1);
        let right = self.grow(right_idx, depth + 1);
        self.nodes[id].split = Some(Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
        });
        id
    }

    /// Scans candidate features (a without-replacement subsample) and all
    /// midpoints between consecutive distinct values, maximizing the Gini
    /// impurity decrease. Ties go to the lowest feature index, then the
    /// lowest threshold.
    fn best_split(&mut self, indices: &[usize], parent_counts: &[u64]) -> Option<BestSplit> {
        let n_features = self.data.n_features();
        let mut candidates: Vec<usize> = (0..n_features).collect();
        if self.k_features < n_features {
            candidates.shuffle(&mut self.rng);
            candidates.truncate(self.k_features);
            candidates.sort_unstable();
        }

        let n = indices.len() as f64;
        let parent_gini = gini(parent_counts);
        let mut best: Option<BestSplit> = None;
        let mut sorted: Vec<(f64, usize)> = Vec::with_capacity(indices.len());
        for &feature in &candidates {
            sorted.clear();
            sorted.extend(
                indices
                    .iter()
                    .map(|&i| (self.data.row(i)[feature], self.data.labels()[i])),
            );
            sorted.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

            let mut left_counts = vec![0u64; parent_counts.len()];
            for w in 0..sorted.len() - 1 {
                left_counts[sorted[w].1] += 1;
                let (a, b) = (sorted[w].0, sorted[w + 1].0);
                if a == b {
                    continue;
                }
                let threshold = a + (b - a) / 2.0;
                let n_left = (w + 1) as f64;
                let n_right = n - n_left;
                let right_counts: Vec<u64> = parent_counts
                    .iter()
                    .zip(&left_counts)
                    .map(|(&p, &l)| p - l)
                    .collect();
                let decrease = parent_gini
                    - (n_left / n) * gini(&left_counts)
                    - (n_right / n) * gini(&right_counts);
                if decrease <= 0.0 {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some(b) => {
                        decrease > b.decrease
                            || (decrease == b.decrease
                                && (feature < b.feature
                                    || (feature == b.feature && threshold < b.threshold)))
                    }
                };
                if better {
                    best = Some(BestSplit {
                        feature,
                        threshold,
                        decrease,
                    });
                }
            }
        }
        best
    }
}

fn gini(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    1.0 - counts
        .iter()
        .map(|&c| {
            let p = c as f64 / total;
            p * p
        })
        .sum::<f64>()
}
