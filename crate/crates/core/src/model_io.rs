//! JSON serialization of forests.
//!
//! Schema `anyforest-1`: a self-describing document with per-tree flat node
//! arrays. Leaves are encoded with `left` and `right` null; every node
//! carries its prediction vector and sample count. Import validates, it
//! never repairs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forest::{Forest, Node, Split, Tree};

pub const SCHEMA_VERSION: &str = "anyforest-1";

#[derive(Debug, Serialize, Deserialize)]
struct ForestDoc {
    version: String,
    n_classes: usize,
    n_features: usize,
    class_labels: Vec<String>,
    trees: Vec<TreeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TreeDoc {
    nodes: Vec<NodeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeDoc {
    #[serde(default)]
    feature: Option<usize>,
    #[serde(default)]
    threshold: Option<f64>,
    left: Option<usize>,
    right: Option<usize>,
    prediction: Vec<f64>,
    count: u64,
}

/// Serializes a forest to the `anyforest-1` JSON document.
pub fn export_forest(forest: &Forest) -> String {
    let doc = ForestDoc {
        version: SCHEMA_VERSION.to_string(),
        n_classes: forest.n_classes(),
        n_features: forest.n_features(),
        class_labels: forest.class_labels().to_vec(),
        trees: forest
            .trees()
            .iter()
            .map(|tree| TreeDoc {
                nodes: tree
                    .nodes()
                    .iter()
                    .map(|node| match &node.split {
                        Some(split) => NodeDoc {
                            feature: Some(split.feature),
                            threshold: Some(split.threshold),
                            left: Some(split.left),
                            right: Some(split.right),
                            prediction: node.prediction.clone(),
                            count: node.sample_count,
                        },
                        None => NodeDoc {
                            feature: None,
                            threshold: None,
                            left: None,
                            right: None,
                            prediction: node.prediction.clone(),
                            count: node.sample_count,
                        },
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("forest document always serializes")
}

/// Parses and validates an `anyforest-1` document. Structural violations
/// (dangling children, bad probability vectors, mixed leaf/inner nodes,
/// version mismatch) are rejected.
pub fn import_forest(document: &str) -> Result<Forest> {
    let doc: ForestDoc = serde_json::from_str(document)?;
    if doc.version != SCHEMA_VERSION {
        return Err(Error::SchemaVersion {
            expected: SCHEMA_VERSION.to_string(),
            got: doc.version,
        });
    }
    let mut trees = Vec::with_capacity(doc.trees.len());
    for (ti, tree_doc) in doc.trees.into_iter().enumerate() {
        let mut nodes = Vec::with_capacity(tree_doc.nodes.len());
        for (ni, node) in tree_doc.nodes.into_iter().enumerate() {
            let parsed = match (node.left, node.right) {
                (None, None) => {
                    if node.feature.is_some() || node.threshold.is_some() {
                        return Err(Error::InvalidModel(format!(
                            "tree {ti} node {ni}: leaf carries a split rule"
                        )));
                    }
                    Node::leaf(node.prediction, node.count)
                }
                (Some(left), Some(right)) => {
                    let (Some(feature), Some(threshold)) = (node.feature, node.threshold) else {
                        return Err(Error::InvalidModel(format!(
                            "tree {ti} node {ni}: inner node missing feature or threshold"
                        )));
                    };
                    Node::inner(
                        Split {
                            feature,
                            threshold,
                            left,
                            right,
                        },
                        node.prediction,
                        node.count,
                    )
                }
                _ => {
                    return Err(Error::InvalidModel(format!(
                        "tree {ti} node {ni}: exactly one child set, need both or none"
                    )));
                }
            };
            nodes.push(parsed);
        }
        trees.push(Tree::new(nodes, doc.n_classes)?);
    }
    Forest::new(trees, doc.n_classes, doc.n_features, doc.class_labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::gaussian_blobs;
    use crate::train::{train_forest, TrainConfig};

    #[test]
    fn round_trip_is_exact() {
        let data = gaussian_blobs(60, 4, 3, 0.4, 3);
        let forest = train_forest(&data, &TrainConfig::new(4, 3, 17)).unwrap();
        let doc = export_forest(&forest);
        let back = import_forest(&doc).unwrap();
        assert_eq!(forest, back);
        // and the re-export is byte-identical
        assert_eq!(doc, export_forest(&back));
    }

    #[test]
    fn exported_example_fixture_shape() {
        let doc = export_forest(&crate::fixture::example_forest());
        let value: serde_json::Value = serde_json::from_str(&doc).unwrap();
        assert_eq!(value["version"], SCHEMA_VERSION);
        let trees = value["trees"].as_array().unwrap();
        assert_eq!(trees.len(), 3);
        for tree in trees {
            assert_eq!(tree["nodes"].as_array().unwrap().len(), 7);
        }
    }

    #[test]
    fn version_mismatch_rejected() {
        let doc = r#"{"version":"anyforest-0","n_classes":1,"n_features":1,
                      "class_labels":["a"],"trees":[]}"#;
        assert!(matches!(
            import_forest(doc),
            Err(Error::SchemaVersion { .. })
        ));
    }

    #[test]
    fn bad_probability_vector_rejected() {
        let doc = r#"{"version":"anyforest-1","n_classes":2,"n_features":1,
            "class_labels":["a","b"],
            "trees":[{"nodes":[
                {"feature":null,"threshold":null,"left":null,"right":null,
                 "prediction":[0.5,0.6],"count":1}]}]}"#;
        assert!(matches!(import_forest(doc), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn dangling_child_rejected() {
        let doc = r#"{"version":"anyforest-1","n_classes":1,"n_features":1,
            "class_labels":["a"],
            "trees":[{"nodes":[
                {"feature":0,"threshold":0.5,"left":1,"right":5,
                 "prediction":[1.0],"count":2},
                {"feature":null,"threshold":null,"left":null,"right":null,
                 "prediction":[1.0],"count":1}]}]}"#;
        assert!(matches!(import_forest(doc), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn missing_prediction_rejected() {
        let doc = r#"{"version":"anyforest-1","n_classes":1,"n_features":1,
            "class_labels":["a"],
            "trees":[{"nodes":[
                {"feature":null,"threshold":null,"left":null,"right":null,
                 "count":1}]}]}"#;
        assert!(matches!(import_forest(doc), Err(Error::Json(_))));
    }

    #[test]
    fn half_leaf_rejected() {
        let doc = r#"{"version":"anyforest-1","n_classes":1,"n_features":1,
            "class_labels":["a"],
            "trees":[{"nodes":[
                {"feature":0,"threshold":0.5,"left":1,"right":null,
                 "prediction":[1.0],"count":2},
                {"feature":null,"threshold":null,"left":null,"right":null,
                 "prediction":[1.0],"count":1}]}]}"#;
        assert!(matches!(import_forest(doc), Err(Error::InvalidModel(_))));
    }
}
