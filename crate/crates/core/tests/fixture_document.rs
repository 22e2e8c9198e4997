//! A hand-written `anyforest-1` document for the worked-example forest:
//! import must accept it, and it must behave identically to the built-in
//! fixture.

use anyforest::{import_forest, precompute_routing, state_accuracy, LatticeState};

const DOCUMENT: &str = r#"{
  "version": "anyforest-1",
  "n_classes": 2,
  "n_features": 3,
  "class_labels": ["1", "2"],
  "trees": [
    { "nodes": [
      {"feature": 0, "threshold": 2.5, "left": 1, "right": 4, "prediction": [0.5, 0.5], "count": 8},
      {"feature": 0, "threshold": 1.5, "left": 2, "right": 3, "prediction": [0.0, 1.0], "count": 2},
      {"feature": null, "threshold": null, "left": null, "right": null, "prediction": [0.0, 1.0], "count": 1},
      {"feature": null, "threshold": null, "left": null, "right": null, "prediction": [0.0, 1.0], "count": 1},
      {"feature": 0, "threshold": 3.5, "left": 5, "right": 6, "prediction": [0.6666666666666666, 0.3333333333333333], "count": 6},
      {"feature": null, "threshold": null, "left": null, "right": null, "prediction": [0.0, 1.0], "count": 1},
      {"feature": null, "threshold": null, "left": null, "right": null, "prediction": [0.8, 0.2], "count": 5}
    ]},
    { "nodes": [
      {"feature": 1, "threshold": 5.5, "left": 1, "right": 4, "prediction": [0.5, 0.5], "count": 8},
      {"feature": 1, "threshold": 1.5, "left": 2, "right": 3, "prediction": [0.2, 0.8], "count": 5},
      {"feature": null, "threshold": null, "left": null, "right": null, "prediction": [0.0, 1.0], "count": 1},
      {"feature": null, "threshold": null, "left": null, "right": null, "prediction": [0.25, 0.75], "count": 4},
      {"feature": 1, "threshold": 6.5, "left": 5, "right": 6, "prediction": [1.0, 0.0], "count": 3},
      {"feature": null, "threshold": null, "left": null, "right": null, "prediction": [1.0, 0.0], "count": 1},
      {"feature": null, "threshold": null, "left": null, "right": null, "prediction": [1.0, 0.0], "count": 2}
    ]},
    { "nodes": [
      {"feature": 2, "threshold": 4.5, "left": 1, "right": 4, "prediction": [0.5, 0.5], "count": 8},
      {"feature": 2, "threshold": 2.5, "left": 2, "right": 3, "prediction": [0.5, 0.5], "count": 4},
      {"feature": null, "threshold": null, "left": null, "right": null, "prediction": [0.5, 0.5], "count": 2},
      {"feature": null, "threshold": null, "left": null, "right": null, "prediction": [0.5, 0.5], "count": 2},
      {"feature": 2, "threshold": 6.5, "left": 5, "right": 6, "prediction": [0.5, 0.5], "count": 4},
      {"feature": null, "threshold": null, "left": null, "right": null, "prediction": [0.0, 1.0], "count": 2},
      {"feature": null, "threshold": null, "left": null, "right": null, "prediction": [1.0, 0.0], "count": 2}
    ]}
  ]
}"#;

#[test]
fn hand_written_document_is_accepted_and_equivalent() {
    let imported = import_forest(DOCUMENT).unwrap();
    let builtin = anyforest::fixture::example_forest();
    // tree 0's right-child prediction is 4/6 in the builtin fixture and a
    // decimal literal here; everything else must agree bit for bit
    assert_eq!(imported.n_trees(), builtin.n_trees());
    assert_eq!(imported.budgets(), builtin.budgets());

    let ordering = anyforest::fixture::example_ordering();
    let routing = precompute_routing(&imported, &ordering).unwrap();
    for (counters, want) in anyforest::fixture::example_state_counts() {
        let accuracy = state_accuracy(
            &routing,
            ordering.labels(),
            &LatticeState::new(counters.clone()),
        );
        assert_eq!(accuracy, want as f64 / 8.0, "state {counters:?}");
    }

    let order = anyforest::optimal_order(&imported, &ordering, 1 << 20).unwrap();
    assert_eq!(
        anyforest::mean_accuracy(&routing, ordering.labels(), &order),
        6.0 / 7.0
    );
}
