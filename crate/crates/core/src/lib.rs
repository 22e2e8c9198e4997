//! Anytime random-forest inference on the granularity of single tree steps.
//!
//! Every node of a forest, inner or leaf, keeps a class-probability vector,
//! so inference can stop after any individual split evaluation and still
//! combine a prediction from wherever each tree currently stands. Which
//! tree takes the next step is fixed up front by a step order; this crate
//! generates such orders — exact best/worst via shortest-path search over
//! the step-counter lattice, greedy squirrel heuristics, tree-sequence
//! traversals, a random baseline — and executes forests along them with
//! abort by step count or wall-clock budget.

pub mod dataset;
pub mod error;
pub mod eval;
pub mod execute;
pub mod fixture;
pub mod forest;
pub mod model_io;
pub mod order;
pub mod synth;
pub mod train;

pub use dataset::{load_csv, split, Dataset, DatasetSplits, LabelColumn};
pub use error::{Error, Result};
pub use eval::{accuracy_curve, nma, NMA_FORMULA_VERSION};
pub use execute::{execute, execute_batch, execute_with_budget, Executor};
pub use forest::{
    argmax, combined_prediction, full_inference, tree_step, AnytimeState, Forest, Node, Split,
    Tree,
};
pub use model_io::{export_forest, import_forest, SCHEMA_VERSION};
pub use order::{
    backward_squirrel, breadth_order, depth_order, enumerate_all_orders, forward_squirrel,
    mean_accuracy, optimal_order, order_count, precompute_routing, random_order,
    sequence_drep, sequence_error_ambiguity, sequence_individual_error, sequence_qwyc,
    sequence_reduced_error, state_accuracy, unoptimal_order, LatticeState, OrderKind,
    RoutingTable, SquirrelRun, StepOrder, DEFAULT_LATTICE_CAP,
};
pub use train::{train_forest, FeatureSubsample, TrainConfig};
