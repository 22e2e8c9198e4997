//! Named order generators, one table shared by the CLI, the experiment
//! harness and the demo.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::forest::Forest;
use crate::order::{
    backward_squirrel, breadth_order, depth_order, forward_squirrel, optimal_order, random_order,
    sequence_drep, sequence_error_ambiguity, sequence_individual_error, sequence_qwyc,
    sequence_reduced_error, unoptimal_order, StepOrder,
};

/// Every step-order generator, by its command-line name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Optimal,
    Unoptimal,
    ForwardSquirrel,
    BackwardSquirrel,
    DepthIe,
    BreadthIe,
    DepthEa,
    BreadthEa,
    DepthRe,
    BreadthRe,
    DepthDrep,
    BreadthDrep,
    DepthQwyc,
    BreadthQwyc,
    Random,
}

impl OrderKind {
    pub const ALL: [OrderKind; 15] = [
        OrderKind::Optimal,
        OrderKind::Unoptimal,
        OrderKind::ForwardSquirrel,
        OrderKind::BackwardSquirrel,
        OrderKind::DepthIe,
        OrderKind::BreadthIe,
        OrderKind::DepthEa,
        OrderKind::BreadthEa,
        OrderKind::DepthRe,
        OrderKind::BreadthRe,
        OrderKind::DepthDrep,
        OrderKind::BreadthDrep,
        OrderKind::DepthQwyc,
        OrderKind::BreadthQwyc,
        OrderKind::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OrderKind::Optimal => "optimal",
            OrderKind::Unoptimal => "unoptimal",
            OrderKind::ForwardSquirrel => "fsquirrel",
            OrderKind::BackwardSquirrel => "bsquirrel",
            OrderKind::DepthIe => "depth-ie",
            OrderKind::BreadthIe => "breadth-ie",
            OrderKind::DepthEa => "depth-ea",
            OrderKind::BreadthEa => "breadth-ea",
            OrderKind::DepthRe => "depth-re",
            OrderKind::BreadthRe => "breadth-re",
            OrderKind::DepthDrep => "depth-drep",
            OrderKind::BreadthDrep => "breadth-drep",
            OrderKind::DepthQwyc => "depth-qwyc",
            OrderKind::BreadthQwyc => "breadth-qwyc",
            OrderKind::Random => "random",
        }
    }

    pub fn parse(name: &str) -> Result<OrderKind> {
        OrderKind::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown order kind {name:?}")))
    }

    /// Generates the order on the ordering set. `lattice_cap` bounds the
    /// exact searches; `seed` feeds the random baseline.
    pub fn generate(
        self,
        forest: &Forest,
        ordering: &Dataset,
        lattice_cap: u64,
        seed: u64,
    ) -> Result<StepOrder> {
        let budgets = forest.budgets();
        match self {
            OrderKind::Optimal => optimal_order(forest, ordering, lattice_cap),
            OrderKind::Unoptimal => unoptimal_order(forest, ordering, lattice_cap),
            OrderKind::ForwardSquirrel => forward_squirrel(forest, ordering),
            OrderKind::BackwardSquirrel => backward_squirrel(forest, ordering),
            OrderKind::DepthIe => depth_order(&sequence_individual_error(forest, ordering)?, &budgets),
            OrderKind::BreadthIe => {
                breadth_order(&sequence_individual_error(forest, ordering)?, &budgets)
            }
            OrderKind::DepthEa => depth_order(&sequence_error_ambiguity(forest, ordering)?, &budgets),
            OrderKind::BreadthEa => {
                breadth_order(&sequence_error_ambiguity(forest, ordering)?, &budgets)
            }
            OrderKind::DepthRe => depth_order(&sequence_reduced_error(forest, ordering)?, &budgets),
            OrderKind::BreadthRe => {
                breadth_order(&sequence_reduced_error(forest, ordering)?, &budgets)
            }
            OrderKind::DepthDrep => depth_order(&sequence_drep(forest, ordering)?, &budgets),
            OrderKind::BreadthDrep => breadth_order(&sequence_drep(forest, ordering)?, &budgets),
            OrderKind::DepthQwyc => depth_order(&sequence_qwyc(forest, ordering)?, &budgets),
            OrderKind::BreadthQwyc => breadth_order(&sequence_qwyc(forest, ordering)?, &budgets),
            OrderKind::Random => Ok(random_order(&budgets, seed)),
        }
    }
}

impl std::fmt::Display for OrderKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
