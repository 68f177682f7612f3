//! `(m, l)`-covers of the edge set: the optimal laminar cover built from edge
//! categories, forest covers by matroid partition, and covers for a few
//! recognised graph shapes.

pub mod alpha;
mod forest;
mod laminar;
mod plan;
mod structural;
mod trees;

pub use alpha::{alpha, coefficients_a, dual_certificate, lp5_objective, tree_family_size, xtilde};
pub use forest::{forest_cover, SparsityWitness};
pub use laminar::{laminar_cover, MAX_LAMINAR_COVER_SUBGRAPHS};
pub use plan::{CoverPart, CoverPlan, PartKind};
pub use structural::{detect_shape, structural_cover, Shape};
pub use trees::{all_labeled_trees, tree_family, tree_to_category_system, LabeledTree};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("invalid arguments ({k}, {k_prime})")]
    BadArguments { k: usize, k_prime: usize },
    #[error("tree depth {depth} exceeds {limit}")]
    DepthExceeded { depth: usize, limit: usize },
    #[error("{k} subgraphs exceed the limit of {limit}")]
    TooManySubgraphs { k: usize, limit: usize },
    #[error("not sparse enough: nodes {:?} induce {} edges", .0.nodes, .0.induced_edges)]
    Infeasible(SparsityWitness),
    #[error("forest covers require an empty laminar system")]
    LaminarSystemPresent,
    #[error("no interval order of the subgraphs exists at node {node}")]
    NoLocalIntervalOrder { node: String },
    #[error("the instance matches none of the recognised shapes")]
    NoStructureMatched,
}
