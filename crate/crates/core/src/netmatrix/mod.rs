//! Combinatorial solvers for the two network-matrix cases: bipartite locally
//! laminar instances whose degree-sum sets each lie on one side, and forests
//! whose subgraphs admit a local interval order. Both build a directed tree
//! plus one non-tree arc per edge and solve a min-cost circulation.

mod arborescence;
mod bipartite;
mod circulation;
mod network;
mod tree_interval;

pub use arborescence::{arborescence_representation, ArborescenceRep, NotLaminar, Orientation};
pub use bipartite::{bipartition, build_bipartite_network, Side};
pub use circulation::{decode_flow, min_cost_circulation, Circulation, CirculationError};
pub use network::{FidelityError, FlowNetwork, NonTreeArc, TreeArc};
pub use tree_interval::{build_tree_interval_network, local_interval_order};

use crate::model::{Assignment, CrossingWitness, Instance, UnboundedEdge};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NetworkError {
    #[error("graph is not bipartite: odd cycle through edge {edge}")]
    NotBipartite { edge: String },
    #[error("laminar set {set} meets both sides of the bipartition")]
    SidedLaminarViolated { set: String },
    #[error("subgraphs {} and {} cross at node {}", .0.first, .0.second, .0.node)]
    NotLocallyLaminar(CrossingWitness),
    #[error("graph is not a forest: edge {edge} closes a cycle")]
    NotForest { edge: String },
    #[error("no interval order of the subgraphs exists at node {node}")]
    NoLocalIntervalOrder { node: String },
    #[error("the tree construction requires an empty laminar system")]
    NonEmptyLaminarSystem,
    #[error("partition has {found} entries for {expected} nodes")]
    PartitionSize { expected: usize, found: usize },
    #[error(transparent)]
    Unbounded(#[from] UnboundedEdge),
    #[error(transparent)]
    Fidelity(#[from] FidelityError),
    #[error(transparent)]
    Circulation(#[from] CirculationError),
}

fn solve_network(inst: &Instance, net: &FlowNetwork) -> Result<Assignment, NetworkError> {
    let flow = min_cost_circulation(net)?;
    Ok(decode_flow(inst, net, &flow))
}

/// Maximum-weight assignment of a bipartite instance, with the side partition
/// derived from the graph and the degree-sum sets.
pub fn solve_bipartite(inst: &Instance) -> Result<Assignment, NetworkError> {
    let sides = bipartition(inst)?;
    solve_network(inst, &build_bipartite_network(inst, &sides)?)
}

/// Maximum-weight assignment of a forest instance with local interval orders.
pub fn solve_tree_interval(inst: &Instance) -> Result<Assignment, NetworkError> {
    solve_network(inst, &build_tree_interval_network(inst)?)
}
