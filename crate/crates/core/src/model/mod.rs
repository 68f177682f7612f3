//! Problem data model for simultaneous assignments.
//!
//! An [`Instance`] is a loop-free multigraph with edge weights and capacities,
//! a family of subgraphs each carrying per-node degree bounds, and a laminar
//! family of node sets carrying degree-sum bounds. Instances are only built
//! through [`validate_instance`], so every accessor can rely on the invariants.

mod assignment;
mod builder;
mod predicates;
mod validate;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

pub use assignment::{is_feasible, violations, Assignment, AssignmentError, Violation, ViolationKind, ViolationLocation};
pub use builder::InstanceBuilder;
pub use predicates::{
    category_partition, edge_categories, find_crossing, is_laminar, is_locally_laminar, local_crossing,
    max_overlap, CrossingWitness, SubgraphSet,
};
pub use validate::{validate_instance, ValidationError};

/// Edge capacity; `Infinite` models the uncapacitated case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Capacity {
    Finite(u64),
    Infinite,
}

impl Capacity {
    pub fn finite(self) -> Option<u64> {
        match self {
            Capacity::Finite(c) => Some(c),
            Capacity::Infinite => None,
        }
    }

    pub fn min(self, other: Capacity) -> Capacity {
        match (self, other) {
            (Capacity::Finite(a), Capacity::Finite(b)) => Capacity::Finite(a.min(b)),
            (Capacity::Finite(a), Capacity::Infinite) | (Capacity::Infinite, Capacity::Finite(a)) => {
                Capacity::Finite(a)
            }
            (Capacity::Infinite, Capacity::Infinite) => Capacity::Infinite,
        }
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(c) => write!(f, "{c}"),
            Capacity::Infinite => f.write_str("inf"),
        }
    }
}

/// Unvalidated instance data, in document order. Numeric fields are signed so
/// that negative inputs surface as validation errors rather than parse errors.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawInstance {
    pub nodes: Vec<String>,
    pub edges: Vec<RawEdge>,
    pub subgraphs: Vec<RawSubgraph>,
    pub laminar: Vec<RawLaminar>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawEdge {
    pub id: String,
    pub u: String,
    pub v: String,
    pub weight: i64,
    /// `None` is an infinite capacity.
    pub capacity: Option<i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawSubgraph {
    pub id: String,
    pub edges: Vec<String>,
    pub bounds: Vec<(String, i64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawLaminar {
    pub id: String,
    pub nodes: Vec<String>,
    pub limit: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub u: usize,
    pub v: usize,
    pub weight: u64,
    pub capacity: Capacity,
}

impl Edge {
    pub fn other(&self, node: usize) -> usize {
        if node == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, node: usize) -> bool {
        self.u == node || self.v == node
    }
}

/// A subgraph `H` given by its edge set, with a degree bound `b_H(v)` for every
/// node incident to those edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgraphConstraint {
    pub id: String,
    /// Sorted edge indices.
    pub edges: Vec<usize>,
    pub bounds: BTreeMap<usize, u64>,
}

impl SubgraphConstraint {
    pub fn contains_node(&self, node: usize) -> bool {
        self.bounds.contains_key(&node)
    }
}

/// A member `L` of the laminar family with its degree-sum bound `g(L)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaminarConstraint {
    pub id: String,
    /// Sorted node indices.
    pub nodes: Vec<usize>,
    pub limit: u64,
}

impl LaminarConstraint {
    pub fn contains(&self, node: usize) -> bool {
        self.nodes.binary_search(&node).is_ok()
    }

    /// Coefficient of an edge in the degree-sum row: induced edges count twice.
    pub fn coefficient(&self, edge: &Edge) -> u64 {
        self.contains(edge.u) as u64 + self.contains(edge.v) as u64
    }
}

/// A validated instance. Nodes, edges, subgraphs and laminar sets are stored
/// sorted by id; all index-based accessors refer to those orders.
#[derive(Clone, Debug)]
pub struct Instance {
    nodes: Vec<String>,
    node_index: HashMap<String, usize>,
    edges: Vec<Edge>,
    edge_index: HashMap<String, usize>,
    subgraphs: Vec<SubgraphConstraint>,
    laminar: Vec<LaminarConstraint>,
    /// For each edge, the sorted subgraph indices containing it.
    memberships: Vec<Vec<usize>>,
    incidence: Vec<Vec<usize>>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
            && self.edges == other.edges
            && self.subgraphs == other.subgraphs
            && self.laminar == other.laminar
    }
}

impl Instance {
    pub(crate) fn assemble(
        nodes: Vec<String>,
        edges: Vec<Edge>,
        subgraphs: Vec<SubgraphConstraint>,
        laminar: Vec<LaminarConstraint>,
    ) -> Instance {
        let node_index = nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let edge_index = edges.iter().enumerate().map(|(i, e)| (e.id.clone(), i)).collect();
        let mut memberships = vec![Vec::new(); edges.len()];
        for (h, sub) in subgraphs.iter().enumerate() {
            for &e in &sub.edges {
                memberships[e].push(h);
            }
        }
        let mut incidence = vec![Vec::new(); nodes.len()];
        for (i, e) in edges.iter().enumerate() {
            incidence[e.u].push(i);
            incidence[e.v].push(i);
        }
        Instance { nodes, node_index, edges, edge_index, subgraphs, laminar, memberships, incidence }
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn subgraphs(&self) -> &[SubgraphConstraint] {
        &self.subgraphs
    }

    pub fn laminar(&self) -> &[LaminarConstraint] {
        &self.laminar
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_id(&self, node: usize) -> &str {
        &self.nodes[node]
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.node_index.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    /// Sorted subgraph indices that contain edge `e`.
    pub fn memberships(&self, e: usize) -> &[usize] {
        &self.memberships[e]
    }

    /// Edge indices incident to `node` (parallel edges listed separately).
    pub fn incident(&self, node: usize) -> &[usize] {
        &self.incidence[node]
    }

    /// `Δ_H(v)`: edges of subgraph `h` incident to `node`, sorted.
    pub fn subgraph_star(&self, h: usize, node: usize) -> Vec<usize> {
        self.incidence[node]
            .iter()
            .copied()
            .filter(|e| self.memberships[*e].binary_search(&h).is_ok())
            .collect()
    }

    pub fn objective(&self, x: &[u64]) -> u64 {
        self.edges.iter().zip(x).map(|(e, v)| e.weight * v).sum()
    }

    /// Upper bound on `x_e` implied by the capacity, every subgraph degree bound
    /// at either endpoint and every degree-sum bound of a set touching the edge.
    pub fn effective_capacity(&self, e: usize) -> Capacity {
        let edge = &self.edges[e];
        let mut cap = edge.capacity;
        for &h in &self.memberships[e] {
            let b = &self.subgraphs[h].bounds;
            cap = cap.min(Capacity::Finite(b[&edge.u])).min(Capacity::Finite(b[&edge.v]));
        }
        for set in &self.laminar {
            if set.contains(edge.u) || set.contains(edge.v) {
                cap = cap.min(Capacity::Finite(set.limit));
            }
        }
        cap
    }

    /// Finite per-edge bounds usable by exact solvers. Edges without any finite
    /// bound are fixed to zero when weightless and rejected otherwise.
    pub fn finite_capacities(&self) -> Result<Vec<u64>, UnboundedEdge> {
        (0..self.edges.len())
            .map(|e| match self.effective_capacity(e) {
                Capacity::Finite(c) => Ok(c),
                Capacity::Infinite if self.edges[e].weight == 0 => Ok(0),
                Capacity::Infinite => Err(UnboundedEdge { edge: self.edges[e].id.clone() }),
            })
            .collect()
    }

    /// Instance restricted to the edges in `keep`. Subgraph edge sets are
    /// intersected with `keep` and emptied subgraphs are dropped; nodes and
    /// laminar sets are unchanged.
    pub fn restrict(&self, keep: &BTreeSet<String>) -> Result<Instance, UnknownEdge> {
        if let Some(missing) = keep.iter().find(|id| !self.edge_index.contains_key(*id)) {
            return Err(UnknownEdge { edge: missing.clone() });
        }
        let kept: Vec<usize> = (0..self.edges.len()).filter(|&e| keep.contains(&self.edges[e].id)).collect();
        Ok(self.restrict_indices(&kept))
    }

    /// Same as [`Instance::restrict`] with sorted edge indices.
    pub fn restrict_indices(&self, kept: &[usize]) -> Instance {
        let mut remap = vec![usize::MAX; self.edges.len()];
        for (new, &old) in kept.iter().enumerate() {
            remap[old] = new;
        }
        let edges: Vec<Edge> = kept.iter().map(|&e| self.edges[e].clone()).collect();
        let subgraphs = self
            .subgraphs
            .iter()
            .filter_map(|sub| {
                let kept_edges: Vec<usize> =
                    sub.edges.iter().filter(|&&e| remap[e] != usize::MAX).map(|&e| remap[e]).collect();
                if kept_edges.is_empty() {
                    return None;
                }
                let touched: BTreeSet<usize> = kept_edges.iter().flat_map(|&e| [edges[e].u, edges[e].v]).collect();
                let bounds = sub.bounds.iter().filter(|(v, _)| touched.contains(v)).map(|(&v, &b)| (v, b)).collect();
                Some(SubgraphConstraint { id: sub.id.clone(), edges: kept_edges, bounds })
            })
            .collect();
        Instance::assemble(self.nodes.clone(), edges, subgraphs, self.laminar.clone())
    }

    /// Lift an assignment of `self.restrict_indices(kept)` back to this instance.
    pub fn extend_by_zeros(&self, kept: &[usize], restricted: &[u64]) -> Vec<u64> {
        let mut x = vec![0; self.edges.len()];
        for (&e, &value) in kept.iter().zip(restricted) {
            x[e] = value;
        }
        x
    }

    /// Back to the raw document form (sorted, canonical).
    pub fn to_raw(&self) -> RawInstance {
        RawInstance {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge {
                    id: e.id.clone(),
                    u: self.nodes[e.u].clone(),
                    v: self.nodes[e.v].clone(),
                    weight: e.weight as i64,
                    capacity: e.capacity.finite().map(|c| c as i64),
                })
                .collect(),
            subgraphs: self
                .subgraphs
                .iter()
                .map(|s| RawSubgraph {
                    id: s.id.clone(),
                    edges: s.edges.iter().map(|&e| self.edges[e].id.clone()).collect(),
                    bounds: s.bounds.iter().map(|(&v, &b)| (self.nodes[v].clone(), b as i64)).collect(),
                })
                .collect(),
            laminar: self
                .laminar
                .iter()
                .map(|l| RawLaminar {
                    id: l.id.clone(),
                    nodes: l.nodes.iter().map(|&v| self.nodes[v].clone()).collect(),
                    limit: l.limit as i64,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("edge {edge} has no finite bound and positive weight; the instance is unbounded")]
pub struct UnboundedEdge {
    pub edge: String,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown edge {edge}")]
pub struct UnknownEdge {
    pub edge: String,
}

/// Restrict by edge id set; free-function form of [`Instance::restrict`].
pub fn restrict(inst: &Instance, keep: &BTreeSet<String>) -> Result<Instance, UnknownEdge> {
    inst.restrict(keep)
}
