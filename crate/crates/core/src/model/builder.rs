use std::collections::BTreeSet;

use super::{validate_instance, Capacity, Instance, RawEdge, RawInstance, RawLaminar, RawSubgraph, ValidationError};

/// Programmatic construction of instances. Nodes are collected from edge
/// endpoints and laminar sets unless added explicitly.
#[derive(Clone, Debug, Default)]
pub struct InstanceBuilder {
    raw: RawInstance,
    nodes: BTreeSet<String>,
}

impl InstanceBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(mut self, id: &str) -> Self {
        self.nodes.insert(id.to_owned());
        self
    }

    pub fn edge(mut self, id: &str, u: &str, v: &str, weight: u64, capacity: Capacity) -> Self {
        self.nodes.insert(u.to_owned());
        self.nodes.insert(v.to_owned());
        self.raw.edges.push(RawEdge {
            id: id.to_owned(),
            u: u.to_owned(),
            v: v.to_owned(),
            weight: weight as i64,
            capacity: capacity.finite().map(|c| c as i64),
        });
        self
    }

    /// Subgraph with explicit per-node bounds.
    pub fn subgraph(mut self, id: &str, edges: &[&str], bounds: &[(&str, u64)]) -> Self {
        self.raw.subgraphs.push(RawSubgraph {
            id: id.to_owned(),
            edges: edges.iter().map(|s| s.to_string()).collect(),
            bounds: bounds.iter().map(|(v, b)| (v.to_string(), *b as i64)).collect(),
        });
        self
    }

    /// Subgraph with the same bound on every incident node. Edges must already
    /// have been added.
    pub fn subgraph_uniform(mut self, id: &str, edges: &[&str], bound: u64) -> Self {
        let mut touched = BTreeSet::new();
        for name in edges {
            if let Some(e) = self.raw.edges.iter().find(|e| e.id == *name) {
                touched.insert(e.u.clone());
                touched.insert(e.v.clone());
            }
        }
        self.raw.subgraphs.push(RawSubgraph {
            id: id.to_owned(),
            edges: edges.iter().map(|s| s.to_string()).collect(),
            bounds: touched.into_iter().map(|v| (v, bound as i64)).collect(),
        });
        self
    }

    pub fn laminar(mut self, id: &str, nodes: &[&str], limit: u64) -> Self {
        for v in nodes {
            self.nodes.insert(v.to_string());
        }
        self.raw.laminar.push(RawLaminar {
            id: id.to_owned(),
            nodes: nodes.iter().map(|s| s.to_string()).collect(),
            limit: limit as i64,
        });
        self
    }

    pub fn into_raw(mut self) -> RawInstance {
        self.raw.nodes = self.nodes.into_iter().collect();
        self.raw
    }

    pub fn build(self) -> Result<Instance, Vec<ValidationError>> {
        validate_instance(&self.into_raw())
    }
}
