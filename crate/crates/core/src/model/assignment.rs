use std::collections::BTreeMap;
use std::fmt;

use super::{Capacity, Instance};

/// Integral edge values keyed by edge id, with the cached objective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub values: BTreeMap<String, u64>,
    pub objective: u64,
}

impl Assignment {
    /// From a vector indexed like [`Instance::edges`].
    pub fn from_vector(inst: &Instance, x: &[u64]) -> Assignment {
        assert_eq!(x.len(), inst.edge_count(), "assignment length must match edge count");
        let values = inst.edges().iter().zip(x).map(|(e, &v)| (e.id.clone(), v)).collect();
        Assignment { values, objective: inst.objective(x) }
    }

    pub fn zero(inst: &Instance) -> Assignment {
        Assignment::from_vector(inst, &vec![0; inst.edge_count()])
    }

    /// Back to an edge-indexed vector. Edges absent from the map read as zero.
    pub fn to_vector(&self, inst: &Instance) -> Result<Vec<u64>, AssignmentError> {
        let mut x = vec![0; inst.edge_count()];
        for (id, &v) in &self.values {
            let e = inst.edge_index(id).ok_or_else(|| AssignmentError::UnknownEdge(id.clone()))?;
            x[e] = v;
        }
        let objective = inst.objective(&x);
        if objective != self.objective {
            return Err(AssignmentError::ObjectiveMismatch { stated: self.objective, actual: objective });
        }
        Ok(x)
    }

    pub fn get(&self, id: &str) -> u64 {
        self.values.get(id).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AssignmentError {
    #[error("assignment references unknown edge {0}")]
    UnknownEdge(String),
    #[error("stated objective {stated} differs from weighted sum {actual}")]
    ObjectiveMismatch { stated: u64, actual: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    Capacity,
    SubgraphDegree,
    DegreeSum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationLocation {
    Edge(String),
    SubgraphNode { subgraph: String, node: String },
    LaminarSet(String),
}

/// One violated constraint and its excess (always ≥ 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: ViolationLocation,
    pub amount: u64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.location {
            ViolationLocation::Edge(e) => write!(f, "capacity of edge {e} exceeded by {}", self.amount),
            ViolationLocation::SubgraphNode { subgraph, node } => {
                write!(f, "degree bound of {subgraph} at {node} exceeded by {}", self.amount)
            }
            ViolationLocation::LaminarSet(l) => write!(f, "degree sum of {l} exceeded by {}", self.amount),
        }
    }
}

/// All violated constraints for an edge-indexed vector, in the order
/// capacities, subgraph degrees, degree sums.
pub fn violations(inst: &Instance, x: &[u64]) -> Vec<Violation> {
    let mut out = Vec::new();
    for (edge, &value) in inst.edges().iter().zip(x) {
        if let Capacity::Finite(c) = edge.capacity {
            if value > c {
                out.push(Violation {
                    kind: ViolationKind::Capacity,
                    location: ViolationLocation::Edge(edge.id.clone()),
                    amount: value - c,
                });
            }
        }
    }
    for (h, sub) in inst.subgraphs().iter().enumerate() {
        for (&v, &b) in &sub.bounds {
            let load: u64 = inst.subgraph_star(h, v).iter().map(|&e| x[e]).sum();
            if load > b {
                out.push(Violation {
                    kind: ViolationKind::SubgraphDegree,
                    location: ViolationLocation::SubgraphNode {
                        subgraph: sub.id.clone(),
                        node: inst.node_id(v).to_owned(),
                    },
                    amount: load - b,
                });
            }
        }
    }
    for set in inst.laminar() {
        let load: u64 = inst.edges().iter().zip(x).map(|(e, &value)| set.coefficient(e) * value).sum();
        if load > set.limit {
            out.push(Violation {
                kind: ViolationKind::DegreeSum,
                location: ViolationLocation::LaminarSet(set.id.clone()),
                amount: load - set.limit,
            });
        }
    }
    out
}

/// Violations of `x`; an empty list means `x` is a simultaneous assignment.
pub fn is_feasible(inst: &Instance, x: &Assignment) -> Result<Vec<Violation>, AssignmentError> {
    Ok(violations(inst, &x.to_vector(inst)?))
}
