use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Capacity, Edge, Instance, LaminarConstraint, RawInstance, SubgraphConstraint};
use crate::model::predicates::find_crossing;

/// One violated instance invariant. Positions refer to the raw document order,
/// so [`ValidationError::pointer`] can name the offending JSON location.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("edge {edge} is a loop at {node}")]
    LoopEdge { pos: usize, edge: String, node: String },
    #[error("edge {edge} has unknown endpoint {node}")]
    UnknownEndpoint { pos: usize, edge: String, node: String },
    #[error("duplicate {kind} id {id}")]
    DuplicateId { kind: &'static str, pos: usize, id: String },
    #[error("subgraph {subgraph} references unknown edge {edge}")]
    UnknownEdgeInSubgraph { pos: usize, subgraph: String, edge: String },
    #[error("subgraph {subgraph} has no degree bound for incident node {node}")]
    MissingDegreeBound { pos: usize, subgraph: String, node: String },
    #[error("subgraph {subgraph} bounds node {node}, which none of its edges touch")]
    ExtraDegreeBound { pos: usize, subgraph: String, node: String },
    #[error("laminar set {set} is empty")]
    EmptyLaminarSet { pos: usize, set: String },
    #[error("laminar set {set} references unknown node {node}")]
    UnknownNodeInLaminar { pos: usize, set: String, node: String },
    #[error("laminar sets {first} and {second} cross")]
    NonLaminarFamily { pos: usize, first: String, second: String },
    #[error("negative value {value} at {pointer}")]
    NegativeValue { pointer: String, value: i64 },
}

impl ValidationError {
    /// JSON pointer of the offending value in the instance document.
    pub fn pointer(&self) -> String {
        match self {
            ValidationError::LoopEdge { pos, .. } | ValidationError::UnknownEndpoint { pos, .. } => {
                format!("/edges/{pos}")
            }
            ValidationError::DuplicateId { kind, pos, .. } => format!("/{kind}/{pos}/id"),
            ValidationError::UnknownEdgeInSubgraph { pos, .. } => format!("/subgraphs/{pos}/edges"),
            ValidationError::MissingDegreeBound { pos, .. } | ValidationError::ExtraDegreeBound { pos, .. } => {
                format!("/subgraphs/{pos}/b")
            }
            ValidationError::EmptyLaminarSet { pos, .. } | ValidationError::UnknownNodeInLaminar { pos, .. } => {
                format!("/laminar/{pos}/nodes")
            }
            ValidationError::NonLaminarFamily { pos, .. } => format!("/laminar/{pos}"),
            ValidationError::NegativeValue { pointer, .. } => pointer.clone(),
        }
    }
}

fn check_unique<'a>(
    kind: &'static str,
    ids: impl Iterator<Item = &'a String>,
    errors: &mut Vec<ValidationError>,
) {
    let mut seen = BTreeSet::new();
    for (pos, id) in ids.enumerate() {
        if !seen.insert(id) {
            errors.push(ValidationError::DuplicateId { kind, pos, id: id.clone() });
        }
    }
}

/// Check every instance invariant and build the canonical, index-based form.
/// All violations are reported, not just the first.
pub fn validate_instance(raw: &RawInstance) -> Result<Instance, Vec<ValidationError>> {
    let mut errors = Vec::new();
    check_unique("nodes", raw.nodes.iter(), &mut errors);
    check_unique("edges", raw.edges.iter().map(|e| &e.id), &mut errors);
    check_unique("subgraphs", raw.subgraphs.iter().map(|s| &s.id), &mut errors);
    check_unique("laminar", raw.laminar.iter().map(|l| &l.id), &mut errors);

    let mut nodes: Vec<String> = raw.nodes.clone();
    nodes.sort();
    nodes.dedup();
    let node_pos: HashMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();

    let mut order: Vec<usize> = (0..raw.edges.len()).collect();
    order.sort_by(|&a, &b| raw.edges[a].id.cmp(&raw.edges[b].id));
    let mut edges = Vec::with_capacity(raw.edges.len());
    let mut edge_pos: HashMap<&str, usize> = HashMap::new();
    for &pos in &order {
        let e = &raw.edges[pos];
        let mut ok = true;
        for endpoint in [&e.u, &e.v] {
            if !node_pos.contains_key(endpoint.as_str()) {
                errors.push(ValidationError::UnknownEndpoint { pos, edge: e.id.clone(), node: endpoint.clone() });
                ok = false;
            }
        }
        if e.u == e.v {
            errors.push(ValidationError::LoopEdge { pos, edge: e.id.clone(), node: e.u.clone() });
            ok = false;
        }
        if e.weight < 0 {
            errors.push(ValidationError::NegativeValue { pointer: format!("/edges/{pos}/w"), value: e.weight });
            ok = false;
        }
        if let Some(c) = e.capacity.filter(|c| *c < 0) {
            errors.push(ValidationError::NegativeValue { pointer: format!("/edges/{pos}/c"), value: c });
            ok = false;
        }
        if ok && !edge_pos.contains_key(e.id.as_str()) {
            edge_pos.insert(e.id.as_str(), edges.len());
            edges.push(Edge {
                id: e.id.clone(),
                u: node_pos[e.u.as_str()],
                v: node_pos[e.v.as_str()],
                weight: e.weight as u64,
                capacity: e.capacity.map_or(Capacity::Infinite, |c| Capacity::Finite(c as u64)),
            });
        }
    }

    let mut subgraphs = Vec::new();
    for (pos, sub) in raw.subgraphs.iter().enumerate() {
        let mut ok = true;
        let mut members = BTreeSet::new();
        for id in &sub.edges {
            match edge_pos.get(id.as_str()) {
                Some(&e) => {
                    members.insert(e);
                }
                None => {
                    // Edges that failed their own checks are already reported.
                    if !raw.edges.iter().any(|e| &e.id == id) {
                        errors.push(ValidationError::UnknownEdgeInSubgraph {
                            pos,
                            subgraph: sub.id.clone(),
                            edge: id.clone(),
                        });
                    }
                    ok = false;
                }
            }
        }
        let touched: BTreeSet<usize> = members.iter().flat_map(|&e| [edges[e].u, edges[e].v]).collect();
        let mut bounds = BTreeMap::new();
        for (name, b) in &sub.bounds {
            if *b < 0 {
                errors.push(ValidationError::NegativeValue { pointer: format!("/subgraphs/{pos}/b/{name}"), value: *b });
                ok = false;
                continue;
            }
            match node_pos.get(name.as_str()) {
                Some(&v) if touched.contains(&v) => {
                    bounds.insert(v, *b as u64);
                }
                _ => {
                    errors.push(ValidationError::ExtraDegreeBound { pos, subgraph: sub.id.clone(), node: name.clone() });
                    ok = false;
                }
            }
        }
        for &v in &touched {
            if !sub.bounds.iter().any(|(name, _)| name == &nodes[v]) {
                errors.push(ValidationError::MissingDegreeBound {
                    pos,
                    subgraph: sub.id.clone(),
                    node: nodes[v].clone(),
                });
                ok = false;
            }
        }
        if ok {
            subgraphs.push(SubgraphConstraint { id: sub.id.clone(), edges: members.into_iter().collect(), bounds });
        }
    }
    subgraphs.sort_by(|a, b| a.id.cmp(&b.id));

    let mut laminar = Vec::new();
    let mut laminar_pos = Vec::new();
    for (pos, set) in raw.laminar.iter().enumerate() {
        let mut ok = true;
        if set.nodes.is_empty() {
            errors.push(ValidationError::EmptyLaminarSet { pos, set: set.id.clone() });
            ok = false;
        }
        if set.limit < 0 {
            errors.push(ValidationError::NegativeValue { pointer: format!("/laminar/{pos}/g"), value: set.limit });
            ok = false;
        }
        let mut members = BTreeSet::new();
        for name in &set.nodes {
            match node_pos.get(name.as_str()) {
                Some(&v) => {
                    members.insert(v);
                }
                None => {
                    errors.push(ValidationError::UnknownNodeInLaminar {
                        pos,
                        set: set.id.clone(),
                        node: name.clone(),
                    });
                    ok = false;
                }
            }
        }
        if ok {
            laminar.push(LaminarConstraint {
                id: set.id.clone(),
                nodes: members.into_iter().collect(),
                limit: set.limit as u64,
            });
            laminar_pos.push(pos);
        }
    }
    let families: Vec<BTreeSet<usize>> = laminar.iter().map(|l| l.nodes.iter().copied().collect()).collect();
    if let Some((a, b)) = find_crossing(&families) {
        errors.push(ValidationError::NonLaminarFamily {
            pos: laminar_pos[b.max(a)],
            first: laminar[a.min(b)].id.clone(),
            second: laminar[a.max(b)].id.clone(),
        });
    }
    laminar.sort_by(|a, b| a.id.cmp(&b.id));

    if errors.is_empty() {
        Ok(Instance::assemble(nodes, edges, subgraphs, laminar))
    } else {
        Err(errors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{InstanceBuilder, RawEdge, RawLaminar, RawSubgraph};

    fn star() -> InstanceBuilder {
        InstanceBuilder::new()
            .edge("ts1", "t", "s1", 1, Capacity::Finite(1))
            .edge("ts2", "t", "s2", 1, Capacity::Finite(1))
            .edge("ts3", "t", "s3", 1, Capacity::Finite(1))
    }

    #[test]
    fn gap_figure_instance_is_valid() {
        let inst = star()
            .subgraph_uniform("H1", &["ts1", "ts2"], 1)
            .subgraph_uniform("H2", &["ts2", "ts3"], 1)
            .laminar("L1", &["s1", "s3"], 1)
            .build()
            .unwrap();
        assert_eq!(inst.edge_count(), 3);
        assert_eq!(inst.subgraphs().len(), 2);
    }

    #[test]
    fn crossing_laminar_sets_are_rejected() {
        let err = star().laminar("A", &["s1", "s2"], 1).laminar("B", &["s2", "s3"], 1).build().unwrap_err();
        assert!(err.iter().any(|e| matches!(e, ValidationError::NonLaminarFamily { .. })));
    }

    #[test]
    fn loop_is_rejected() {
        let err = InstanceBuilder::new().edge("l", "v", "v", 1, Capacity::Infinite).build().unwrap_err();
        assert!(matches!(err[0], ValidationError::LoopEdge { .. }));
        assert_eq!(err[0].pointer(), "/edges/0");
    }

    #[test]
    fn every_error_is_reported() {
        let raw = RawInstance {
            nodes: vec!["a".into(), "b".into()],
            edges: vec![
                RawEdge { id: "e".into(), u: "a".into(), v: "b".into(), weight: -1, capacity: Some(1) },
                RawEdge { id: "f".into(), u: "a".into(), v: "a".into(), weight: 1, capacity: None },
            ],
            subgraphs: vec![RawSubgraph { id: "H".into(), edges: vec!["zz".into()], bounds: vec![] }],
            laminar: vec![RawLaminar { id: "L".into(), nodes: vec![], limit: 1 }],
        };
        let errs = validate_instance(&raw).unwrap_err();
        assert!(errs.iter().any(|e| matches!(e, ValidationError::NegativeValue { .. })));
        assert!(errs.iter().any(|e| matches!(e, ValidationError::LoopEdge { .. })));
        assert!(errs.iter().any(|e| matches!(e, ValidationError::UnknownEdgeInSubgraph { .. })));
        assert!(errs.iter().any(|e| matches!(e, ValidationError::EmptyLaminarSet { .. })));
    }

    #[test]
    fn missing_bound_points_at_b() {
        let raw = RawInstance {
            nodes: vec!["a".into(), "b".into()],
            edges: vec![RawEdge { id: "e".into(), u: "a".into(), v: "b".into(), weight: 1, capacity: Some(1) }],
            subgraphs: vec![RawSubgraph { id: "H".into(), edges: vec!["e".into()], bounds: vec![("a".into(), 1)] }],
            laminar: vec![],
        };
        let errs = validate_instance(&raw).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert!(matches!(&errs[0], ValidationError::MissingDegreeBound { node, .. } if node == "b"));
        assert_eq!(errs[0].pointer(), "/subgraphs/0/b");
    }

    #[test]
    fn canonical_order_is_by_id() {
        let inst = InstanceBuilder::new()
            .edge("z", "b", "a", 1, Capacity::Finite(1))
            .edge("a", "a", "c", 1, Capacity::Finite(1))
            .build()
            .unwrap();
        assert_eq!(inst.nodes(), ["a", "b", "c"]);
        assert_eq!(inst.edges()[0].id, "a");
        assert_eq!(inst.edges()[1].id, "z");
    }
}
