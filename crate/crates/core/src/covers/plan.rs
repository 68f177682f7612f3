use std::fmt;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::model::Instance;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PartKind {
    LaminarCategoryUnion,
    Forest,
    Cycle,
    WholeGraph,
    SingleSubgraphUnion,
}

impl fmt::Display for PartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartKind::LaminarCategoryUnion => "laminar-category-union",
            PartKind::Forest => "forest",
            PartKind::Cycle => "cycle",
            PartKind::WholeGraph => "whole-graph",
            PartKind::SingleSubgraphUnion => "single-subgraph-union",
        })
    }
}

/// An edge set used `multiplicity` times among `F_1..F_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverPart {
    /// Sorted edge indices.
    pub edges: Vec<usize>,
    pub multiplicity: u64,
    pub kind: PartKind,
}

/// An `(m, l)`-cover: every edge lies in at least `l` of the `m` parts,
/// counted with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverPlan {
    pub parts: Vec<CoverPart>,
    pub l: u64,
}

impl CoverPlan {
    pub fn m(&self) -> u64 {
        self.parts.iter().map(|p| p.multiplicity).sum()
    }

    pub fn ratio(&self) -> Rational {
        Rational::new(BigInt::from(self.m()), BigInt::from(self.l))
    }

    /// Number of parts, with multiplicity, containing each edge.
    pub fn coverage(&self, edge_count: usize) -> Vec<u64> {
        let mut count = vec![0; edge_count];
        for part in &self.parts {
            for &e in &part.edges {
                count[e] += part.multiplicity;
            }
        }
        count
    }

    pub fn is_valid(&self, inst: &Instance) -> bool {
        self.l > 0
            && self.parts.iter().all(|p| p.edges.iter().all(|&e| e < inst.edge_count()))
            && self.coverage(inst.edge_count()).iter().all(|&c| c >= self.l)
    }

    pub fn to_json(&self, inst: &Instance) -> Value {
        let parts: Vec<Value> = self
            .parts
            .iter()
            .map(|p| {
                let ids: Vec<&str> = p.edges.iter().map(|&e| inst.edges()[e].id.as_str()).collect();
                json!({ "edges": ids, "multiplicity": p.multiplicity, "kind": p.kind.to_string() })
            })
            .collect();
        json!({ "m": self.m(), "l": self.l, "ratio": crate::format_rational(&self.ratio()), "parts": parts })
    }
}
