use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::model::Instance;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeArc {
    pub tail: usize,
    pub head: usize,
    pub lower: i64,
    /// `None` is unbounded.
    pub upper: Option<i64>,
    /// LP1 row this arc stands for; `None` for structural arcs.
    pub row: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonTreeArc {
    pub tail: usize,
    pub head: usize,
    /// `None` is unbounded.
    pub capacity: Option<i64>,
    pub cost: i64,
    /// Edge index in the source instance.
    pub edge: usize,
}

/// A directed spanning tree plus one non-tree arc per instance edge. The
/// network matrix has a `+1` for tree arc `t` and non-tree arc `(a, b)` when
/// `t` lies forward on the tree path from `b` to `a`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlowNetwork {
    pub node_labels: Vec<String>,
    pub tree_arcs: Vec<TreeArc>,
    pub nontree_arcs: Vec<NonTreeArc>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FidelityError {
    #[error("tree arcs do not form a spanning tree")]
    NotATree,
    #[error("edge {edge} crosses tree arc {arc} backwards")]
    BackwardArc { edge: String, arc: usize },
    #[error("edge {edge} covers rows {found:?}, expected {expected:?}")]
    RowMismatch { edge: String, found: BTreeSet<String>, expected: BTreeSet<String> },
}

impl FlowNetwork {
    pub fn node_count(&self) -> usize {
        self.node_labels.len()
    }

    pub fn add_node(&mut self, label: impl Into<String>) -> usize {
        self.node_labels.push(label.into());
        self.node_labels.len() - 1
    }

    /// Tree path from `from` to `to` as `(tree arc, forward)` steps, or `None`
    /// if the tree arcs do not connect them.
    pub fn tree_path(&self, from: usize, to: usize) -> Option<Vec<(usize, bool)>> {
        let n = self.node_count();
        let mut adj = vec![Vec::new(); n];
        for (i, a) in self.tree_arcs.iter().enumerate() {
            adj[a.tail].push((a.head, i, true));
            adj[a.head].push((a.tail, i, false));
        }
        let mut prev: Vec<Option<(usize, usize, bool)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for &(w, arc, fwd) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    prev[w] = Some((u, arc, fwd));
                    queue.push_back(w);
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = to;
        while cur != from {
            let (p, arc, fwd) = prev[cur].expect("reached nodes have predecessors");
            path.push((arc, fwd));
            cur = p;
        }
        path.reverse();
        Some(path)
    }

    /// Tree arcs on the base cycle of non-tree arc `k`.
    pub fn base_cycle(&self, k: usize) -> Option<Vec<(usize, bool)>> {
        let arc = &self.nontree_arcs[k];
        self.tree_path(arc.head, arc.tail)
    }

    /// Whether the tree arcs connect every node without cycles.
    pub fn is_spanning_tree(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return self.tree_arcs.is_empty() && self.nontree_arcs.is_empty();
        }
        if self.tree_arcs.len() + 1 != n {
            return false;
        }
        (1..n).all(|v| self.tree_path(0, v).is_some())
    }

    /// Checks that every base cycle crosses tree arcs forwards only and that
    /// the rows it meets are exactly the LP1 rows in which the edge has a
    /// nonzero coefficient.
    pub fn check_fidelity(&self, inst: &Instance) -> Result<(), FidelityError> {
        if !self.is_spanning_tree() {
            return Err(FidelityError::NotATree);
        }
        for (k, arc) in self.nontree_arcs.iter().enumerate() {
            let edge = &inst.edges()[arc.edge];
            let cycle = self.base_cycle(k).ok_or(FidelityError::NotATree)?;
            let mut found = BTreeSet::new();
            for (t, fwd) in cycle {
                if !fwd {
                    return Err(FidelityError::BackwardArc { edge: edge.id.clone(), arc: t });
                }
                if let Some(row) = &self.tree_arcs[t].row {
                    found.insert(row.clone());
                }
            }
            let mut expected = BTreeSet::new();
            for &h in inst.memberships(arc.edge) {
                let sub = &inst.subgraphs()[h];
                for v in [edge.u, edge.v] {
                    expected.insert(format!("deg[{},{}]", sub.id, inst.node_id(v)));
                }
            }
            for set in inst.laminar() {
                if set.coefficient(edge) > 0 {
                    expected.insert(format!("sum[{}]", set.id));
                }
            }
            if found != expected {
                return Err(FidelityError::RowMismatch { edge: edge.id.clone(), found, expected });
            }
        }
        Ok(())
    }

    /// Graphviz rendering: solid tree arcs labeled by row and bounds, dashed
    /// non-tree arcs labeled by edge.
    pub fn to_dot(&self, inst: &Instance) -> String {
        let mut out = String::from("digraph network {\n");
        for (i, label) in self.node_labels.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{label}\"];");
        }
        for a in &self.tree_arcs {
            let upper = a.upper.map_or("inf".to_string(), |u| u.to_string());
            let row = a.row.as_deref().unwrap_or("");
            let _ = writeln!(out, "  n{} -> n{} [label=\"{row} [{},{upper}]\"];", a.tail, a.head, a.lower);
        }
        for a in &self.nontree_arcs {
            let _ = writeln!(
                out,
                "  n{} -> n{} [style=dashed, label=\"{} w={}\"];",
                a.tail,
                a.head,
                inst.edges()[a.edge].id,
                -a.cost
            );
        }
        out.push_str("}\n");
        out
    }
}
