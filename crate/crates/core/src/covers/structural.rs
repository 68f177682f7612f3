use std::collections::VecDeque;

use super::plan::{CoverPart, CoverPlan, PartKind};
use super::CoverError;
use crate::model::Instance;
use crate::netmatrix::local_interval_order;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    EvenCycle,
    PseudoTree,
    Cactus,
    UniformBounds,
}

/// Spanning forest by BFS from each unvisited node in index order; returns
/// the non-tree edges and the tree parent edge of each node.
fn spanning_forest(inst: &Instance) -> (Vec<usize>, Vec<Option<usize>>) {
    let n = inst.node_count();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut in_tree = vec![false; inst.edge_count()];
    for r in 0..n {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut queue = VecDeque::from([r]);
        while let Some(u) = queue.pop_front() {
            for &e in inst.incident(u) {
                let w = inst.edges()[e].other(u);
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(e);
                    in_tree[e] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let extra = (0..inst.edge_count()).filter(|&e| !in_tree[e]).collect();
    (extra, parent)
}

/// Edges of the cycle closed by non-tree edge `e`.
fn fundamental_cycle(inst: &Instance, parent: &[Option<usize>], e: usize) -> Vec<usize> {
    let climb = |mut v: usize| {
        let mut path = vec![v];
        while let Some(pe) = parent[v] {
            v = inst.edges()[pe].other(v);
            path.push(v);
        }
        path
    };
    let edge = &inst.edges()[e];
    let (pu, pv) = (climb(edge.u), climb(edge.v));
    let meet = *pu.iter().find(|x| pv.contains(x)).expect("same component");
    let mut cycle = vec![e];
    for path in [pu, pv] {
        for &v in path.iter().take_while(|&&v| v != meet) {
            cycle.push(parent[v].expect("below the meeting node"));
        }
    }
    cycle
}

fn is_connected(inst: &Instance) -> bool {
    let (_, parent) = spanning_forest(inst);
    (1..inst.node_count()).all(|v| parent[v].is_some())
}

fn has_local_intervals(inst: &Instance) -> bool {
    (0..inst.node_count()).all(|v| local_interval_order(inst, v).is_some())
}

fn uniform_bound(inst: &Instance) -> bool {
    let mut values = inst.subgraphs().iter().flat_map(|h| h.bounds.values());
    match values.next() {
        Some(first) => values.all(|b| b == first),
        None => false,
    }
}

/// The first recognised shape, in the order even cycle, pseudo-tree, cactus,
/// uniform degree bounds. The graph shapes require an empty laminar system
/// and, except for the even cycle, local interval orders.
pub fn detect_shape(inst: &Instance) -> Option<Shape> {
    let graph_ok = inst.laminar().is_empty() && inst.edge_count() > 0;
    if graph_ok {
        let connected = is_connected(inst);
        let even_cycle = connected
            && inst.edge_count() == inst.node_count()
            && (0..inst.node_count()).all(|v| inst.incident(v).len() == 2)
            && inst.edge_count().is_multiple_of(2);
        if even_cycle {
            return Some(Shape::EvenCycle);
        }
        if has_local_intervals(inst) {
            if connected && inst.edge_count() == inst.node_count() {
                return Some(Shape::PseudoTree);
            }
            let (extra, parent) = spanning_forest(inst);
            let mut used = vec![false; inst.edge_count()];
            let disjoint = extra.iter().all(|&e| {
                fundamental_cycle(inst, &parent, e).into_iter().all(|f| !std::mem::replace(&mut used[f], true))
            });
            if disjoint {
                return Some(Shape::Cactus);
            }
        }
    }
    if inst.subgraphs().is_empty() || !uniform_bound(inst) {
        return None;
    }
    Some(Shape::UniformBounds)
}

fn part(edges: Vec<usize>, kind: PartKind) -> CoverPart {
    CoverPart { edges, multiplicity: 1, kind }
}

fn without(all: &[usize], drop: &[usize]) -> Vec<usize> {
    all.iter().copied().filter(|e| !drop.contains(e)).collect()
}

/// Cover matched to the instance's shape; see [`detect_shape`].
pub fn structural_cover(inst: &Instance) -> Result<CoverPlan, CoverError> {
    let shape = detect_shape(inst).ok_or(CoverError::NoStructureMatched)?;
    let all: Vec<usize> = (0..inst.edge_count()).collect();
    let plan = match shape {
        Shape::EvenCycle => CoverPlan { parts: vec![part(all, PartKind::Cycle)], l: 1 },
        Shape::PseudoTree => {
            let (extra, parent) = spanning_forest(inst);
            let mut cycle = fundamental_cycle(inst, &parent, extra[0]);
            cycle.sort_unstable();
            let m = cycle.len() as u64;
            let mut parts: Vec<CoverPart> =
                cycle.iter().map(|&c| part(without(&all, &[c]), PartKind::Forest)).collect();
            if m.is_multiple_of(2) {
                parts.insert(0, part(cycle.clone(), PartKind::Cycle));
                CoverPlan { parts, l: m }
            } else {
                CoverPlan { parts, l: m - 1 }
            }
        }
        Shape::Cactus => {
            let (extra, parent) = spanning_forest(inst);
            let cycles: Vec<Vec<usize>> = extra.iter().map(|&e| fundamental_cycle(inst, &parent, e)).collect();
            let m = cycles.iter().map(Vec::len).min().unwrap_or(1);
            let parts = (0..m)
                .map(|i| {
                    let drop: Vec<usize> = cycles
                        .iter()
                        .flat_map(|c| c.iter().enumerate().filter(|(p, _)| p % m == i).map(|(_, &e)| e))
                        .collect();
                    part(without(&all, &drop), PartKind::Forest)
                })
                .collect();
            CoverPlan { parts, l: if cycles.is_empty() { 1 } else { m as u64 - 1 } }
        }
        Shape::UniformBounds => {
            let single: Vec<usize> = all.iter().copied().filter(|&e| inst.memberships(e).len() <= 1).collect();
            let mut parts = vec![part(single, PartKind::LaminarCategoryUnion)];
            for h in 0..inst.subgraphs().len() {
                let edges = all
                    .iter()
                    .copied()
                    .filter(|&e| inst.memberships(e).is_empty() || inst.memberships(e).contains(&h))
                    .collect();
                parts.push(part(edges, PartKind::SingleSubgraphUnion));
            }
            CoverPlan { parts, l: 2 }
        }
    };
    Ok(plan)
}
