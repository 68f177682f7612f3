use std::collections::{BTreeSet, VecDeque};

use super::network::{FlowNetwork, NonTreeArc, TreeArc};
use super::NetworkError;
use crate::model::Instance;

/// Order of the subgraphs bounded at `node` under which every incident edge
/// belongs to a consecutive run, or `None` if no such order exists. Found by
/// backtracking over prefixes, smallest subgraph index first.
pub fn local_interval_order(inst: &Instance, node: usize) -> Option<Vec<usize>> {
    let present: Vec<usize> =
        (0..inst.subgraphs().len()).filter(|&h| inst.subgraphs()[h].contains_node(node)).collect();
    let rows: Vec<BTreeSet<usize>> = inst
        .incident(node)
        .iter()
        .map(|&e| inst.memberships(e).iter().copied().filter(|h| present.contains(h)).collect())
        .filter(|m: &BTreeSet<usize>| m.len() > 1)
        .collect();
    let mut order = Vec::with_capacity(present.len());
    let mut used = vec![false; present.len()];
    extend(&present, &rows, &mut order, &mut used).then_some(order)
}

fn prefix_consistent(rows: &[BTreeSet<usize>], order: &[usize]) -> bool {
    rows.iter().all(|row| {
        let hits: Vec<usize> = (0..order.len()).filter(|&i| row.contains(&order[i])).collect();
        let (Some(&first), Some(&last)) = (hits.first(), hits.last()) else {
            return true;
        };
        let contiguous = last - first + 1 == hits.len();
        let closed = last + 1 < order.len();
        contiguous && (!closed || hits.len() == row.len())
    })
}

fn extend(present: &[usize], rows: &[BTreeSet<usize>], order: &mut Vec<usize>, used: &mut [bool]) -> bool {
    if order.len() == present.len() {
        return true;
    }
    for i in 0..present.len() {
        if used[i] {
            continue;
        }
        order.push(present[i]);
        used[i] = true;
        if prefix_consistent(rows, order) && extend(present, rows, order, used) {
            return true;
        }
        order.pop();
        used[i] = false;
    }
    false
}

/// 1-based first and last chain positions holding `edge` at a node, or
/// `(1, 0)` when no subgraph there contains it.
fn interval(inst: &Instance, order: &[usize], edge: usize) -> (usize, usize) {
    let hits: Vec<usize> = (0..order.len()).filter(|&j| inst.memberships(edge).contains(&order[j])).collect();
    match (hits.first(), hits.last()) {
        (Some(&p), Some(&q)) => (p + 1, q + 1),
        _ => (1, 0),
    }
}

/// Network whose matrix is the LP1 constraint matrix of a forest instance with
/// an empty laminar system and local interval orders. Each node contributes a
/// chain with one arc per bounded subgraph; chains of adjacent nodes are glued
/// at the ends of the edge's intervals. Each component is rooted at its
/// smallest node id and components hang off the first root by free arcs.
pub fn build_tree_interval_network(inst: &Instance) -> Result<FlowNetwork, NetworkError> {
    if !inst.laminar().is_empty() {
        return Err(NetworkError::NonEmptyLaminarSystem);
    }
    let n = inst.node_count();
    let mut comp: Vec<usize> = (0..n).collect();
    fn root(comp: &mut [usize], v: usize) -> usize {
        if comp[v] != v {
            comp[v] = root(comp, comp[v]);
        }
        comp[v]
    }
    for e in inst.edges() {
        let (a, b) = (root(&mut comp, e.u), root(&mut comp, e.v));
        if a == b {
            return Err(NetworkError::NotForest { edge: e.id.clone() });
        }
        comp[a.max(b)] = a.min(b);
    }
    let mut orders = Vec::with_capacity(n);
    for v in 0..n {
        let order = local_interval_order(inst, v)
            .ok_or_else(|| NetworkError::NoLocalIntervalOrder { node: inst.node_id(v).to_owned() })?;
        orders.push(order);
    }
    let caps = inst.finite_capacities()?;

    let mut net = FlowNetwork::default();
    let mut chain: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut parent_edge: Vec<Option<usize>> = vec![None; n];
    let mut first_root = None;
    for r in 0..n {
        if root(&mut comp, r) != r {
            continue;
        }
        let mut queue = VecDeque::from([r]);
        while let Some(v) = queue.pop_front() {
            let k = orders[v].len();
            let glue = match parent_edge[v] {
                Some(e) => {
                    let u = inst.edges()[e].other(v);
                    let (p_v, _) = interval(inst, &orders[v], e);
                    let (_, q_u) = interval(inst, &orders[u], e);
                    Some((p_v - 1, chain[u][q_u]))
                }
                None => None,
            };
            let mut nodes = Vec::with_capacity(k + 1);
            for j in 0..=k {
                match glue {
                    Some((at, shared)) if at == j => nodes.push(shared),
                    _ => nodes.push(net.add_node(format!("z[{},{j}]", inst.node_id(v)))),
                }
            }
            for (j, &h) in orders[v].iter().enumerate() {
                let sub = &inst.subgraphs()[h];
                net.tree_arcs.push(TreeArc {
                    tail: nodes[j],
                    head: nodes[j + 1],
                    lower: 0,
                    upper: Some(sub.bounds[&v] as i64),
                    row: Some(format!("deg[{},{}]", sub.id, inst.node_id(v))),
                });
            }
            if parent_edge[v].is_none() {
                match first_root {
                    None => first_root = Some(nodes[0]),
                    Some(top) => net.tree_arcs.push(TreeArc { tail: top, head: nodes[0], lower: 0, upper: None, row: None }),
                }
            }
            chain[v] = nodes;
            for &e in inst.incident(v) {
                let w = inst.edges()[e].other(v);
                if Some(e) != parent_edge[v] {
                    parent_edge[w] = Some(e);
                    queue.push_back(w);
                }
            }
        }
    }

    for (e, edge) in inst.edges().iter().enumerate() {
        let (parent, child) = if parent_edge[edge.v] == Some(e) { (edge.u, edge.v) } else { (edge.v, edge.u) };
        let (p_u, _) = interval(inst, &orders[parent], e);
        let (_, q_v) = interval(inst, &orders[child], e);
        net.nontree_arcs.push(NonTreeArc {
            tail: chain[child][q_v],
            head: chain[parent][p_u - 1],
            capacity: Some(caps[e] as i64),
            cost: -(edge.weight as i64),
            edge: e,
        });
    }
    net.check_fidelity(inst)?;
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::brute_force_opt;
    use crate::model::{Capacity, InstanceBuilder};
    use crate::netmatrix::solve_tree_interval;

    #[test]
    fn two_subgraphs_on_a_tree_always_work() {
        let inst = InstanceBuilder::new()
            .edge("a", "r", "x", 2, Capacity::Finite(2))
            .edge("b", "r", "y", 1, Capacity::Finite(2))
            .edge("c", "y", "z", 3, Capacity::Finite(1))
            .edge("d", "y", "w", 1, Capacity::Finite(2))
            .subgraph_uniform("H1", &["a", "b", "c"], 2)
            .subgraph("H2", &["b", "c", "d"], &[("r", 1), ("y", 2), ("z", 1), ("w", 1)])
            .build()
            .unwrap();
        let net = build_tree_interval_network(&inst).unwrap();
        assert_eq!(net.nontree_arcs.len(), 4);
        assert_eq!(solve_tree_interval(&inst).unwrap().objective, brute_force_opt(&inst).unwrap().objective);
    }

    #[test]
    fn crossing_star_has_no_interval_order() {
        // Each pair of subgraphs shares one edge at the centre, forming a
        // triangle in the membership pattern.
        let one = Capacity::Finite(1);
        let inst = InstanceBuilder::new()
            .edge("a", "c", "x", 1, one)
            .edge("b", "c", "y", 1, one)
            .edge("d", "c", "z", 1, one)
            .subgraph_uniform("H1", &["a", "b"], 1)
            .subgraph_uniform("H2", &["b", "d"], 1)
            .subgraph_uniform("H3", &["d", "a"], 1)
            .build()
            .unwrap();
        assert!(local_interval_order(&inst, inst.node_index("c").unwrap()).is_none());
        assert!(matches!(build_tree_interval_network(&inst), Err(NetworkError::NoLocalIntervalOrder { .. })));
    }

    #[test]
    fn plain_path_and_forest() {
        let inst = InstanceBuilder::new()
            .edge("a", "p", "q", 2, Capacity::Finite(3))
            .edge("b", "q", "r", 1, Capacity::Finite(1))
            .edge("c", "s", "t", 4, Capacity::Finite(2))
            .node("lonely")
            .build()
            .unwrap();
        assert_eq!(solve_tree_interval(&inst).unwrap().objective, 15);
    }

    #[test]
    fn rejects_cycles_and_laminar_sets() {
        let one = Capacity::Finite(1);
        let cycle = InstanceBuilder::new()
            .edge("a", "x", "y", 1, one)
            .edge("b", "y", "x", 1, one)
            .build()
            .unwrap();
        assert!(matches!(build_tree_interval_network(&cycle), Err(NetworkError::NotForest { .. })));
        let lam = InstanceBuilder::new().edge("a", "x", "y", 1, one).laminar("X", &["x"], 1).build().unwrap();
        assert_eq!(build_tree_interval_network(&lam), Err(NetworkError::NonEmptyLaminarSystem));
    }
}
