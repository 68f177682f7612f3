use std::collections::BTreeSet;

use super::arborescence::{arborescence_representation, Orientation};
use super::network::{FlowNetwork, NonTreeArc, TreeArc};
use super::NetworkError;
use crate::model::{local_crossing, Instance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    S,
    T,
}

/// Union-find tracking the parity of each element relative to its root.
struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        ParityUnionFind { parent: (0..n).collect(), parity: vec![false; n] }
    }

    fn find(&mut self, v: usize) -> (usize, bool) {
        if self.parent[v] == v {
            return (v, false);
        }
        let (root, p) = self.find(self.parent[v]);
        self.parent[v] = root;
        self.parity[v] ^= p;
        (root, self.parity[v])
    }

    /// Records `parity(a) xor parity(b) == differ`; false on contradiction.
    fn relate(&mut self, a: usize, b: usize, differ: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return (pa ^ pb) == differ;
        }
        self.parent[rb] = ra;
        self.parity[rb] = pa ^ pb ^ differ;
        true
    }
}

/// Side partition in which every edge crosses and every degree-sum set stays
/// on one side. In each component the node with the smallest id is put in S.
pub fn bipartition(inst: &Instance) -> Result<Vec<Side>, NetworkError> {
    let n = inst.node_count();
    let mut uf = ParityUnionFind::new(n);
    for e in inst.edges() {
        if !uf.relate(e.u, e.v, true) {
            return Err(NetworkError::NotBipartite { edge: e.id.clone() });
        }
    }
    for set in inst.laminar() {
        for w in set.nodes.windows(2) {
            if !uf.relate(w[0], w[1], false) {
                return Err(NetworkError::SidedLaminarViolated { set: set.id.clone() });
            }
        }
    }
    let mut anchor: Vec<Option<bool>> = vec![None; n];
    let mut sides = Vec::with_capacity(n);
    for v in 0..n {
        let (root, p) = uf.find(v);
        let first = *anchor[root].get_or_insert(p);
        sides.push(if p == first { Side::S } else { Side::T });
    }
    Ok(sides)
}

fn check_sides(inst: &Instance, sides: &[Side]) -> Result<(), NetworkError> {
    if sides.len() != inst.node_count() {
        return Err(NetworkError::PartitionSize { expected: inst.node_count(), found: sides.len() });
    }
    if let Some(e) = inst.edges().iter().find(|e| sides[e.u] == sides[e.v]) {
        return Err(NetworkError::NotBipartite { edge: e.id.clone() });
    }
    if let Some(set) = inst.laminar().iter().find(|l| l.nodes.iter().any(|&v| sides[v] != sides[l.nodes[0]])) {
        return Err(NetworkError::SidedLaminarViolated { set: set.id.clone() });
    }
    if let Some(w) = local_crossing(inst) {
        return Err(NetworkError::NotLocallyLaminar(w));
    }
    Ok(())
}

/// Network whose matrix is the LP1 constraint matrix of a bipartite, locally
/// laminar instance with sided degree-sum sets. The S side hangs below the
/// root `z` through in-arborescences, the T side through out-arborescences.
pub fn build_bipartite_network(inst: &Instance, sides: &[Side]) -> Result<FlowNetwork, NetworkError> {
    check_sides(inst, sides)?;
    let caps = inst.finite_capacities()?;
    let mut net = FlowNetwork::default();
    let z = net.add_node("z");
    let mut graph_node = vec![usize::MAX; inst.node_count()];

    for (side, orientation) in [(Side::S, Orientation::In), (Side::T, Orientation::Out)] {
        let members: Vec<usize> = (0..inst.node_count()).filter(|&v| sides[v] == side).collect();
        let local = |v: usize| members.binary_search(&v).expect("member of this side");
        let mut family: Vec<BTreeSet<usize>> = Vec::new();
        let mut rows: Vec<(Option<String>, Option<i64>)> = Vec::new();
        for set in inst.laminar().iter().filter(|l| sides[l.nodes[0]] == side) {
            family.push(set.nodes.iter().map(|&v| local(v)).collect());
            rows.push((Some(format!("sum[{}]", set.id)), Some(set.limit as i64)));
        }
        for i in 0..members.len() {
            let singleton = BTreeSet::from([i]);
            if !family.contains(&singleton) {
                family.push(singleton);
                rows.push((None, None));
            }
        }
        let rep = arborescence_representation(&family, members.len(), orientation)
            .expect("degree-sum sets are laminar");
        let mut node_of = vec![z; rep.node_count];
        for t in 1..rep.node_count {
            node_of[t] = net.add_node(format!("L{t}"));
        }
        for (i, &v) in members.iter().enumerate() {
            let t = rep.phi[i];
            graph_node[v] = node_of[t];
            net.node_labels[node_of[t]] = inst.node_id(v).to_owned();
        }
        for (&(tail, head), (row, upper)) in rep.arcs.iter().zip(rows) {
            net.tree_arcs.push(TreeArc { tail: node_of[tail], head: node_of[head], lower: 0, upper, row });
        }
    }

    // Per-node arborescences of the subgraph traces, rooted at the node itself.
    let mut edge_end = vec![[usize::MAX; 2]; inst.edge_count()];
    for v in 0..inst.node_count() {
        let incident = inst.incident(v);
        let orientation = if sides[v] == Side::S { Orientation::In } else { Orientation::Out };
        let present: Vec<usize> =
            (0..inst.subgraphs().len()).filter(|&h| inst.subgraphs()[h].contains_node(v)).collect();
        let family: Vec<BTreeSet<usize>> = present
            .iter()
            .map(|&h| {
                inst.subgraph_star(h, v)
                    .into_iter()
                    .map(|e| incident.iter().position(|&f| f == e).expect("incident edge"))
                    .collect()
            })
            .collect();
        let rep = arborescence_representation(&family, incident.len(), orientation)
            .expect("local laminarity was checked");
        let mut node_of = vec![graph_node[v]; rep.node_count];
        for (i, &h) in present.iter().enumerate() {
            node_of[i + 1] = net.add_node(format!("{}@{}", inst.subgraphs()[h].id, inst.node_id(v)));
        }
        for (i, &(tail, head)) in rep.arcs.iter().enumerate() {
            let sub = &inst.subgraphs()[present[i]];
            net.tree_arcs.push(TreeArc {
                tail: node_of[tail],
                head: node_of[head],
                lower: 0,
                upper: Some(sub.bounds[&v] as i64),
                row: Some(format!("deg[{},{}]", sub.id, inst.node_id(v))),
            });
        }
        for (i, &e) in incident.iter().enumerate() {
            let end = usize::from(sides[v] == Side::T);
            edge_end[e][end] = node_of[rep.phi[i]];
        }
    }

    for (e, edge) in inst.edges().iter().enumerate() {
        let [s_end, t_end] = edge_end[e];
        net.nontree_arcs.push(NonTreeArc {
            tail: t_end,
            head: s_end,
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
    use crate::netmatrix::{decode_flow, min_cost_circulation, solve_bipartite};

    fn fig7() -> Instance {
        let one = Capacity::Finite(1);
        InstanceBuilder::new()
            .edge("e", "s1", "t1", 1, one)
            .edge("f", "s1", "t2", 1, one)
            .edge("g", "s2", "t2", 1, one)
            .edge("h", "s2", "t1", 1, one)
            .subgraph_uniform("H1", &["f", "g", "h"], 1)
            .subgraph_uniform("H2", &["f", "e", "h"], 1)
            .build()
            .unwrap()
    }

    #[test]
    fn fig7_network_has_cost_minus_two() {
        let inst = fig7();
        let sides = bipartition(&inst).unwrap();
        assert_eq!(sides, vec![Side::S, Side::S, Side::T, Side::T]);
        let net = build_bipartite_network(&inst, &sides).unwrap();
        assert_eq!(net.nontree_arcs.len(), 4);
        let flow = min_cost_circulation(&net).unwrap();
        assert_eq!(flow.cost, -2);
        let x = decode_flow(&inst, &net, &flow);
        assert_eq!(x.objective, 2);
    }

    #[test]
    fn singleton_sets_give_a_star_through_z() {
        let inst = InstanceBuilder::new()
            .edge("a", "u", "v", 3, Capacity::Infinite)
            .edge("b", "u", "w", 2, Capacity::Infinite)
            .laminar("U", &["u"], 1)
            .laminar("V", &["v"], 1)
            .laminar("W", &["w"], 1)
            .build()
            .unwrap();
        let net = build_bipartite_network(&inst, &bipartition(&inst).unwrap()).unwrap();
        assert_eq!(net.node_count(), 4);
        assert!(net.tree_arcs.iter().all(|a| a.tail == 0 || a.head == 0));
        assert_eq!(solve_bipartite(&inst).unwrap().objective, 3);
    }

    #[test]
    fn fig8_crossing_set_is_rejected() {
        let one = Capacity::Finite(1);
        let inst = InstanceBuilder::new()
            .edge("a", "s1", "t1", 1, one)
            .edge("b", "t1", "s2", 1, one)
            .edge("c", "s2", "t2", 1, one)
            .laminar("L1", &["t1"], 1)
            .laminar("L2", &["s1", "t2"], 1)
            .laminar("L3", &["s2"], 1)
            .build()
            .unwrap();
        assert!(matches!(bipartition(&inst), Err(NetworkError::SidedLaminarViolated { .. })));
    }

    #[test]
    fn odd_cycle_is_not_bipartite() {
        let one = Capacity::Finite(1);
        let inst = InstanceBuilder::new()
            .edge("a", "x", "y", 1, one)
            .edge("b", "y", "z", 1, one)
            .edge("c", "z", "x", 1, one)
            .build()
            .unwrap();
        assert!(matches!(bipartition(&inst), Err(NetworkError::NotBipartite { .. })));
    }

    #[test]
    fn nested_sided_sets_match_brute_force() {
        let inst = InstanceBuilder::new()
            .edge("a", "s1", "t1", 2, Capacity::Finite(2))
            .edge("b", "s2", "t1", 3, Capacity::Finite(2))
            .edge("c", "s2", "t2", 1, Capacity::Finite(3))
            .edge("d", "s1", "t2", 1, Capacity::Finite(3))
            .subgraph("H", &["a", "b"], &[("s1", 1), ("s2", 2), ("t1", 2)])
            .laminar("S", &["s1", "s2"], 3)
            .laminar("T", &["t2"], 2)
            .build()
            .unwrap();
        let best = brute_force_opt(&inst).unwrap();
        assert_eq!(solve_bipartite(&inst).unwrap().objective, best.objective);
    }
}
