use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::network::FlowNetwork;
use crate::model::{Assignment, Instance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circulation {
    pub tree_flow: Vec<i64>,
    pub nontree_flow: Vec<i64>,
    pub cost: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CirculationError {
    #[error("arc bounds admit no circulation")]
    InfeasibleBounds,
    #[error("a negative-cost arc has unbounded capacity")]
    Unbounded,
}

struct Residual {
    head: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
    out: Vec<Vec<usize>>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Residual { head: Vec::new(), cap: Vec::new(), cost: Vec::new(), out: vec![Vec::new(); n] }
    }

    /// Adds an arc and its reverse; returns the forward index.
    fn add(&mut self, from: usize, to: usize, cap: i64, cost: i64) -> usize {
        let k = self.head.len();
        self.head.extend([to, from]);
        self.cap.extend([cap, 0]);
        self.cost.extend([cost, -cost]);
        self.out[from].push(k);
        self.out[to].push(k + 1);
        k
    }

    fn push(&mut self, k: usize, amount: i64) {
        self.cap[k] -= amount;
        self.cap[k ^ 1] += amount;
    }

    /// Successive shortest paths from `s` to `t` with reduced costs. All
    /// residual costs must be nonnegative on entry. Returns the flow sent.
    fn augment_all(&mut self, s: usize, t: usize) -> i64 {
        let n = self.out.len();
        let mut potential = vec![0i64; n];
        let mut sent = 0;
        loop {
            let mut dist = vec![i64::MAX; n];
            let mut via = vec![usize::MAX; n];
            dist[s] = 0;
            let mut heap = BinaryHeap::from([Reverse((0i64, s))]);
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > dist[u] {
                    continue;
                }
                for &k in &self.out[u] {
                    if self.cap[k] == 0 {
                        continue;
                    }
                    let w = self.head[k];
                    let nd = d + self.cost[k] + potential[u] - potential[w];
                    if nd < dist[w] {
                        dist[w] = nd;
                        via[w] = k;
                        heap.push(Reverse((nd, w)));
                    }
                }
            }
            if dist[t] == i64::MAX {
                return sent;
            }
            for v in 0..n {
                if dist[v] != i64::MAX {
                    potential[v] += dist[v];
                }
            }
            let mut amount = i64::MAX;
            let mut v = t;
            while v != s {
                let k = via[v];
                amount = amount.min(self.cap[k]);
                v = self.head[k ^ 1];
            }
            let mut v = t;
            while v != s {
                let k = via[v];
                self.push(k, amount);
                v = self.head[k ^ 1];
            }
            sent += amount;
        }
    }
}

struct ArcSpec {
    tail: usize,
    head: usize,
    lower: i64,
    upper: Option<i64>,
    cost: i64,
}

/// Minimum-cost circulation on tree and non-tree arcs together. Infinite
/// capacities are replaced by the total finite non-tree capacity, which no
/// circulation can exceed on any arc since every cycle uses a non-tree arc.
pub fn min_cost_circulation(net: &FlowNetwork) -> Result<Circulation, CirculationError> {
    let mut arcs: Vec<ArcSpec> = net
        .tree_arcs
        .iter()
        .map(|a| ArcSpec { tail: a.tail, head: a.head, lower: a.lower, upper: a.upper, cost: 0 })
        .collect();
    arcs.extend(net.nontree_arcs.iter().map(|a| ArcSpec {
        tail: a.tail,
        head: a.head,
        lower: 0,
        upper: a.capacity,
        cost: a.cost,
    }));
    let nontree_start = net.tree_arcs.len();
    if arcs[nontree_start..].iter().any(|a| a.upper.is_none() && a.cost < 0) {
        return Err(CirculationError::Unbounded);
    }
    let big: i64 = arcs[nontree_start..].iter().filter_map(|a| a.upper).sum::<i64>()
        + arcs.iter().map(|a| a.lower).sum::<i64>();

    let n = net.node_count();
    let (source, sink) = (n, n + 1);
    let mut res = Residual::new(n + 2);
    let mut excess = vec![0i64; n];
    let mut index = Vec::with_capacity(arcs.len());
    for a in &arcs {
        let upper = a.upper.unwrap_or(big.max(a.lower));
        if upper < a.lower {
            return Err(CirculationError::InfeasibleBounds);
        }
        let span = upper - a.lower;
        let k = res.add(a.tail, a.head, span, a.cost);
        let mut flow = a.lower;
        if a.cost < 0 {
            res.push(k, span);
            flow += span;
        }
        excess[a.head] += flow;
        excess[a.tail] -= flow;
        index.push(k);
    }
    let mut demand = 0;
    for (v, &ex) in excess.iter().enumerate() {
        if ex > 0 {
            res.add(source, v, ex, 0);
            demand += ex;
        } else if ex < 0 {
            res.add(v, sink, -ex, 0);
        }
    }
    if res.augment_all(source, sink) != demand {
        return Err(CirculationError::InfeasibleBounds);
    }
    let flows: Vec<i64> = arcs
        .iter()
        .zip(&index)
        .map(|(a, &k)| a.lower + res.cap[k ^ 1])
        .collect();
    let cost = arcs.iter().zip(&flows).map(|(a, f)| a.cost * f).sum();
    Ok(Circulation {
        tree_flow: flows[..nontree_start].to_vec(),
        nontree_flow: flows[nontree_start..].to_vec(),
        cost,
    })
}

/// Reads the assignment off the non-tree arc flows.
pub fn decode_flow(inst: &Instance, net: &FlowNetwork, flow: &Circulation) -> Assignment {
    let mut x = vec![0u64; inst.edge_count()];
    for (arc, &f) in net.nontree_arcs.iter().zip(&flow.nontree_flow) {
        x[arc.edge] = f as u64;
    }
    Assignment::from_vector(inst, &x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netmatrix::network::{NonTreeArc, TreeArc};

    fn two_node(lower: i64, upper: Option<i64>, cap: Option<i64>, cost: i64) -> FlowNetwork {
        FlowNetwork {
            node_labels: vec!["r".into(), "a".into()],
            tree_arcs: vec![TreeArc { tail: 0, head: 1, lower, upper, row: None }],
            nontree_arcs: vec![NonTreeArc { tail: 1, head: 0, capacity: cap, cost, edge: 0 }],
        }
    }

    #[test]
    fn zero_cost_network_costs_nothing() {
        let c = min_cost_circulation(&two_node(0, Some(3), Some(5), 0)).unwrap();
        assert_eq!(c.cost, 0);
    }

    #[test]
    fn negative_cost_saturates_to_tightest_bound() {
        let c = min_cost_circulation(&two_node(0, Some(3), Some(5), -2)).unwrap();
        assert_eq!(c.nontree_flow, vec![3]);
        assert_eq!(c.tree_flow, vec![3]);
        assert_eq!(c.cost, -6);
        let c = min_cost_circulation(&two_node(0, None, Some(5), -1)).unwrap();
        assert_eq!(c.cost, -5);
    }

    #[test]
    fn lower_bounds_force_flow() {
        let c = min_cost_circulation(&two_node(2, Some(3), Some(5), 4)).unwrap();
        assert_eq!(c.nontree_flow, vec![2]);
        assert_eq!(c.cost, 8);
        assert_eq!(
            min_cost_circulation(&two_node(6, Some(7), Some(5), 0)),
            Err(CirculationError::InfeasibleBounds)
        );
        assert_eq!(min_cost_circulation(&two_node(0, None, None, -1)), Err(CirculationError::Unbounded));
    }
}
