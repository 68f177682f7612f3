use std::collections::{BTreeSet, VecDeque};

use super::plan::{CoverPart, CoverPlan, PartKind};
use super::CoverError;
use crate::model::Instance;
use crate::netmatrix::local_interval_order;

/// Node set violating `l·i(X) ≤ m(|X| − 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsityWitness {
    /// Node ids.
    pub nodes: Vec<String>,
    pub induced_edges: usize,
}

/// `m` disjoint forests over element copies; each element is a copy of an
/// edge `(u, v)`.
struct Partition<'a> {
    ends: &'a [(usize, usize)],
    node_count: usize,
    forest_of: Vec<Option<usize>>,
    members: Vec<BTreeSet<usize>>,
}

impl Partition<'_> {
    /// Elements on the path between `a` and `b` in forest `i`, or `None` if
    /// they lie in different trees.
    fn path(&self, i: usize, a: usize, b: usize) -> Option<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for &x in &self.members[i] {
            let (u, v) = self.ends[x];
            adj[u].push((v, x));
            adj[v].push((u, x));
        }
        let mut via = vec![None; self.node_count];
        let mut seen = vec![false; self.node_count];
        seen[a] = true;
        let mut queue = VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            if u == b {
                break;
            }
            for &(w, x) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    via[w] = Some((u, x));
                    queue.push_back(w);
                }
            }
        }
        if !seen[b] {
            return None;
        }
        let mut out = Vec::new();
        let mut cur = b;
        while let Some((p, x)) = via[cur] {
            out.push(x);
            cur = p;
        }
        Some(out)
    }

    /// Inserts element `s` by a shortest augmenting exchange path. On failure
    /// returns the labeled elements.
    fn insert(&mut self, s: usize) -> Result<(), Vec<usize>> {
        let m = self.members.len();
        let mut label: Vec<Option<(usize, usize)>> = vec![None; self.ends.len()];
        let mut labeled = vec![false; self.ends.len()];
        labeled[s] = true;
        let mut order = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let (u, v) = self.ends[x];
            for i in 0..m {
                if self.forest_of[x] == Some(i) {
                    continue;
                }
                match self.path(i, u, v) {
                    None => {
                        self.augment(x, i, &label);
                        return Ok(());
                    }
                    Some(cycle) => {
                        for y in cycle {
                            if !labeled[y] {
                                labeled[y] = true;
                                label[y] = Some((x, i));
                                order.push(y);
                                queue.push_back(y);
                            }
                        }
                    }
                }
            }
        }
        Err(order)
    }

    /// Moves `x` into forest `i`, then lets each predecessor take the place
    /// freed by its successor.
    fn augment(&mut self, mut x: usize, mut i: usize, label: &[Option<(usize, usize)>]) {
        loop {
            if let Some(old) = self.forest_of[x] {
                self.members[old].remove(&x);
            }
            self.members[i].insert(x);
            self.forest_of[x] = Some(i);
            match label[x] {
                Some((pred, forest)) => {
                    x = pred;
                    i = forest;
                }
                None => return,
            }
        }
    }
}

fn witness(inst: &Instance, ends: &[(usize, usize)], labeled: &[usize]) -> SparsityWitness {
    let n = inst.node_count();
    let mut comp: Vec<usize> = (0..n).collect();
    fn root(c: &mut [usize], v: usize) -> usize {
        if c[v] != v {
            c[v] = root(c, c[v]);
        }
        c[v]
    }
    for &x in labeled {
        let (a, b) = (root(&mut comp, ends[x].0), root(&mut comp, ends[x].1));
        comp[a] = b;
    }
    let r = root(&mut comp, ends[labeled[0]].0);
    let nodes: Vec<usize> = (0..n).filter(|&v| root(&mut comp, v) == r).collect();
    let induced = inst
        .edges()
        .iter()
        .filter(|e| nodes.binary_search(&e.u).is_ok() && nodes.binary_search(&e.v).is_ok())
        .count();
    SparsityWitness { nodes: nodes.iter().map(|&v| inst.node_id(v).to_owned()).collect(), induced_edges: induced }
}

/// Covers every edge `l` times by `m` forests: each edge is copied `l` times
/// and the copies are partitioned into `m` forests by matroid partition. If
/// no such partition exists, returns a node set `X` with `l·i(X) > m(|X|−1)`.
pub fn forest_cover(inst: &Instance, m: u64, l: u64) -> Result<CoverPlan, CoverError> {
    if m == 0 || l == 0 {
        return Err(CoverError::BadArguments { k: m as usize, k_prime: l as usize });
    }
    if !inst.laminar().is_empty() {
        return Err(CoverError::LaminarSystemPresent);
    }
    if let Some(v) = (0..inst.node_count()).find(|&v| local_interval_order(inst, v).is_none()) {
        return Err(CoverError::NoLocalIntervalOrder { node: inst.node_id(v).to_owned() });
    }
    let ends: Vec<(usize, usize)> =
        inst.edges().iter().flat_map(|e| std::iter::repeat_n((e.u, e.v), l as usize)).collect();
    let mut part = Partition {
        ends: &ends,
        node_count: inst.node_count(),
        forest_of: vec![None; ends.len()],
        members: vec![BTreeSet::new(); m as usize],
    };
    for s in 0..ends.len() {
        if let Err(labeled) = part.insert(s) {
            return Err(CoverError::Infeasible(witness(inst, &ends, &labeled)));
        }
    }
    let parts = part
        .members
        .iter()
        .map(|copies| {
            let mut edges: Vec<usize> = copies.iter().map(|&x| x / l as usize).collect();
            edges.sort_unstable();
            CoverPart { edges, multiplicity: 1, kind: PartKind::Forest }
        })
        .collect();
    Ok(CoverPlan { parts, l })
}
