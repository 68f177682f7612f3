use std::collections::BTreeSet;

use super::CoverError;
use crate::model::SubgraphSet;

/// Labeled tree on nodes `v_0..v_k`, rooted at `v_0`. Node `v_i` for `i ≥ 1`
/// stands for subgraph `i − 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LabeledTree {
    /// `parent[i]` for `i ≥ 1`; `parent[0]` is unused and set to 0.
    pub parent: Vec<usize>,
}

impl LabeledTree {
    pub fn k(&self) -> usize {
        self.parent.len() - 1
    }

    /// Path from `v_0` to `v`, excluding `v_0`, listed from the root down.
    pub fn path(&self, mut v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while v != 0 {
            out.push(v);
            v = self.parent[v];
        }
        out.reverse();
        out
    }

    pub fn depth(&self) -> usize {
        (0..self.parent.len()).map(|v| self.path(v).len()).max().unwrap_or(0)
    }

    /// Undirected adjacency lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.parent.len()];
        for v in 1..self.parent.len() {
            adj[v].push(self.parent[v]);
            adj[self.parent[v]].push(v);
        }
        adj
    }
}

/// `T_j`: a path `v_0, p_1, …, p_{j−1}` with every other node attached to the
/// last path node. Paths are listed in lexicographic order of labels.
pub fn tree_family(k: usize, j: usize) -> Result<Vec<LabeledTree>, CoverError> {
    if j == 0 || j > k {
        return Err(CoverError::BadArguments { k, k_prime: j });
    }
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(j - 1);
    fn walk(k: usize, len: usize, path: &mut Vec<usize>, out: &mut Vec<LabeledTree>) {
        if path.len() == len {
            let mut parent = vec![0; k + 1];
            let mut prev = 0;
            for &p in path.iter() {
                parent[p] = prev;
                prev = p;
            }
            for (v, slot) in parent.iter_mut().enumerate().skip(1) {
                if !path.contains(&v) {
                    *slot = prev;
                }
            }
            out.push(LabeledTree { parent });
            return;
        }
        for v in 1..=k {
            if !path.contains(&v) {
                path.push(v);
                walk(k, len, path, out);
                path.pop();
            }
        }
    }
    walk(k, j - 1, &mut path, &mut out);
    Ok(out)
}

/// Category system represented by a tree: one index set per node, read off
/// the path from the root (`∅` for `v_0`). Indices are 0-based subgraphs.
pub fn tree_to_category_system(tree: &LabeledTree, k_prime: usize) -> Result<BTreeSet<SubgraphSet>, CoverError> {
    let depth = tree.depth();
    if depth > k_prime {
        return Err(CoverError::DepthExceeded { depth, limit: k_prime });
    }
    Ok((0..tree.parent.len()).map(|v| tree.path(v).into_iter().map(|i| i - 1).collect()).collect())
}

/// Every labeled tree on `v_0..v_k`, via Prüfer sequences.
pub fn all_labeled_trees(k: usize) -> Vec<LabeledTree> {
    let n = k + 1;
    if n == 1 {
        return vec![LabeledTree { parent: vec![0] }];
    }
    if n == 2 {
        return vec![LabeledTree { parent: vec![0, 0] }];
    }
    let total = n.pow(n as u32 - 2);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut seq = Vec::with_capacity(n - 2);
        let mut c = code;
        for _ in 0..n - 2 {
            seq.push(c % n);
            c /= n;
        }
        let mut degree = vec![1usize; n];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        for &s in &seq {
            let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
            edges.push((leaf, s));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        out.push(root_at_zero(n, &edges));
    }
    out
}

fn root_at_zero(n: usize, edges: &[(usize, usize)]) -> LabeledTree {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut parent = vec![usize::MAX; n];
    parent[0] = 0;
    let mut stack = vec![0];
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if parent[w] == usize::MAX {
                parent[w] = u;
                stack.push(w);
            }
        }
    }
    LabeledTree { parent }
}
