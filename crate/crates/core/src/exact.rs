//! Exact integer optimization at desk scale: exhaustive search and
//! LP-based branch and bound.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_traits::{ToPrimitive, Zero};

use crate::lp::{build_lp1, simplex_solve, LpStatus};
use crate::model::{Assignment, Instance, UnboundedEdge};
use crate::{integer, Rational};

pub const DEFAULT_ENUMERATION_LIMIT: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("search space of {size} points exceeds the limit {limit}")]
    TooLarge { size: u128, limit: u128 },
    #[error(transparent)]
    Unbounded(#[from] UnboundedEdge),
}

/// Every constraint touching an edge, as `(row, coefficient)`.
struct Rows {
    bound: Vec<u64>,
    per_edge: Vec<Vec<(usize, u64)>>,
}

fn constraint_rows(inst: &Instance) -> Rows {
    let mut bound = Vec::new();
    let mut per_edge = vec![Vec::new(); inst.edge_count()];
    for (h, sub) in inst.subgraphs().iter().enumerate() {
        for (&v, &b) in &sub.bounds {
            let r = bound.len();
            bound.push(b);
            for e in inst.subgraph_star(h, v) {
                per_edge[e].push((r, 1));
            }
        }
    }
    for set in inst.laminar() {
        let r = bound.len();
        bound.push(set.limit);
        for (j, e) in inst.edges().iter().enumerate() {
            let a = set.coefficient(e);
            if a > 0 {
                per_edge[j].push((r, a));
            }
        }
    }
    Rows { bound, per_edge }
}

/// Number of points in the box `Π (c′_e + 1)`, saturating.
pub fn search_space(caps: &[u64]) -> u128 {
    caps.iter().fold(1u128, |acc, &c| acc.saturating_mul(c as u128 + 1))
}

pub fn brute_force_opt(inst: &Instance) -> Result<Assignment, ExactError> {
    brute_force_opt_with_limit(inst, DEFAULT_ENUMERATION_LIMIT)
}

/// Maximum-weight assignment by depth-first enumeration over effective
/// capacities in lexicographic order, so ties resolve to the smallest vector.
pub fn brute_force_opt_with_limit(inst: &Instance, limit: u128) -> Result<Assignment, ExactError> {
    let caps = inst.finite_capacities()?;
    let size = search_space(&caps);
    if size > limit {
        return Err(ExactError::TooLarge { size, limit });
    }
    let rows = constraint_rows(inst);
    let weights: Vec<u64> = inst.edges().iter().map(|e| e.weight).collect();
    let mut suffix = vec![0u64; caps.len() + 1];
    for e in (0..caps.len()).rev() {
        suffix[e] = suffix[e + 1] + weights[e] * caps[e];
    }
    struct Search<'a> {
        caps: &'a [u64],
        weights: &'a [u64],
        suffix: &'a [u64],
        rows: &'a Rows,
        residual: Vec<u64>,
        x: Vec<u64>,
        best: Option<(u64, Vec<u64>)>,
    }
    impl Search<'_> {
        fn go(&mut self, e: usize, value: u64) {
            if e == self.caps.len() {
                if self.best.as_ref().is_none_or(|(b, _)| value > *b) {
                    self.best = Some((value, self.x.clone()));
                }
                return;
            }
            if let Some((b, _)) = &self.best {
                if value + self.suffix[e] <= *b {
                    return;
                }
            }
            let room = self.rows.per_edge[e]
                .iter()
                .map(|&(r, a)| self.residual[r] / a)
                .fold(self.caps[e], u64::min);
            for t in 0..=room {
                for &(r, a) in &self.rows.per_edge[e] {
                    self.residual[r] -= a * t;
                }
                self.x[e] = t;
                self.go(e + 1, value + self.weights[e] * t);
                for &(r, a) in &self.rows.per_edge[e] {
                    self.residual[r] += a * t;
                }
            }
            self.x[e] = 0;
        }
    }
    let mut search = Search {
        caps: &caps,
        weights: &weights,
        suffix: &suffix,
        rows: &rows,
        residual: rows.bound.clone(),
        x: vec![0; caps.len()],
        best: None,
    };
    search.go(0, 0);
    let (_, x) = search.best.expect("the zero vector is always feasible");
    Ok(Assignment::from_vector(inst, &x))
}

struct Node {
    bound: Rational,
    seq: usize,
    lower: Vec<u64>,
    upper: Vec<u64>,
    values: Vec<Rational>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    /// Best bound first, then earliest created.
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound.cmp(&other.bound).then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Statistics of a branch-and-bound run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BnbStats {
    pub nodes: usize,
    pub lp_solves: usize,
}

pub fn branch_and_bound_opt(inst: &Instance) -> Result<Assignment, ExactError> {
    branch_and_bound_with_stats(inst).map(|(a, _)| a)
}

/// Variable with the largest fractional part, ties to the lowest index.
fn branching_variable(values: &[Rational]) -> Option<usize> {
    let mut best: Option<(usize, Rational)> = None;
    for (j, v) in values.iter().enumerate() {
        let f = v - v.floor();
        if f.is_zero() {
            continue;
        }
        if best.as_ref().is_none_or(|(_, bf)| f > *bf) {
            best = Some((j, f));
        }
    }
    best.map(|(j, _)| j)
}

/// Best-bound branch and bound over the LP1 relaxation with column bounds
/// tightened to effective capacities. Weights are integral, so a node is
/// pruned once the floor of its LP bound cannot beat the incumbent.
pub fn branch_and_bound_with_stats(inst: &Instance) -> Result<(Assignment, BnbStats), ExactError> {
    let caps = inst.finite_capacities()?;
    let base = build_lp1(inst);
    let n = caps.len();
    let mut stats = BnbStats::default();
    let mut incumbent: (u64, Vec<u64>) = (0, vec![0; n]);
    let mut seq = 0;
    let mut heap = BinaryHeap::new();
    let mut enqueue = |lower: Vec<u64>, upper: Vec<u64>, incumbent: u64, heap: &mut BinaryHeap<Node>, stats: &mut BnbStats| {
        let mut lp = base.clone();
        for j in 0..n {
            lp.set_bounds(j, Some(integer(lower[j] as i64)), Some(integer(upper[j] as i64)));
        }
        stats.lp_solves += 1;
        let sol = simplex_solve(&lp);
        if sol.status != LpStatus::Optimal {
            return;
        }
        let bound = sol.objective.expect("optimal");
        if bound.floor() <= integer(incumbent as i64) {
            return;
        }
        seq += 1;
        heap.push(Node { bound, seq, lower, upper, values: sol.values });
    };
    enqueue(vec![0; n], caps.clone(), incumbent.0, &mut heap, &mut stats);
    while let Some(node) = heap.pop() {
        if node.bound.floor() <= integer(incumbent.0 as i64) {
            break;
        }
        stats.nodes += 1;
        let Some(j) = branching_variable(&node.values) else {
            let x: Vec<u64> = node.values.iter().map(|v| v.to_integer().to_u64().expect("nonnegative")).collect();
            let value = inst.objective(&x);
            if value > incumbent.0 {
                incumbent = (value, x);
            }
            continue;
        };
        let down = node.values[j].floor().to_integer().to_u64().expect("nonnegative");
        let mut upper = node.upper.clone();
        upper[j] = down;
        let mut lower = node.lower.clone();
        lower[j] = down + 1;
        enqueue(node.lower, upper, incumbent.0, &mut heap, &mut stats);
        enqueue(lower, node.upper, incumbent.0, &mut heap, &mut stats);
    }
    Ok((Assignment::from_vector(inst, &incumbent.1), stats))
}
