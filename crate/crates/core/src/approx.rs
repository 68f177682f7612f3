//! Approximation from covers: solve the problem restricted to each part of an
//! `(m, l)`-cover exactly and keep the heaviest solution, which is within a
//! factor `m/l` of the optimum. Also measures integrality gaps.

use std::collections::BTreeMap;

use crate::covers::{CoverPlan, PartKind};
use crate::exact::{branch_and_bound_opt, brute_force_opt_with_limit, search_space, ExactError, DEFAULT_ENUMERATION_LIMIT};
use crate::lp::{build_lp1, build_lp1_star, simplex_solve, LpStatus};
use crate::model::{Assignment, Capacity, Instance, InstanceBuilder};
use crate::netmatrix::{bipartition, local_interval_order, solve_bipartite, solve_tree_interval, NetworkError};
use crate::{integer, Rational};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ApproxError {
    #[error("cover plan does not cover every edge {l} times")]
    InvalidPlan { l: u64 },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// Which exact method produced a part's solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Bipartite,
    TreeInterval,
    CycleMatching,
    BranchAndBound,
}

fn max_degree(inst: &Instance) -> usize {
    (0..inst.node_count()).map(|v| inst.incident(v).len()).max().unwrap_or(0)
}

/// With at most two edges per node and no laminar sets, each node keeps only
/// its tightest joint bound and single-edge bounds move into capacities. The
/// result is a capacitated b-matching with singleton degree-sum sets.
fn tightest_bound_instance(inst: &Instance) -> Instance {
    let mut b = InstanceBuilder::new();
    for v in inst.nodes() {
        b = b.node(v);
    }
    for (e, edge) in inst.edges().iter().enumerate() {
        let mut cap = edge.capacity;
        for v in [edge.u, edge.v] {
            let others: Vec<usize> = inst.incident(v).iter().copied().filter(|&f| f != e).collect();
            for &h in inst.memberships(e) {
                let shared = others.iter().any(|f| inst.memberships(*f).contains(&h));
                if !shared {
                    cap = cap.min(Capacity::Finite(inst.subgraphs()[h].bounds[&v]));
                }
            }
        }
        b = b.edge(&edge.id, inst.node_id(edge.u), inst.node_id(edge.v), edge.weight, cap);
    }
    for v in 0..inst.node_count() {
        let star = inst.incident(v);
        if star.len() != 2 {
            continue;
        }
        let joint = inst
            .memberships(star[0])
            .iter()
            .filter(|h| inst.memberships(star[1]).contains(h))
            .map(|&h| inst.subgraphs()[h].bounds[&v])
            .min();
        if let Some(g) = joint {
            b = b.laminar(&format!("v:{}", inst.node_id(v)), &[inst.node_id(v)], g);
        }
    }
    b.build().expect("derived from a valid instance")
}

fn solve_whole(inst: &Instance, kind: PartKind) -> Result<(Assignment, Method), ApproxError> {
    match kind {
        PartKind::LaminarCategoryUnion if bipartition(inst).is_ok() => {
            match solve_bipartite(inst) {
                Ok(x) => return Ok((x, Method::Bipartite)),
                Err(NetworkError::NotLocallyLaminar(_)) => {}
                Err(e) => return Err(e.into()),
            }
        }
        PartKind::Forest
            if inst.laminar().is_empty() && (0..inst.node_count()).all(|v| local_interval_order(inst, v).is_some()) =>
        {
            match solve_tree_interval(inst) {
                Ok(x) => return Ok((x, Method::TreeInterval)),
                Err(NetworkError::NotForest { .. }) => {}
                Err(e) => return Err(e.into()),
            }
        }
        PartKind::Cycle if inst.laminar().is_empty() && max_degree(inst) <= 2 => {
            let reduced = tightest_bound_instance(inst);
            if bipartition(&reduced).is_ok() {
                let x = solve_bipartite(&reduced)?;
                let vector = x.to_vector(&reduced).expect("same edges");
                return Ok((Assignment::from_vector(inst, &vector), Method::CycleMatching));
            }
        }
        _ => {}
    }
    Ok((branch_and_bound_opt(inst)?, Method::BranchAndBound))
}

/// Optimal assignment of the problem restricted to `part` (edge indices),
/// extended by zeros to the full instance.
pub fn solve_restricted(inst: &Instance, part: &[usize], kind: PartKind) -> Result<(Assignment, Method), ApproxError> {
    let sub = inst.restrict_indices(part);
    let (x, method) = solve_whole(&sub, kind)?;
    let local = x.to_vector(&sub).expect("assignment of the restriction");
    let full = inst.extend_by_zeros(part, &local);
    Ok((Assignment::from_vector(inst, &full), method))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxResult {
    pub assignment: Assignment,
    pub ratio: Rational,
    pub part_objectives: Vec<u64>,
    pub methods: Vec<Method>,
    /// Index of the chosen part; ties go to the lowest index.
    pub best_part: usize,
}

/// Heaviest of the per-part optima; guaranteed at least `(l/m)·OPT`.
pub fn approximate(inst: &Instance, plan: &CoverPlan) -> Result<ApproxResult, ApproxError> {
    if !plan.is_valid(inst) {
        return Err(ApproxError::InvalidPlan { l: plan.l });
    }
    let mut best: Option<(usize, Assignment)> = None;
    let mut part_objectives = Vec::with_capacity(plan.parts.len());
    let mut methods = Vec::with_capacity(plan.parts.len());
    for (i, part) in plan.parts.iter().enumerate() {
        let (x, method) = solve_restricted(inst, &part.edges, part.kind)?;
        part_objectives.push(x.objective);
        methods.push(method);
        if best.as_ref().is_none_or(|(_, b)| x.objective > b.objective) {
            best = Some((i, x));
        }
    }
    let (best_part, assignment) = best.unwrap_or_else(|| (0, Assignment::zero(inst)));
    Ok(ApproxResult { assignment, ratio: plan.ratio(), part_objectives, methods, best_part })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpChoice {
    Lp1,
    /// LP1 with up to `budget` separated odd-set inequalities.
    Lp1Star { budget: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub lp: Rational,
    pub ip: u64,
    pub gap: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GapError {
    #[error("integer optimum is zero (LP optimum {})", crate::format_rational(.lp))]
    ZeroIntegerOptimum { lp: Rational },
    #[error("the relaxation is unbounded")]
    UnboundedRelaxation,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Integer optimum by enumeration when the box is small, else branch and bound.
pub fn integer_optimum(inst: &Instance) -> Result<Assignment, ExactError> {
    let caps = inst.finite_capacities()?;
    if search_space(&caps) <= DEFAULT_ENUMERATION_LIMIT {
        brute_force_opt_with_limit(inst, DEFAULT_ENUMERATION_LIMIT)
    } else {
        branch_and_bound_opt(inst)
    }
}

pub fn lp_optimum(inst: &Instance, lp: LpChoice) -> Result<Rational, GapError> {
    let program = match lp {
        LpChoice::Lp1 => build_lp1(inst),
        LpChoice::Lp1Star { budget } => build_lp1_star(inst, budget).program,
    };
    let sol = simplex_solve(&program);
    match sol.status {
        LpStatus::Optimal => Ok(sol.objective.expect("optimal")),
        _ => Err(GapError::UnboundedRelaxation),
    }
}

/// LP optimum, integer optimum and their ratio.
pub fn measure_gap(inst: &Instance, lp: LpChoice) -> Result<GapReport, GapError> {
    let ip = integer_optimum(inst)?.objective;
    let lp = lp_optimum(inst, lp)?;
    if ip == 0 {
        return Err(GapError::ZeroIntegerOptimum { lp });
    }
    let gap = &lp / integer(ip as i64);
    Ok(GapReport { lp, ip, gap })
}

/// Per-kind counts of the methods used, for reporting.
pub fn method_summary(result: &ApproxResult) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for m in &result.methods {
        *out.entry(format!("{m:?}")).or_default() += 1;
    }
    out
}
