use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::blossom::{separate, BidirectedSystem};
use super::program::{Direction, LinearProgram, Sense};
use super::simplex::{simplex_solve, LpStatus};
use crate::model::{category_partition, is_locally_laminar, local_crossing, CrossingWitness, Instance};
use crate::{integer, Rational};

/// The natural relaxation: `0 ≤ x ≤ c`, one row `deg[H,v]` per subgraph
/// degree bound and one row `sum[L]` per degree-sum bound.
pub fn build_lp1(inst: &Instance) -> LinearProgram {
    let mut lp = LinearProgram::new(Direction::Maximize);
    for e in inst.edges() {
        let j = lp.add_column(format!("x[{}]", e.id), Some(integer(0)), e.capacity.finite().map(|c| integer(c as i64)));
        lp.set_objective(j, integer(e.weight as i64));
    }
    for (h, sub) in inst.subgraphs().iter().enumerate() {
        for (&v, &b) in &sub.bounds {
            let star = inst.subgraph_star(h, v);
            lp.add_row(
                format!("deg[{},{}]", sub.id, inst.node_id(v)),
                star.into_iter().map(|e| (e, integer(1))),
                Sense::Le,
                integer(b as i64),
            );
        }
    }
    for set in inst.laminar() {
        let coeffs = inst
            .edges()
            .iter()
            .enumerate()
            .map(|(j, e)| (j, integer(set.coefficient(e) as i64)))
            .collect::<Vec<_>>();
        lp.add_row(format!("sum[{}]", set.id), coeffs, Sense::Le, integer(set.limit as i64));
    }
    lp
}

/// The extended formulation over `x`, `y^v_F` and `z_L` for a locally laminar
/// instance, with each LP column's expression in terms of edge variables.
#[derive(Clone, Debug)]
pub struct Lp3Model {
    pub system: BidirectedSystem,
    pub program: LinearProgram,
    /// For each system column, `(edge index, coefficient)` terms of its value.
    pub projection: Vec<Vec<(usize, i64)>>,
    /// System column of each edge variable.
    pub edge_columns: Vec<usize>,
}

impl Lp3Model {
    /// Values of every system column implied by an edge vector.
    pub fn lift(&self, x: &[Rational]) -> Vec<Rational> {
        self.projection.iter().map(|terms| terms.iter().map(|(e, a)| integer(*a) * &x[*e]).sum()).collect()
    }

    /// Substitutes the projection into a system-level inequality.
    pub fn project(&self, coeffs: &[(usize, i64)]) -> BTreeMap<usize, i64> {
        let mut out: BTreeMap<usize, i64> = BTreeMap::new();
        for (j, a) in coeffs {
            for (e, b) in &self.projection[*j] {
                *out.entry(*e).or_default() += a * b;
            }
        }
        out.retain(|_, a| *a != 0);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Lp3Error {
    #[error("subgraphs {} and {} cross at node {}", .0.first, .0.second, .0.node)]
    NotLocallyLaminar(CrossingWitness),
}

pub fn build_lp3(inst: &Instance) -> Result<Lp3Model, Lp3Error> {
    if let Some(w) = local_crossing(inst) {
        return Err(Lp3Error::NotLocallyLaminar(w));
    }
    let mut sys = BidirectedSystem::default();
    let mut projection: Vec<Vec<(usize, i64)>> = Vec::new();
    let mut edge_columns = Vec::new();
    for (j, e) in inst.edges().iter().enumerate() {
        edge_columns.push(sys.add_column(format!("x[{}]", e.id), Some(0), e.capacity.finite().map(|c| c as i64)));
        projection.push(vec![(j, 1)]);
    }

    // Degree-sum tree: sets by decreasing size, ties by id; identical sets chain.
    let sets = inst.laminar();
    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(sets[i].nodes.len()));
    let mut deepest: Vec<Option<usize>> = vec![None; inst.node_count()];
    let mut parent_of_set: Vec<Option<usize>> = vec![None; sets.len()];
    for &i in &order {
        parent_of_set[i] = deepest[sets[i].nodes[0]];
        for &v in &sets[i].nodes {
            deepest[v] = Some(i);
        }
    }
    let mut set_column = vec![0; sets.len()];
    for &i in &order {
        let set = &sets[i];
        set_column[i] = sys.add_column(format!("z[{}]", set.id), Some(0), Some(set.limit as i64));
        let mut proj: BTreeMap<usize, i64> = BTreeMap::new();
        for (j, e) in inst.edges().iter().enumerate() {
            let a = set.coefficient(e) as i64;
            if a != 0 {
                proj.insert(j, a);
            }
        }
        projection.push(proj.into_iter().collect());
    }
    // The singleton column of each node: an existing `{v}` set at the bottom of
    // its chain, or a new unbounded one.
    let mut singleton_column = vec![0; inst.node_count()];
    let mut singleton_parent: Vec<Option<usize>> = vec![None; inst.node_count()];
    let mut own_singleton = vec![None; inst.node_count()];
    for v in 0..inst.node_count() {
        match deepest[v] {
            Some(i) if sets[i].nodes.len() == 1 => {
                singleton_column[v] = set_column[i];
                own_singleton[v] = Some(i);
            }
            other => {
                singleton_column[v] = sys.add_column(format!("z[{{{}}}]", inst.node_id(v)), Some(0), None);
                projection.push(inst.incident(v).iter().map(|&e| (e, 1)).collect());
                singleton_parent[v] = other;
            }
        }
    }

    // y columns and rows per node.
    for v in 0..inst.node_count() {
        let mut traces: Vec<(BTreeSet<usize>, u64, String)> = Vec::new();
        for (h, sub) in inst.subgraphs().iter().enumerate() {
            if let Some(&b) = sub.bounds.get(&v) {
                let trace: BTreeSet<usize> = inst.subgraph_star(h, v).into_iter().collect();
                match traces.iter_mut().find(|(t, _, _)| *t == trace) {
                    Some(entry) => entry.1 = entry.1.min(b),
                    None => traces.push((trace, b, sub.id.clone())),
                }
            }
        }
        traces.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.2.cmp(&b.2)));
        let node = inst.node_id(v);
        let mut cols = Vec::with_capacity(traces.len());
        for (trace, b, name) in &traces {
            cols.push(sys.add_column(format!("y[{node},{name}]"), Some(0), Some(*b as i64)));
            projection.push(trace.iter().map(|&e| (e, 1)).collect());
        }
        // Parent of each trace: smallest strictly larger trace containing it.
        let parent: Vec<Option<usize>> = (0..traces.len())
            .map(|i| (0..i).rev().find(|&p| traces[p].0.is_superset(&traces[i].0)))
            .collect();
        let mut rows: Vec<Vec<(usize, i64)>> = cols.iter().map(|&c| vec![(c, -1)]).collect();
        let mut top = vec![(singleton_column[v], -1)];
        for (i, p) in parent.iter().enumerate() {
            match p {
                Some(p) => rows[*p].push((cols[i], 1)),
                None => top.push((cols[i], 1)),
            }
        }
        for &e in inst.incident(v) {
            let owner = (0..traces.len()).rev().find(|&i| traces[i].0.contains(&e));
            let col = edge_columns[e];
            let target = match owner {
                Some(i) => &mut rows[i],
                None => &mut top,
            };
            match target.iter_mut().find(|(c, _)| *c == col) {
                Some(entry) => entry.1 += 1,
                None => target.push((col, 1)),
            }
        }
        for (i, row) in rows.into_iter().enumerate() {
            sys.add_row(format!("c1[{node},{}]", traces[i].2), row, Some(0), Some(0));
        }
        sys.add_row(format!("c2[{node}]"), top, Some(0), Some(0));
    }

    // Degree-sum rows: each set's column equals the sum of its children's.
    for &i in &order {
        if own_singleton.contains(&Some(i)) {
            continue;
        }
        let mut row = vec![(set_column[i], -1)];
        for (c, p) in parent_of_set.iter().enumerate() {
            if *p == Some(i) {
                row.push((set_column[c], 1));
            }
        }
        for v in 0..inst.node_count() {
            if own_singleton[v].is_none() && singleton_parent[v] == Some(i) {
                row.push((singleton_column[v], 1));
            }
        }
        sys.add_row(format!("c3[{}]", sets[i].id), row, Some(0), Some(0));
    }

    debug_assert!(sys.check_bidirected().is_ok());
    let objective: Vec<(usize, i64)> =
        inst.edges().iter().enumerate().map(|(j, e)| (edge_columns[j], e.weight as i64)).collect();
    let program = sys.to_program(&objective);
    Ok(Lp3Model { system: sys, program, projection, edge_columns })
}

/// What went into an LP1* relaxation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lp1StarInfo {
    /// Edge-index sets whose odd-set inequalities were separated.
    pub families: Vec<Vec<usize>>,
    pub cuts_added: usize,
    pub rounds: usize,
    /// True when the cut budget or a size limit stopped separation early.
    pub truncated: bool,
}

#[derive(Clone, Debug)]
pub struct Lp1Star {
    pub program: LinearProgram,
    pub info: Lp1StarInfo,
}

/// Largest number of categories for which unions are enumerated exhaustively.
const MAX_CATEGORIES: usize = 14;
/// Row limit for separating on one family's extended system.
const MAX_SYSTEM_ROWS: usize = 16;

/// Maximal unions of edge categories whose restriction is locally laminar,
/// as sorted edge-index sets. `None` if there are too many categories.
pub fn maximal_laminar_category_unions(inst: &Instance) -> Option<Vec<Vec<usize>>> {
    let cats: Vec<Vec<usize>> = category_partition(inst).into_values().collect();
    if cats.len() > MAX_CATEGORIES {
        return None;
    }
    let mut masks: Vec<u32> = (1u32..(1 << cats.len())).collect();
    masks.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
    let mut chosen: Vec<u32> = Vec::new();
    for mask in masks {
        if chosen.iter().any(|c| c & mask == mask) {
            continue;
        }
        let mut edges: Vec<usize> =
            (0..cats.len()).filter(|i| mask >> i & 1 == 1).flat_map(|i| cats[i].iter().copied()).collect();
        edges.sort_unstable();
        if is_locally_laminar(&inst.restrict_indices(&edges)) {
            chosen.push(mask);
        }
    }
    Some(
        chosen
            .into_iter()
            .map(|mask| {
                let mut edges: Vec<usize> =
                    (0..cats.len()).filter(|i| mask >> i & 1 == 1).flat_map(|i| cats[i].iter().copied()).collect();
                edges.sort_unstable();
                edges
            })
            .collect(),
    )
}

/// LP1 strengthened by projected odd-set inequalities of the extended systems
/// of maximal locally laminar category unions. Inequalities are separated
/// against the current optimum and added until none is violated or `budget`
/// inequalities have been added. A zero budget gives LP1 unchanged.
pub fn build_lp1_star(inst: &Instance, budget: usize) -> Lp1Star {
    let mut program = build_lp1(inst);
    let mut info = Lp1StarInfo::default();
    if budget == 0 || inst.edge_count() == 0 {
        info.truncated = budget == 0 && inst.edge_count() > 0;
        return Lp1Star { program, info };
    }
    let Some(families) = maximal_laminar_category_unions(inst) else {
        info.truncated = true;
        return Lp1Star { program, info };
    };
    let mut models = Vec::new();
    for family in families {
        let model = build_lp3(&inst.restrict_indices(&family)).expect("category unions are locally laminar");
        if model.system.rows.len() > MAX_SYSTEM_ROWS {
            info.truncated = true;
            continue;
        }
        info.families.push(family.clone());
        models.push((family, model));
    }
    let mut seen: HashSet<(Vec<(usize, i64)>, i64)> = HashSet::new();
    loop {
        let sol = simplex_solve(&program);
        if sol.status != LpStatus::Optimal {
            break;
        }
        info.rounds += 1;
        let mut added = 0;
        for (family, model) in &models {
            let local: Vec<Rational> = family.iter().map(|&e| sol.values[e].clone()).collect();
            let lifted = model.lift(&local);
            let found = separate(&model.system, &lifted, MAX_SYSTEM_ROWS).expect("row count checked");
            for (_, cut) in found.into_iter().take(4) {
                let coeffs: Vec<(usize, i64)> =
                    model.project(&cut.coeffs).into_iter().map(|(e, a)| (family[e], a)).collect();
                if !seen.insert((coeffs.clone(), cut.rhs)) {
                    continue;
                }
                if info.cuts_added == budget {
                    info.truncated = true;
                    return Lp1Star { program, info };
                }
                program.add_row(
                    format!("blossom[{}]", info.cuts_added),
                    coeffs.into_iter().map(|(e, a)| (e, integer(a))),
                    Sense::Le,
                    integer(cut.rhs),
                );
                info.cuts_added += 1;
                added += 1;
            }
        }
        if added == 0 {
            break;
        }
    }
    Lp1Star { program, info }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Capacity, InstanceBuilder};
    use crate::rational;

    fn fig6() -> Instance {
        let one = Capacity::Finite(1);
        InstanceBuilder::new()
            .edge("ts1", "t", "s1", 1, one)
            .edge("ts2", "t", "s2", 1, one)
            .edge("ts3", "t", "s3", 1, one)
            .subgraph_uniform("H1", &["ts1", "ts2"], 1)
            .subgraph_uniform("H2", &["ts2", "ts3"], 1)
            .laminar("L1", &["s1", "s3"], 1)
            .build()
            .unwrap()
    }

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
    fn lp1_of_fig6_is_three_halves() {
        let sol = simplex_solve(&build_lp1(&fig6()));
        assert_eq!(sol.objective, Some(rational(3, 2)));
    }

    #[test]
    fn lp1_rows_are_named() {
        let lp = build_lp1(&fig6());
        assert!(lp.row_index("deg[H1,t]").is_some());
        assert!(lp.row_index("sum[L1]").is_some());
        let sum = &lp.rows()[lp.row_index("sum[L1]").unwrap()];
        assert_eq!(sum.coeffs.len(), 2);
    }

    #[test]
    fn lp3_of_fig7_is_bidirected_and_matches_lp1() {
        let inst = fig7();
        let model = build_lp3(&inst).unwrap();
        assert!(model.system.column_weights().iter().all(|&w| w <= 2));
        assert_eq!(model.system.rows.len(), 12);
        let lp1 = simplex_solve(&build_lp1(&inst)).objective;
        assert_eq!(simplex_solve(&model.program).objective, lp1);
    }

    #[test]
    fn lp3_rejects_crossing_traces() {
        assert!(matches!(build_lp3(&fig6()), Err(Lp3Error::NotLocallyLaminar(_))));
    }

    #[test]
    fn lp3_lift_satisfies_rows() {
        let inst = InstanceBuilder::new()
            .edge("ab", "a", "b", 2, Capacity::Finite(2))
            .edge("bc", "b", "c", 1, Capacity::Infinite)
            .edge("cd", "c", "d", 1, Capacity::Finite(1))
            .subgraph_uniform("H", &["ab", "bc"], 2)
            .laminar("L", &["b", "c"], 3)
            .laminar("M", &["a", "b", "c"], 4)
            .laminar("S", &["c"], 2)
            .build()
            .unwrap();
        let model = build_lp3(&inst).unwrap();
        let x = vec![rational(1, 2), integer(1), rational(1, 3)];
        let lifted = model.lift(&x);
        for row in &model.system.rows {
            let v: Rational = row.coeffs.iter().map(|(j, a)| integer(*a) * &lifted[*j]).sum();
            assert_eq!(v, integer(0), "row {}", row.name);
        }
    }

    #[test]
    fn zero_budget_is_lp1() {
        let inst = fig7();
        assert_eq!(build_lp1_star(&inst, 0).program, build_lp1(&inst));
    }

    #[test]
    fn lp1_star_tightens_triangle() {
        let one = Capacity::Finite(1);
        let inst = InstanceBuilder::new()
            .edge("ab", "a", "b", 1, one)
            .edge("bc", "b", "c", 1, one)
            .edge("ca", "c", "a", 1, one)
            .laminar("A", &["a"], 1)
            .laminar("B", &["b"], 1)
            .laminar("C", &["c"], 1)
            .build()
            .unwrap();
        assert_eq!(simplex_solve(&build_lp1(&inst)).objective, Some(rational(3, 2)));
        let star = build_lp1_star(&inst, 100);
        assert_eq!(simplex_solve(&star.program).objective, Some(integer(1)));
        assert!(!star.info.truncated);
    }
}
