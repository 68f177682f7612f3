//! Reductions from 2-regular 3-dimensional matching to simultaneous
//! assignment, the inverse map from assignments back to matchings, a text
//! format and a seeded random generator for 2-regular instances.
//!
//! Node ids: `x:<name>`, `y:<name>` for elements (`x:<name>'` for split
//! copies), `s:e<i>` and `t:e<i>` for the two copies of triple `i`. Edge ids:
//! `x-e<i>`, `y-e<i>`, `s-e<i>` (between `s:e<i>` and `t:e<i>`) and, in the
//! weighted construction, `s-e<j>-t-e<i>` joining the second triple of an
//! element `z` to the first.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{violations, Assignment, Capacity, Instance, InstanceBuilder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeDMInstance {
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub z: Vec<String>,
    /// Index triples into `x`, `y`, `z`.
    pub triples: Vec<(usize, usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("not a 2-regular instance: {0}")]
    NotTwoRegular(String),
    #[error("assignment is not feasible for the generated instance: {0}")]
    InfeasibleSolution(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Which construction generated the instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Unweighted { split_claws: bool },
    Weighted,
}

impl ThreeDMInstance {
    /// Occurrence count of every element, per coordinate.
    fn occurrences(&self) -> [Vec<usize>; 3] {
        let mut occ = [vec![0; self.x.len()], vec![0; self.y.len()], vec![0; self.z.len()]];
        for &(a, b, c) in &self.triples {
            occ[0][a] += 1;
            occ[1][b] += 1;
            occ[2][c] += 1;
        }
        occ
    }

    pub fn check_two_regular(&self) -> Result<(), ReductionError> {
        let bad = |m: String| Err(ReductionError::NotTwoRegular(m));
        if self.triples.is_empty() {
            return bad("no triples".into());
        }
        for (name, list) in [("X", &self.x), ("Y", &self.y), ("Z", &self.z)] {
            if list.iter().collect::<BTreeSet<_>>().len() != list.len() {
                return bad(format!("duplicate element in {name}"));
            }
        }
        for &(a, b, c) in &self.triples {
            if a >= self.x.len() || b >= self.y.len() || c >= self.z.len() {
                return bad("triple references an unknown element".into());
            }
        }
        if self.triples.iter().collect::<BTreeSet<_>>().len() != self.triples.len() {
            return bad("repeated triple".into());
        }
        let names = [&self.x, &self.y, &self.z];
        for (occ, list) in self.occurrences().iter().zip(names) {
            if let Some(i) = occ.iter().position(|&n| n != 2) {
                return bad(format!("element {} occurs {} times", list[i], occ[i]));
            }
        }
        Ok(())
    }

    /// Whether the given triple indices are pairwise disjoint.
    pub fn is_matching(&self, chosen: &[usize]) -> bool {
        let mut used: [BTreeSet<usize>; 3] = Default::default();
        chosen.iter().all(|&i| {
            let (a, b, c) = self.triples[i];
            used[0].insert(a) && used[1].insert(b) && used[2].insert(c)
        })
    }

    /// A maximum matching by exhaustive search.
    pub fn max_matching(&self) -> Vec<usize> {
        fn go(t: &ThreeDMInstance, i: usize, cur: &mut Vec<usize>, used: &mut [Vec<bool>; 3], best: &mut Vec<usize>) {
            if cur.len() + (t.triples.len() - i) <= best.len() {
                return;
            }
            if i == t.triples.len() {
                *best = cur.clone();
                return;
            }
            let (a, b, c) = t.triples[i];
            if !used[0][a] && !used[1][b] && !used[2][c] {
                used[0][a] = true;
                used[1][b] = true;
                used[2][c] = true;
                cur.push(i);
                go(t, i + 1, cur, used, best);
                cur.pop();
                used[0][a] = false;
                used[1][b] = false;
                used[2][c] = false;
            }
            go(t, i + 1, cur, used, best);
        }
        let mut used = [vec![false; self.x.len()], vec![false; self.y.len()], vec![false; self.z.len()]];
        let mut best = Vec::new();
        go(self, 0, &mut Vec::new(), &mut used, &mut best);
        best
    }

    /// The two triples containing each `z`, in index order.
    fn z_pairs(&self) -> Vec<(usize, usize)> {
        let mut by_z: Vec<Vec<usize>> = vec![Vec::new(); self.z.len()];
        for (i, t) in self.triples.iter().enumerate() {
            by_z[t.2].push(i);
        }
        by_z.into_iter().map(|v| (v[0], v[1])).collect()
    }

    /// Random 2-regular instance with `n` elements per coordinate: each `x`
    /// takes two consecutive triples, and the `y` and `z` occurrence lists are
    /// shuffled independently, resampling until all triples are distinct.
    pub fn random_two_regular(n: usize, seed: u64) -> ThreeDMInstance {
        assert!(n >= 1, "need at least one element per coordinate");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let names = |p: &str| (1..=n).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
        let doubled: Vec<usize> = (0..n).flat_map(|i| [i, i]).collect();
        loop {
            let mut ys = doubled.clone();
            let mut zs = doubled.clone();
            ys.shuffle(&mut rng);
            zs.shuffle(&mut rng);
            let triples: Vec<_> = (0..2 * n).map(|i| (doubled[i], ys[i], zs[i])).collect();
            let tdm = ThreeDMInstance { x: names("x"), y: names("y"), z: names("z"), triples };
            if tdm.check_two_regular().is_ok() {
                return tdm;
            }
        }
    }

    /// Parses the text format: three lines listing `X`, `Y` and `Z`, then one
    /// whitespace-separated triple per line. Blank lines and `#` comments are
    /// ignored.
    pub fn parse(text: &str) -> Result<ThreeDMInstance, ReductionError> {
        let mut lists: Vec<Vec<String>> = Vec::new();
        let mut triples = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if lists.len() < 3 {
                lists.push(tokens.iter().map(|s| s.to_string()).collect());
                continue;
            }
            let err = |message: String| ReductionError::Parse { line: n + 1, message };
            if tokens.len() != 3 {
                return Err(err(format!("expected a triple, found {} tokens", tokens.len())));
            }
            let mut idx = [0; 3];
            for (k, tok) in tokens.iter().enumerate() {
                idx[k] = lists[k]
                    .iter()
                    .position(|s| s == tok)
                    .ok_or_else(|| err(format!("unknown element {tok}")))?;
            }
            triples.push((idx[0], idx[1], idx[2]));
        }
        if lists.len() < 3 {
            return Err(ReductionError::Parse { line: text.lines().count(), message: "missing element lists".into() });
        }
        let z = lists.pop().unwrap_or_default();
        let y = lists.pop().unwrap_or_default();
        let x = lists.pop().unwrap_or_default();
        Ok(ThreeDMInstance { x, y, z, triples })
    }
}

impl fmt::Display for ThreeDMInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.x.join(" "))?;
        writeln!(f, "{}", self.y.join(" "))?;
        writeln!(f, "{}", self.z.join(" "))?;
        for &(a, b, c) in &self.triples {
            writeln!(f, "{} {} {}", self.x[a], self.y[b], self.z[c])?;
        }
        Ok(())
    }
}

fn one() -> Capacity {
    Capacity::Finite(1)
}

/// Element nodes adjacent to `t:e<i>`, per triple; with `split` the second
/// occurrence of an element uses its copy.
fn element_nodes(tdm: &ThreeDMInstance, split: bool) -> (Vec<String>, Vec<String>) {
    let mut seen_x = BTreeSet::new();
    let mut seen_y = BTreeSet::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &(a, b, _) in &tdm.triples {
        let copy = |seen: &mut BTreeSet<usize>, e: usize| if split && !seen.insert(e) { "'" } else { "" };
        xs.push(format!("x:{}{}", tdm.x[a], copy(&mut seen_x, a)));
        ys.push(format!("y:{}{}", tdm.y[b], copy(&mut seen_y, b)));
    }
    (xs, ys)
}

struct Edges {
    /// (id, u, v, weight, in H1, in H2)
    list: Vec<(String, String, String, u64, bool, bool)>,
}

impl Edges {
    fn into_builder(self, mut b: InstanceBuilder) -> InstanceBuilder {
        for (id, u, v, w, _, _) in &self.list {
            b = b.edge(id, u, v, *w, one());
        }
        for (h, pick) in [("H1", 4usize), ("H2", 5)] {
            let ids: Vec<&str> = self
                .list
                .iter()
                .filter(|e| if pick == 4 { e.4 } else { e.5 })
                .map(|e| e.0.as_str())
                .collect();
            b = b.subgraph_uniform(h, &ids, 1);
        }
        b
    }
}

/// Unweighted construction: `S = X ∪ E ∪ Y`, `T = E`; every element joins
/// the two triples containing it, `s:e<i>` joins `t:e<i>`; `H1` holds the
/// edges at `X ∪ E` and `H2` those at `E ∪ Y`, all with bound 1; the two
/// triples of each `z` form a degree-sum set with limit 3. With
/// `split_claws`, the second edge of every element moves to a copy and the
/// pair `{s, s'}` gets limit 1, so every component is a claw.
pub fn gen_unweighted(tdm: &ThreeDMInstance, split_claws: bool) -> Result<Instance, ReductionError> {
    tdm.check_two_regular()?;
    let (xs, ys) = element_nodes(tdm, split_claws);
    let mut edges = Edges { list: Vec::new() };
    for i in 0..tdm.triples.len() {
        let t = format!("t:e{i}");
        edges.list.push((format!("x-e{i}"), xs[i].clone(), t.clone(), 1, true, false));
        edges.list.push((format!("s-e{i}"), format!("s:e{i}"), t.clone(), 1, true, true));
        edges.list.push((format!("y-e{i}"), ys[i].clone(), t, 1, false, true));
    }
    let mut b = edges.into_builder(InstanceBuilder::new());
    for (k, (i, j)) in tdm.z_pairs().into_iter().enumerate() {
        b = b.laminar(&format!("L:{}", tdm.z[k]), &[&format!("t:e{i}"), &format!("t:e{j}")], 3);
    }
    if split_claws {
        for x in &tdm.x {
            b = b.laminar(&format!("L:x:{x}"), &[&format!("x:{x}"), &format!("x:{x}'")], 1);
        }
        for y in &tdm.y {
            b = b.laminar(&format!("L:y:{y}"), &[&format!("y:{y}"), &format!("y:{y}'")], 1);
        }
    }
    Ok(b.build().expect("generated instance is valid"))
}

/// Weighted construction: as the unweighted one but without degree-sum sets;
/// for each `z` with triples `i < j`, `s:e<j>` joins `t:e<i>` and `t:e<j>`
/// with weight 2 while `s:e<i>` joins `t:e<i>` with weight 1.
pub fn gen_weighted(tdm: &ThreeDMInstance) -> Result<Instance, ReductionError> {
    tdm.check_two_regular()?;
    let (xs, ys) = element_nodes(tdm, false);
    let mut edges = Edges { list: Vec::new() };
    for i in 0..tdm.triples.len() {
        let t = format!("t:e{i}");
        edges.list.push((format!("x-e{i}"), xs[i].clone(), t.clone(), 1, true, false));
        edges.list.push((format!("y-e{i}"), ys[i].clone(), t, 1, false, true));
    }
    for (i, j) in tdm.z_pairs() {
        edges.list.push((format!("s-e{i}"), format!("s:e{i}"), format!("t:e{i}"), 1, true, true));
        edges.list.push((format!("s-e{j}"), format!("s:e{j}"), format!("t:e{j}"), 2, true, true));
        edges.list.push((format!("s-e{j}-t-e{i}"), format!("s:e{j}"), format!("t:e{i}"), 2, true, true));
    }
    Ok(edges.into_builder(InstanceBuilder::new()).build().expect("generated instance is valid"))
}

/// Recovers a 3-dimensional matching from a feasible assignment of the
/// generated instance: triple `i` is chosen when both element edges at
/// `t:e<i>` are used. For the weighted construction the assignment is first
/// normalised per `z` so that at most one of its triples is chosen.
pub fn extract_3dm(
    tdm: &ThreeDMInstance,
    inst: &Instance,
    solution: &Assignment,
    construction: Construction,
) -> Result<Vec<usize>, ReductionError> {
    let x = solution.to_vector(inst).map_err(|e| ReductionError::InfeasibleSolution(e.to_string()))?;
    if let Some(v) = violations(inst, &x).first() {
        return Err(ReductionError::InfeasibleSolution(v.to_string()));
    }
    let used = |id: String| inst.edge_index(&id).is_some_and(|e| x[e] > 0);
    let paired = |i: usize| used(format!("x-e{i}")) && used(format!("y-e{i}"));
    let chosen: Vec<usize> = match construction {
        Construction::Unweighted { .. } => (0..tdm.triples.len()).filter(|&i| paired(i)).collect(),
        Construction::Weighted => {
            let mut out = Vec::new();
            for (i, j) in tdm.z_pairs() {
                if paired(i) {
                    out.push(i);
                } else if paired(j) {
                    out.push(j);
                }
            }
            out.sort_unstable();
            out
        }
    };
    if !tdm.is_matching(&chosen) {
        return Err(ReductionError::InfeasibleSolution("recovered triples overlap".into()));
    }
    Ok(chosen)
}

/// Applies the per-`z` normalisation of the weighted construction: if both
/// triples of `z` are paired the second one is replaced by `s-e<j>`; if one is
/// paired the other gets its connector to `s:e<j>`; if none is, both get
/// their `s-e` edges. The result is feasible and not lighter.
pub fn normalize_weighted(tdm: &ThreeDMInstance, inst: &Instance, solution: &Assignment) -> Assignment {
    let mut values: BTreeMap<String, u64> = solution.values.clone();
    let get = |v: &BTreeMap<String, u64>, id: &str| v.get(id).copied().unwrap_or(0);
    for (i, j) in tdm.z_pairs() {
        let paired = |v: &BTreeMap<String, u64>, k: usize| get(v, &format!("x-e{k}")) > 0 && get(v, &format!("y-e{k}")) > 0;
        let at_t = |k: usize| {
            let mut ids = vec![format!("x-e{k}"), format!("y-e{k}"), format!("s-e{k}")];
            if k == i {
                ids.push(format!("s-e{j}-t-e{i}"));
            }
            ids
        };
        let set = |v: &mut BTreeMap<String, u64>, k: usize, keep: &str| {
            for id in at_t(k) {
                v.insert(id.clone(), u64::from(id == keep));
            }
        };
        let connector = format!("s-e{j}-t-e{i}");
        match (paired(&values, i), paired(&values, j)) {
            (true, true) => set(&mut values, j, &format!("s-e{j}")),
            (true, false) => set(&mut values, j, &format!("s-e{j}")),
            (false, true) => set(&mut values, i, &connector),
            (false, false) => {
                set(&mut values, i, &format!("s-e{i}"));
                set(&mut values, j, &format!("s-e{j}"));
            }
        }
    }
    let x: Vec<u64> = inst.edges().iter().map(|e| get(&values, &e.id)).collect();
    Assignment::from_vector(inst, &x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::brute_force_opt;

    pub(crate) fn fig1() -> ThreeDMInstance {
        ThreeDMInstance::parse("x1 x2\ny1 y2\nz1 z2\nx1 y1 z1\nx1 y2 z1\nx2 y1 z2\nx2 y2 z2\n").unwrap()
    }

    #[test]
    fn text_round_trip() {
        let tdm = fig1();
        assert_eq!(ThreeDMInstance::parse(&tdm.to_string()).unwrap(), tdm);
        assert!(matches!(ThreeDMInstance::parse("a\nb\nc\na b d\n"), Err(ReductionError::Parse { line: 4, .. })));
    }

    #[test]
    fn fig1_unweighted() {
        let tdm = fig1();
        assert_eq!(tdm.max_matching().len(), 2);
        for split in [false, true] {
            let inst = gen_unweighted(&tdm, split).unwrap();
            let opt = brute_force_opt(&inst).unwrap();
            assert_eq!(opt.objective, 6);
            let f = extract_3dm(&tdm, &inst, &opt, Construction::Unweighted { split_claws: split }).unwrap();
            assert_eq!(f.len(), 2);
        }
    }

    #[test]
    fn fig1_weighted() {
        let tdm = fig1();
        let inst = gen_weighted(&tdm).unwrap();
        assert!((0..inst.node_count()).all(|v| inst.incident(v).len() <= 4));
        let opt = brute_force_opt(&inst).unwrap();
        assert_eq!(opt.objective, 8);
        let f = extract_3dm(&tdm, &inst, &opt, Construction::Weighted).unwrap();
        assert_eq!(f.len(), 2);
        let norm = normalize_weighted(&tdm, &inst, &opt);
        assert!(violations(&inst, &norm.to_vector(&inst).unwrap()).is_empty());
        assert_eq!(norm.objective, 8);
    }

    #[test]
    fn empty_solution_and_bad_input() {
        let tdm = fig1();
        let inst = gen_unweighted(&tdm, false).unwrap();
        let zero = Assignment::zero(&inst);
        assert!(extract_3dm(&tdm, &inst, &zero, Construction::Unweighted { split_claws: false }).unwrap().is_empty());
        let empty = ThreeDMInstance { x: vec![], y: vec![], z: vec![], triples: vec![] };
        assert!(matches!(gen_unweighted(&empty, false), Err(ReductionError::NotTwoRegular(_))));
        let bad = Assignment::from_vector(&inst, &vec![1; inst.edge_count()]);
        assert!(matches!(
            extract_3dm(&tdm, &inst, &bad, Construction::Unweighted { split_claws: false }),
            Err(ReductionError::InfeasibleSolution(_))
        ));
    }

    #[test]
    fn random_instances_are_two_regular() {
        for seed in 0..20 {
            let tdm = ThreeDMInstance::random_two_regular(3, seed);
            assert!(tdm.check_two_regular().is_ok());
            assert_eq!(tdm, ThreeDMInstance::random_two_regular(3, seed));
        }
    }
}
