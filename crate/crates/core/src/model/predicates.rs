use std::collections::{BTreeMap, BTreeSet};

use super::Instance;

/// Index set `I` of an edge category `C_I`, as positions into [`Instance::subgraphs`].
pub type SubgraphSet = BTreeSet<usize>;

/// First pair of crossing sets in `family` (neither nested nor disjoint), by
/// position. Sets are processed by decreasing size while each element tracks
/// the smallest set seen so far that contains it; a laminar family gives every
/// set a single such owner.
pub fn find_crossing<T: Ord + Clone>(family: &[BTreeSet<T>]) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..family.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(family[i].len()));
    let mut owner: BTreeMap<T, usize> = BTreeMap::new();
    for (rank, &i) in order.iter().enumerate() {
        let mut owners = family[i].iter().map(|x| owner.get(x).copied());
        let first = owners.next().flatten();
        if owners.any(|o| o != first) {
            // The processed sets are laminar, so one of them crosses `i`.
            let j = order[..rank]
                .iter()
                .copied()
                .find(|&j| crosses(&family[i], &family[j]))
                .expect("owner mismatch implies a crossing");
            return Some((i.min(j), i.max(j)));
        }
        for x in &family[i] {
            owner.insert(x.clone(), i);
        }
    }
    None
}

fn crosses<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> bool {
    !a.is_disjoint(b) && !a.is_subset(b) && !b.is_subset(a)
}

/// `true` iff every two sets nest or are disjoint.
pub fn is_laminar<T: Ord + Clone>(family: &[BTreeSet<T>]) -> bool {
    find_crossing(family).is_none()
}

/// Node at which two subgraph traces `Δ_H(v)` cross.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingWitness {
    pub node: String,
    pub first: String,
    pub second: String,
}

/// For each edge id, the positions of the subgraphs containing it.
pub fn edge_categories(inst: &Instance) -> BTreeMap<String, SubgraphSet> {
    inst.edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| (edge.id.clone(), inst.memberships(e).iter().copied().collect()))
        .collect()
}

/// The nonempty categories `C_I`, each as sorted edge indices.
pub fn category_partition(inst: &Instance) -> BTreeMap<SubgraphSet, Vec<usize>> {
    let mut parts: BTreeMap<SubgraphSet, Vec<usize>> = BTreeMap::new();
    for e in 0..inst.edge_count() {
        parts.entry(inst.memberships(e).iter().copied().collect()).or_default().push(e);
    }
    parts
}

/// `k′`: the largest number of subgraphs sharing an edge.
pub fn max_overlap(inst: &Instance) -> usize {
    (0..inst.edge_count()).map(|e| inst.memberships(e).len()).max().unwrap_or(0)
}

/// First node (in id order) whose family `{Δ_H(v)}` is not laminar.
pub fn local_crossing(inst: &Instance) -> Option<CrossingWitness> {
    for v in 0..inst.node_count() {
        let mut owners = Vec::new();
        let mut traces = Vec::new();
        for &e in inst.incident(v) {
            for &h in inst.memberships(e) {
                if !owners.contains(&h) {
                    owners.push(h);
                }
            }
        }
        owners.sort_unstable();
        for &h in &owners {
            traces.push(inst.subgraph_star(h, v).into_iter().collect::<BTreeSet<usize>>());
        }
        if let Some((a, b)) = find_crossing(&traces) {
            return Some(CrossingWitness {
                node: inst.node_id(v).to_owned(),
                first: inst.subgraphs()[owners[a]].id.clone(),
                second: inst.subgraphs()[owners[b]].id.clone(),
            });
        }
    }
    None
}

pub fn is_locally_laminar(inst: &Instance) -> bool {
    local_crossing(inst).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Capacity, InstanceBuilder};
    use proptest::prelude::*;

    fn pairwise_laminar(family: &[BTreeSet<u8>]) -> bool {
        family.iter().enumerate().all(|(i, a)| {
            family[i + 1..].iter().all(|b| a.is_disjoint(b) || a.is_subset(b) || b.is_subset(a))
        })
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

    #[test]
    fn fig7_is_locally_laminar_but_not_laminar() {
        let inst = fig7();
        assert!(is_locally_laminar(&inst));
        let sets: Vec<BTreeSet<usize>> =
            inst.subgraphs().iter().map(|s| s.edges.iter().copied().collect()).collect();
        assert!(!is_laminar(&sets));
    }

    #[test]
    fn fig6_crosses_at_center() {
        let w = local_crossing(&fig6()).unwrap();
        assert_eq!(w.node, "t");
        assert_eq!((w.first.as_str(), w.second.as_str()), ("H1", "H2"));
    }

    #[test]
    fn fig6_categories() {
        let cats = edge_categories(&fig6());
        assert_eq!(cats["ts1"], BTreeSet::from([0]));
        assert_eq!(cats["ts2"], BTreeSet::from([0, 1]));
        assert_eq!(cats["ts3"], BTreeSet::from([1]));
        assert_eq!(max_overlap(&fig6()), 2);
    }

    #[test]
    fn no_subgraphs_is_locally_laminar() {
        let inst = InstanceBuilder::new().edge("a", "x", "y", 1, Capacity::Infinite).build().unwrap();
        assert!(is_locally_laminar(&inst));
        assert_eq!(edge_categories(&inst)["a"], BTreeSet::new());
    }

    proptest! {
        #[test]
        fn sorted_check_matches_pairwise(family in prop::collection::vec(prop::collection::btree_set(0u8..8, 1..5), 0..7)) {
            prop_assert_eq!(is_laminar(&family), pairwise_laminar(&family));
            if let Some((a, b)) = find_crossing(&family) {
                let (x, y) = (&family[a], &family[b]);
                prop_assert!(!x.is_disjoint(y) && !x.is_subset(y) && !y.is_subset(x));
            }
        }
    }
}
