use std::collections::BTreeSet;

use crate::model::find_crossing;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// Arcs point towards the root.
    In,
    /// Arcs point away from the root.
    Out,
}

/// Directed tree with one arc per set of a laminar family. Node 0 is the root;
/// the arc entering or leaving node `i + 1` stands for set `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArborescenceRep {
    pub node_count: usize,
    /// `(tail, head)` per set, in family order.
    pub arcs: Vec<(usize, usize)>,
    /// Tree node of each ground element.
    pub phi: Vec<usize>,
    pub orientation: Orientation,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("sets {0} and {1} cross")]
pub struct NotLaminar(pub usize, pub usize);

/// Representation of `family` over ground set `0..ground`. Identical sets
/// become consecutive arcs on one path, the earlier index nearer the root.
pub fn arborescence_representation(
    family: &[BTreeSet<usize>],
    ground: usize,
    orientation: Orientation,
) -> Result<ArborescenceRep, NotLaminar> {
    if let Some((a, b)) = find_crossing(family) {
        return Err(NotLaminar(a, b));
    }
    let mut order: Vec<usize> = (0..family.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(family[i].len()));
    let mut phi = vec![0; ground];
    let mut arcs = vec![(0, 0); family.len()];
    for &i in &order {
        let node = i + 1;
        let parent = family[i].iter().next().map_or(0, |&u| phi[u]);
        arcs[i] = match orientation {
            Orientation::In => (node, parent),
            Orientation::Out => (parent, node),
        };
        for &u in &family[i] {
            phi[u] = node;
        }
    }
    Ok(ArborescenceRep { node_count: family.len() + 1, arcs, phi, orientation })
}

impl ArborescenceRep {
    /// Parent of each non-root node.
    fn parent(&self, node: usize) -> usize {
        let (t, h) = self.arcs[node - 1];
        match self.orientation {
            Orientation::In => h,
            Orientation::Out => t,
        }
    }

    /// Sets on the path between the root and `node`.
    pub fn sets_above(&self, mut node: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        while node != 0 {
            out.insert(node - 1);
            node = self.parent(node);
        }
        out
    }
}
