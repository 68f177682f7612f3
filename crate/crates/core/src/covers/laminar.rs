use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::alpha::xtilde;
use super::plan::{CoverPart, CoverPlan, PartKind};
use super::trees::{tree_family, tree_to_category_system};
use super::CoverError;
use crate::model::{category_partition, max_overlap, Instance};

pub const MAX_LAMINAR_COVER_SUBGRAPHS: usize = 8;

/// Cover by unions of edge categories, one part per tree of `T_1..T_{k′}`
/// weighted by `l·x̃⁺_j`. Trees yielding the same edge set are merged.
pub fn laminar_cover(inst: &Instance) -> Result<CoverPlan, CoverError> {
    let k = inst.subgraphs().len();
    if k > MAX_LAMINAR_COVER_SUBGRAPHS {
        return Err(CoverError::TooManySubgraphs { k, limit: MAX_LAMINAR_COVER_SUBGRAPHS });
    }
    let k_prime = max_overlap(inst);
    if k <= 1 || k_prime <= 1 {
        return Ok(CoverPlan {
            parts: vec![CoverPart { edges: (0..inst.edge_count()).collect(), multiplicity: 1, kind: PartKind::WholeGraph }],
            l: 1,
        });
    }
    let (_, plus) = xtilde(k, k_prime)?;
    let l = plus
        .iter()
        .filter(|v| !v.is_zero())
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let categories = category_partition(inst);
    let mut merged: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for (j, weight) in plus.iter().enumerate() {
        if weight.is_zero() {
            continue;
        }
        let z = (weight * &l).to_integer().to_u64().expect("small multiplicity");
        for tree in tree_family(k, j + 1)? {
            let system = tree_to_category_system(&tree, k_prime)?;
            let mut edges: Vec<usize> = system
                .iter()
                .filter_map(|cat| categories.get(cat))
                .flatten()
                .copied()
                .collect();
            edges.sort_unstable();
            *merged.entry(edges).or_default() += z;
        }
    }
    let parts = merged
        .into_iter()
        .map(|(edges, multiplicity)| CoverPart { edges, multiplicity, kind: PartKind::LaminarCategoryUnion })
        .collect();
    Ok(CoverPlan { parts, l: l.to_u64().expect("small denominator") })
}
