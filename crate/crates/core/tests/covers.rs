mod common;

use proptest::prelude::*;
use simassign::covers::{alpha, forest_cover, laminar_cover, structural_cover, CoverError};
use simassign::{is_laminar, is_locally_laminar, max_overlap, Capacity, Instance, InstanceBuilder};
use std::collections::BTreeSet;

use common::Shape;

fn acyclic(inst: &Instance, edges: &[usize]) -> bool {
    let mut comp: Vec<usize> = (0..inst.node_count()).collect();
    fn root(c: &mut [usize], v: usize) -> usize {
        if c[v] != v {
            c[v] = root(c, c[v]);
        }
        c[v]
    }
    edges.iter().all(|&e| {
        let (a, b) = (root(&mut comp, inst.edges()[e].u), root(&mut comp, inst.edges()[e].v));
        comp[a] = b;
        a != b
    })
}

/// Edges only, so forest covers apply.
fn plain_graph(seed: u64) -> Instance {
    let shape = Shape { max_nodes: 6, max_edges: 10, max_k: 0, laminar: false, ..Shape::default() };
    common::random_instance(&mut common::rng(seed), &shape)
}

fn grid(w: usize, h: usize) -> Instance {
    let mut b = InstanceBuilder::new();
    let id = |x: usize, y: usize| format!("p{x}_{y}");
    for x in 0..w {
        for y in 0..h {
            if x + 1 < w {
                b = b.edge(&format!("h{x}_{y}"), &id(x, y), &id(x + 1, y), 1, Capacity::Finite(1));
            }
            if y + 1 < h {
                b = b.edge(&format!("v{x}_{y}"), &id(x, y), &id(x, y + 1), 1, Capacity::Finite(1));
            }
        }
    }
    b.build().unwrap()
}

#[test]
fn grid_is_two_forests() {
    let inst = grid(4, 4);
    let plan = forest_cover(&inst, 2, 1).unwrap();
    assert!(plan.is_valid(&inst));
    assert!(plan.parts.iter().all(|p| acyclic(&inst, &p.edges)));
    assert!(matches!(forest_cover(&inst, 1, 1), Err(CoverError::Infeasible(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn forest_cover_parts_are_acyclic_or_witnessed(seed in any::<u64>(), m in 1u64..4, l in 1u64..3) {
        let inst = plain_graph(seed);
        match forest_cover(&inst, m, l) {
            Ok(plan) => {
                prop_assert!(plan.is_valid(&inst));
                prop_assert_eq!(plan.m(), m);
                for part in &plan.parts {
                    prop_assert!(acyclic(&inst, &part.edges));
                }
            }
            Err(CoverError::Infeasible(w)) => {
                prop_assert!(l as usize * w.induced_edges > m as usize * (w.nodes.len() - 1));
            }
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
    }

    #[test]
    fn laminar_cover_parts_are_laminar(seed in any::<u64>()) {
        let shape = Shape { min_k: 1, max_k: 4, ..Shape::default() };
        let inst = common::random_instance(&mut common::rng(seed), &shape);
        let plan = laminar_cover(&inst).unwrap();
        prop_assert!(plan.is_valid(&inst));
        let k = inst.subgraphs().len();
        prop_assert_eq!(plan.ratio(), alpha(k, max_overlap(&inst).max(1)).unwrap());
        for part in &plan.parts {
            let sub = inst.restrict_indices(&part.edges);
            prop_assert!(is_locally_laminar(&sub));
            let traces: Vec<BTreeSet<usize>> = sub.subgraphs().iter().map(|h| h.edges.iter().copied().collect()).collect();
            prop_assert!(is_laminar(&traces));
        }
    }

    #[test]
    fn structural_covers_are_valid(seed in any::<u64>()) {
        let shape = Shape { max_nodes: 6, max_edges: 7, min_k: 1, max_k: 3, laminar: false, ..Shape::default() };
        let inst = common::random_instance(&mut common::rng(seed), &shape);
        match structural_cover(&inst) {
            Ok(plan) => prop_assert!(plan.is_valid(&inst)),
            Err(e) => prop_assert_eq!(e, CoverError::NoStructureMatched),
        }
    }
}
