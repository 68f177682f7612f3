mod common;

use proptest::prelude::*;
use simassign::approx::{approximate, solve_restricted};
use simassign::covers::{laminar_cover, structural_cover};
use simassign::exact::brute_force_opt;
use simassign::violations;

use common::Shape;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laminar_cover_guarantee(seed in any::<u64>()) {
        let shape = Shape { min_k: 1, max_k: 4, ..Shape::default() };
        let inst = common::random_instance(&mut common::rng(seed), &shape);
        let plan = laminar_cover(&inst).unwrap();
        let res = approximate(&inst, &plan).unwrap();
        let opt = brute_force_opt(&inst).unwrap().objective;
        prop_assert!(res.assignment.objective * plan.m() >= opt * plan.l);
        prop_assert!(res.assignment.objective <= opt);
        prop_assert!(violations(&inst, &res.assignment.to_vector(&inst).unwrap()).is_empty());
        prop_assert_eq!(res.assignment.objective, res.part_objectives[res.best_part]);
        let first_best = res.part_objectives.iter().position(|&o| o == res.assignment.objective);
        prop_assert_eq!(first_best, Some(res.best_part));
    }

    #[test]
    fn per_part_solutions_are_optimal(seed in any::<u64>()) {
        let inst = common::random_pseudo_tree(&mut common::rng(seed), 7);
        if let Ok(plan) = structural_cover(&inst) {
            prop_assert!(plan.is_valid(&inst));
            let res = approximate(&inst, &plan).unwrap();
            let opt = brute_force_opt(&inst).unwrap().objective;
            prop_assert!(res.assignment.objective * plan.m() >= opt * plan.l);
            for part in &plan.parts {
                let (x, _) = solve_restricted(&inst, &part.edges, part.kind).unwrap();
                let sub = brute_force_opt(&inst.restrict_indices(&part.edges)).unwrap().objective;
                prop_assert_eq!(x.objective, sub);
            }
        }
    }
}

#[test]
fn structural_shapes_are_recognised() {
    let matched = (0..100)
        .filter(|&seed| structural_cover(&common::random_pseudo_tree(&mut common::rng(seed), 7)).is_ok())
        .count();
    assert!(matched >= 50, "only {matched} of 100 pseudo-trees matched a shape");
}
