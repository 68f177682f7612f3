mod common;

use proptest::prelude::*;
use simassign::exact::brute_force_opt;
use simassign::netmatrix::{
    bipartition, build_bipartite_network, build_tree_interval_network, solve_bipartite, solve_tree_interval,
};
use simassign::violations;

use common::Shape;

fn shape() -> Shape {
    Shape { max_nodes: 7, max_edges: 7, ..Shape::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bipartite_solver_matches_brute_force(seed in any::<u64>()) {
        let inst = common::random_bipartite(&mut common::rng(seed), &shape());
        let x = solve_bipartite(&inst).unwrap();
        prop_assert_eq!(x.objective, brute_force_opt(&inst).unwrap().objective);
        prop_assert!(violations(&inst, &x.to_vector(&inst).unwrap()).is_empty());
    }

    #[test]
    fn bipartite_network_is_faithful(seed in any::<u64>()) {
        let inst = common::random_bipartite(&mut common::rng(seed), &shape());
        let net = build_bipartite_network(&inst, &bipartition(&inst).unwrap()).unwrap();
        prop_assert!(net.is_spanning_tree());
        prop_assert!(net.check_fidelity(&inst).is_ok());
    }

    #[test]
    fn tree_solver_matches_brute_force(seed in any::<u64>()) {
        let inst = common::random_tree_interval(&mut common::rng(seed), &shape());
        let x = solve_tree_interval(&inst).unwrap();
        prop_assert_eq!(x.objective, brute_force_opt(&inst).unwrap().objective);
        prop_assert!(violations(&inst, &x.to_vector(&inst).unwrap()).is_empty());
    }

    #[test]
    fn tree_network_is_faithful(seed in any::<u64>()) {
        let inst = common::random_tree_interval(&mut common::rng(seed), &shape());
        let net = build_tree_interval_network(&inst).unwrap();
        prop_assert!(net.is_spanning_tree());
        prop_assert!(net.check_fidelity(&inst).is_ok());
    }
}
