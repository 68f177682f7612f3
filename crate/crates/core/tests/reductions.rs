use proptest::prelude::*;
use simassign::exact::{branch_and_bound_opt, brute_force_opt};
use simassign::reductions::{
    extract_3dm, gen_unweighted, gen_weighted, normalize_weighted, Construction, ThreeDMInstance,
};
use simassign::violations;

fn fig1() -> ThreeDMInstance {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../figures/fig1.3dm");
    ThreeDMInstance::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn figure_one_constructions() {
    let tdm = fig1();
    assert_eq!(tdm.max_matching().len(), 2);
    let plain = gen_unweighted(&tdm, false).unwrap();
    assert_eq!((plain.node_count(), plain.edge_count(), plain.laminar().len()), (12, 12, 2));
    let split = gen_unweighted(&tdm, true).unwrap();
    assert_eq!((split.node_count(), split.edge_count(), split.laminar().len()), (16, 12, 6));
    for v in 0..split.node_count() {
        let deg = split.incident(v).len();
        assert!(deg == 1 || deg == 3, "claws only");
    }
    let weighted = gen_weighted(&tdm).unwrap();
    assert!(weighted.laminar().is_empty());
    assert!(weighted.edges().iter().all(|e| e.weight == 1 || e.weight == 2));
    assert_eq!(brute_force_opt(&plain).unwrap().objective, 6);
    assert_eq!(brute_force_opt(&split).unwrap().objective, 6);
    assert_eq!(brute_force_opt(&weighted).unwrap().objective, 8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// |Z| = 4 is beyond brute force for the generated instances, so the
    /// optimum comes from branch and bound.
    #[test]
    fn relations_hold_on_random_instances(n in 2usize..=4, seed in any::<u64>()) {
        let tdm = ThreeDMInstance::random_two_regular(n, seed);
        let f = tdm.max_matching().len() as u64;
        let solve = |inst: &simassign::Instance| if n <= 2 { brute_force_opt(inst) } else { branch_and_bound_opt(inst) };
        for construction in [
            Construction::Unweighted { split_claws: false },
            Construction::Unweighted { split_claws: true },
            Construction::Weighted,
        ] {
            let (inst, expected) = match construction {
                Construction::Unweighted { split_claws } => (gen_unweighted(&tdm, split_claws).unwrap(), 2 * n as u64 + f),
                Construction::Weighted => (gen_weighted(&tdm).unwrap(), 3 * n as u64 + f),
            };
            let opt = solve(&inst).unwrap();
            prop_assert_eq!(opt.objective, expected);
            let back = extract_3dm(&tdm, &inst, &opt, construction).unwrap();
            prop_assert!(tdm.is_matching(&back));
            prop_assert_eq!(back.len() as u64, f);
            if construction == Construction::Weighted {
                let norm = normalize_weighted(&tdm, &inst, &opt);
                prop_assert!(violations(&inst, &norm.to_vector(&inst).unwrap()).is_empty());
                prop_assert!(norm.objective >= opt.objective);
            }
        }
    }

    #[test]
    fn text_format_round_trips(n in 2usize..=5, seed in any::<u64>()) {
        let tdm = ThreeDMInstance::random_two_regular(n, seed);
        prop_assert_eq!(ThreeDMInstance::parse(&tdm.to_string()).unwrap(), tdm);
    }
}
