mod common;

use proptest::prelude::*;
use simassign::io::{parse_instance, serialize_instance, IoError};

use common::Shape;

fn figure(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../figures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn figures_round_trip_byte_stably() {
    for name in ["fig2.json", "fig3.json", "fig4.json", "fig6.json", "fig7.json", "fig8.json", "fig10a.json", "fig10b.json"] {
        let inst = parse_instance(&figure(name)).unwrap();
        let canonical = serialize_instance(&inst);
        let again = parse_instance(&canonical).unwrap();
        assert_eq!(again, inst, "{name}");
        assert_eq!(serialize_instance(&again), canonical, "{name}");
    }
}

#[test]
fn missing_bound_points_at_b() {
    let text = figure("fig6.json").replacen("\"s1\": 1,", "", 1);
    match parse_instance(&text) {
        Err(IoError::Schema { pointer, .. }) => assert_eq!(pointer, "/subgraphs/0/b"),
        other => panic!("expected a schema error, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_instances_round_trip(seed in any::<u64>()) {
        let inst = common::random_instance(&mut common::rng(seed), &Shape::default());
        let text = serialize_instance(&inst);
        prop_assert_eq!(parse_instance(&text).unwrap(), inst);
    }
}
