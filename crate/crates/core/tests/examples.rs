//! Runs every cargo example and checks what it returns.

#[allow(dead_code)]
#[path = "../examples/parse_input.rs"]
mod parse_input;
#[allow(dead_code)]
#[path = "../examples/markov_partition.rs"]
mod markov_partition;
#[allow(dead_code)]
#[path = "../examples/turning_orbits.rs"]
mod turning_orbits;
#[allow(dead_code)]
#[path = "../examples/standing_assumptions.rs"]
mod standing_assumptions;
#[allow(dead_code)]
#[path = "../examples/pull_back_chain.rs"]
mod pull_back_chain;
#[allow(dead_code)]
#[path = "../examples/refine_chain.rs"]
mod refine_chain;
#[allow(dead_code)]
#[path = "../examples/compare_spaces.rs"]
mod compare_spaces;
#[allow(dead_code)]
#[path = "../examples/classify_points.rs"]
mod classify_points;
#[allow(dead_code)]
#[path = "../examples/itinerary_metric.rs"]
mod itinerary_metric;
#[allow(dead_code)]
#[path = "../examples/chain_validation.rs"]
mod chain_validation;
#[allow(dead_code)]
#[path = "../examples/json_documents.rs"]
mod json_documents;

#[test]
fn parse_input_lists_maps() {
    assert_eq!(parse_input::run_example().unwrap(), vec!["tent".to_string()]);
}

#[test]
fn g3_matrix() {
    assert_eq!(markov_partition::run_example().unwrap(), vec![vec![0, 1], vec![1, 1]]);
}

#[test]
fn omega_sizes() {
    let sizes = turning_orbits::run_example().unwrap();
    assert_eq!(sizes, vec![("tent".into(), 1), ("g3".into(), 3), ("swing".into(), 1)]);
}

#[test]
fn assumptions_hold_for_expanding_maps_only() {
    let r = standing_assumptions::run_example();
    let holding: Vec<&str> = r.iter().filter(|(_, ok)| *ok).map(|(n, _)| *n).collect();
    assert_eq!(holding, vec!["tent", "skew", "g3"]);
}

#[test]
fn pull_back_has_six_links() {
    assert_eq!(pull_back_chain::run_example().unwrap(), 6);
}

#[test]
fn refinement_bounds_shrink() {
    let b = refine_chain::run_example().unwrap();
    assert_eq!(b.len(), 3);
}

#[test]
fn comparisons() {
    assert_eq!(compare_spaces::run_example().unwrap(), vec!["HOMEOMORPHIC", "DISTINGUISHED"]);
}

#[test]
fn classifications() {
    let lines = classify_points::run_example().unwrap();
    assert!(lines[0].ends_with("EXCEPTIONAL (ENDPOINT_CONDITION)"));
    assert!(lines[1].ends_with("PRODUCT"));
    assert!(lines[3].ends_with("SIN_CURVE_LIKE)"));
}

#[test]
fn distance_is_two_thirds() {
    assert_eq!(itinerary_metric::run_example().unwrap(), "2/3");
}

#[test]
fn chain_violations() {
    assert_eq!(chain_validation::run_example(), vec![0, 2, 3]);
}

#[test]
fn json_round_trip() {
    assert!(json_documents::run_example().unwrap());
}
