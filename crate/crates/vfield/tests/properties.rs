mod support;

use support::properties::*;

#[test]
fn bracket_is_antisymmetric_and_satisfies_jacobi() {
    bracket_laws(100).unwrap();
}

#[test]
fn conformal_factor_transforms_under_rescaling() {
    conformal_rescaling(50).unwrap();
}

#[test]
fn curvature_scales_inversely() {
    curvature_scaling(20).unwrap();
}

#[test]
fn casimir_tensor_and_metric_share_symmetries() {
    assert!(casimir_duality(8).unwrap() >= 5);
}

#[test]
fn commuting_killing_fields_have_constant_pairings() {
    assert!(kill1_pairings().unwrap() >= 2);
}

#[test]
fn printed_expressions_reparse() {
    expr_round_trip(200).unwrap();
}
