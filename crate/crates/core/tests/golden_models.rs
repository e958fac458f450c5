//! The shipped model corpus is the same source of truth the builders encode:
//! parsing a corpus file must reproduce the programmatic construction, and
//! serialization must round-trip every file.

use std::fs;
use std::path::{Path, PathBuf};

use bsys_core::{
    inventory_model, lti_to_behavior, parse_model, rat, serialize_model, BehavioralSystem,
    ConstraintTarget, LtiSystem, PolytopicConstraint,
};

fn models_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn load(name: &str) -> BehavioralSystem {
    let text = fs::read_to_string(models_dir().join(name)).unwrap();
    parse_model(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn corpus_round_trips() {
    for name in [
        "example1.bsys",
        "example2.bsys",
        "example2_slack.bsys",
        "example4_lti.bsys",
        "inventory.bsys",
    ] {
        let sys = load(name);
        let round = parse_model(&serialize_model(&sys)).unwrap();
        assert_eq!(sys, round, "{name} must round-trip");
    }
}

#[test]
fn unstable_lti_file_matches_builder() {
    let built = lti_to_behavior(
        &LtiSystem {
            a: vec![vec![rat(2), rat(0)], vec![rat(1), rat(-1)]],
            b: vec![vec![rat(0)], vec![rat(1)]],
            c: None,
            d: None,
        },
        &[
            PolytopicConstraint {
                target: ConstraintTarget::State,
                coeffs: vec![
                    vec![rat(1), rat(0)],
                    vec![rat(-1), rat(0)],
                    vec![rat(0), rat(1)],
                    vec![rat(0), rat(-1)],
                ],
                bounds: vec![rat(5), rat(-1), rat(5), rat(5)],
            },
            PolytopicConstraint {
                target: ConstraintTarget::Input,
                coeffs: vec![vec![rat(1)], vec![rat(-1)]],
                bounds: vec![rat(1), rat(1)],
            },
        ],
    )
    .unwrap();
    let shipped = load("example4_lti.bsys");
    assert_eq!(
        built.equality().unwrap().matrix,
        shipped.equality().unwrap().matrix
    );
    assert_eq!(built.equality().unwrap().rhs, shipped.equality().unwrap().rhs);
    assert_eq!(
        built.inequality().unwrap().matrix,
        shipped.inequality().unwrap().matrix
    );
    assert_eq!(
        built.inequality().unwrap().rhs,
        shipped.inequality().unwrap().rhs
    );
}

#[test]
fn inventory_file_matches_builder() {
    let built = inventory_model(false);
    let shipped = load("inventory.bsys");
    assert_eq!(
        built.equality().unwrap().matrix,
        shipped.equality().unwrap().matrix
    );
    assert_eq!(
        built.inequality().unwrap().matrix,
        shipped.inequality().unwrap().matrix
    );
    assert_eq!(built.variable_names(), shipped.variable_names());
    // The displayed-sign variant differs from the shipped file in exactly
    // the demand coefficient.
    let displayed = inventory_model(true);
    assert_ne!(
        displayed.equality().unwrap().matrix,
        shipped.equality().unwrap().matrix
    );
}
