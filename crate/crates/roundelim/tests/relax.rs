//! User relaxations are accepted only when they weaken the problem.

use relim_problems::{is_problem_relaxation, parse_problem, Error, Label, Limits, Side};
use relim_roundelim::{apply_relaxation, apply_relaxations, Relaxation};

fn mis() -> relim_problems::Problem {
    parse_problem("nodes: M^3 | P U^2 ; edges: M [P U] | U U").unwrap()
}

#[test]
fn merge_is_a_relaxation() {
    let p = mis();
    let action = Relaxation::Merge {
        from: Label::plain("P"),
        into: Label::plain("U"),
    };
    let q = apply_relaxation(&p, &action, &Limits::default()).unwrap();
    assert_eq!(relim_problems::format_problem_inline(&q), "nodes: M^3 | U^3 ; edges: M U | U^2");
    let map = |l: &Label| if *l == Label::plain("P") { Label::plain("U") } else { l.clone() };
    assert!(is_problem_relaxation(&p, &q, map, &Limits::default()).unwrap());
}

#[test]
fn adding_a_configuration_is_a_relaxation() {
    let p = mis();
    let action = Relaxation::AddConfig {
        side: Side::Edge,
        config: "M M".into(),
    };
    let q = apply_relaxation(&p, &action, &Limits::default()).unwrap();
    assert!(q.edges().allows(&q.concrete_of(&[Label::plain("M"), Label::plain("M")]).unwrap()));
}

#[test]
fn removing_a_needed_configuration_is_rejected() {
    let p = mis();
    let action = Relaxation::RemoveConfig {
        side: Side::Node,
        config: "P U U".into(),
    };
    match apply_relaxation(&p, &action, &Limits::default()) {
        Err(Error::Invalid(msg)) => assert!(msg.contains("P U U"), "{msg}"),
        other => panic!("expected rejection, got {other:?}"),
    }
}

#[test]
fn removing_a_redundant_configuration_is_accepted() {
    let p = parse_problem("nodes: A^2 | [A B]^2 ; edges: [A B]^2").unwrap();
    // The constraint is pruned on construction, so `A A` is not a listed configuration.
    let action = Relaxation::RemoveConfig {
        side: Side::Node,
        config: "A A".into(),
    };
    assert!(apply_relaxation(&p, &action, &Limits::default()).is_err());
}

#[test]
fn widen_requires_a_stronger_target() {
    let p = mis();
    // In the edge diagram U is stronger than P, so P may be widened to [P U] on the node side.
    let ok = Relaxation::Widen {
        side: Side::Node,
        label: Label::plain("P"),
        target: Label::plain("U"),
    };
    let q = apply_relaxation(&p, &ok, &Limits::default()).unwrap();
    assert_eq!(relim_problems::format_problem_inline(&q), "nodes: M^3 | [P U] U^2 ; edges: M [P U] | U^2");
    let bad = Relaxation::Widen {
        side: Side::Node,
        label: Label::plain("U"),
        target: Label::plain("P"),
    };
    assert!(matches!(apply_relaxation(&p, &bad, &Limits::default()), Err(Error::Invalid(_))));
}

#[test]
fn unknown_labels_and_arity_errors() {
    let p = mis();
    let merge = Relaxation::Merge {
        from: Label::plain("Z"),
        into: Label::plain("U"),
    };
    assert!(matches!(apply_relaxation(&p, &merge, &Limits::default()), Err(Error::UnknownLabel(_))));
    let add = Relaxation::AddConfig {
        side: Side::Edge,
        config: "M M M".into(),
    };
    assert!(matches!(apply_relaxation(&p, &add, &Limits::default()), Err(Error::Arity { .. })));
}

#[test]
fn actions_round_trip_through_json() {
    let actions = vec![
        Relaxation::Merge {
            from: Label::plain("P"),
            into: Label::plain("U"),
        },
        Relaxation::AddConfig {
            side: Side::Edge,
            config: "M M".into(),
        },
    ];
    let json = serde_json::to_string(&actions).unwrap();
    assert!(json.contains(r#""action":"merge""#));
    let back: Vec<Relaxation> = serde_json::from_str(&json).unwrap();
    assert_eq!(back, actions);
    let q = apply_relaxations(&mis(), &back, &Limits::default()).unwrap();
    assert_eq!(q.label_count(), 2);
}
