mod common;

use std::collections::BTreeSet;

use common::{pi3_listing, vectors, z};
use relim_family::{build_family_problem, build_fixedpoint_variant, Family, Sym};
use relim_problems::{gen_closure, parse_problem, ColorId, Diagram, Error, Label, Limits, Problem, Side};

fn same(a: &Problem, b: &Problem) -> bool {
    a.same_concrete(b, &Limits::default()).unwrap()
}

#[test]
fn pi3_matches_the_listing() {
    let built = build_family_problem(3, &z(&[3])).unwrap();
    assert_eq!(built.labels().len(), 8);
    assert!(same(&built, &pi3_listing()));
}

#[test]
fn single_color_problem() {
    let built = build_family_problem(3, &z(&[1])).unwrap();
    let expected = parse_problem("delta 3 2\nnodes:\nL{0.1}^3\nedges:\nX X\nX L{0.1}\n").unwrap();
    assert!(same(&built, &expected));
}

#[test]
fn too_many_colors_are_rejected() {
    assert!(matches!(build_family_problem(3, &z(&[4])), Err(Error::Invalid(_))));
    assert!(build_family_problem(3, &z(&[2, 2])).is_err());
    assert!(build_family_problem(5, &z(&[5])).is_ok());
}

#[test]
fn pointer_levels_have_their_own_configurations() {
    let built = build_family_problem(3, &z(&[1, 1])).unwrap();
    let expected = parse_problem(
        "delta 3 2
nodes:
L{0.1}^3
L{1.1}^3
L{0.1,1.1}^2 X
P<1> U<1>^2
edges:
X [X L{0.1} L{1.1} L{0.1,1.1} P<1> U<1>]
L{0.1} [L{1.1} U<1> P<1>]
L{1.1} [L{0.1} U<1>]
L{0.1,1.1} U<1>
U<1> U<1>
",
    )
    .unwrap();
    assert!(same(&built, &expected));
}

/// Edge-diagram strength from the closed form agrees with the diagram computed from the constraint.
#[test]
fn edge_diagram_matches_closed_form() {
    let limits = Limits::default();
    let mut cases: Vec<(usize, Vec<u64>)> = vec![(4, vec![1, 2, 1])];
    for delta in 2..=4usize {
        for v in vectors(3, 1, delta as u64) {
            cases.push((delta, v.entries().to_vec()));
        }
    }
    for (delta, entries) in cases {
        let family = Family::new(delta, z(&entries)).unwrap();
        let p = family.problem().unwrap();
        let d = Diagram::compute(&p, Side::Edge, &limits).unwrap();
        assert!(d.exact);
        for a in family.symbols() {
            for b in family.symbols() {
                let (ia, ib) = (p.index_of(&family.label(a)).unwrap(), p.index_of(&family.label(b)).unwrap());
                assert_eq!(
                    d.at_least(ib, ia),
                    family.at_least(b, a),
                    "Δ={delta} z={entries:?}: {b:?} at least {a:?}"
                );
            }
        }
    }
}

#[test]
fn worked_relations_of_the_edge_diagram() {
    let family = Family::new(4, z(&[1, 2, 1])).unwrap();
    for mask in family.masks().filter(|&m| m != 0) {
        assert!(family.strictly_weaker(Sym::L(mask), Sym::X));
    }
    assert!(family.strictly_weaker(Sym::U(2), Sym::U(1)));
    assert!(family.strictly_weaker(Sym::P(1), Sym::P(2)));
    assert!(!family.strictly_weaker(Sym::U(1), Sym::U(2)));
}

#[test]
fn closures_in_the_edge_diagram() {
    let limits = Limits::default();
    let family = Family::new(3, z(&[1, 1])).unwrap();
    let p = family.problem().unwrap();
    let d = Diagram::compute(&p, Side::Edge, &limits).unwrap();
    let c11: BTreeSet<Label> = [Label::colors([ColorId::new(1, 1)])].into_iter().collect();
    let expected: BTreeSet<Label> = [Label::colors([ColorId::new(1, 1)]), Label::unpointed(1), Label::x()]
        .into_iter()
        .collect();
    assert_eq!(gen_closure(&p, &c11, &d).unwrap(), expected);
    let x: BTreeSet<Label> = [Label::x()].into_iter().collect();
    assert_eq!(gen_closure(&p, &x, &d).unwrap(), x);
    assert!(gen_closure(&p, &BTreeSet::new(), &d).unwrap().is_empty());
}

/// Replacing a color set on one side of an allowed edge by a subset keeps it allowed.
#[test]
fn edge_constraint_is_closed_under_subsets() {
    for delta in 2..=4usize {
        for v in vectors(3, 1, delta as u64) {
            let family = Family::new(delta, v).unwrap();
            for a in family.symbols() {
                for b in family.symbols() {
                    if !family.edge_allowed(a, b) {
                        continue;
                    }
                    if let Sym::L(m) = a {
                        for sub in family.masks().filter(|&s| s & !m == 0) {
                            assert!(family.edge_allowed(Sym::L(sub), b), "{a:?} {b:?} -> {sub:#b}");
                        }
                    }
                }
            }
        }
    }
}

/// The variant's node constraint is closed under slotwise color supersets.
#[test]
fn variant_nodes_are_closed_under_supersets() {
    let limits = Limits::default();
    for delta in 2..=4usize {
        let v = build_fixedpoint_variant(delta).unwrap();
        let family = Family::new(delta, z(&[delta as u64])).unwrap();
        let index = |m: u32| v.index_of(&family.label(Sym::L(m))).unwrap() as u16;
        let mask_of = |i: u16| match family.sym_of(v.label(i as usize)).unwrap() {
            Sym::L(m) => m,
            other => panic!("unexpected label {other:?}"),
        };
        for c in v.nodes().expand(&limits).unwrap() {
            for pos in 0..delta {
                let m = mask_of(c[pos]);
                for sup in family.masks().filter(|&s| m & !s == 0) {
                    let mut r = c.clone();
                    r[pos] = index(sup);
                    r.sort_unstable();
                    assert!(v.nodes().allows(&r), "Δ={delta}");
                }
            }
        }
    }
}

#[test]
fn variant_contains_the_family_problem_with_the_same_edges() {
    let limits = Limits::default();
    for delta in 2..=4usize {
        let v = build_fixedpoint_variant(delta).unwrap();
        let p = build_family_problem(delta, &z(&[delta as u64])).unwrap();
        assert_eq!(v.labels(), p.labels());
        assert!(v.edges().same_concrete(p.edges(), &limits).unwrap());
        for c in p.nodes().expand(&limits).unwrap() {
            assert!(v.nodes().allows(&c));
        }
        assert!(v.nodes().expand(&limits).unwrap().len() > p.nodes().expand(&limits).unwrap().len());
    }
}

#[test]
fn variant_condition_by_hand() {
    use relim_family::build::variant_node_allowed;
    // Δ = 3 over colors {A, B, C} as bits 1, 2, 4.
    assert!(variant_node_allowed(3, &[0b011, 0b011, 0b100]));
    assert!(variant_node_allowed(3, &[0b111, 0, 0]));
    assert!(variant_node_allowed(3, &[0b001, 0b001, 0b001]));
    assert!(!variant_node_allowed(3, &[0b001, 0b010, 0b100]));
    assert!(!variant_node_allowed(3, &[0b011, 0b100, 0]));
}

#[test]
fn label_counts_are_within_the_bound() {
    for delta in 2..=5usize {
        for v in vectors(3, 1, delta as u64) {
            let Ok(family) = Family::new(delta, v) else { continue };
            let p = family.problem().unwrap();
            assert!(p.label_count() as u128 <= family.label_bound());
            assert_eq!(p.label_count(), (1 << family.colors().len()) + 2 * family.beta() as usize);
        }
    }
}
