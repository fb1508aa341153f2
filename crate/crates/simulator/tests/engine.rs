mod common;

use common::{random_tree, rng};
use rand::Rng;
use relim_problems::Error;
use relim_simulator::{
    build_instance, run_algorithm, unfold, BallCollector, ColoringSpec, Constant, Edge, Flood, GraphSpec, Instance,
    InstanceSpec, PortSpec,
};

#[test]
fn constant_program_takes_zero_rounds() {
    let inst = random_tree(4, 30, ColoringSpec::None, 3);
    let run = run_algorithm(&inst, &Constant("A"), 0).unwrap();
    assert_eq!(run.rounds, 0);
    assert!(run.outputs.iter().all(|&o| o == "A"));
}

#[test]
fn ball_views_match_the_offline_unfolding() {
    for seed in 0..20 {
        let inst = random_tree(2 + seed as usize % 4, 40, ColoringSpec::Proper { m: 3 }, seed);
        for radius in 0..=3 {
            let with_ids = seed % 2 == 0;
            let run = run_algorithm(&inst, &BallCollector { radius, with_ids }, radius).unwrap();
            assert_eq!(run.rounds, radius);
            for v in 0..inst.node_count() {
                assert_eq!(run.outputs[v], unfold(&inst, v, radius, with_ids), "seed {seed} r {radius} v {v}");
            }
        }
    }
}

#[test]
fn flooding_takes_depth_rounds() {
    for depth in 0..=5 {
        let inst = build_instance(&InstanceSpec {
            graph: GraphSpec::RegularTree { delta: 3, depth },
            ports: PortSpec::Random,
            coloring: ColoringSpec::None,
            seed: depth as u64,
        })
        .unwrap();
        let run = run_algorithm(&inst, &Flood { source: 0 }, 100).unwrap();
        assert_eq!(run.rounds, depth);
        let dist = inst.distances([0]);
        assert_eq!(run.outputs, dist);
    }
}

#[test]
fn exceeding_the_round_cap_is_an_error() {
    let inst = Instance::new(3, vec![Edge { u: 0, v: 1, port_u: 1, port_v: 1 }], 0).unwrap();
    // Node 2 is isolated and never receives the token.
    assert!(matches!(run_algorithm(&inst, &Flood { source: 0 }, 5), Err(Error::Cap { .. })));
    let path = random_tree(2, 10, ColoringSpec::None, 0);
    let end = (0..10).find(|&v| path.degree(v) == 1).unwrap();
    assert!(matches!(run_algorithm(&path, &Flood { source: end }, 8), Err(Error::Cap { .. })));
    assert!(run_algorithm(&path, &Flood { source: end }, 9).is_ok());
}

#[test]
fn runs_are_deterministic() {
    let spec = InstanceSpec {
        graph: GraphSpec::RandomTree { delta: 5, n: 150 },
        ports: PortSpec::Random,
        coloring: ColoringSpec::Proper { m: 7 },
        seed: 9,
    };
    let a = run_algorithm(&build_instance(&spec).unwrap(), &BallCollector { radius: 2, with_ids: true }, 2).unwrap();
    let b = run_algorithm(&build_instance(&spec).unwrap(), &BallCollector { radius: 2, with_ids: true }, 2).unwrap();
    assert_eq!(a, b);
}

/// Removes one edge whose endpoints are both farther than `radius` from `v`.
fn far_surgery(inst: &Instance, v: usize, radius: usize, pick: usize) -> Option<Instance> {
    let dist = inst.distances([v]);
    let far: Vec<usize> = (0..inst.edges().len())
        .filter(|&k| {
            let e = inst.edges()[k];
            dist[e.u] > radius && dist[e.v] > radius
        })
        .collect();
    if far.is_empty() {
        return None;
    }
    let cut = far[pick % far.len()];
    let cut_edge = inst.edges()[cut];
    let edges = inst.edges().iter().copied().filter(|e| *e != cut_edge).collect();
    let out = Instance::new(inst.node_count(), edges, inst.seed()).unwrap();
    Some(match inst.coloring() {
        Some(c) => out.with_coloring(c.to_vec()).unwrap(),
        None => out,
    })
}

#[test]
fn outputs_depend_only_on_the_ball() {
    let mut r = rng(5);
    let mut checked = 0;
    for seed in 0..40 {
        let inst = random_tree(3, 60, ColoringSpec::Proper { m: 4 }, seed);
        let radius = r.gen_range(1..=3);
        let v = r.gen_range(0..inst.node_count());
        let Some(cut) = far_surgery(&inst, v, radius, r.gen()) else { continue };
        let program = BallCollector { radius, with_ids: true };
        let before = run_algorithm(&inst, &program, radius).unwrap();
        let after = run_algorithm(&cut, &program, radius).unwrap();
        assert_eq!(before.outputs[v], after.outputs[v]);
        // The color sweep with β = 1 runs for 4 rounds here.
        if radius == 3 {
            continue;
        }
        let deep = far_surgery(&inst, v, 4, r.gen());
        if let Some(deep) = deep {
            let a = relim_simulator::sweep_ruling_set(&inst, 1, None).unwrap().output.contains(&v);
            let b = relim_simulator::sweep_ruling_set(&deep, 1, None).unwrap().output.contains(&v);
            assert_eq!(a, b);
        }
        checked += 1;
    }
    assert!(checked > 10);
}
