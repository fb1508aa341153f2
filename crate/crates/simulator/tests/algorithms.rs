mod common;

use common::{ceil_root, is_ruling_set, path, random_tree, rng};
use rand::Rng;
use relim_family::ArbdefectVector;
use relim_problems::Error;
use relim_simulator::{
    arb_colored_ruling_set, build_instance, default_block_size, greedy_arbdefective, mis_by_sweep, sweep_ruling_set,
    verify_arbdefective, verify_ruling, ColoringSpec, GraphSpec, Instance, InstanceSpec, PortSpec,
};

/// Random defects with capacity above `delta`.
fn relaxed_defects(r: &mut impl Rng, delta: usize) -> ArbdefectVector {
    let colors = r.gen_range(1..=delta + 1);
    let mut d: Vec<u32> = (0..colors).map(|_| r.gen_range(0..=delta as u32 / 2)).collect();
    while d.iter().map(|&x| x as u64 + 1).sum::<u64>() <= delta as u64 {
        let k = r.gen_range(0..colors);
        d[k] += 1;
    }
    ArbdefectVector::new(d).unwrap()
}

#[test]
fn greedy_colorings_verify_on_random_trees() {
    let mut r = rng(11);
    for case in 0..200 {
        let delta = r.gen_range(2..=6);
        let n = r.gen_range(1..=200);
        let m = r.gen_range(2..=delta as u32 + 3);
        let inst = random_tree(delta, n, ColoringSpec::Proper { m }, case);
        let d = relaxed_defects(&mut r, delta);
        let out = greedy_arbdefective(&inst, &d).unwrap();
        let verdict = verify_arbdefective(&inst, &d, &out.output);
        assert!(verdict.ok, "case {case}: {:?}", verdict.violations);
        assert!(out.rounds <= m as usize, "case {case}: {} rounds for m = {m}", out.rounds);
        let input = inst.coloring().unwrap();
        assert!(out.output.oriented_edges.iter().all(|&(t, h)| input[t] > input[h]));
    }
}

#[test]
fn greedy_rejects_vectors_without_slack() {
    let mut r = rng(12);
    for case in 0..50 {
        let delta = r.gen_range(2..=6);
        let inst = random_tree(delta, 100, ColoringSpec::Proper { m: 3 }, case);
        let max = inst.max_degree();
        let colors = r.gen_range(1..=max);
        let mut d = vec![0u32; colors];
        for _ in 0..(max - colors) {
            d[r.gen_range(0..colors)] += 1;
        }
        let d = ArbdefectVector::new(d).unwrap();
        assert_eq!(d.capacity(), max as u64);
        assert!(matches!(greedy_arbdefective(&inst, &d), Err(Error::Invalid(_))));
    }
}

#[test]
fn greedy_on_a_three_node_path() {
    let inst = path(3, vec![0, 1, 0]);
    let d = ArbdefectVector::new(vec![0, 1]).unwrap();
    let out = greedy_arbdefective(&inst, &d).unwrap();
    assert!(verify_arbdefective(&inst, &d, &out.output).ok);
    // The middle node sees two neighbors of color 0 and takes color 1.
    assert_eq!(out.output.colors, vec![0, 1, 0]);
    assert_eq!(out.rounds, 2);
}

#[test]
fn greedy_on_a_star() {
    for delta in 2..=6usize {
        let edges = (1..=delta).map(|v| (0, v)).collect();
        let inst = build_instance(&InstanceSpec {
            graph: GraphSpec::Arbitrary { nodes: delta + 1, edges },
            ports: PortSpec::Random,
            coloring: ColoringSpec::None,
            seed: 0,
        })
        .unwrap();
        for center in [0u32, 1] {
            let colors = (0..=delta).map(|v| if v == 0 { center } else { 1 - center }).collect();
            let inst = inst.clone().with_coloring(colors).unwrap();
            let d = ArbdefectVector::new(vec![delta as u32 - 1, 0]).unwrap();
            let out = greedy_arbdefective(&inst, &d).unwrap();
            assert!(verify_arbdefective(&inst, &d, &out.output).ok);
        }
    }
}

#[test]
fn zero_defects_give_a_proper_coloring() {
    for seed in 0..30 {
        let delta = 2 + seed as usize % 5;
        let inst = random_tree(delta, 120, ColoringSpec::Proper { m: 8 }, seed);
        let d = ArbdefectVector::uniform(delta + 1, 0).unwrap();
        let out = greedy_arbdefective(&inst, &d).unwrap();
        let c = &out.output.colors;
        assert!(inst.edges().iter().all(|e| c[e.u] != c[e.v]));
        assert!(c.iter().all(|&x| x <= delta as u32));
    }
}

#[test]
fn sweeps_give_ruling_sets() {
    let mut r = rng(21);
    for case in 0..200 {
        let c = r.gen_range(2..=16);
        let beta = r.gen_range(1..=3);
        let inst = random_tree(r.gen_range(2..=6), r.gen_range(1..=150), ColoringSpec::Proper { m: c }, case);
        let out = sweep_ruling_set(&inst, beta, None).unwrap();
        assert!(is_ruling_set(&inst, &out.output, beta as usize), "case {case}");
        // The run uses the declared palette size, which may exceed the colors present.
        let used = inst.palette().unwrap();
        assert_eq!(out.rounds, beta as usize * default_block_size(used, beta) as usize);
        assert!(out.rounds <= beta as usize * ceil_root(c, beta) as usize, "case {case}");
    }
}

#[test]
fn default_block_size_is_the_ceiling_root() {
    for c in 1..=5000u32 {
        for beta in 1..=6 {
            assert_eq!(default_block_size(c, beta), ceil_root(c, beta), "c {c} β {beta}");
        }
    }
}

#[test]
fn single_level_sweep_is_a_maximal_independent_set() {
    for seed in 0..30 {
        let inst = random_tree(5, 100, ColoringSpec::Proper { m: 6 }, seed);
        let out = sweep_ruling_set(&inst, 1, None).unwrap();
        assert!(is_ruling_set(&inst, &out.output, 1));
        assert_eq!(out.rounds, inst.palette().unwrap() as usize);
        let mis = mis_by_sweep(&inst).unwrap();
        assert!(verify_ruling(&inst, 0, 1, 1, &mis).ok);
    }
}

#[test]
fn two_by_two_schedule_takes_four_rounds() {
    for seed in 0..20 {
        let inst = random_tree(4, 80, ColoringSpec::Proper { m: 4 }, seed);
        if inst.palette() != Some(4) {
            continue;
        }
        let out = sweep_ruling_set(&inst, 2, Some(vec![2, 2])).unwrap();
        assert_eq!(out.rounds, 4);
        assert!(is_ruling_set(&inst, &out.output, 2));
    }
}

#[test]
fn schedules_must_cover_the_palette() {
    let inst = random_tree(3, 40, ColoringSpec::Proper { m: 9 }, 1);
    let c = inst.palette().unwrap();
    assert!(sweep_ruling_set(&inst, 2, Some(vec![2, 2])).is_err() || c <= 4);
    assert!(sweep_ruling_set(&inst, 2, Some(vec![3])).is_err());
    assert!(sweep_ruling_set(&inst, 2, Some(vec![0, 9])).is_err());
    assert!(sweep_ruling_set(&inst, 0, None).is_err());
    let uncolored = random_tree(3, 10, ColoringSpec::None, 0);
    assert!(sweep_ruling_set(&uncolored, 1, None).is_err());
}

#[test]
fn one_color_selects_every_candidate_in_one_round() {
    let inst = Instance::new(5, vec![], 0).unwrap().with_coloring(vec![0; 5]).unwrap();
    let out = sweep_ruling_set(&inst, 1, None).unwrap();
    assert_eq!(out.output, vec![0, 1, 2, 3, 4]);
    assert_eq!(out.rounds, 1);
}

fn arbdefective_tree(delta: usize, n: usize, alpha: u32, colors: u32, seed: u64) -> Instance {
    random_tree(delta, n, ColoringSpec::Arbdefective { alpha, colors }, seed)
}

#[test]
fn arbdefective_colored_ruling_sets_verify() {
    let mut r = rng(31);
    let mut cases = 0;
    for alpha in 0..=2u32 {
        for c in 1..=3u32 {
            for beta in 0..=2u32 {
                for _ in 0..8 {
                    let delta = r.gen_range(2..=6);
                    let big_c = r.gen_range(c.max(2)..=3 * c + 2);
                    let inst = arbdefective_tree(delta, r.gen_range(1..=120), alpha, big_c, r.gen());
                    let palette = inst.arbdefective().unwrap().colors.iter().max().unwrap() + 1;
                    match arb_colored_ruling_set(&inst, alpha, c, beta) {
                        Ok(out) => {
                            let verdict = verify_ruling(&inst, alpha, c, beta, &out);
                            assert!(verdict.ok, "α {alpha} c {c} β {beta}: {:?}", verdict.violations);
                            if beta > 0 {
                                let k = palette.div_ceil(c);
                                assert!(out.rounds <= beta as usize * ceil_root(k, beta) as usize);
                            }
                            cases += 1;
                        }
                        Err(e) => {
                            assert_eq!(beta, 0, "{e}");
                            assert!(palette > c);
                        }
                    }
                }
            }
        }
    }
    assert!(cases > 100);
}

#[test]
fn degenerate_grouping_is_a_plain_ruling_set() {
    for seed in 0..20 {
        let inst = arbdefective_tree(4, 100, 0, 5, seed);
        let out = arb_colored_ruling_set(&inst, 0, 1, 2).unwrap();
        assert!(is_ruling_set(&inst, &out.members, 2));
        assert!(out.colors.iter().all(|&x| x == 0));
    }
}

#[test]
fn six_colors_in_groups_of_two() {
    let mut seen = 0;
    for seed in 0..40 {
        let inst = arbdefective_tree(4, 150, 1, 6, seed);
        let palette = inst.arbdefective().unwrap().colors.iter().max().unwrap() + 1;
        if palette != 6 {
            continue;
        }
        let out = arb_colored_ruling_set(&inst, 1, 2, 2).unwrap();
        assert!(verify_ruling(&inst, 1, 2, 2, &out).ok);
        assert!(out.rounds <= 4);
        seen += 1;
    }
    assert!(seen > 10);
}

#[test]
fn beta_zero_takes_every_node() {
    let inst = arbdefective_tree(4, 60, 1, 2, 3);
    let out = arb_colored_ruling_set(&inst, 1, 2, 0).unwrap();
    assert_eq!(out.members.len(), 60);
    assert_eq!(out.rounds, 0);
    assert!(verify_ruling(&inst, 1, 2, 0, &out).ok);
    let wide = arbdefective_tree(4, 60, 1, 4, 3);
    assert!(arb_colored_ruling_set(&wide, 1, 2, 0).is_err());
    assert!(arb_colored_ruling_set(&inst, 0, 2, 1).is_err());
    assert!(arb_colored_ruling_set(&inst, 1, 0, 1).is_err());
}

#[test]
fn algorithms_are_deterministic() {
    let spec = InstanceSpec {
        graph: GraphSpec::RandomTree { delta: 5, n: 150 },
        ports: PortSpec::Random,
        coloring: ColoringSpec::Proper { m: 9 },
        seed: 17,
    };
    let d = ArbdefectVector::new(vec![1, 1, 1]).unwrap();
    let a = build_instance(&spec).unwrap();
    let b = build_instance(&spec).unwrap();
    assert_eq!(greedy_arbdefective(&a, &d).unwrap(), greedy_arbdefective(&b, &d).unwrap());
    assert_eq!(sweep_ruling_set(&a, 2, None).unwrap(), sweep_ruling_set(&b, 2, None).unwrap());
}
