#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relim_family::ArbdefectVector;
use relim_simulator::{build_instance, ArbdefectiveColoring, ColoringSpec, GraphSpec, Instance, InstanceSpec, PortSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_tree(delta: usize, n: usize, coloring: ColoringSpec, seed: u64) -> Instance {
    build_instance(&InstanceSpec {
        graph: GraphSpec::RandomTree { delta, n },
        ports: PortSpec::Random,
        coloring,
        seed,
    })
    .unwrap()
}

pub fn path(n: usize, coloring: Vec<u32>) -> Instance {
    let edges = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    build_instance(&InstanceSpec {
        graph: GraphSpec::Arbitrary { nodes: n, edges },
        ports: PortSpec::Random,
        coloring: ColoringSpec::None,
        seed: 0,
    })
    .unwrap()
    .with_coloring(coloring)
    .unwrap()
}

/// Hop distances by plain BFS over the edge list.
pub fn bfs(inst: &Instance, sources: &[usize]) -> Vec<Option<usize>> {
    let mut adj = vec![Vec::new(); inst.node_count()];
    for e in inst.edges() {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut dist = vec![None; inst.node_count()];
    let mut queue = VecDeque::new();
    for &s in sources {
        dist[s] = Some(0);
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if dist[w].is_none() {
                dist[w] = Some(dist[v].unwrap() + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// `S` is independent and every node is within distance `beta` of it.
pub fn is_ruling_set(inst: &Instance, set: &[usize], beta: usize) -> bool {
    let members: BTreeSet<usize> = set.iter().copied().collect();
    let independent = inst.edges().iter().all(|e| !(members.contains(&e.u) && members.contains(&e.v)));
    independent && bfs(inst, set).iter().all(|d| d.is_some_and(|d| d <= beta))
}

/// The smallest integer `q` with `q^beta >= c`, computed through floating point and corrected.
pub fn ceil_root(c: u32, beta: u32) -> u32 {
    let mut q = (c as f64).powf(1.0 / beta as f64).ceil() as u32;
    while q > 1 && (q as u64 - 1).pow(beta) >= c as u64 {
        q -= 1;
    }
    while (q as u64).pow(beta) < c as u64 {
        q += 1;
    }
    q.max(1)
}

/// A `d⃗`-arbdefective coloring of a tree: every edge points from child to
/// parent and a child avoids its parent's color when that color has no slack.
pub fn tree_arbdefective(inst: &Instance, d: &ArbdefectVector, rng: &mut ChaCha8Rng) -> ArbdefectiveColoring {
    let n = inst.node_count();
    let mut colors = vec![u32::MAX; n];
    let mut oriented = Vec::new();
    let mut queue = VecDeque::new();
    for root in 0..n {
        if colors[root] != u32::MAX {
            continue;
        }
        colors[root] = rng.gen_range(0..d.colors() as u32);
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for h in inst.ports(v) {
                let w = h.neighbor;
                if colors[w] != u32::MAX {
                    continue;
                }
                let options: Vec<u32> = (0..d.colors() as u32)
                    .filter(|&x| x != colors[v] || d.defects()[x as usize] >= 1)
                    .collect();
                colors[w] = options[rng.gen_range(0..options.len())];
                oriented.push((w, v));
                queue.push_back(w);
            }
        }
    }
    ArbdefectiveColoring { colors, oriented_edges: oriented }
}
