//! Finite graphs with port numbers and optional input colorings.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use relim_problems::{Error, Result};

/// An edge with the port it occupies at each endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    #[serde(rename = "portU")]
    pub port_u: u32,
    #[serde(rename = "portV")]
    pub port_v: u32,
}

/// An input coloring with `α`-arbdefect: colors, and the orientation of every edge as `(tail, head)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArbdefectiveInput {
    pub alpha: u32,
    pub colors: Vec<u32>,
    #[serde(rename = "orientedEdges")]
    pub oriented_edges: Vec<(usize, usize)>,
}

/// One port of a node: where it leads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Half {
    pub port: u32,
    pub neighbor: usize,
    pub neighbor_port: u32,
    pub edge: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct InstanceData {
    nodes: usize,
    edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coloring: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arbdefective: Option<ArbdefectiveInput>,
    #[serde(default)]
    seed: u64,
}

/// A simple graph on nodes `0..nodes` with locally distinct port numbers.
///
/// Colors are numbered from 0. Ports at a node are distinct positive
/// integers; they are `1..=deg` except for edge-coloring ports, where the
/// port of an edge is its color at both endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceData", into = "InstanceData")]
pub struct Instance {
    nodes: usize,
    edges: Vec<Edge>,
    coloring: Option<Vec<u32>>,
    arbdefective: Option<ArbdefectiveInput>,
    seed: u64,
    adjacency: Vec<Vec<Half>>,
}

impl TryFrom<InstanceData> for Instance {
    type Error = Error;

    fn try_from(d: InstanceData) -> Result<Self> {
        let mut inst = Instance::new(d.nodes, d.edges, d.seed)?;
        if let Some(c) = d.coloring {
            inst = inst.with_coloring(c)?;
        }
        if let Some(a) = d.arbdefective {
            inst = inst.with_arbdefective(a)?;
        }
        Ok(inst)
    }
}

impl From<Instance> for InstanceData {
    fn from(i: Instance) -> Self {
        InstanceData {
            nodes: i.nodes,
            edges: i.edges,
            coloring: i.coloring,
            arbdefective: i.arbdefective,
            seed: i.seed,
        }
    }
}

impl Instance {
    /// Validates endpoints, simplicity and port distinctness.
    pub fn new(nodes: usize, edges: Vec<Edge>, seed: u64) -> Result<Instance> {
        let mut adjacency: Vec<Vec<Half>> = vec![Vec::new(); nodes];
        let mut seen = BTreeSet::new();
        for (k, e) in edges.iter().enumerate() {
            if e.u >= nodes || e.v >= nodes {
                return Err(Error::Invalid(format!("edge {k} has an endpoint outside 0..{nodes}")));
            }
            if e.u == e.v {
                return Err(Error::Invalid(format!("edge {k} is a self-loop at node {}", e.u)));
            }
            if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return Err(Error::Invalid(format!("edge {}-{} appears twice", e.u, e.v)));
            }
            if e.port_u == 0 || e.port_v == 0 {
                return Err(Error::Invalid(format!("edge {k} uses port 0; ports start at 1")));
            }
            adjacency[e.u].push(Half { port: e.port_u, neighbor: e.v, neighbor_port: e.port_v, edge: k });
            adjacency[e.v].push(Half { port: e.port_v, neighbor: e.u, neighbor_port: e.port_u, edge: k });
        }
        for (v, halves) in adjacency.iter_mut().enumerate() {
            halves.sort_by_key(|h| h.port);
            if halves.windows(2).any(|w| w[0].port == w[1].port) {
                return Err(Error::Invalid(format!("node {v} uses a port number twice")));
            }
        }
        Ok(Instance { nodes, edges, coloring: None, arbdefective: None, seed, adjacency })
    }

    /// Attaches a proper coloring; fails if two neighbors share a color.
    pub fn with_coloring(mut self, colors: Vec<u32>) -> Result<Instance> {
        if colors.len() != self.nodes {
            return Err(Error::Invalid(format!("coloring has {} entries for {} nodes", colors.len(), self.nodes)));
        }
        if let Some(e) = self.edges.iter().find(|e| colors[e.u] == colors[e.v]) {
            return Err(Error::Invalid(format!("input coloring is not proper on edge {}-{}", e.u, e.v)));
        }
        self.coloring = Some(colors);
        Ok(self)
    }

    /// Attaches an arbdefective input coloring after checking it.
    pub fn with_arbdefective(mut self, a: ArbdefectiveInput) -> Result<Instance> {
        if a.colors.len() != self.nodes {
            return Err(Error::Invalid(format!("arbdefective coloring has {} entries for {} nodes", a.colors.len(), self.nodes)));
        }
        let problems = crate::verify::arbdefect_violations(&self, &a.colors, &a.oriented_edges, |_| a.alpha);
        if let Some(first) = problems.first() {
            return Err(Error::Invalid(format!("input arbdefective coloring is invalid: {first}")));
        }
        self.arbdefective = Some(a);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn coloring(&self) -> Option<&[u32]> {
        self.coloring.as_deref()
    }

    pub fn arbdefective(&self) -> Option<&ArbdefectiveInput> {
        self.arbdefective.as_ref()
    }

    /// Ports of `v` in increasing port order.
    pub fn ports(&self, v: usize) -> &[Half] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Whether the ports of every node are exactly `1..=deg`.
    pub fn ports_are_permutations(&self) -> bool {
        self.adjacency
            .iter()
            .all(|h| h.iter().enumerate().all(|(k, half)| half.port as usize == k + 1))
    }

    /// Number of colors of the proper input coloring (largest color plus one).
    pub fn palette(&self) -> Option<u32> {
        self.coloring.as_ref().map(|c| c.iter().max().map_or(0, |m| m + 1))
    }

    /// Hop distances from a set of sources; `usize::MAX` when unreachable.
    pub fn distances(&self, sources: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.nodes];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for h in &self.adjacency[v] {
                if dist[h.neighbor] == usize::MAX {
                    dist[h.neighbor] = dist[v] + 1;
                    queue.push_back(h.neighbor);
                }
            }
        }
        dist
    }

    /// The same nodes with only the edges accepted by `keep`; ports are renumbered `1..=deg`
    /// in the order of the original ports. Input colorings are not carried over.
    pub fn subgraph(&self, keep: impl Fn(&Edge) -> bool) -> Instance {
        let kept: Vec<Edge> = self.edges.iter().copied().filter(|e| keep(e)).collect();
        let mut rank: Vec<std::collections::BTreeMap<u32, u32>> = vec![Default::default(); self.nodes];
        for e in &kept {
            rank[e.u].insert(e.port_u, 0);
            rank[e.v].insert(e.port_v, 0);
        }
        for r in &mut rank {
            for (k, slot) in r.values_mut().enumerate() {
                *slot = k as u32 + 1;
            }
        }
        let edges = kept
            .iter()
            .map(|e| Edge { u: e.u, v: e.v, port_u: rank[e.u][&e.port_u], port_v: rank[e.v][&e.port_v] })
            .collect();
        Instance::new(self.nodes, edges, self.seed).expect("a subgraph of a valid instance is valid")
    }
}

/// The underlying graph of [`build_instance`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GraphSpec {
    /// Every non-leaf has degree `delta`; leaves are at distance `depth` from the root.
    RegularTree { delta: usize, depth: usize },
    /// `n` nodes, each new node attached to a uniformly random node of degree below `delta`.
    RandomTree { delta: usize, n: usize },
    /// An explicit edge list.
    Arbitrary { nodes: usize, edges: Vec<(usize, usize)> },
}

/// Port assignment of [`build_instance`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PortSpec {
    /// A seeded random permutation of `1..=deg` at every node.
    #[default]
    Random,
    /// A proper edge coloring with at most `max degree` colors; an edge's color is its port at both ends.
    EdgeColoring,
    /// Ports given per edge, aligned with the edge list.
    Explicit { ports: Vec<(u32, u32)> },
}

/// Input coloring of [`build_instance`], generated centrally.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ColoringSpec {
    #[default]
    None,
    /// A proper coloring with colors `0..m`.
    Proper { m: u32 },
    /// An `α`-arbdefective coloring with colors `0..colors`.
    Arbdefective { alpha: u32, colors: u32 },
}

/// Everything [`build_instance`] needs; equal specs give equal instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub graph: GraphSpec,
    #[serde(default)]
    pub ports: PortSpec,
    #[serde(default)]
    pub coloring: ColoringSpec,
    #[serde(default)]
    pub seed: u64,
}

/// Builds a seeded instance.
pub fn build_instance(spec: &InstanceSpec) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (nodes, pairs) = match &spec.graph {
        GraphSpec::RegularTree { delta, depth } => regular_tree(*delta, *depth)?,
        GraphSpec::RandomTree { delta, n } => random_tree(*delta, *n, &mut rng)?,
        GraphSpec::Arbitrary { nodes, edges } => (*nodes, edges.clone()),
    };
    let ports = assign_ports(nodes, &pairs, &spec.ports, &mut rng)?;
    let edges = pairs
        .iter()
        .zip(&ports)
        .map(|(&(u, v), &(port_u, port_v))| Edge { u, v, port_u, port_v })
        .collect();
    let inst = Instance::new(nodes, edges, spec.seed)?;
    match spec.coloring {
        ColoringSpec::None => Ok(inst),
        ColoringSpec::Proper { m } => {
            let colors = proper_coloring(&inst, m, &mut rng)?;
            inst.with_coloring(colors)
        }
        ColoringSpec::Arbdefective { alpha, colors } => {
            let a = arbdefective_coloring(&inst, alpha, colors, &mut rng)?;
            inst.with_arbdefective(a)
        }
    }
}

fn regular_tree(delta: usize, depth: usize) -> Result<(usize, Vec<(usize, usize)>)> {
    if delta < 2 {
        return Err(Error::Invalid(format!("a regular tree needs degree at least 2, got {delta}")));
    }
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    let mut n = 1usize;
    for level in 0..depth {
        let children = if level == 0 { delta } else { delta - 1 };
        let mut next = Vec::with_capacity(frontier.len() * children);
        for &v in &frontier {
            for _ in 0..children {
                edges.push((v, n));
                next.push(n);
                n += 1;
                if n > 5_000_000 {
                    return Err(Error::Cap {
                        what: "instance nodes".into(),
                        cap: 5_000_000,
                        partial: format!("level {level} of a degree-{delta} tree"),
                    });
                }
            }
        }
        frontier = next;
    }
    Ok((n, edges))
}

fn random_tree(delta: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<(usize, Vec<(usize, usize)>)> {
    if delta < 2 && n > 2 {
        return Err(Error::Invalid(format!("a tree on {n} nodes needs degree at least 2")));
    }
    if n == 0 {
        return Err(Error::Invalid("a random tree needs at least one node".into()));
    }
    let mut degree = vec![0usize; n];
    let mut open: Vec<usize> = vec![0];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        let k = rng.gen_range(0..open.len());
        let u = open[k];
        edges.push((u, v));
        degree[u] += 1;
        degree[v] = 1;
        if degree[u] == delta {
            open.swap_remove(k);
        }
        if delta > 1 {
            open.push(v);
        }
    }
    Ok((n, edges))
}

fn assign_ports(nodes: usize, pairs: &[(usize, usize)], spec: &PortSpec, rng: &mut ChaCha8Rng) -> Result<Vec<(u32, u32)>> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for (k, &(u, v)) in pairs.iter().enumerate() {
        if u >= nodes || v >= nodes {
            return Err(Error::Invalid(format!("edge {k} has an endpoint outside 0..{nodes}")));
        }
        incident[u].push(k);
        incident[v].push(k);
    }
    let mut ports = vec![(0u32, 0u32); pairs.len()];
    match spec {
        PortSpec::Random => {
            for (v, edges) in incident.iter().enumerate() {
                let mut perm: Vec<u32> = (1..=edges.len() as u32).collect();
                perm.shuffle(rng);
                for (&k, &p) in edges.iter().zip(&perm) {
                    if pairs[k].0 == v {
                        ports[k].0 = p;
                    } else {
                        ports[k].1 = p;
                    }
                }
            }
        }
        PortSpec::EdgeColoring => {
            let max_degree = incident.iter().map(Vec::len).max().unwrap_or(0) as u32;
            let mut used: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); nodes];
            for (k, &(u, v)) in pairs.iter().enumerate() {
                let color = (1..=max_degree)
                    .find(|c| !used[u].contains(c) && !used[v].contains(c))
                    .ok_or_else(|| {
                        Error::Invalid(format!(
                            "greedy edge coloring needs more than {max_degree} colors at edge {u}-{v}"
                        ))
                    })?;
                used[u].insert(color);
                used[v].insert(color);
                ports[k] = (color, color);
            }
        }
        PortSpec::Explicit { ports: given } => {
            if given.len() != pairs.len() {
                return Err(Error::Invalid(format!("{} port pairs for {} edges", given.len(), pairs.len())));
            }
            ports.clone_from(given);
        }
    }
    Ok(ports)
}

/// Order in which generators color nodes: BFS from the lowest node of each component.
fn bfs_order(inst: &Instance) -> Vec<usize> {
    let mut seen = vec![false; inst.node_count()];
    let mut order = Vec::with_capacity(inst.node_count());
    for s in 0..inst.node_count() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for h in inst.ports(v) {
                if !seen[h.neighbor] {
                    seen[h.neighbor] = true;
                    queue.push_back(h.neighbor);
                }
            }
        }
    }
    order
}

fn proper_coloring(inst: &Instance, m: u32, rng: &mut ChaCha8Rng) -> Result<Vec<u32>> {
    if m < 2 && !inst.edges().is_empty() {
        return Err(Error::Invalid(format!("a proper {m}-coloring cannot color an edge")));
    }
    let mut colors: Vec<Option<u32>> = vec![None; inst.node_count()];
    for v in bfs_order(inst) {
        let taken: BTreeSet<u32> = inst.ports(v).iter().filter_map(|h| colors[h.neighbor]).collect();
        let free: Vec<u32> = (0..m).filter(|c| !taken.contains(c)).collect();
        let &c = free
            .choose(rng)
            .ok_or_else(|| Error::Invalid(format!("greedy coloring with {m} colors gets stuck at node {v}")))?;
        colors[v] = Some(c);
    }
    Ok(colors.into_iter().map(|c| c.unwrap_or(0)).collect())
}

/// Colors nodes in BFS order and orients every edge toward the node colored earlier,
/// picking a random color with at most `α` earlier neighbors of that color.
fn arbdefective_coloring(inst: &Instance, alpha: u32, palette: u32, rng: &mut ChaCha8Rng) -> Result<ArbdefectiveInput> {
    let order = bfs_order(inst);
    let mut position = vec![0usize; inst.node_count()];
    for (k, &v) in order.iter().enumerate() {
        position[v] = k;
    }
    let mut colors: Vec<Option<u32>> = vec![None; inst.node_count()];
    for &v in &order {
        let mut count = vec![0u32; palette as usize];
        for h in inst.ports(v) {
            if let Some(c) = colors[h.neighbor] {
                count[c as usize] += 1;
            }
        }
        let free: Vec<u32> = (0..palette).filter(|&c| count[c as usize] <= alpha).collect();
        let &c = free.choose(rng).ok_or_else(|| {
            Error::Invalid(format!("no color with at most {alpha} earlier neighbors at node {v} ({palette} colors)"))
        })?;
        colors[v] = Some(c);
    }
    let oriented_edges = inst
        .edges()
        .iter()
        .map(|e| if position[e.u] > position[e.v] { (e.u, e.v) } else { (e.v, e.u) })
        .collect();
    Ok(ArbdefectiveInput {
        alpha,
        colors: colors.into_iter().map(|c| c.unwrap_or(0)).collect(),
        oriented_edges,
    })
}
