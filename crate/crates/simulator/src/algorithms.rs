//! Greedy arbdefective coloring, color-sweep ruling sets and arbdefective colored ruling sets.

use serde::{Deserialize, Serialize};

use relim_family::ArbdefectVector;
use relim_problems::{Error, Result};

use crate::engine::{run_algorithm, NodeContext, Program};
use crate::instance::Instance;
use crate::solution::{ArbdefectiveColoring, RulingSetOutput};

/// An algorithm output together with its round count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timed<T> {
    pub output: T,
    pub rounds: usize,
}

fn proper_input(inst: &Instance) -> Result<&[u32]> {
    inst.coloring()
        .ok_or_else(|| Error::Invalid("the instance has no proper input coloring".into()))
}

/// Node program of [`greedy_arbdefective`].
#[derive(Clone, Debug)]
pub struct GreedyArbdefective {
    defects: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct GreedyState {
    /// Chosen output color.
    chosen: Option<u32>,
    /// Input and output colors heard on each port.
    heard: Vec<(u32, Option<u32>)>,
}

impl Program for GreedyArbdefective {
    type State = GreedyState;
    type Message = (u32, Option<u32>);
    type Output = u32;

    fn init(&self, ctx: &NodeContext) -> GreedyState {
        GreedyState { chosen: None, heard: vec![(0, None); ctx.degree] }
    }

    fn output(&self, _: &NodeContext, state: &GreedyState, _: usize) -> Option<u32> {
        state.chosen
    }

    fn message(&self, ctx: &NodeContext, state: &GreedyState, _: usize) -> (u32, Option<u32>) {
        (ctx.input_color.unwrap_or(0), state.chosen)
    }

    fn update(&self, ctx: &NodeContext, mut state: GreedyState, inbox: Vec<(u32, Option<u32>)>, round: usize) -> GreedyState {
        state.heard = inbox;
        let own = ctx.input_color.unwrap_or(0);
        if round == own as usize + 1 {
            // Out-neighbors have a smaller input color and chose in earlier phases.
            let mut count = vec![0u32; self.defects.len()];
            for &(input, out) in &state.heard {
                if input < own {
                    if let Some(x) = out {
                        count[x as usize] += 1;
                    }
                }
            }
            state.chosen = (0..self.defects.len()).find(|&x| count[x] <= self.defects[x]).map(|x| x as u32);
        }
        state
    }
}

/// Computes a `d⃗`-arbdefective coloring from a proper `m`-coloring in at most `m` rounds.
///
/// Nodes of input color `p` choose in round `p + 1` the smallest color `x`
/// with at most `d_x` already colored neighbors of color `x` among those of
/// smaller input color; edges point from the larger to the smaller input color.
pub fn greedy_arbdefective(inst: &Instance, defects: &ArbdefectVector) -> Result<Timed<ArbdefectiveColoring>> {
    let input = proper_input(inst)?;
    let delta = inst.max_degree() as u64;
    if defects.capacity() <= delta {
        return Err(Error::Invalid(format!(
            "capacity {} of the arbdefect vector is not above the maximum degree {delta}",
            defects.capacity()
        )));
    }
    let m = inst.palette().unwrap_or(0) as usize;
    let program = GreedyArbdefective { defects: defects.defects().to_vec() };
    let run = run_algorithm(inst, &program, m.max(1))?;
    let oriented_edges = inst
        .edges()
        .iter()
        .map(|e| if input[e.u] > input[e.v] { (e.u, e.v) } else { (e.v, e.u) })
        .collect();
    Ok(Timed {
        output: ArbdefectiveColoring { colors: run.outputs, oriented_edges },
        rounds: run.rounds,
    })
}

/// The smallest `q` with `q^β ≥ c`.
pub fn default_block_size(c: u32, beta: u32) -> u32 {
    let mut q = 1u32;
    while (q as u128).pow(beta) < c as u128 {
        q += 1;
    }
    q
}

/// Node program of [`sweep_ruling_set`].
#[derive(Clone, Debug)]
pub struct Sweep {
    schedule: Vec<u32>,
    /// `(level, step)` of each global round, starting at round 1.
    timeline: Vec<(usize, u32)>,
}

impl Sweep {
    pub fn new(schedule: Vec<u32>) -> Sweep {
        let timeline = schedule
            .iter()
            .enumerate()
            .flat_map(|(level, &q)| (0..q).map(move |s| (level, s)))
            .collect();
        Sweep { schedule, timeline }
    }

    pub fn rounds(&self) -> usize {
        self.timeline.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepState {
    candidate: bool,
    color: u32,
    joined: bool,
    done: bool,
}

impl Program for Sweep {
    type State = SweepState;
    type Message = SweepState;
    type Output = bool;

    fn init(&self, ctx: &NodeContext) -> SweepState {
        SweepState { candidate: true, color: ctx.input_color.unwrap_or(0), joined: false, done: self.timeline.is_empty() }
    }

    fn output(&self, _: &NodeContext, state: &SweepState, _: usize) -> Option<bool> {
        state.done.then_some(state.candidate)
    }

    fn message(&self, _: &NodeContext, state: &SweepState, _: usize) -> SweepState {
        state.clone()
    }

    fn update(&self, _: &NodeContext, mut state: SweepState, inbox: Vec<SweepState>, round: usize) -> SweepState {
        let (level, step) = self.timeline[round - 1];
        let q = self.schedule[level];
        if state.candidate && state.color % q == step {
            let block = state.color / q;
            state.joined = !inbox.iter().any(|m| m.candidate && m.joined && m.color / q == block);
        }
        if step + 1 == q {
            state.candidate = state.candidate && state.joined;
            state.color /= q;
            state.joined = false;
            state.done = level + 1 == self.schedule.len();
        }
        state
    }
}

/// Computes an independent set within distance `β` of every node from a proper `c`-coloring.
///
/// Level `i` groups the current colors into blocks of `q_i` consecutive
/// colors and sweeps the `q_i` positions of a block, one per round; a
/// candidate joins unless a neighbor in its block has joined. Survivors take
/// their block index as color. The run takes `Σ q_i` rounds.
pub fn sweep_ruling_set(inst: &Instance, beta: u32, schedule: Option<Vec<u32>>) -> Result<Timed<Vec<usize>>> {
    proper_input(inst)?;
    let c = inst.palette().unwrap_or(0).max(1);
    if beta == 0 {
        return Err(Error::Invalid("a color sweep needs β ≥ 1".into()));
    }
    let schedule = schedule.unwrap_or_else(|| vec![default_block_size(c, beta); beta as usize]);
    if schedule.len() != beta as usize {
        return Err(Error::Invalid(format!("schedule has {} levels for β = {beta}", schedule.len())));
    }
    if schedule.contains(&0) {
        return Err(Error::Invalid("schedule entries must be positive".into()));
    }
    let product = schedule.iter().try_fold(1u128, |acc, &q| acc.checked_mul(q as u128)).unwrap_or(u128::MAX);
    if product < c as u128 {
        return Err(Error::Invalid(format!("schedule product {product} is below the number of colors {c}")));
    }
    let program = Sweep::new(schedule);
    let total = program.rounds();
    let run = run_algorithm(inst, &program, total)?;
    let members = run.outputs.iter().enumerate().filter(|(_, &s)| s).map(|(v, _)| v).collect();
    Ok(Timed { output: members, rounds: total })
}

/// Computes an `α`-arbdefective `c`-colored `β`-ruling set from an `α`-arbdefective `C`-coloring.
///
/// The `C` input colors form `K = ⌈C/c⌉` groups of `c` consecutive colors.
/// A color sweep on the graph without intra-group edges, colored by group,
/// selects the set; members keep their input color modulo `c` and the input
/// orientation.
pub fn arb_colored_ruling_set(inst: &Instance, alpha: u32, c: u32, beta: u32) -> Result<RulingSetOutput> {
    let input = inst
        .arbdefective()
        .ok_or_else(|| Error::Invalid("the instance has no arbdefective input coloring".into()))?;
    if c == 0 {
        return Err(Error::Invalid("c must be at least 1".into()));
    }
    if input.alpha > alpha {
        return Err(Error::Invalid(format!("input arbdefect {} exceeds α = {alpha}", input.alpha)));
    }
    let palette = input.colors.iter().max().map_or(0, |m| m + 1);
    let (members, rounds) = if beta == 0 {
        if palette > c {
            return Err(Error::Invalid(format!(
                "with β = 0 every node is in the set, so the {palette} input colors must fit in c = {c}"
            )));
        }
        ((0..inst.node_count()).collect::<Vec<_>>(), 0)
    } else {
        let group = |v: usize| input.colors[v] / c;
        let h = inst
            .subgraph(|e| group(e.u) != group(e.v))
            .with_coloring((0..inst.node_count()).map(group).collect())?;
        let sweep = sweep_ruling_set(&h, beta, None)?;
        (sweep.output, sweep.rounds)
    };
    let mut in_set = vec![false; inst.node_count()];
    for &v in &members {
        in_set[v] = true;
    }
    let orientation = input.oriented_edges.iter().copied().filter(|&(t, h)| in_set[t] && in_set[h]).collect();
    Ok(RulingSetOutput {
        colors: members.iter().map(|&v| input.colors[v] % c).collect(),
        members,
        orientation,
        alpha,
        c,
        beta,
        rounds,
    })
}

/// A maximal independent set by a single color sweep, as a ruling set with `α = 0`, `c = 1`, `β = 1`.
pub fn mis_by_sweep(inst: &Instance) -> Result<RulingSetOutput> {
    let sweep = sweep_ruling_set(inst, 1, None)?;
    let k = sweep.output.len();
    Ok(RulingSetOutput {
        members: sweep.output,
        colors: vec![0; k],
        orientation: Vec::new(),
        alpha: 0,
        c: 1,
        beta: 1,
        rounds: sweep.rounds,
    })
}
