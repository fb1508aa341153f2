//! Synchronous rounds of message passing.
//!
//! In round `r ≥ 1` every node sends one message per port computed from its
//! state after round `r - 1`, then every node that has not terminated updates
//! its state from the messages received on its ports. A node terminates in
//! the first round after which [`Program::output`] returns a value; its state
//! is frozen from then on and it keeps sending messages from the frozen state.

use serde::{Deserialize, Serialize};

use relim_problems::{Error, Result};

use crate::instance::Instance;

/// What a node knows before the first round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeContext {
    /// Unique identifier; programs for the port-numbering model ignore it.
    pub id: usize,
    pub degree: usize,
    /// Port numbers in increasing order.
    pub ports: Vec<u32>,
    /// Port numbers of the other endpoints, aligned with `ports`.
    pub remote_ports: Vec<u32>,
    /// Proper or arbdefective input color, if the instance has one.
    pub input_color: Option<u32>,
    /// Number of nodes.
    pub n: usize,
}

/// A deterministic node program.
pub trait Program {
    type State: Clone;
    type Message: Clone;
    type Output: Clone;

    fn init(&self, ctx: &NodeContext) -> Self::State;

    /// The node's output after `round` rounds, or `None` to keep running.
    fn output(&self, ctx: &NodeContext, state: &Self::State, round: usize) -> Option<Self::Output>;

    /// The message sent on the port at position `port_index` in `ctx.ports`.
    fn message(&self, ctx: &NodeContext, state: &Self::State, port_index: usize) -> Self::Message;

    /// New state after receiving `inbox[k]` on the port at position `k`, in round `round`.
    fn update(&self, ctx: &NodeContext, state: Self::State, inbox: Vec<Self::Message>, round: usize) -> Self::State;
}

/// Outputs and the round in which each node terminated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunResult<O> {
    pub outputs: Vec<O>,
    /// Largest termination round.
    pub rounds: usize,
    pub termination: Vec<usize>,
}

pub fn contexts(inst: &Instance) -> Vec<NodeContext> {
    let input = inst
        .coloring()
        .map(<[u32]>::to_vec)
        .or_else(|| inst.arbdefective().map(|a| a.colors.clone()));
    (0..inst.node_count())
        .map(|v| NodeContext {
            id: v,
            degree: inst.degree(v),
            ports: inst.ports(v).iter().map(|h| h.port).collect(),
            remote_ports: inst.ports(v).iter().map(|h| h.neighbor_port).collect(),
            input_color: input.as_ref().map(|c| c[v]),
            n: inst.node_count(),
        })
        .collect()
}

/// Runs `program` until every node has terminated; more than `max_rounds` rounds is a cap error.
pub fn run_algorithm<P: Program>(inst: &Instance, program: &P, max_rounds: usize) -> Result<RunResult<P::Output>> {
    let ctx = contexts(inst);
    let n = inst.node_count();
    // Position of each half-edge in the neighbor's port list.
    let back: Vec<Vec<(usize, usize)>> = (0..n)
        .map(|v| {
            inst.ports(v)
                .iter()
                .map(|h| {
                    let k = inst.ports(h.neighbor).iter().position(|g| g.port == h.neighbor_port).unwrap();
                    (h.neighbor, k)
                })
                .collect()
        })
        .collect();
    let mut states: Vec<P::State> = ctx.iter().map(|c| program.init(c)).collect();
    let mut outputs: Vec<Option<P::Output>> = ctx.iter().zip(&states).map(|(c, s)| program.output(c, s, 0)).collect();
    let mut termination = vec![0usize; n];
    let mut round = 0;
    while outputs.iter().any(Option::is_none) {
        round += 1;
        if round > max_rounds {
            let running = outputs.iter().filter(|o| o.is_none()).count();
            return Err(Error::Cap {
                what: "rounds".into(),
                cap: max_rounds as u64,
                partial: format!("{running} of {n} nodes still running"),
            });
        }
        let outgoing: Vec<Vec<P::Message>> = (0..n)
            .map(|v| (0..ctx[v].degree).map(|k| program.message(&ctx[v], &states[v], k)).collect())
            .collect();
        for v in 0..n {
            if outputs[v].is_some() {
                continue;
            }
            let inbox: Vec<P::Message> = back[v].iter().map(|&(u, k)| outgoing[u][k].clone()).collect();
            let state = states[v].clone();
            states[v] = program.update(&ctx[v], state, inbox, round);
            if let Some(o) = program.output(&ctx[v], &states[v], round) {
                outputs[v] = Some(o);
                termination[v] = round;
            }
        }
    }
    Ok(RunResult {
        outputs: outputs.into_iter().map(Option::unwrap).collect(),
        rounds: termination.iter().copied().max().unwrap_or(0),
        termination,
    })
}

/// Outputs a fixed value without communicating.
#[derive(Clone, Debug)]
pub struct Constant<T>(pub T);

impl<T: Clone> Program for Constant<T> {
    type State = ();
    type Message = ();
    type Output = T;

    fn init(&self, _: &NodeContext) {}

    fn output(&self, _: &NodeContext, _: &(), _: usize) -> Option<T> {
        Some(self.0.clone())
    }

    fn message(&self, _: &NodeContext, _: &(), _: usize) {}

    fn update(&self, _: &NodeContext, _: (), _: Vec<()>, _: usize) {}
}

/// The radius-`r` view of a node: its own data and, per port, the view of the neighbor one level shallower.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct View {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<usize>,
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<u32>,
    /// `(port, remote port, neighbor view)` in port order; empty at depth 0.
    pub neighbors: Vec<(u32, u32, View)>,
}

impl View {
    fn local(ctx: &NodeContext, with_ids: bool) -> View {
        View {
            id: with_ids.then_some(ctx.id),
            degree: ctx.degree,
            color: ctx.input_color,
            neighbors: Vec::new(),
        }
    }
}

/// Collects the radius-`radius` view in `radius` rounds.
#[derive(Clone, Debug)]
pub struct BallCollector {
    pub radius: usize,
    pub with_ids: bool,
}

impl Program for BallCollector {
    type State = View;
    type Message = View;
    type Output = View;

    fn init(&self, ctx: &NodeContext) -> View {
        View::local(ctx, self.with_ids)
    }

    fn output(&self, _: &NodeContext, state: &View, round: usize) -> Option<View> {
        (round >= self.radius).then(|| state.clone())
    }

    fn message(&self, _: &NodeContext, state: &View, _: usize) -> View {
        state.clone()
    }

    fn update(&self, ctx: &NodeContext, _: View, inbox: Vec<View>, _: usize) -> View {
        let mut view = View::local(ctx, self.with_ids);
        view.neighbors = ctx
            .ports
            .iter()
            .zip(&ctx.remote_ports)
            .zip(inbox)
            .map(|((&p, &q), w)| (p, q, w))
            .collect();
        view
    }
}

/// The radius-`radius` view of `v`, computed centrally by unfolding the graph.
pub fn unfold(inst: &Instance, v: usize, radius: usize, with_ids: bool) -> View {
    let ctx = &contexts(inst)[v];
    let mut view = View::local(ctx, with_ids);
    if radius > 0 {
        view.neighbors = inst
            .ports(v)
            .iter()
            .map(|h| (h.port, h.neighbor_port, unfold(inst, h.neighbor, radius - 1, with_ids)))
            .collect();
    }
    view
}

/// Spreads a token from `source`; each node outputs the round in which it first held the token.
#[derive(Clone, Debug)]
pub struct Flood {
    pub source: usize,
}

impl Program for Flood {
    type State = Option<usize>;
    type Message = bool;
    type Output = usize;

    fn init(&self, ctx: &NodeContext) -> Option<usize> {
        (ctx.id == self.source).then_some(0)
    }

    fn output(&self, _: &NodeContext, state: &Option<usize>, _: usize) -> Option<usize> {
        *state
    }

    fn message(&self, _: &NodeContext, state: &Option<usize>, _: usize) -> bool {
        state.is_some()
    }

    fn update(&self, _: &NodeContext, state: Option<usize>, inbox: Vec<bool>, round: usize) -> Option<usize> {
        state.or_else(|| inbox.into_iter().any(|b| b).then_some(round))
    }
}
