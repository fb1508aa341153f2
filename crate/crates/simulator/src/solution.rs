//! Output types shared by algorithms, verifiers and reductions.

use serde::{Deserialize, Serialize};

use relim_problems::Label;

/// A label on every half-edge: `labels[v][k]` sits on the `k`-th port of `v` in port order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfEdgeLabeling {
    pub labels: Vec<Vec<Label>>,
}

/// A node coloring with an orientation of every edge as `(tail, head)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArbdefectiveColoring {
    pub colors: Vec<u32>,
    #[serde(rename = "orientedEdges")]
    pub oriented_edges: Vec<(usize, usize)>,
}

/// A ruling set with a coloring of its members and an orientation of the edges among them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RulingSetOutput {
    /// Members in increasing order.
    pub members: Vec<usize>,
    /// Color of `members[k]`, in `0..c`.
    pub colors: Vec<u32>,
    /// Every edge between two members, as `(tail, head)`.
    pub orientation: Vec<(usize, usize)>,
    pub alpha: u32,
    pub c: u32,
    pub beta: u32,
    #[serde(default)]
    pub rounds: usize,
}

/// Result of a verifier: `ok` exactly when `violations` is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub ok: bool,
    pub violations: Vec<String>,
}

impl Verdict {
    pub fn from_violations(violations: Vec<String>) -> Verdict {
        Verdict { ok: violations.is_empty(), violations }
    }
}
