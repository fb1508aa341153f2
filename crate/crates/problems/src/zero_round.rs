//! Zero-round solvability in the port-numbering model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::Label;
use crate::limits::Limits;
use crate::problem::Problem;

/// Port-numbering constraints; only the unconstrained variant is analysed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PortConstraint {
    /// Every port assignment is possible.
    #[default]
    Unconstrained,
    /// Explicit node-side and edge-side port tuples.
    Constrained {
        node_ports: Vec<Vec<u32>>,
        edge_ports: Vec<Vec<u32>>,
    },
}

/// Outcome of [`zero_round_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroRoundResult {
    pub solvable: bool,
    /// A self-compatible node configuration when solvable.
    pub witness: Option<Vec<Label>>,
    /// For unsolvable problems: each node configuration with a pair of its labels that is not an allowed edge.
    pub failures: Vec<(Vec<Label>, (Label, Label))>,
}

/// Decides whether all nodes can output one fixed node configuration.
///
/// With unconstrained ports every pair of positions of the configuration can
/// meet on an edge, so a configuration works iff every pair of its labels
/// (including a label with itself) is an allowed edge configuration.
pub fn zero_round_check(p: &Problem, pc: &PortConstraint, limits: &Limits) -> Result<ZeroRoundResult> {
    if let PortConstraint::Constrained { .. } = pc {
        return Err(Error::Unsupported(
            "zero-round check with constrained port numberings".into(),
        ));
    }
    if p.edge_arity() != 2 {
        return Err(Error::Unsupported(format!(
            "zero-round check needs edge arity 2, problem has {}",
            p.edge_arity()
        )));
    }
    let n = p.label_count();
    let mut pair_ok = vec![vec![false; n]; n];
    for a in 0..n {
        for b in a..n {
            let ok = p.edges().allows(&[a as u16, b as u16]);
            pair_ok[a][b] = ok;
            pair_ok[b][a] = ok;
        }
    }
    let mut failures = Vec::new();
    for c in p.nodes().expand(limits)? {
        let mut distinct = c.clone();
        distinct.dedup();
        let bad = distinct
            .iter()
            .flat_map(|&a| distinct.iter().map(move |&b| (a, b)))
            .find(|&(a, b)| !pair_ok[a as usize][b as usize]);
        match bad {
            None => {
                return Ok(ZeroRoundResult {
                    solvable: true,
                    witness: Some(p.concrete_labels(&c)),
                    failures: Vec::new(),
                })
            }
            Some((a, b)) => failures.push((
                p.concrete_labels(&c),
                (p.label(a as usize).clone(), p.label(b as usize).clone()),
            )),
        }
    }
    Ok(ZeroRoundResult {
        solvable: false,
        witness: None,
        failures,
    })
}
