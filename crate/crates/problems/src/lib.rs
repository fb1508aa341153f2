//! Locally checkable problems in the black-white formalism.
//!
//! A [`Problem`] is a label set with a node constraint of arity `Δ` and an
//! edge constraint of arity `δ`, each a set of condensed configurations. This
//! crate parses and prints problems, expands condensed configurations,
//! computes strength diagrams and right-closures, decides relaxation between
//! configurations, and checks zero-round solvability.

pub mod constraint;
pub mod diagram;
pub mod error;
pub mod label;
pub mod labelset;
pub mod limits;
pub mod parse;
pub mod problem;
pub mod zero_round;

use std::collections::BTreeSet;

pub use constraint::{perfect_matching, Concrete, Config, Constraint};
pub use diagram::{Diagram, DiagramView};
pub use error::{Error, Result};
pub use label::{ColorId, Label};
pub use labelset::{LabelSet, MAX_LABELS};
pub use limits::Limits;
pub use parse::{format_config, format_label_config, format_problem, format_problem_inline, parse_problem};
pub use problem::{LabelConfig, Problem, Side};
pub use zero_round::{zero_round_check, PortConstraint, ZeroRoundResult};

/// Concrete configurations of a set of condensed configurations.
pub fn expand_configurations(p: &Problem, side: Side, limits: &Limits) -> Result<Vec<Vec<Label>>> {
    Ok(p
        .constraint(side)
        .expand(limits)?
        .into_iter()
        .map(|c| p.concrete_labels(&c))
        .collect())
}

/// Right-closure of `labels` in the diagram: the labels plus all stronger ones.
pub fn gen_closure(p: &Problem, labels: &BTreeSet<Label>, d: &Diagram) -> Result<BTreeSet<Label>> {
    let set = p.set_of(labels)?;
    Ok(p.labels_of(&d.closure(&set)))
}

/// Label-level relaxation test between two condensed configurations.
///
/// Returns the witness permutation (`slot i of a` goes to `slot w[i] of b`).
pub fn config_relaxation(a: &LabelConfig, b: &LabelConfig) -> Result<Option<Vec<usize>>> {
    if a.len() != b.len() {
        return Err(Error::Invalid(format!(
            "arity mismatch: {} versus {} slots",
            a.len(),
            b.len()
        )));
    }
    Ok(perfect_matching(a.len(), |i, j| a[i].is_subset(&b[j])))
}

/// Label-level relaxation between constraints: each configuration of `a`
/// relaxes into some configuration of `b`. Returns, per configuration of `a`,
/// the index of a target in `b`.
pub fn constraint_relaxation(a: &[LabelConfig], b: &[LabelConfig]) -> Result<Option<Vec<usize>>> {
    let mut targets = Vec::with_capacity(a.len());
    for c in a {
        let mut found = None;
        for (k, d) in b.iter().enumerate() {
            if config_relaxation(c, d)?.is_some() {
                found = Some(k);
                break;
            }
        }
        match found {
            Some(k) => targets.push(k),
            None => return Ok(None),
        }
    }
    Ok(Some(targets))
}

/// Problem-level relaxation under a label map: every concrete configuration
/// of `a`, with labels sent through `map`, is allowed in `b`.
pub fn is_problem_relaxation(
    a: &Problem,
    b: &Problem,
    map: impl Fn(&Label) -> Label,
    limits: &Limits,
) -> Result<bool> {
    if a.node_arity() != b.node_arity() || a.edge_arity() != b.edge_arity() {
        return Ok(false);
    }
    let image: Vec<Option<u16>> = a.labels().iter().map(|l| b.index_of(&map(l)).map(|i| i as u16)).collect();
    for side in [Side::Node, Side::Edge] {
        let target = b.constraint(side);
        for c in a.constraint(side).expand(limits)? {
            let mut mapped = Vec::with_capacity(c.len());
            for &l in &c {
                match image[l as usize] {
                    Some(i) => mapped.push(i),
                    None => return Ok(false),
                }
            }
            mapped.sort_unstable();
            if !target.allows(&mapped) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
