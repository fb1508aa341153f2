//! User-directed relaxations of a problem.

use std::fmt;

use serde::{Deserialize, Serialize};

use relim_problems::parse::parse_config;
use relim_problems::{
    format_config, Config, Constraint, Diagram, Error, Label, LabelSet, Limits, Problem, Result, Side,
};

/// One relaxation step. Every action is checked to produce a relaxation of its input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "kebab-case")]
pub enum Relaxation {
    /// Replaces every occurrence of `from` by `into`.
    Merge { from: Label, into: Label },
    /// Adds a configuration written in the problem syntax.
    AddConfig { side: Side, config: String },
    /// Removes a configuration; rejected unless the remaining constraint allows the same configurations.
    RemoveConfig { side: Side, config: String },
    /// Adds `target` to every disjunction on `side` that contains `label`;
    /// `target` must be at least as strong as `label` in the diagram of the other side.
    Widen { side: Side, label: Label, target: Label },
}

impl fmt::Display for Relaxation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relaxation::Merge { from, into } => write!(f, "merge {from} into {into}"),
            Relaxation::AddConfig { side, config } => write!(f, "add {} configuration {config}", side_name(*side)),
            Relaxation::RemoveConfig { side, config } => {
                write!(f, "remove {} configuration {config}", side_name(*side))
            }
            Relaxation::Widen { side, label, target } => {
                write!(f, "widen {label} to include {target} on the {} side", side_name(*side))
            }
        }
    }
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Node => "node",
        Side::Edge => "edge",
    }
}

/// Applies the relaxations in order.
pub fn apply_relaxations(p: &Problem, actions: &[Relaxation], limits: &Limits) -> Result<Problem> {
    actions.iter().try_fold(p.clone(), |acc, a| apply_relaxation(&acc, a, limits))
}

/// Applies one relaxation and verifies that the result is a relaxation of `p`.
pub fn apply_relaxation(p: &Problem, action: &Relaxation, limits: &Limits) -> Result<Problem> {
    let (out, map): (Problem, Option<(Label, Label)>) = match action {
        Relaxation::Merge { from, into } => {
            p.require_index(from)?;
            p.require_index(into)?;
            if from == into {
                return Err(Error::Invalid(format!("cannot merge `{from}` into itself")));
            }
            let out = p.map_labels(|l| if l == from { into.clone() } else { l.clone() })?;
            (out, Some((from.clone(), into.clone())))
        }
        Relaxation::AddConfig { side, config } => {
            let c = config_of(p, *side, config)?;
            let mut configs = p.constraint(*side).configs().to_vec();
            configs.push(c);
            let constraint = Constraint::new(p.constraint(*side).arity(), configs)?;
            (p.with_constraint(*side, constraint)?, None)
        }
        Relaxation::RemoveConfig { side, config } => {
            let c = config_of(p, *side, config)?;
            let before = p.constraint(*side).configs();
            let configs: Vec<Config> = before.iter().filter(|d| **d != c).cloned().collect();
            if configs.len() == before.len() {
                return Err(Error::Invalid(format!(
                    "the {} constraint has no configuration `{config}`",
                    side_name(*side)
                )));
            }
            let constraint = Constraint::new(p.constraint(*side).arity(), configs)?;
            (p.with_constraint(*side, constraint)?, None)
        }
        Relaxation::Widen { side, label, target } => {
            let y = p.require_index(label)?;
            let x = p.require_index(target)?;
            let d = Diagram::compute(p, side.other(), limits)?;
            if !d.at_least(x, y) {
                return Err(Error::Invalid(format!(
                    "`{target}` is not at least as strong as `{label}` in the {} diagram",
                    side_name(side.other())
                )));
            }
            let configs: Vec<Config> = p
                .constraint(*side)
                .configs()
                .iter()
                .map(|c| {
                    Config::new(
                        c.slots()
                            .iter()
                            .map(|s| {
                                let mut s = *s;
                                if s.contains(y) {
                                    s.insert(x);
                                }
                                s
                            })
                            .collect(),
                    )
                })
                .collect::<Result<_>>()?;
            let constraint = Constraint::new(p.constraint(*side).arity(), configs)?;
            (p.with_constraint(*side, constraint)?, None)
        }
    };
    let image = |l: &Label| match &map {
        Some((from, into)) if l == from => into.clone(),
        _ => l.clone(),
    };
    if let Some((side, config)) = relaxation_counterexample(p, &out, image, limits)? {
        return Err(Error::Invalid(format!(
            "`{action}` would strengthen the problem: {} configuration {} is no longer allowed",
            side_name(side),
            config.iter().map(Label::to_string).collect::<Vec<_>>().join(" ")
        )));
    }
    Ok(out)
}

/// A concrete configuration of `a` whose image under `map` is not allowed in `b`, if any.
pub fn relaxation_counterexample(
    a: &Problem,
    b: &Problem,
    map: impl Fn(&Label) -> Label,
    limits: &Limits,
) -> Result<Option<(Side, Vec<Label>)>> {
    let image: Vec<Option<u16>> = a.labels().iter().map(|l| b.index_of(&map(l)).map(|i| i as u16)).collect();
    for side in [Side::Node, Side::Edge] {
        let target = b.constraint(side);
        for c in a.constraint(side).expand(limits)? {
            let mapped: Option<Vec<u16>> = c.iter().map(|&l| image[l as usize]).collect();
            let ok = mapped.is_some_and(|mut m| {
                m.sort_unstable();
                target.allows(&m)
            });
            if !ok {
                return Ok(Some((side, a.concrete_labels(&c))));
            }
        }
    }
    Ok(None)
}

fn config_of(p: &Problem, side: Side, text: &str) -> Result<Config> {
    let labels = parse_config(text, 1, 1)?;
    let arity = p.constraint(side).arity();
    if labels.len() != arity {
        return Err(Error::Arity {
            line: 1,
            expected: arity,
            found: labels.len(),
        });
    }
    let slots = labels
        .iter()
        .map(|slot| p.set_of(slot.iter()))
        .collect::<Result<Vec<LabelSet>>>()?;
    Config::new(slots)
}

/// Canonical text of a configuration given in the problem syntax.
pub fn canonical_config(p: &Problem, side: Side, text: &str) -> Result<String> {
    Ok(format_config(p, &config_of(p, side, text)?))
}
