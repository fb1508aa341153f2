//! The operators `re` and `rere`.

use serde::Serialize;

use relim_problems::{Config, Constraint, Error, Label, LabelSet, Limits, Problem, Result, Side, MAX_LABELS};

use crate::universal::{maximal_tuples, ClosureStats};

/// Result of one operator application.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OperatorOutput {
    pub problem: Problem,
    pub stats: OperatorStats,
}

/// Sizes observed while applying an operator.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OperatorStats {
    /// Side on which the universal quantifier ran.
    pub universal_side: Option<Side>,
    pub universal_configs: usize,
    pub existential_configs: usize,
    pub labels: usize,
    pub closure: ClosureStats,
    pub warnings: Vec<String>,
}

/// `re`: universal quantifier on the edge constraint, existential on the node constraint.
pub fn apply_re(p: &Problem, limits: &Limits) -> Result<Problem> {
    Ok(apply_operator(p, Side::Edge, limits)?.problem)
}

/// `rere`: universal quantifier on the node constraint, existential on the edge constraint.
pub fn apply_rere(p: &Problem, limits: &Limits) -> Result<Problem> {
    Ok(apply_operator(p, Side::Node, limits)?.problem)
}

/// Applies the operator whose universal quantifier runs on `universal`.
///
/// The new labels are the label sets occurring in maximal tuples of the
/// universal side, each written as a set-label of the old labels. The
/// universal side of the result lists the maximal tuples; on the other side
/// each old disjunction `D` becomes the disjunction of all new labels that
/// meet `D`. Arities are preserved.
pub fn apply_operator(p: &Problem, universal: Side, limits: &Limits) -> Result<OperatorOutput> {
    let constraint = p.constraint(universal);
    let (cap, name) = match universal {
        Side::Edge => (limits.max_re_arity, "re"),
        Side::Node => (limits.max_rere_arity, "rere"),
    };
    if constraint.arity() > cap {
        return Err(Error::Cap {
            what: format!("{name} arity"),
            cap: cap as u64,
            partial: format!("the universal side has arity {}", constraint.arity()),
        });
    }
    let (tuples, closure) = maximal_tuples(constraint, limits)?;
    let mut sets: Vec<LabelSet> = tuples.iter().flat_map(|t| t.slots().iter().copied()).collect();
    sets.sort();
    sets.dedup();
    if sets.len() > MAX_LABELS {
        return Err(Error::Cap {
            what: format!("{name} label count"),
            cap: MAX_LABELS as u64,
            partial: format!("{} maximal tuples use {} distinct label sets", tuples.len(), sets.len()),
        });
    }
    let index_of = |s: &LabelSet| sets.binary_search(s).expect("slot set is registered");
    let universal_configs: Vec<Config> = tuples
        .iter()
        .map(|t| Config::new(t.slots().iter().map(|s| LabelSet::singleton(index_of(s))).collect()))
        .collect::<Result<_>>()?;
    let mut existential_configs = Vec::new();
    for c in p.constraint(universal.other()).configs() {
        limits.check(|| format!("{name}: existential side, {} configurations emitted", existential_configs.len()))?;
        let slots: Vec<LabelSet> = c
            .slots()
            .iter()
            .map(|d| (0..sets.len()).filter(|&k| sets[k].intersects(d)).collect())
            .collect();
        if slots.iter().all(|s: &LabelSet| !s.is_empty()) {
            existential_configs.push(Config::new(slots)?);
        }
    }
    let labels: Vec<Label> = sets.iter().map(|s| Label::set(p.labels_of(s))).collect();
    let universal_c = Constraint::new(constraint.arity(), universal_configs)?;
    let existential_c = Constraint::new(p.constraint(universal.other()).arity(), existential_configs)?;
    let mut stats = OperatorStats {
        universal_side: Some(universal),
        universal_configs: universal_c.len(),
        existential_configs: existential_c.len(),
        labels: labels.len(),
        closure,
        warnings: Vec::new(),
    };
    if universal_c.is_empty() {
        stats.warnings.push(format!("{name}: the {universal:?} constraint became empty"));
    }
    if existential_c.is_empty() {
        stats
            .warnings
            .push(format!("{name}: the {:?} constraint became empty", universal.other()));
    }
    let problem = match universal {
        Side::Edge => Problem::from_parts(labels, existential_c, universal_c)?,
        Side::Node => Problem::from_parts(labels, universal_c, existential_c)?,
    };
    Ok(OperatorOutput { problem, stats })
}
