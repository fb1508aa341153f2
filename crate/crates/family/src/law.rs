//! The one-step law of the family, checked against the engine.
//!
//! For `(Δ, z)` within the step hypothesis the check runs the engine on
//! `Π_Δ(z)` and compares each stage with its closed form:
//!
//! 1. `re(Π_Δ(z))` equals the characterized problem (labels, edges, nodes).
//! 2. Every node configuration of `rere(re(Π_Δ(z)))` relaxes, slot by slot
//!    under inclusion, into a configuration of `N*`.
//! 3. `E*` computed from its definition equals its closed-form list.
//! 4. The projection of `N*` and `E*` lands inside `Π_Δ(prefix(z))`, so
//!    `Π_Δ(prefix(z))` is a relaxation of `rere(re(Π_Δ(z)))`. This stage
//!    needs `|prefix(z)| ≤ Δ`, since otherwise the target does not exist.
//! 5. Label counts of `Π_Δ(z)`, `re(Π_Δ(z))` and `Π_Δ(prefix(z))` stay within `2^Δ(1 + len(z))`.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::Serialize;

use relim_problems::{perfect_matching, Label, Limits, Problem, Result};
use relim_roundelim::{apply_re, apply_rere};

use crate::build::Family;
use crate::intermediate::{require_hypothesis, StarOracle};
use crate::project::{project_problem, violations, Projection};
use crate::vector::FamilyVector;

/// Label counts along one step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabelCounts {
    pub input: usize,
    pub re: usize,
    pub rere: usize,
    pub star: usize,
    /// Labels of `Π_Δ(prefix(z))`, when it exists.
    pub output: Option<usize>,
    pub bound: u128,
}

/// Outcome of [`check_one_step`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OneStepReport {
    pub delta: usize,
    pub z: Vec<u64>,
    pub prefix: Vec<u64>,
    /// Engine `re` equals the closed form: labels, edge and node constraints.
    pub re_labels_match: bool,
    pub re_edges_match: bool,
    pub re_nodes_match: bool,
    /// Node configurations of the engine's `rere` output.
    pub rere_node_configs: usize,
    /// `rere` node configurations that do not relax into `N*`.
    pub star_relaxation_failures: Vec<String>,
    /// Pairs of `Σ*` on which the definition of `E*` and its closed form disagree.
    pub estar_mismatches: Vec<String>,
    /// `Π_Δ(prefix(z))` exists, that is `|prefix(z)| ≤ Δ`; the projection
    /// stage is skipped otherwise.
    pub target_defined: bool,
    /// Projected configurations that `Π_Δ(prefix(z))` does not allow.
    pub projection_violations: Vec<String>,
    /// Distinct projected node configurations and all node configurations of the target.
    pub projected_node_configs: usize,
    pub target_node_configs: usize,
    pub label_counts: LabelCounts,
    pub elapsed_ms: u64,
}

impl OneStepReport {
    pub fn labels_within_bound(&self) -> bool {
        let c = &self.label_counts;
        [c.input, c.re].iter().chain(&c.output).all(|&n| n as u128 <= c.bound)
    }

    pub fn passed(&self) -> bool {
        self.re_labels_match
            && self.re_edges_match
            && self.re_nodes_match
            && self.star_relaxation_failures.is_empty()
            && self.estar_mismatches.is_empty()
            && self.projection_violations.is_empty()
            && self.labels_within_bound()
    }
}

/// Runs the engine for one step from `Π_Δ(z)` and checks every stage.
pub fn check_one_step(delta: usize, z: &FamilyVector, limits: &Limits) -> Result<OneStepReport> {
    let start = Instant::now();
    require_hypothesis(delta, z)?;
    let family = Family::new(delta, z.clone())?;
    let input = family.problem()?;
    let star = StarOracle::new(family.clone())?;
    let oracle_re = star.re().problem()?;

    let re = apply_re(&input, limits)?;
    let re_labels_match = re.labels() == oracle_re.labels();
    let re_edges_match = re_labels_match && re.edges().same_concrete(oracle_re.edges(), limits)?;
    let re_nodes_match = re_labels_match && re.nodes().same_concrete(oracle_re.nodes(), limits)?;

    let rere = apply_rere(&re, limits)?;
    let star_relaxation_failures = star_relaxation_failures(&star, &rere, limits)?;

    let n = star.forms().len();
    let mut estar_mismatches = Vec::new();
    for a in 0..n {
        for b in a..n {
            if star.edge_allowed(a, b) != star.edge_allowed_closed_form(a, b) {
                estar_mismatches.push(format!("{} {}", star.forms()[a], star.forms()[b]));
            }
        }
    }

    let prefix = z.prefix()?;
    let target_defined = prefix.size() <= delta as u64;
    let (mut projection_violations, mut projected_node_configs, mut target_node_configs, mut output) =
        (Vec::new(), 0, 0, None);
    if target_defined {
        let projection = Projection::new(family.clone())?;
        let target = projection.target().problem()?;
        let projected = project_problem(&star, &projection)?;
        projection_violations = violations(&target, &projected)?;
        let distinct: BTreeSet<Vec<u16>> = projected
            .nodes
            .iter()
            .map(|c| target.concrete_of(c))
            .collect::<Result<_>>()?;
        projected_node_configs = distinct.len();
        target_node_configs = target.nodes().len();
        output = Some(target.label_count());
    }

    Ok(OneStepReport {
        delta,
        z: z.entries().to_vec(),
        prefix: prefix.entries().to_vec(),
        re_labels_match,
        re_edges_match,
        re_nodes_match,
        rere_node_configs: rere.nodes().len(),
        star_relaxation_failures,
        estar_mismatches,
        target_defined,
        projection_violations,
        projected_node_configs,
        target_node_configs,
        label_counts: LabelCounts {
            input: input.label_count(),
            re: re.label_count(),
            rere: rere.label_count(),
            star: n,
            output,
            bound: family.label_bound(),
        },
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Node configurations of `rere` (over set-labels of `re(Π_Δ(z))`) that do not
/// relax into any configuration of `N*`.
pub fn star_relaxation_failures(star: &StarOracle, rere: &Problem, limits: &Limits) -> Result<Vec<String>> {
    let re = star.re();
    // Each rere label as the set of Σ_re indices it contains; `None` if a member is not in Σ_re.
    let mut members: BTreeMap<usize, Option<BTreeSet<usize>>> = BTreeMap::new();
    for (k, l) in rere.labels().iter().enumerate() {
        let set = l
            .members()
            .and_then(|ms| ms.iter().map(|m| re.index_of_label(m).ok()).collect::<Option<BTreeSet<usize>>>());
        members.insert(k, set);
    }
    let targets: Vec<Vec<&BTreeSet<usize>>> = star
        .node_configs()
        .iter()
        .map(|c| c.iter().map(|&k| star.set(k)).collect())
        .collect();
    let mut failures = Vec::new();
    for c in rere.nodes().expand(limits)? {
        let slots: Option<Vec<&BTreeSet<usize>>> = c.iter().map(|&l| members[&(l as usize)].as_ref()).collect();
        let ok = slots.is_some_and(|slots| {
            targets
                .iter()
                .any(|t| perfect_matching(slots.len(), |i, j| slots[i].is_subset(t[j])).is_some())
        });
        if !ok {
            failures.push(rere.concrete_labels(&c).iter().map(Label::to_string).collect::<Vec<_>>().join(" "));
        }
    }
    Ok(failures)
}
