//! Validity checks for labelings, arbdefective colorings and ruling sets.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use relim_family::ArbdefectVector;
use relim_problems::Problem;

use crate::instance::Instance;
use crate::solution::{ArbdefectiveColoring, HalfEdgeLabeling, RulingSetOutput, Verdict};

/// What a solution claims to be.
#[derive(Clone, Debug, PartialEq)]
pub enum VerifyKind {
    Labeling { problem: Problem },
    Arbdefective { defects: ArbdefectVector },
    Ruling { alpha: u32, c: u32, beta: u32 },
}

/// A solution of any kind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Solution {
    Labeling(HalfEdgeLabeling),
    Arbdefective(ArbdefectiveColoring),
    Ruling(RulingSetOutput),
}

/// Dispatches on the kind; a solution of the wrong shape is a violation.
pub fn verify(kind: &VerifyKind, inst: &Instance, solution: &Solution) -> Verdict {
    match (kind, solution) {
        (VerifyKind::Labeling { problem }, Solution::Labeling(l)) => verify_labeling(inst, problem, l),
        (VerifyKind::Arbdefective { defects }, Solution::Arbdefective(a)) => verify_arbdefective(inst, defects, a),
        (VerifyKind::Ruling { alpha, c, beta }, Solution::Ruling(r)) => verify_ruling(inst, *alpha, *c, *beta, r),
        _ => Verdict::from_violations(vec!["the solution does not match the requested kind".into()]),
    }
}

/// Nodes of degree `Δ` (the node arity) must carry a node configuration and
/// every edge an edge configuration; nodes of smaller degree are free.
pub fn verify_labeling(inst: &Instance, problem: &Problem, labeling: &HalfEdgeLabeling) -> Verdict {
    let mut violations = Vec::new();
    if problem.edge_arity() != 2 {
        violations.push(format!("edges have rank 2 but the problem has edge arity {}", problem.edge_arity()));
        return Verdict::from_violations(violations);
    }
    if labeling.labels.len() != inst.node_count() {
        violations.push(format!("{} labeled nodes for {} nodes", labeling.labels.len(), inst.node_count()));
        return Verdict::from_violations(violations);
    }
    let mut index: Vec<Vec<Option<u16>>> = Vec::with_capacity(inst.node_count());
    for (v, labels) in labeling.labels.iter().enumerate() {
        if labels.len() != inst.degree(v) {
            violations.push(format!("node {v} has {} labels for degree {}", labels.len(), inst.degree(v)));
            index.push(vec![None; inst.degree(v)]);
            continue;
        }
        let mut row = Vec::with_capacity(labels.len());
        for (k, l) in labels.iter().enumerate() {
            let i = problem.index_of(l).map(|i| i as u16);
            if i.is_none() {
                violations.push(format!("node {v} port {} carries {l}, which is not a label of the problem", inst.ports(v)[k].port));
            }
            row.push(i);
        }
        index.push(row);
    }
    let delta = problem.node_arity();
    for (v, row) in index.iter().enumerate() {
        if row.len() != delta || row.iter().any(Option::is_none) {
            continue;
        }
        let mut config: Vec<u16> = row.iter().map(|i| i.unwrap()).collect();
        config.sort_unstable();
        if !problem.nodes().allows(&config) {
            let shown: Vec<String> = labeling.labels[v].iter().map(ToString::to_string).collect();
            violations.push(format!("node {v} has configuration {} outside the node constraint", shown.join(" ")));
        }
    }
    for e in inst.edges() {
        let ku = inst.ports(e.u).iter().position(|h| h.port == e.port_u).unwrap();
        let kv = inst.ports(e.v).iter().position(|h| h.port == e.port_v).unwrap();
        let (Some(Some(a)), Some(Some(b))) = (index[e.u].get(ku), index[e.v].get(kv)) else { continue };
        if !problem.edges().allows(&[*a.min(b), *a.max(b)]) {
            violations.push(format!(
                "edge {}-{} has configuration {} {} outside the edge constraint",
                e.u,
                e.v,
                labeling.labels[e.u][ku],
                labeling.labels[e.v][kv]
            ));
        }
    }
    Verdict::from_violations(violations)
}

/// Checks that `oriented` orients every edge exactly once and that every node
/// has at most `bound(color)` out-neighbors of its own color.
pub fn arbdefect_violations(
    inst: &Instance,
    colors: &[u32],
    oriented: &[(usize, usize)],
    bound: impl Fn(u32) -> u32,
) -> Vec<String> {
    let mut violations = Vec::new();
    if colors.len() != inst.node_count() {
        violations.push(format!("{} colors for {} nodes", colors.len(), inst.node_count()));
        return violations;
    }
    let edges: BTreeSet<(usize, usize)> = inst.edges().iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
    let mut seen = BTreeSet::new();
    let mut out_same = vec![0u32; inst.node_count()];
    for &(t, h) in oriented {
        let key = (t.min(h), t.max(h));
        if !edges.contains(&key) {
            violations.push(format!("oriented pair {t}->{h} is not an edge"));
            continue;
        }
        if !seen.insert(key) {
            violations.push(format!("edge {}-{} is oriented twice", key.0, key.1));
            continue;
        }
        if colors[t] == colors[h] {
            out_same[t] += 1;
        }
    }
    for &(u, v) in edges.difference(&seen) {
        violations.push(format!("edge {u}-{v} has no orientation"));
    }
    for (v, &count) in out_same.iter().enumerate() {
        let allowed = bound(colors[v]);
        if count > allowed {
            violations.push(format!(
                "node {v} of color {} has {count} out-neighbors of its color, more than {allowed}",
                colors[v]
            ));
        }
    }
    violations
}

/// A node of color `x` has at most `d_x` out-neighbors of color `x`.
pub fn verify_arbdefective(inst: &Instance, defects: &ArbdefectVector, sol: &ArbdefectiveColoring) -> Verdict {
    let mut violations = Vec::new();
    let palette = defects.colors() as u32;
    for (v, &c) in sol.colors.iter().enumerate() {
        if c >= palette {
            violations.push(format!("node {v} has color {c} outside 0..{palette}"));
        }
    }
    if violations.is_empty() {
        violations = arbdefect_violations(inst, &sol.colors, &sol.oriented_edges, |x| defects.defects()[x as usize]);
    }
    Verdict::from_violations(violations)
}

/// `G[S]` carries an `α`-arbdefective `c`-coloring and every node is within distance `β` of `S`.
pub fn verify_ruling(inst: &Instance, alpha: u32, c: u32, beta: u32, sol: &RulingSetOutput) -> Verdict {
    let mut violations = Vec::new();
    if (sol.alpha, sol.c, sol.beta) != (alpha, c, beta) {
        violations.push(format!(
            "solution declares (α, c, β) = ({}, {}, {}) but ({alpha}, {c}, {beta}) was requested",
            sol.alpha, sol.c, sol.beta
        ));
    }
    if sol.colors.len() != sol.members.len() {
        violations.push(format!("{} colors for {} members", sol.colors.len(), sol.members.len()));
        return Verdict::from_violations(violations);
    }
    let mut color_of = BTreeMap::new();
    for (&v, &col) in sol.members.iter().zip(&sol.colors) {
        if v >= inst.node_count() {
            violations.push(format!("member {v} is not a node"));
            continue;
        }
        if col >= c {
            violations.push(format!("member {v} has color {col} outside 0..{c}"));
        }
        if color_of.insert(v, col).is_some() {
            violations.push(format!("member {v} is listed twice"));
        }
    }
    if !violations.is_empty() {
        return Verdict::from_violations(violations);
    }
    let inside = inst.subgraph(|e| color_of.contains_key(&e.u) && color_of.contains_key(&e.v));
    let colors: Vec<u32> = (0..inst.node_count()).map(|v| color_of.get(&v).copied().unwrap_or(u32::MAX)).collect();
    violations.extend(arbdefect_violations(&inside, &colors, &sol.orientation, |_| alpha));
    let dist = inst.distances(sol.members.iter().copied());
    for (v, &d) in dist.iter().enumerate() {
        if d > beta as usize {
            if d == usize::MAX {
                violations.push(format!("node {v} cannot reach the set"));
            } else {
                violations.push(format!("node {v} is at distance {d} from the set, more than {beta}"));
            }
        }
    }
    Verdict::from_violations(violations)
}
