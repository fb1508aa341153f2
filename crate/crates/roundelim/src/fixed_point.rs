//! Fixed-point detection, saturation and label-bijection search.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use relim_problems::{Concrete, Config, Constraint, Diagram, Error, Label, LabelSet, Limits, Problem, Result, Side};

use crate::rename::RenamingPolicy;
use crate::sequence::{step, RenameSteps, StepTrace};

/// How two problems were found equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equality {
    /// Identical labels and concrete constraints.
    Literal,
    /// Identical after both problems are saturated.
    Saturated,
}

/// Outcome of [`detect_fixed_point`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointReport {
    pub is_fixed_point: bool,
    pub equality: Option<Equality>,
    /// Label map from the step output to the input, when a bijection search was used.
    pub bijection: Option<BTreeMap<Label, Label>>,
    pub trace: StepTrace,
}

/// Runs one step with the two renaming policies and compares the result with `p`.
///
/// Without a bijection-search policy the output must equal `p` either
/// literally or after saturation of both problems. With one, a label
/// bijection under which the two are equal is searched, first literally and
/// then after saturation.
pub fn detect_fixed_point(
    p: &Problem,
    first: &RenamingPolicy,
    second: &RenamingPolicy,
    limits: &Limits,
) -> Result<FixedPointReport> {
    let mut policy = RenameSteps {
        first: first.clone(),
        second: second.clone(),
    };
    let trace = step(p, &mut policy, limits)?;
    let a = trace.output.without_unused_labels();
    let b = p.without_unused_labels();
    let search = first.searches_bijection() || second.searches_bijection();
    let (equality, bijection) = if search {
        if let Some(m) = find_bijection(&a, &b, limits)? {
            (Some(Equality::Literal), Some(m))
        } else if let Some(m) = find_bijection(&saturate(&a, limits)?, &saturate(&b, limits)?, limits)? {
            (Some(Equality::Saturated), Some(m))
        } else {
            (None, None)
        }
    } else if a.same_concrete(&b, limits)? {
        (Some(Equality::Literal), None)
    } else if a.labels() == b.labels() && saturate(&a, limits)?.same_concrete(&saturate(&b, limits)?, limits)? {
        (Some(Equality::Saturated), None)
    } else {
        (None, None)
    };
    Ok(FixedPointReport {
        is_fixed_point: equality.is_some(),
        equality,
        bijection,
        trace,
    })
}

/// Closes a problem under weakening.
///
/// A node configuration whose labels are each weaker, according to the edge
/// diagram, than the matching labels of an allowed node configuration is
/// added, and symmetrically for edge configurations with the node diagram.
/// This is repeated until both diagrams are stable. The result solves in zero
/// rounds from and to the original problem.
pub fn saturate(p: &Problem, limits: &Limits) -> Result<Problem> {
    let mut current = p.clone();
    let mut last: Option<(Diagram, Diagram)> = None;
    loop {
        limits.check(|| "saturation".to_string())?;
        let de = Diagram::compute(&current, Side::Edge, limits)?;
        let nodes = lower(current.nodes(), &de)?;
        current = current.with_constraint(Side::Node, nodes)?;
        let dn = Diagram::compute(&current, Side::Node, limits)?;
        let edges = lower(current.edges(), &dn)?;
        current = current.with_constraint(Side::Edge, edges)?;
        let diagrams = (de, dn);
        if last.as_ref() == Some(&diagrams) {
            return Ok(current);
        }
        last = Some(diagrams);
    }
}

/// Replaces every slot by the set of labels weaker than one of its members.
fn lower(c: &Constraint, d: &Diagram) -> Result<Constraint> {
    let n = d.labels().len();
    let configs = c
        .configs()
        .iter()
        .map(|config| {
            Config::new(
                config
                    .slots()
                    .iter()
                    .map(|slot| (0..n).filter(|&x| d.upset(x).intersects(slot)).collect::<LabelSet>())
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Constraint::new(c.arity(), configs)
}

/// Searches a label bijection `f` from `a` to `b` with `f(a) = b` on concrete constraints.
pub fn find_bijection(a: &Problem, b: &Problem, limits: &Limits) -> Result<Option<BTreeMap<Label, Label>>> {
    if a.label_count() != b.label_count()
        || a.node_arity() != b.node_arity()
        || a.edge_arity() != b.edge_arity()
    {
        return Ok(None);
    }
    let ca = [a.nodes().expand(limits)?, a.edges().expand(limits)?];
    let cb = [b.nodes().expand(limits)?, b.edges().expand(limits)?];
    if ca[0].len() != cb[0].len() || ca[1].len() != cb[1].len() {
        return Ok(None);
    }
    let sa = signatures(a.label_count(), &ca);
    let sb = signatures(b.label_count(), &cb);
    let mut search = Search {
        sa,
        sb,
        ca: &ca,
        cb: &cb,
        image: vec![u16::MAX; a.label_count()],
        used: vec![false; b.label_count()],
        leaves: 0,
        cap: limits.max_bijections,
    };
    if !search.run(0)? {
        return Ok(None);
    }
    Ok(Some(
        search
            .image
            .iter()
            .enumerate()
            .map(|(i, &j)| (a.label(i).clone(), b.label(j as usize).clone()))
            .collect(),
    ))
}

/// Per label: occurrences and containing configurations on each side.
fn signatures(n: usize, sides: &[BTreeSet<Concrete>; 2]) -> Vec<[usize; 4]> {
    let mut sig = vec![[0usize; 4]; n];
    for (s, configs) in sides.iter().enumerate() {
        for c in configs {
            for &l in c {
                sig[l as usize][2 * s] += 1;
            }
            let mut distinct = c.clone();
            distinct.dedup();
            for &l in &distinct {
                sig[l as usize][2 * s + 1] += 1;
            }
        }
    }
    sig
}

struct Search<'a> {
    sa: Vec<[usize; 4]>,
    sb: Vec<[usize; 4]>,
    ca: &'a [BTreeSet<Concrete>; 2],
    cb: &'a [BTreeSet<Concrete>; 2],
    image: Vec<u16>,
    used: Vec<bool>,
    leaves: u64,
    cap: u64,
}

impl Search<'_> {
    fn run(&mut self, i: usize) -> Result<bool> {
        if i == self.image.len() {
            self.leaves += 1;
            if self.leaves > self.cap {
                return Err(Error::Cap {
                    what: "label bijections tried".into(),
                    cap: self.cap,
                    partial: "no bijection found so far".into(),
                });
            }
            return Ok(self.matches());
        }
        for j in 0..self.used.len() {
            if self.used[j] || self.sa[i] != self.sb[j] {
                continue;
            }
            self.used[j] = true;
            self.image[i] = j as u16;
            if self.run(i + 1)? {
                return Ok(true);
            }
            self.used[j] = false;
        }
        Ok(false)
    }

    fn matches(&self) -> bool {
        (0..2).all(|s| {
            self.ca[s].iter().all(|c| {
                let mut m: Concrete = c.iter().map(|&l| self.image[l as usize]).collect();
                m.sort_unstable();
                self.cb[s].contains(&m)
            })
        })
    }
}
