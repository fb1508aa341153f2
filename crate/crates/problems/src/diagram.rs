//! Label strength with respect to one constraint, and the resulting diagram.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::constraint::{Concrete, Config, Constraint};
use crate::error::{Error, Result};
use crate::label::Label;
use crate::labelset::LabelSet;
use crate::limits::Limits;
use crate::problem::{Problem, Side};

/// Strength order of the labels of a problem according to one of its constraints.
///
/// `X` is at least as strong as `Y` if replacing any number of occurrences of
/// `Y` by `X` in an allowed configuration always yields an allowed
/// configuration. Labels of equal strength are grouped into classes and the
/// diagram edges form the transitive reduction of the order on classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub side: Side,
    labels: Vec<Label>,
    /// `upset[y]`: every label at least as strong as `y`, including `y`.
    upset: Vec<LabelSet>,
    /// True when strength was decided on the expanded constraint, false for the condensed fallback.
    pub exact: bool,
}

/// Serializable summary of a [`Diagram`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramView {
    pub side: Side,
    pub exact: bool,
    /// Equal-strength classes with more than one label.
    pub equal: Vec<Vec<Label>>,
    /// Transitive reduction, `(weaker, stronger)`, between class representatives.
    pub edges: Vec<(Label, Label)>,
}

impl Diagram {
    /// Computes the diagram of `p` according to the constraint on `side`.
    pub fn compute(p: &Problem, side: Side, limits: &Limits) -> Result<Diagram> {
        let constraint = p.constraint(side);
        let n = p.label_count();
        let (upset, exact) = if constraint.product_size() <= limits.max_expansion as u128 {
            match constraint.expand(limits) {
                Ok(concrete) => (exact_upsets(n, &concrete, limits)?, true),
                Err(Error::Cap { .. }) => (condensed_upsets(n, constraint, limits)?, false),
                Err(e) => return Err(e),
            }
        } else {
            (condensed_upsets(n, constraint, limits)?, false)
        };
        Ok(Diagram {
            side,
            labels: p.labels().to_vec(),
            upset,
            exact,
        })
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// Whether label `x` is at least as strong as label `y` (indices).
    pub fn at_least(&self, x: usize, y: usize) -> bool {
        self.upset[y].contains(x)
    }

    /// Indices of all labels at least as strong as `y`.
    pub fn upset(&self, y: usize) -> LabelSet {
        self.upset[y]
    }

    /// Right-closure of an index set: the set plus everything stronger than a member.
    pub fn closure(&self, set: &LabelSet) -> LabelSet {
        set.iter().fold(*set, |acc, y| acc.union(&self.upset[y]))
    }

    /// Equal-strength classes in label order, each sorted.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let n = self.labels.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for a in 0..n {
            if seen[a] {
                continue;
            }
            let class: Vec<usize> = (a..n).filter(|&b| self.at_least(a, b) && self.at_least(b, a)).collect();
            for &b in &class {
                seen[b] = true;
            }
            out.push(class);
        }
        out
    }

    /// Transitive reduction between classes as `(weaker, stronger)` representative pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let reps: Vec<usize> = self.classes().iter().map(|c| c[0]).collect();
        let strictly = |a: usize, b: usize| self.at_least(b, a) && !self.at_least(a, b);
        let mut out = Vec::new();
        for &y in &reps {
            for &x in &reps {
                if strictly(y, x) && !reps.iter().any(|&z| strictly(y, z) && strictly(z, x)) {
                    out.push((y, x));
                }
            }
        }
        out
    }

    pub fn view(&self) -> DiagramView {
        DiagramView {
            side: self.side,
            exact: self.exact,
            equal: self
                .classes()
                .into_iter()
                .filter(|c| c.len() > 1)
                .map(|c| c.into_iter().map(|i| self.labels[i].clone()).collect())
                .collect(),
            edges: self
                .edges()
                .into_iter()
                .map(|(a, b)| (self.labels[a].clone(), self.labels[b].clone()))
                .collect(),
        }
    }
}

/// Strength decided on the full concrete constraint.
fn exact_upsets(n: usize, concrete: &BTreeSet<Concrete>, limits: &Limits) -> Result<Vec<LabelSet>> {
    let allowed: HashSet<&Concrete> = concrete.iter().collect();
    // stronger[y] starts as "everything" and loses x once a replacement fails.
    let mut upset: Vec<LabelSet> = vec![LabelSet::full(n); n];
    let mut buf: Concrete = Vec::new();
    for (k, c) in concrete.iter().enumerate() {
        if k % 4096 == 0 {
            limits.check(|| format!("diagram: {k} of {} configurations checked", concrete.len()))?;
        }
        let mut distinct: Vec<u16> = c.clone();
        distinct.dedup();
        for &y in &distinct {
            let count = c.iter().filter(|&&l| l == y).count();
            let candidates: Vec<usize> = upset[y as usize].iter().filter(|&x| x != y as usize).collect();
            for x in candidates {
                for r in 1..=count {
                    buf.clear();
                    let mut replaced = 0;
                    for &l in c {
                        if l == y && replaced < r {
                            buf.push(x as u16);
                            replaced += 1;
                        } else {
                            buf.push(l);
                        }
                    }
                    buf.sort_unstable();
                    if !allowed.contains(&buf) {
                        upset[y as usize].remove(x);
                        break;
                    }
                }
            }
        }
    }
    Ok(upset)
}

/// Sound strength test on condensed configurations: `x >= y` is claimed only
/// if, for every configuration and every nonempty set of slots that may hold
/// `y`, forcing those slots to `x` yields a configuration that relaxes into
/// the constraint.
fn condensed_upsets(n: usize, constraint: &Constraint, limits: &Limits) -> Result<Vec<LabelSet>> {
    let mut upset = vec![LabelSet::EMPTY; n];
    for y in 0..n {
        limits.check(|| format!("diagram fallback: label {y} of {n}"))?;
        upset[y].insert(y);
        for x in 0..n {
            if x != y && replacement_is_safe(constraint, x, y) {
                upset[y].insert(x);
            }
        }
    }
    Ok(upset)
}

fn replacement_is_safe(constraint: &Constraint, x: usize, y: usize) -> bool {
    constraint.configs().iter().all(|c| {
        let holders: Vec<usize> = (0..c.arity()).filter(|&i| c.slots()[i].contains(y)).collect();
        let k = holders.len();
        (1u64..(1u64 << k)).all(|mask| {
            let mut slots = c.slots().to_vec();
            for (bit, &i) in holders.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    slots[i] = LabelSet::singleton(x);
                }
            }
            let forced = Config::new(slots).expect("slots stay nonempty");
            constraint.configs().iter().any(|d| forced.relaxes_to(d))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_problem;

    #[test]
    fn mis_edge_diagram() {
        let p = parse_problem("nodes: M^3 | P U^2 ; edges: M [U P] | U U").unwrap();
        let d = Diagram::compute(&p, Side::Edge, &Limits::default()).unwrap();
        let view = d.view();
        assert_eq!(view.edges, vec![(Label::plain("P"), Label::plain("U"))]);
        assert!(view.equal.is_empty());
        assert!(d.exact);
    }

    #[test]
    fn singleton_has_no_edges() {
        let p = parse_problem("nodes: A^2 ; edges: A A").unwrap();
        let d = Diagram::compute(&p, Side::Edge, &Limits::default()).unwrap();
        assert!(d.edges().is_empty());
    }

    #[test]
    fn empty_constraint_makes_all_labels_equal() {
        let p = parse_problem("delta 2 2\nnodes:\nA B\nedges:\n").unwrap();
        let d = Diagram::compute(&p, Side::Edge, &Limits::default()).unwrap();
        assert_eq!(d.classes(), vec![vec![0, 1]]);
        assert_eq!(d.view().equal.len(), 1);
    }

    #[test]
    fn fallback_agrees_on_mis() {
        let p = parse_problem("nodes: M^3 | P U^2 ; edges: M [U P] | U U").unwrap();
        let limits = Limits {
            max_expansion: 1,
            ..Limits::default()
        };
        let d = Diagram::compute(&p, Side::Edge, &limits).unwrap();
        assert!(!d.exact);
        assert_eq!(d.view().edges, vec![(Label::plain("P"), Label::plain("U"))]);
    }

    #[test]
    fn closure_is_right_closed() {
        let p = parse_problem("nodes: M^3 | P U^2 ; edges: M [U P] | U U").unwrap();
        let d = Diagram::compute(&p, Side::Edge, &Limits::default()).unwrap();
        let pi = p.index_of(&Label::plain("P")).unwrap();
        let closed = d.closure(&LabelSet::singleton(pi));
        assert_eq!(p.labels_of(&closed), [Label::plain("P"), Label::plain("U")].into_iter().collect());
        assert_eq!(d.closure(&LabelSet::EMPTY), LabelSet::EMPTY);
    }
}
