//! The problem triple (labels, node constraint, edge constraint).

use std::collections::{BTreeMap, BTreeSet};

use crate::constraint::{Concrete, Config, Constraint};
use crate::error::{Error, Result};
use crate::label::Label;
use crate::labelset::{LabelSet, MAX_LABELS};
use crate::limits::Limits;

/// Which constraint of a problem an operation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Node,
    Edge,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Node => Side::Edge,
            Side::Edge => Side::Node,
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "node" | "nodes" => Ok(Side::Node),
            "edge" | "edges" => Ok(Side::Edge),
            _ => Err(Error::Invalid(format!("unknown side `{s}` (expected node or edge)"))),
        }
    }
}

/// A condensed configuration written with labels instead of indices.
pub type LabelConfig = Vec<BTreeSet<Label>>;

/// A locally checkable problem in the black-white formalism.
///
/// Labels are kept sorted; constraints refer to them by index and are always
/// in canonical form, so structural equality is canonical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Problem {
    labels: Vec<Label>,
    nodes: Constraint,
    edges: Constraint,
}

impl Problem {
    /// Builds a problem from label-level configurations.
    ///
    /// The label set is `extra_labels` together with every label used by a
    /// configuration.
    pub fn from_label_configs(
        node_arity: usize,
        edge_arity: usize,
        nodes: &[LabelConfig],
        edges: &[LabelConfig],
        extra_labels: impl IntoIterator<Item = Label>,
    ) -> Result<Problem> {
        if node_arity < 1 || edge_arity < 1 {
            return Err(Error::invalid("arities must be positive"));
        }
        let mut all: BTreeSet<Label> = extra_labels.into_iter().collect();
        for config in nodes.iter().chain(edges) {
            for slot in config {
                if slot.is_empty() {
                    return Err(Error::invalid("a disjunction must contain at least one label"));
                }
                all.extend(slot.iter().cloned());
            }
        }
        if all.len() > MAX_LABELS {
            return Err(Error::Cap {
                what: "labels per problem".into(),
                cap: MAX_LABELS as u64,
                partial: format!("{} labels requested", all.len()),
            });
        }
        let labels: Vec<Label> = all.into_iter().collect();
        let index: BTreeMap<&Label, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let convert = |configs: &[LabelConfig], arity: usize| -> Result<Constraint> {
            let mut out = Vec::with_capacity(configs.len());
            for c in configs {
                if c.len() != arity {
                    return Err(Error::Arity {
                        line: 0,
                        expected: arity,
                        found: c.len(),
                    });
                }
                out.push(Config::new(c.iter().map(|slot| slot.iter().map(|l| index[l]).collect()).collect())?);
            }
            Constraint::new(arity, out)
        };
        let nodes = convert(nodes, node_arity)?;
        let edges = convert(edges, edge_arity)?;
        Ok(Problem { labels, nodes, edges })
    }

    /// Builds a problem from index-level constraints over `labels`.
    ///
    /// Labels are re-sorted (with indices remapped) and unused labels are kept.
    pub fn from_parts(labels: Vec<Label>, nodes: Constraint, edges: Constraint) -> Result<Problem> {
        if labels.len() > MAX_LABELS {
            return Err(Error::Cap {
                what: "labels per problem".into(),
                cap: MAX_LABELS as u64,
                partial: format!("{} labels requested", labels.len()),
            });
        }
        let n = labels.len();
        if !nodes.support().is_subset(&LabelSet::full(n)) || !edges.support().is_subset(&LabelSet::full(n)) {
            return Err(Error::invalid("constraint refers to a label index outside the label set"));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        for w in order.windows(2) {
            if labels[w[0]] == labels[w[1]] {
                return Err(Error::invalid(format!("duplicate label `{}`", labels[w[0]])));
            }
        }
        let mut new_index = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let sorted: Vec<Label> = order.iter().map(|&i| labels[i].clone()).collect();
        Ok(Problem {
            labels: sorted,
            nodes: nodes.map_labels(|i| new_index[i]),
            edges: edges.map_labels(|i| new_index[i]),
        })
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn node_arity(&self) -> usize {
        self.nodes.arity()
    }

    pub fn edge_arity(&self) -> usize {
        self.edges.arity()
    }

    pub fn nodes(&self) -> &Constraint {
        &self.nodes
    }

    pub fn edges(&self) -> &Constraint {
        &self.edges
    }

    pub fn constraint(&self, side: Side) -> &Constraint {
        match side {
            Side::Node => &self.nodes,
            Side::Edge => &self.edges,
        }
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    /// Index of a label, if present.
    pub fn index_of(&self, label: &Label) -> Option<usize> {
        self.labels.binary_search(label).ok()
    }

    /// Index of a label, or an [`Error::UnknownLabel`].
    pub fn require_index(&self, label: &Label) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    /// Labels of an index set, in label order.
    pub fn labels_of(&self, set: &LabelSet) -> BTreeSet<Label> {
        set.iter().map(|i| self.labels[i].clone()).collect()
    }

    /// Index set of a collection of labels.
    pub fn set_of<'a>(&self, labels: impl IntoIterator<Item = &'a Label>) -> Result<LabelSet> {
        labels.into_iter().map(|l| self.require_index(l)).collect()
    }

    /// Converts an index-level configuration to labels.
    pub fn config_labels(&self, c: &Config) -> LabelConfig {
        c.slots().iter().map(|s| self.labels_of(s)).collect()
    }

    /// Converts a concrete configuration to labels.
    pub fn concrete_labels(&self, c: &[u16]) -> Vec<Label> {
        c.iter().map(|&i| self.labels[i as usize].clone()).collect()
    }

    /// Converts labels to a sorted concrete configuration.
    pub fn concrete_of(&self, labels: &[Label]) -> Result<Concrete> {
        let mut out: Vec<u16> = labels.iter().map(|l| self.require_index(l).map(|i| i as u16)).collect::<Result<_>>()?;
        out.sort_unstable();
        Ok(out)
    }

    /// The same problem restricted to the labels that occur in a constraint.
    pub fn without_unused_labels(&self) -> Problem {
        let used = self.nodes.support().union(&self.edges.support());
        if used.len() == self.labels.len() {
            return self.clone();
        }
        let kept: Vec<usize> = used.iter().collect();
        let mut new_index = vec![usize::MAX; self.labels.len()];
        for (new, &old) in kept.iter().enumerate() {
            new_index[old] = new;
        }
        Problem {
            labels: kept.iter().map(|&i| self.labels[i].clone()).collect(),
            nodes: self.nodes.map_labels(|i| new_index[i]),
            edges: self.edges.map_labels(|i| new_index[i]),
        }
    }

    /// Replaces labels through `f`; labels mapped to the same image are merged.
    pub fn map_labels(&self, f: impl Fn(&Label) -> Label) -> Result<Problem> {
        let images: Vec<Label> = self.labels.iter().map(&f).collect();
        let distinct: Vec<Label> = images.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let idx: Vec<usize> = images
            .iter()
            .map(|l| distinct.binary_search(l).expect("image is present"))
            .collect();
        Ok(Problem {
            labels: distinct,
            nodes: self.nodes.map_labels(|i| idx[i]),
            edges: self.edges.map_labels(|i| idx[i]),
        })
    }

    /// Same labels and the same concrete constraints.
    pub fn same_concrete(&self, other: &Problem, limits: &Limits) -> Result<bool> {
        Ok(self.labels == other.labels
            && self.nodes.same_concrete(&other.nodes, limits)?
            && self.edges.same_concrete(&other.edges, limits)?)
    }

    /// Replaces one constraint, keeping the label set.
    pub fn with_constraint(&self, side: Side, c: Constraint) -> Result<Problem> {
        if !c.support().is_subset(&LabelSet::full(self.labels.len())) {
            return Err(Error::invalid("constraint refers to unknown labels"));
        }
        let mut p = self.clone();
        match side {
            Side::Node => p.nodes = c,
            Side::Edge => p.edges = c,
        }
        Ok(p)
    }
}
