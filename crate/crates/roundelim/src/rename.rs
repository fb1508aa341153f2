//! Renaming of set-labels produced by the operators.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use relim_problems::{ColorId, Error, Label, Problem, Result};

/// How set-labels are renamed after an operator application.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RenamingPolicy {
    /// Keep set-labels as they are.
    #[default]
    Keep,
    /// A set of color labels becomes the color label of the union of their colors.
    Union,
    /// A set of color labels becomes the color label of the intersection of their colors.
    Intersection,
    /// An explicit map that must cover every set-label of the problem.
    ExplicitMap { map: BTreeMap<Label, Label> },
    /// Keep labels; comparisons search for a label bijection instead.
    SearchBijection,
}

impl RenamingPolicy {
    /// Whether comparisons under this policy search for a label bijection.
    pub fn searches_bijection(&self) -> bool {
        matches!(self, RenamingPolicy::SearchBijection)
    }
}

/// Applies a renaming policy; labels with equal images are merged.
pub fn rename_labels(p: &Problem, policy: &RenamingPolicy) -> Result<Problem> {
    match policy {
        RenamingPolicy::Keep | RenamingPolicy::SearchBijection => Ok(p.clone()),
        RenamingPolicy::Union | RenamingPolicy::Intersection => {
            let union = matches!(policy, RenamingPolicy::Union);
            let mut images = BTreeMap::new();
            for l in p.labels() {
                if let Some(members) = l.members() {
                    images.insert(l.clone(), combine_colors(l, members, union)?);
                }
            }
            p.map_labels(|l| images.get(l).cloned().unwrap_or_else(|| l.clone()))
        }
        RenamingPolicy::ExplicitMap { map } => {
            if let Some(missing) = p.labels().iter().find(|l| l.members().is_some() && !map.contains_key(l)) {
                return Err(Error::Invalid(format!("explicit renaming map has no entry for `{missing}`")));
            }
            p.map_labels(|l| map.get(l).cloned().unwrap_or_else(|| l.clone()))
        }
    }
}

fn combine_colors(label: &Label, members: &BTreeSet<Label>, union: bool) -> Result<Label> {
    let mut acc: Option<BTreeSet<ColorId>> = None;
    for m in members {
        let colors = m.color_set().ok_or_else(|| {
            Error::Invalid(format!(
                "cannot rename `{label}` by color {}: member `{m}` is not a color label",
                if union { "union" } else { "intersection" }
            ))
        })?;
        acc = Some(match acc {
            None => colors.clone(),
            Some(a) if union => a.union(colors).copied().collect(),
            Some(a) => a.intersection(colors).copied().collect(),
        });
    }
    Ok(Label::Colors(acc.unwrap_or_default()))
}
