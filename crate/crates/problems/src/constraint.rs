//! Condensed configurations and constraints over label indices.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::labelset::LabelSet;
use crate::limits::Limits;

/// A concrete configuration: the sorted multiset of label indices.
pub type Concrete = Vec<u16>;

/// Finds a perfect matching between `n` left and `n` right vertices.
///
/// Returns `assign` with `assign[i] = j` for the right vertex `j` matched to
/// left vertex `i`, using augmenting paths.
pub fn perfect_matching(n: usize, compat: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    fn augment(
        i: usize,
        n: usize,
        compat: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        owner: &mut [usize],
    ) -> bool {
        for j in 0..n {
            if !seen[j] && compat(i, j) {
                seen[j] = true;
                if owner[j] == usize::MAX || augment(owner[j], n, compat, seen, owner) {
                    owner[j] = i;
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![usize::MAX; n];
    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, n, &compat, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut assign = vec![0; n];
    for (j, &i) in owner.iter().enumerate() {
        assign[i] = j;
    }
    Some(assign)
}

/// A condensed configuration: a multiset of nonempty disjunctions, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Config(Vec<LabelSet>);

impl Config {
    /// Builds a configuration, sorting the slots. Empty disjunctions are rejected.
    pub fn new(mut slots: Vec<LabelSet>) -> Result<Self> {
        if slots.iter().any(LabelSet::is_empty) {
            return Err(Error::invalid("a disjunction must contain at least one label"));
        }
        slots.sort();
        Ok(Config(slots))
    }

    /// Builds a configuration from a concrete multiset of label indices.
    pub fn from_concrete(labels: &[u16]) -> Self {
        let mut slots: Vec<LabelSet> = labels.iter().map(|&l| LabelSet::singleton(l as usize)).collect();
        slots.sort();
        Config(slots)
    }

    pub fn slots(&self) -> &[LabelSet] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Union of all disjunctions.
    pub fn support(&self) -> LabelSet {
        self.0.iter().fold(LabelSet::EMPTY, |acc, s| acc.union(s))
    }

    /// Sum of disjunction sizes.
    pub fn weight(&self) -> usize {
        self.0.iter().map(LabelSet::len).sum()
    }

    /// Number of concrete tuples (with multiplicity) the configuration denotes.
    pub fn product_size(&self) -> u128 {
        self.0
            .iter()
            .map(|s| s.len() as u128)
            .fold(1u128, |acc, k| acc.saturating_mul(k))
    }

    /// True iff every slot is a single label.
    pub fn is_concrete(&self) -> bool {
        self.0.iter().all(|s| s.len() == 1)
    }

    /// Whether some slot permutation puts every slot of `self` inside the matched slot of `other`.
    pub fn relaxes_to(&self, other: &Config) -> bool {
        self.relaxation_witness(other).is_some()
    }

    /// Permutation witnessing [`Config::relaxes_to`]: slot `i` of `self` maps to slot `w[i]` of `other`.
    pub fn relaxation_witness(&self, other: &Config) -> Option<Vec<usize>> {
        if self.arity() != other.arity() || !self.support().is_subset(&other.support()) {
            return None;
        }
        perfect_matching(self.arity(), |i, j| self.0[i].is_subset(&other.0[j]))
    }

    /// Whether the concrete multiset `labels` is one of this configuration's choices.
    pub fn admits(&self, labels: &[u16]) -> bool {
        labels.len() == self.arity()
            && perfect_matching(self.arity(), |i, j| self.0[j].contains(labels[i] as usize)).is_some()
    }

    /// Applies a label index map to every slot.
    pub fn map_labels(&self, f: impl Fn(usize) -> usize) -> Config {
        let mut slots: Vec<LabelSet> = self.0.iter().map(|s| s.map(&f)).collect();
        slots.sort();
        Config(slots)
    }

    /// Appends every concrete multiset of this configuration to `out`.
    pub fn expand_into(&self, out: &mut BTreeSet<Concrete>, cap: usize) -> Result<()> {
        let slots: Vec<Vec<u16>> = self.0.iter().map(|s| s.iter().map(|i| i as u16).collect()).collect();
        let mut current = Vec::with_capacity(slots.len());
        expand_rec(&slots, 0, &mut current, out, cap)
    }
}

fn expand_rec(
    slots: &[Vec<u16>],
    k: usize,
    current: &mut Vec<u16>,
    out: &mut BTreeSet<Concrete>,
    cap: usize,
) -> Result<()> {
    if k == slots.len() {
        let mut c = current.clone();
        c.sort_unstable();
        out.insert(c);
        if out.len() > cap {
            return Err(Error::Cap {
                what: "concrete configurations in expansion".into(),
                cap: cap as u64,
                partial: format!("{} configurations generated", out.len()),
            });
        }
        return Ok(());
    }
    // Identical consecutive slots only need non-decreasing choices.
    let lower = if k > 0 && slots[k] == slots[k - 1] { current[k - 1] } else { 0 };
    for &l in &slots[k] {
        if l < lower {
            continue;
        }
        current.push(l);
        expand_rec(slots, k + 1, current, out, cap)?;
        current.pop();
    }
    Ok(())
}

/// A set of condensed configurations of fixed arity, in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    arity: usize,
    configs: Vec<Config>,
}

impl Constraint {
    /// Canonicalizes: sorts, deduplicates and drops configurations that relax into another one.
    pub fn new(arity: usize, configs: Vec<Config>) -> Result<Self> {
        if let Some(c) = configs.iter().find(|c| c.arity() != arity) {
            return Err(Error::invalid(format!(
                "configuration of arity {} in a constraint of arity {arity}",
                c.arity()
            )));
        }
        Ok(Constraint {
            arity,
            configs: prune_dominated(configs),
        })
    }

    /// Like [`Constraint::new`] but keeps configurations dominated by others.
    pub fn new_unpruned(arity: usize, mut configs: Vec<Config>) -> Result<Self> {
        if configs.iter().any(|c| c.arity() != arity) {
            return Err(Error::invalid("configuration arity mismatch"));
        }
        configs.sort();
        configs.dedup();
        Ok(Constraint { arity, configs })
    }

    pub fn empty(arity: usize) -> Self {
        Constraint {
            arity,
            configs: Vec::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn configs(&self) -> &[Config] {
        &self.configs
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    /// Labels that occur in some configuration.
    pub fn support(&self) -> LabelSet {
        self.configs.iter().fold(LabelSet::EMPTY, |acc, c| acc.union(&c.support()))
    }

    /// Whether the concrete multiset is allowed.
    pub fn allows(&self, labels: &[u16]) -> bool {
        self.configs.iter().any(|c| c.admits(labels))
    }

    /// All concrete configurations, failing once more than `limits.max_expansion` are produced.
    pub fn expand(&self, limits: &Limits) -> Result<BTreeSet<Concrete>> {
        let mut out = BTreeSet::new();
        for c in &self.configs {
            c.expand_into(&mut out, limits.max_expansion)?;
        }
        Ok(out)
    }

    /// Upper bound on the number of concrete tuples before deduplication.
    pub fn product_size(&self) -> u128 {
        self.configs.iter().map(Config::product_size).fold(0u128, |a, b| a.saturating_add(b))
    }

    /// Every configuration of `self` relaxes into some configuration of `other`.
    pub fn relaxes_to(&self, other: &Constraint) -> bool {
        self.arity == other.arity && self.configs.iter().all(|c| other.configs.iter().any(|d| c.relaxes_to(d)))
    }

    /// Same set of concrete configurations.
    pub fn same_concrete(&self, other: &Constraint, limits: &Limits) -> Result<bool> {
        if self.arity != other.arity {
            return Ok(false);
        }
        Ok(self.expand(limits)? == other.expand(limits)?)
    }

    /// Applies a label index map; merged slots and configurations are re-canonicalized.
    pub fn map_labels(&self, f: impl Fn(usize) -> usize) -> Constraint {
        let configs = self.configs.iter().map(|c| c.map_labels(&f)).collect();
        Constraint {
            arity: self.arity,
            configs: prune_dominated(configs),
        }
    }
}

/// Sorts, deduplicates and removes configurations that relax into a different one.
fn prune_dominated(mut configs: Vec<Config>) -> Vec<Config> {
    configs.sort();
    configs.dedup();
    if configs.iter().all(Config::is_concrete) {
        return configs;
    }
    let weights: Vec<usize> = configs.iter().map(Config::weight).collect();
    let supports: Vec<LabelSet> = configs.iter().map(Config::support).collect();
    let keep: Vec<bool> = (0..configs.len())
        .map(|i| {
            !(0..configs.len()).any(|j| {
                j != i
                    && weights[j] > weights[i]
                    && supports[i].is_subset(&supports[j])
                    && configs[i].relaxes_to(&configs[j])
            })
        })
        .collect();
    configs
        .into_iter()
        .zip(keep)
        .filter_map(|(c, k)| k.then_some(c))
        .collect()
}
