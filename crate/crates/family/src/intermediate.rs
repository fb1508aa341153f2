//! Closed-form descriptions of the intermediate problems of one family step:
//! `re(Π_Δ(z))`, the relaxation target of the node constraint of
//! `rere(re(Π_Δ(z)))`, and the edge constraint that goes with it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use relim_problems::{Error, Label, LabelConfig, Problem, Result, Side};

use crate::build::{Family, Sym};
use crate::vector::FamilyVector;

/// A label of `re(Π_Δ(z))`: a right-closed set of labels of `Π_Δ(z)`.
pub type ReSet = BTreeSet<Sym>;

/// The closed form of `re(Π_Δ(z))`.
#[derive(Clone, Debug)]
pub struct ReOracle {
    family: Family,
    /// `Σ_re`, sorted and without duplicates.
    sigma: Vec<ReSet>,
    index: BTreeMap<ReSet, usize>,
    /// Unordered edge configurations as sorted index pairs.
    edges: BTreeSet<(usize, usize)>,
}

impl ReOracle {
    pub fn new(family: Family) -> ReOracle {
        let beta = family.beta();
        let full = family.full_mask();
        let mut edge_sets: Vec<(ReSet, ReSet)> = Vec::new();
        let mut sigma: BTreeSet<ReSet> = BTreeSet::new();
        for i in 1..=beta {
            for c in family.masks() {
                if family.level(full & !c) <= i as i64 - 1 {
                    let a = family.gen(&[Sym::P(i), Sym::L(c)]);
                    let b = family.gen(&[Sym::u(i - 1), Sym::L(full & !c)]);
                    sigma.insert(a.clone());
                    edge_sets.push((a, b));
                }
            }
        }
        for i in 0..=beta {
            for c in family.masks() {
                if family.level(c) <= i as i64 {
                    sigma.insert(family.gen(&[Sym::u(i), Sym::L(c)]));
                }
            }
        }
        for c in family.masks() {
            let a = family.gen(&[Sym::u(beta), Sym::L(c)]);
            let b = family.gen(&[Sym::u(beta), Sym::L(full & !c)]);
            edge_sets.push((a, b));
        }
        let sigma: Vec<ReSet> = sigma.into_iter().collect();
        let index: BTreeMap<ReSet, usize> = sigma.iter().cloned().enumerate().map(|(k, s)| (s, k)).collect();
        let edges = edge_sets
            .iter()
            .map(|(a, b)| {
                let (x, y) = (index[a], index[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        ReOracle {
            family,
            sigma,
            index,
            edges,
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn sigma(&self) -> &[ReSet] {
        &self.sigma
    }

    pub fn index_of(&self, set: &ReSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn edge_allowed(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// The label of `re(Π_Δ(z))` written as a set-label over the labels of `Π_Δ(z)`.
    pub fn label(&self, k: usize) -> Label {
        Label::set(self.sigma[k].iter().map(|&s| self.family.label(s)))
    }

    /// Reads a set-label of `re(Π_Δ(z))` back into an index of `Σ_re`.
    pub fn index_of_label(&self, label: &Label) -> Result<usize> {
        let members = label
            .members()
            .ok_or_else(|| Error::Invalid(format!("`{label}` is not a set-label")))?;
        let set = members
            .iter()
            .map(|l| self.family.sym_of(l))
            .collect::<Result<ReSet>>()?;
        self.index_of(&set)
            .ok_or_else(|| Error::Invalid(format!("`{label}` is not a label of the characterized re problem")))
    }

    /// `re(Π_Δ(z))` with the edge constraint from the closed form and the node
    /// constraint written existentially (each label `a` of a node configuration
    /// of `Π_Δ(z)` becomes the disjunction of all sets containing `a`).
    pub fn problem(&self) -> Result<Problem> {
        let labels: Vec<Label> = (0..self.sigma.len()).map(|k| self.label(k)).collect();
        let edges: Vec<LabelConfig> = self
            .edges
            .iter()
            .map(|&(a, b)| vec![single(labels[a].clone()), single(labels[b].clone())])
            .collect();
        let nodes: Vec<LabelConfig> = self
            .family
            .node_configs()
            .into_iter()
            .map(|config| {
                config
                    .into_iter()
                    .map(|a| {
                        (0..self.sigma.len())
                            .filter(|&k| self.sigma[k].contains(&a))
                            .map(|k| labels[k].clone())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Problem::from_label_configs(self.family.delta(), 2, &nodes, &edges, labels)
    }
}

fn single(l: Label) -> BTreeSet<Label> {
    [l].into_iter().collect()
}

/// A label of the relaxed problem `Π*` in structural form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum StarForm {
    /// `⟨⟨X⟩⟩`.
    X,
    /// `⟨⟨⟨U_i⟩⟩⟩` with `i ≥ 1`.
    U { i: u32 },
    /// `⟨⟨⟨P_i⟩⟩⟩` with `i ≥ 1`.
    P { i: u32 },
    /// `⟨⟨⟨U_i, ℓ(𝒞)⟩, ⟨P_j⟩⟩⟩`, where the second member is absent for `j = 0`.
    Pair { i: u32, j: u32, mask: u32 },
}

impl fmt::Display for StarForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StarForm::X => f.write_str("<<X>>"),
            StarForm::U { i } => write!(f, "<<U{i}>>"),
            StarForm::P { i } => write!(f, "<<P{i}>>"),
            StarForm::Pair { i, j, mask } => write!(f, "<<U{i},L{mask:#b};P{j}>>"),
        }
    }
}

/// The relaxation target `Π*` of `rere(re(Π_Δ(z)))`.
///
/// Labels are sets of labels of `re(Π_Δ(z))`. The double bracket `⟨⟨S⟩⟩`
/// is the set of all labels of `re(Π_Δ(z))` that contain a member of `S`;
/// in `re(Π_Δ(z))` inclusion and node-diagram strength coincide under the
/// step hypothesis, so this is the right-closure of `S` in that diagram.
#[derive(Clone, Debug)]
pub struct StarOracle {
    re: ReOracle,
    /// `Σ*` in form order.
    forms: Vec<StarForm>,
    /// For each form, its set as sorted indices into `Σ_re`.
    sets: Vec<BTreeSet<usize>>,
    /// Node configurations `N*` over form indices.
    nodes: Vec<Vec<usize>>,
}

impl StarOracle {
    /// Fails when the step hypothesis on `(Δ, z)` does not hold.
    pub fn new(family: Family) -> Result<StarOracle> {
        require_hypothesis(family.delta(), family.z())?;
        let re = ReOracle::new(family);
        let f = re.family().clone();
        let delta = f.delta();
        let beta = f.beta();
        let mut node_forms: Vec<Vec<StarForm>> = Vec::new();
        for i in 1..=beta {
            let mut c = vec![StarForm::P { i }];
            c.extend(std::iter::repeat(StarForm::U { i }).take(delta - 1));
            node_forms.push(c);
        }
        for mask in f.masks().filter(|&m| m != 0) {
            let size = mask.count_ones() as usize;
            for j in 0..=beta {
                if f.level(mask) > j as i64 {
                    continue;
                }
                for i in [j, j + 1] {
                    if i > beta {
                        continue;
                    }
                    let xs = size + (i - j) as usize - 1;
                    let mut c = vec![StarForm::Pair { i, j, mask }; delta - xs];
                    c.extend(std::iter::repeat(StarForm::X).take(xs));
                    node_forms.push(c);
                }
            }
        }
        let forms: Vec<StarForm> = node_forms.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let position: BTreeMap<StarForm, usize> = forms.iter().enumerate().map(|(k, &s)| (s, k)).collect();
        let sets = forms
            .iter()
            .map(|&form| star_set(&re, form))
            .collect::<Result<Vec<_>>>()?;
        let nodes = node_forms
            .iter()
            .map(|c| c.iter().map(|s| position[s]).collect())
            .collect();
        Ok(StarOracle { re, forms, sets, nodes })
    }

    pub fn re(&self) -> &ReOracle {
        &self.re
    }

    pub fn forms(&self) -> &[StarForm] {
        &self.forms
    }

    pub fn set(&self, k: usize) -> &BTreeSet<usize> {
        &self.sets[k]
    }

    /// `N*` as form indices.
    pub fn node_configs(&self) -> &[Vec<usize>] {
        &self.nodes
    }

    /// `N*` as forms.
    pub fn node_forms(&self) -> Vec<Vec<StarForm>> {
        self.nodes.iter().map(|c| c.iter().map(|&k| self.forms[k]).collect()).collect()
    }

    /// `E*` by definition: some member of each side forms an edge of `re(Π_Δ(z))`.
    pub fn edge_allowed(&self, a: usize, b: usize) -> bool {
        self.sets[a]
            .iter()
            .any(|&x| self.sets[b].iter().any(|&y| self.re.edge_allowed(x, y)))
    }

    /// `E*` from the closed-form list of its configurations.
    pub fn edge_allowed_closed_form(&self, a: usize, b: usize) -> bool {
        closed_form_edge(self.forms[a], self.forms[b])
    }

    /// Forms that share the same set with another form.
    pub fn coinciding_forms(&self) -> Vec<(StarForm, StarForm)> {
        let mut out = Vec::new();
        for a in 0..self.forms.len() {
            for b in a + 1..self.forms.len() {
                if self.sets[a] == self.sets[b] {
                    out.push((self.forms[a], self.forms[b]));
                }
            }
        }
        out
    }

    /// The label of `Π*` as a set of set-labels.
    pub fn label(&self, k: usize) -> Label {
        Label::set(self.sets[k].iter().map(|&q| self.re.label(q)))
    }

    /// `Π*` with node constraint `N*` and edge constraint `E*`.
    pub fn problem(&self) -> Result<Problem> {
        let labels: Vec<Label> = (0..self.forms.len()).map(|k| self.label(k)).collect();
        let nodes: Vec<LabelConfig> = self
            .nodes
            .iter()
            .map(|c| c.iter().map(|&k| single(labels[k].clone())).collect())
            .collect();
        let mut edges: Vec<LabelConfig> = Vec::new();
        for a in 0..self.forms.len() {
            for b in a..self.forms.len() {
                if self.edge_allowed(a, b) {
                    edges.push(vec![single(labels[a].clone()), single(labels[b].clone())]);
                }
            }
        }
        Problem::from_label_configs(self.re.family().delta(), 2, &nodes, &edges, labels)
    }
}

/// The set `⟨⟨S⟩⟩` of a form, as indices into `Σ_re`.
fn star_set(re: &ReOracle, form: StarForm) -> Result<BTreeSet<usize>> {
    let f = re.family();
    let seeds: Vec<ReSet> = match form {
        StarForm::X => vec![f.gen(&[Sym::X])],
        StarForm::U { i } => vec![f.gen(&[Sym::U(i)])],
        StarForm::P { i } => vec![f.gen(&[Sym::P(i)])],
        StarForm::Pair { i, j, mask } => {
            let mut s = vec![f.gen(&[Sym::u(i), Sym::L(mask)])];
            if j > 0 {
                s.push(f.gen(&[Sym::P(j)]));
            }
            s
        }
    };
    for seed in &seeds {
        if re.index_of(seed).is_none() {
            return Err(Error::Invalid(format!(
                "form {form} uses a set that is not a label of the re problem"
            )));
        }
    }
    Ok((0..re.sigma().len())
        .filter(|&q| seeds.iter().any(|s| s.is_subset(&re.sigma()[q])))
        .collect())
}

fn closed_form_edge(a: StarForm, b: StarForm) -> bool {
    use StarForm::*;
    match (a, b) {
        (X, _) | (_, X) => true,
        (Pair { i, j, mask }, Pair { i: i2, j: j2, mask: m2 }) => mask & m2 == 0 || i < j2 || i2 < j,
        (Pair { .. }, U { .. }) | (U { .. }, Pair { .. }) => true,
        (Pair { i, .. }, P { i: j2 }) | (P { i: j2 }, Pair { i, .. }) => i < j2,
        (U { .. }, U { .. }) => true,
        (U { i }, P { i: j }) | (P { i: j }, U { i }) => i < j,
        (P { .. }, P { .. }) => false,
    }
}

/// Which characterized constraint [`expected_intermediate`] returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntermediateKind {
    /// Edge constraint of `re(Π_Δ(z))`.
    ReEdge,
    /// Node relaxation target `N*` of `rere(re(Π_Δ(z)))`.
    #[serde(rename = "keytec-node", alias = "star-node")]
    StarNode,
    /// Edge constraint `E*` paired with `N*`.
    EstarEdge,
}

impl std::str::FromStr for IntermediateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "re-edge" => Ok(IntermediateKind::ReEdge),
            "keytec-node" | "star-node" => Ok(IntermediateKind::StarNode),
            "estar-edge" => Ok(IntermediateKind::EstarEdge),
            _ => Err(Error::Invalid(format!(
                "unknown intermediate `{s}` (expected re-edge, keytec-node or estar-edge)"
            ))),
        }
    }
}

/// A characterized problem and the side the characterization is about.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Intermediate {
    pub problem: Problem,
    pub side: Side,
}

/// Fails unless `|z| ≤ Δ` for `len(z) = 0` and `|z| ≤ Δ - 1` otherwise.
pub fn require_hypothesis(delta: usize, z: &FamilyVector) -> Result<()> {
    if z.within_step_hypothesis(delta) {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "z = {z} with |z| = {} is outside the step range for degree {delta} (need |z| ≤ {})",
            z.size(),
            if z.beta() == 0 { delta } else { delta - 1 }
        )))
    }
}

/// Materializes one characterized intermediate constraint.
pub fn expected_intermediate(delta: usize, z: &FamilyVector, which: IntermediateKind) -> Result<Intermediate> {
    require_hypothesis(delta, z)?;
    let family = Family::new(delta, z.clone())?;
    match which {
        IntermediateKind::ReEdge => Ok(Intermediate {
            problem: ReOracle::new(family).problem()?,
            side: Side::Edge,
        }),
        IntermediateKind::StarNode | IntermediateKind::EstarEdge => Ok(Intermediate {
            problem: StarOracle::new(family)?.problem()?,
            side: if which == IntermediateKind::StarNode { Side::Node } else { Side::Edge },
        }),
    }
}
