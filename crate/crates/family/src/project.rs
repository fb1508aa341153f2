//! Replacement rules from `Π*` to `Π_Δ(prefix(z))`.
//!
//! The colors of the target problem are the pairs `(C, i)` with `C` an old
//! color and `level(C) ≤ i ≤ β`; the pair has level `i`. Pairs of level `i`
//! are numbered by the old color order, so `(C, i)` gets index
//! `#{old colors of level < level(C)} + index(C)`.

use std::collections::BTreeMap;

use relim_problems::{ColorId, Error, Label, Problem, Result};

use crate::build::{Family, Sym};
use crate::intermediate::{StarForm, StarOracle};

/// The projection from the forms of `Π*` for `(Δ, z)` to labels of `Π_Δ(prefix(z))`.
#[derive(Clone, Debug)]
pub struct Projection {
    source: Family,
    target: Family,
    /// `offset[l]`: number of old colors with level below `l`.
    offset: Vec<u32>,
}

impl Projection {
    pub fn new(source: Family) -> Result<Projection> {
        let z = source.z();
        let target = Family::new(source.delta(), z.prefix()?)?;
        let mut offset = Vec::with_capacity(z.entries().len());
        let mut acc = 0u32;
        for &e in z.entries() {
            offset.push(acc);
            acc += e as u32;
        }
        Ok(Projection { source, target, offset })
    }

    pub fn source(&self) -> &Family {
        &self.source
    }

    pub fn target(&self) -> &Family {
        &self.target
    }

    /// The new color `(C, i)`.
    pub fn new_color(&self, c: ColorId, i: u32) -> ColorId {
        ColorId::new(i, self.offset[c.level as usize] + c.index)
    }

    /// Label replacement for one half-edge, before padding.
    pub fn project_form(&self, form: StarForm) -> Result<Label> {
        Ok(self.target.label(self.project_sym(form)?))
    }

    fn project_sym(&self, form: StarForm) -> Result<Sym> {
        Ok(match form {
            StarForm::X => Sym::X,
            StarForm::U { i } => Sym::U(i),
            StarForm::P { i } => Sym::P(i),
            StarForm::Pair { i, j, mask } => {
                let mut colors = Vec::new();
                for c in self.source.mask_colors(mask) {
                    colors.push(self.new_color(c, j));
                    colors.push(self.new_color(c, i));
                }
                self.target.sym_of(&Label::colors(colors))?
            }
        })
    }

    /// Projects the port labels of one node and pads with `X` so that a node
    /// labeled `ℓ(𝒞)` has exactly `|𝒞| - 1` ports labeled `X`; the lowest
    /// ports carrying `ℓ(𝒞)` are the ones turned into `X`.
    pub fn project_node(&self, forms: &[StarForm]) -> Result<Vec<Label>> {
        let mut syms = forms.iter().map(|&f| self.project_sym(f)).collect::<Result<Vec<Sym>>>()?;
        let colored: Vec<u32> = syms
            .iter()
            .filter_map(|s| match s {
                Sym::L(m) if *m != 0 => Some(*m),
                _ => None,
            })
            .collect();
        if let Some(&mask) = colored.first() {
            if syms.iter().any(|&s| s != Sym::L(mask) && s != Sym::X) {
                return Err(Error::Invalid(format!(
                    "node with forms {} mixes a color label with other labels",
                    join(forms)
                )));
            }
            let xs = syms.iter().filter(|&&s| s == Sym::X).count() as i64;
            let pad = mask.count_ones() as i64 - 1 - xs;
            if pad < 0 {
                return Err(Error::Invalid(format!(
                    "internal inconsistency: node with forms {} already has {xs} X ports, more than |C| - 1 = {}",
                    join(forms),
                    mask.count_ones() - 1
                )));
            }
            for s in syms.iter_mut().filter(|s| **s == Sym::L(mask)).take(pad as usize) {
                *s = Sym::X;
            }
        }
        Ok(syms.into_iter().map(|s| self.target.label(s)).collect())
    }
}

fn join(forms: &[StarForm]) -> String {
    forms.iter().map(StarForm::to_string).collect::<Vec<_>>().join(" ")
}

/// Reads labels of `Π*` (sets of set-labels) back into forms.
#[derive(Clone, Debug)]
pub struct FormLookup {
    forms: BTreeMap<Label, StarForm>,
    ambiguous: BTreeMap<Label, Vec<StarForm>>,
}

impl FormLookup {
    /// Labels shared by forms with different projections are marked ambiguous.
    pub fn new(star: &StarOracle, projection: &Projection) -> Result<FormLookup> {
        let mut by_label: BTreeMap<Label, Vec<StarForm>> = BTreeMap::new();
        for (k, &form) in star.forms().iter().enumerate() {
            by_label.entry(star.label(k)).or_default().push(form);
        }
        let mut forms = BTreeMap::new();
        let mut ambiguous = BTreeMap::new();
        for (label, fs) in by_label {
            let images = fs.iter().map(|&f| projection.project_form(f)).collect::<Result<Vec<Label>>>()?;
            if images.windows(2).all(|w| w[0] == w[1]) {
                forms.insert(label, fs[0]);
            } else {
                ambiguous.insert(label, fs);
            }
        }
        Ok(FormLookup { forms, ambiguous })
    }

    pub fn form(&self, label: &Label) -> Result<StarForm> {
        if let Some(fs) = self.ambiguous.get(label) {
            return Err(Error::Invalid(format!(
                "label `{label}` matches several forms with different images: {}",
                join(fs)
            )));
        }
        self.forms
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn ambiguous(&self) -> &BTreeMap<Label, Vec<StarForm>> {
        &self.ambiguous
    }
}

/// Rewrites a per-node, per-port labeling of `Π*` for `(Δ, z)` into a labeling
/// of `Π_Δ(prefix(z))`.
pub fn project_intermediate_labeling(delta: usize, z: &crate::FamilyVector, labels: &[Vec<Label>]) -> Result<Vec<Vec<Label>>> {
    let family = Family::new(delta, z.clone())?;
    let star = StarOracle::new(family.clone())?;
    let projection = Projection::new(family)?;
    let lookup = FormLookup::new(&star, &projection)?;
    labels
        .iter()
        .map(|node| {
            if node.len() != delta {
                return Err(Error::Invalid(format!("a node has {} ports, expected {delta}", node.len())));
            }
            let forms = node.iter().map(|l| lookup.form(l)).collect::<Result<Vec<_>>>()?;
            projection.project_node(&forms)
        })
        .collect()
}

/// Images of the node and edge configurations of `Π*` under the projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectedConstraints {
    /// One padded configuration per node configuration of `Π*`.
    pub nodes: Vec<Vec<Label>>,
    /// One pair per unordered edge configuration of `Π*`.
    pub edges: Vec<[Label; 2]>,
}

/// Projects every configuration of `Π*`.
pub fn project_problem(star: &StarOracle, projection: &Projection) -> Result<ProjectedConstraints> {
    let nodes = star
        .node_forms()
        .iter()
        .map(|c| projection.project_node(c))
        .collect::<Result<Vec<_>>>()?;
    let n = star.forms().len();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a..n {
            if star.edge_allowed(a, b) {
                edges.push([
                    projection.project_form(star.forms()[a])?,
                    projection.project_form(star.forms()[b])?,
                ]);
            }
        }
    }
    Ok(ProjectedConstraints { nodes, edges })
}

/// Configurations of `projected` that `target` does not allow.
pub fn violations(target: &Problem, projected: &ProjectedConstraints) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for c in &projected.nodes {
        let mut idx = target.concrete_of(c)?;
        idx.sort_unstable();
        if !target.nodes().allows(&idx) {
            out.push(format!("node {}", labels_text(c)));
        }
    }
    for e in &projected.edges {
        let mut idx = target.concrete_of(e)?;
        idx.sort_unstable();
        if !target.edges().allows(&idx) {
            out.push(format!("edge {}", labels_text(e)));
        }
    }
    Ok(out)
}

fn labels_text(ls: &[Label]) -> String {
    ls.iter().map(Label::to_string).collect::<Vec<_>>().join(" ")
}
