//! The problems `Π_Δ(z)` and the fixed-point variant of `Π_Δ([Δ])`.

use std::collections::BTreeSet;

use relim_problems::{ColorId, Error, Label, LabelConfig, Problem, Result, MAX_LABELS};

use crate::vector::FamilyVector;

/// Largest number of colors a generated problem may use (`2^|z|` color-set labels).
pub const MAX_COLORS: usize = 7;

/// A label of `Π_Δ(z)` in structural form. Color sets are bitmasks over
/// [`Family::colors`]; `L(0)` is the wildcard `X`, which also stands for `U_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    P(u32),
    U(u32),
    L(u32),
}

impl Sym {
    pub const X: Sym = Sym::L(0);

    /// `U_i`, with `U_0` normalized to `X`.
    pub fn u(i: u32) -> Sym {
        if i == 0 {
            Sym::X
        } else {
            Sym::U(i)
        }
    }
}

/// Parameters `(Δ, z)` with the color list and label helpers of `Π_Δ(z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    delta: usize,
    z: FamilyVector,
    colors: Vec<ColorId>,
}

impl Family {
    /// Checks `|z| ≤ Δ` and the size caps.
    pub fn new(delta: usize, z: FamilyVector) -> Result<Family> {
        if delta < 2 {
            return Err(Error::Invalid(format!("degree {delta} is below 2")));
        }
        if z.size() > delta as u64 {
            return Err(Error::Invalid(format!(
                "|z| = {} exceeds the degree {delta}",
                z.size()
            )));
        }
        if z.size() as usize > MAX_COLORS || (1usize << z.size()) + 2 * z.beta() > MAX_LABELS {
            return Err(Error::Cap {
                what: "colors of a family problem".into(),
                cap: MAX_COLORS as u64,
                partial: format!("z = {z} has {} colors", z.size()),
            });
        }
        let colors = z.colors();
        Ok(Family { delta, z, colors })
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn z(&self) -> &FamilyVector {
        &self.z
    }

    pub fn beta(&self) -> u32 {
        self.z.beta() as u32
    }

    pub fn colors(&self) -> &[ColorId] {
        &self.colors
    }

    /// Mask of all colors.
    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.colors.len()) - 1) as u32
    }

    /// All color masks, the empty one included.
    pub fn masks(&self) -> impl Iterator<Item = u32> {
        0..=self.full_mask()
    }

    /// `level(𝒞)`, with `-1` for the empty set.
    pub fn level(&self, mask: u32) -> i64 {
        (0..self.colors.len())
            .filter(|k| mask & (1 << k) != 0)
            .map(|k| self.colors[k].level as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Mask of the colors with level at least `i`.
    pub fn mask_at_least(&self, i: u32) -> u32 {
        (0..self.colors.len())
            .filter(|&k| self.colors[k].level >= i)
            .fold(0, |m, k| m | (1 << k))
    }

    /// Every label of `Π_Δ(z)`.
    pub fn symbols(&self) -> Vec<Sym> {
        let mut out: Vec<Sym> = (1..=self.beta()).flat_map(|i| [Sym::P(i), Sym::U(i)]).collect();
        out.extend(self.masks().map(Sym::L));
        out
    }

    pub fn label(&self, s: Sym) -> Label {
        match s {
            Sym::P(i) => Label::pointer(i),
            Sym::U(i) => Label::unpointed(i),
            Sym::L(mask) => Label::colors(self.mask_colors(mask)),
        }
    }

    pub fn mask_colors(&self, mask: u32) -> Vec<ColorId> {
        (0..self.colors.len())
            .filter(|k| mask & (1 << k) != 0)
            .map(|k| self.colors[k])
            .collect()
    }

    /// Inverse of [`Family::label`].
    pub fn sym_of(&self, label: &Label) -> Result<Sym> {
        match label {
            Label::Pointer(i) if (1..=self.beta()).contains(i) => Ok(Sym::P(*i)),
            Label::Unpointed(i) if (1..=self.beta()).contains(i) => Ok(Sym::U(*i)),
            Label::Colors(set) => {
                let mut mask = 0;
                for c in set {
                    let k = self
                        .colors
                        .iter()
                        .position(|d| d == c)
                        .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
                    mask |= 1 << k;
                }
                Ok(Sym::L(mask))
            }
            _ => Err(Error::UnknownLabel(label.to_string())),
        }
    }

    /// Membership in the edge constraint of `Π_Δ(z)`.
    pub fn edge_allowed(&self, a: Sym, b: Sym) -> bool {
        use Sym::*;
        match (a, b) {
            (L(0), _) | (_, L(0)) => true,
            (L(m1), L(m2)) => m1 & m2 == 0,
            (U(_), U(_)) => true,
            (U(i), P(j)) | (P(j), U(i)) => i < j,
            (U(_), L(_)) | (L(_), U(_)) => true,
            (P(i), L(m)) | (L(m), P(i)) => self.level(m) < i as i64,
            (P(_), P(_)) => false,
        }
    }

    /// Node configurations of `Π_Δ(z)`, one per color set and one per pointer level.
    pub fn node_configs(&self) -> Vec<Vec<Sym>> {
        let mut out = Vec::new();
        for mask in self.masks().filter(|&m| m != 0) {
            let x = mask.count_ones() as usize - 1;
            let mut c = vec![Sym::L(mask); self.delta - x];
            c.extend(std::iter::repeat(Sym::X).take(x));
            out.push(c);
        }
        for i in 1..=self.beta() {
            let mut c = vec![Sym::P(i)];
            c.extend(std::iter::repeat(Sym::U(i)).take(self.delta - 1));
            out.push(c);
        }
        out
    }

    /// Unordered allowed edge pairs.
    pub fn edge_configs(&self) -> Vec<[Sym; 2]> {
        let syms = self.symbols();
        let mut out = Vec::new();
        for (k, &a) in syms.iter().enumerate() {
            for &b in &syms[k..] {
                if self.edge_allowed(a, b) {
                    out.push([a, b]);
                }
            }
        }
        out
    }

    /// The strength relation of the edge diagram (`a < b`), from its closed-form description.
    pub fn strictly_weaker(&self, a: Sym, b: Sym) -> bool {
        use Sym::*;
        if a == b {
            return false;
        }
        match (a, b) {
            (_, L(0)) => true,
            (L(0), _) => false,
            (U(i), U(j)) => j < i,
            (P(i), P(j)) => i < j,
            (P(_), U(_)) => true,
            (P(i), L(m)) => m & !self.mask_at_least(i) == 0,
            (L(c), L(c2)) => c2 & !c == 0,
            (L(c), U(i)) => self.level(c) >= i as i64,
            _ => false,
        }
    }

    /// `b` is at least as strong as `a` in the edge diagram.
    pub fn at_least(&self, b: Sym, a: Sym) -> bool {
        a == b || self.strictly_weaker(a, b)
    }

    /// `⟨S⟩`: labels at least as strong as some member of `seed`.
    pub fn gen(&self, seed: &[Sym]) -> BTreeSet<Sym> {
        self.symbols()
            .into_iter()
            .filter(|&b| seed.iter().any(|&a| self.at_least(b, a)))
            .collect()
    }

    /// The problem `Π_Δ(z)`.
    pub fn problem(&self) -> Result<Problem> {
        let single = |s: Sym| -> BTreeSet<Label> { [self.label(s)].into_iter().collect() };
        let nodes: Vec<LabelConfig> = self
            .node_configs()
            .into_iter()
            .map(|c| c.into_iter().map(single).collect())
            .collect();
        let edges: Vec<LabelConfig> = self
            .edge_configs()
            .into_iter()
            .map(|c| c.into_iter().map(single).collect())
            .collect();
        let labels: Vec<Label> = self.symbols().into_iter().map(|s| self.label(s)).collect();
        Problem::from_label_configs(self.delta, 2, &nodes, &edges, labels)
    }

    /// Upper bound `2^Δ (1 + len(z))` on label counts along a family sequence.
    pub fn label_bound(&self) -> u128 {
        label_bound(self.delta, self.z.beta())
    }
}

/// `2^Δ (1 + β)`, saturating.
pub fn label_bound(delta: usize, beta: usize) -> u128 {
    if delta >= 127 {
        return u128::MAX;
    }
    (1u128 << delta).saturating_mul(1 + beta as u128)
}

/// `Π_Δ(z)`; fails when `|z| > Δ`.
pub fn build_family_problem(delta: usize, z: &FamilyVector) -> Result<Problem> {
    Family::new(delta, z.clone())?.problem()
}

/// The variant of `Π_Δ([Δ])` whose node constraint holds every configuration
/// `ℓ(𝒞_1) ... ℓ(𝒞_Δ)` with some `k` positions whose color sets share at least
/// `Δ - k + 1` colors.
pub fn build_fixedpoint_variant(delta: usize) -> Result<Problem> {
    let family = Family::new(delta, FamilyVector::new(vec![delta as u64])?)?;
    let masks: Vec<u32> = family.masks().collect();
    let mut nodes: Vec<LabelConfig> = Vec::new();
    let mut current = Vec::with_capacity(delta);
    for_each_multiset(&masks, delta, 0, &mut current, &mut |tuple| {
        if variant_node_allowed(delta, tuple) {
            nodes.push(
                tuple
                    .iter()
                    .map(|&m| [family.label(Sym::L(m))].into_iter().collect())
                    .collect(),
            );
        }
    });
    let single = |s: Sym| -> BTreeSet<Label> { [family.label(s)].into_iter().collect() };
    let edges: Vec<LabelConfig> = family
        .edge_configs()
        .into_iter()
        .map(|c| c.into_iter().map(single).collect())
        .collect();
    let labels: Vec<Label> = family.symbols().into_iter().map(|s| family.label(s)).collect();
    Problem::from_label_configs(delta, 2, &nodes, &edges, labels)
}

/// The intersection condition of the fixed-point variant on color masks.
pub fn variant_node_allowed(delta: usize, tuple: &[u32]) -> bool {
    let n = tuple.len();
    (1u32..(1 << n)).any(|subset| {
        let k = subset.count_ones() as usize;
        let common = (0..n)
            .filter(|i| subset & (1 << i) != 0)
            .fold(u32::MAX, |acc, i| acc & tuple[i]);
        common.count_ones() as usize + k > delta
    })
}

fn for_each_multiset<T: Copy>(items: &[T], size: usize, start: usize, cur: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
    if cur.len() == size {
        f(cur);
        return;
    }
    for i in start..items.len() {
        cur.push(items[i]);
        for_each_multiset(items, size, i, cur, f);
        cur.pop();
    }
}
