//! Maps arbdefective colorings and colored ruling sets to labelings of `Π_Δ(z)`.

use serde::{Deserialize, Serialize};

use relim_family::{ArbdefectVector, FamilyVector};
use relim_problems::{ColorId, Error, Label, Result};

use crate::instance::Instance;
use crate::solution::{ArbdefectiveColoring, HalfEdgeLabeling, RulingSetOutput};
use crate::verify::{verify_arbdefective, verify_ruling};

/// Which solution is being reduced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReductionInput {
    Arbdefective { defects: ArbdefectVector, solution: ArbdefectiveColoring },
    Ruling { solution: RulingSetOutput },
}

/// A labeling of `Π_Δ(z)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyLabeling {
    pub delta: usize,
    pub z: FamilyVector,
    pub labeling: HalfEdgeLabeling,
}

pub fn reduce_solution_to_family(inst: &Instance, delta: usize, input: &ReductionInput) -> Result<FamilyLabeling> {
    match input {
        ReductionInput::Arbdefective { defects, solution } => reduce_arbdefective(inst, delta, defects, solution),
        ReductionInput::Ruling { solution } => reduce_ruling(inst, delta, solution),
    }
}

fn check_degree(inst: &Instance, delta: usize) -> Result<()> {
    if inst.max_degree() > delta {
        return Err(Error::Invalid(format!(
            "the instance has maximum degree {} above Δ = {delta}",
            inst.max_degree()
        )));
    }
    Ok(())
}

/// `size` consecutive level-0 colors starting after `offset`.
fn group(offset: u64, size: u64) -> Label {
    Label::colors((offset + 1..=offset + size).map(|i| ColorId::new(0, i as u32)))
}

/// Labels node `v`: `X` on the ports in `marked`, then further `X` on the
/// lowest remaining ports until there are `min(x, deg)` of them, `own` elsewhere.
fn color_node(inst: &Instance, v: usize, own: &Label, marked: &[bool], x: usize) -> Vec<Label> {
    let mut is_x = marked.to_vec();
    let mut count = is_x.iter().filter(|&&b| b).count();
    for slot in is_x.iter_mut() {
        if count >= x.min(inst.degree(v)) {
            break;
        }
        if !*slot {
            *slot = true;
            count += 1;
        }
    }
    is_x.into_iter().map(|b| if b { Label::x() } else { own.clone() }).collect()
}

/// Ports of each node leading along an out-edge to a neighbor of the same color.
fn monochromatic_out_ports(inst: &Instance, color: impl Fn(usize) -> Option<u32>, oriented: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut marked: Vec<Vec<bool>> = (0..inst.node_count()).map(|v| vec![false; inst.degree(v)]).collect();
    for &(t, h) in oriented {
        if color(t).is_some() && color(t) == color(h) {
            let k = inst.ports(t).iter().position(|p| p.neighbor == h).expect("oriented pairs are edges");
            marked[t][k] = true;
        }
    }
    marked
}

/// Color `i` becomes a set of `d_i + 1` colors of level 0, disjoint across
/// colors, giving a labeling of `Π_Δ([Δ])`. Needs capacity at most `Δ`.
pub fn reduce_arbdefective(
    inst: &Instance,
    delta: usize,
    defects: &ArbdefectVector,
    sol: &ArbdefectiveColoring,
) -> Result<FamilyLabeling> {
    check_degree(inst, delta)?;
    if defects.capacity() > delta as u64 {
        return Err(Error::Invalid(format!(
            "capacity {} exceeds Δ = {delta}; no family problem covers this coloring",
            defects.capacity()
        )));
    }
    let verdict = verify_arbdefective(inst, defects, sol);
    if !verdict.ok {
        return Err(Error::Invalid(format!("invalid arbdefective coloring: {}", verdict.violations.join("; "))));
    }
    let mut offset = 0u64;
    let groups: Vec<Label> = defects
        .defects()
        .iter()
        .map(|&d| {
            let g = group(offset, d as u64 + 1);
            offset += d as u64 + 1;
            g
        })
        .collect();
    let marked = monochromatic_out_ports(inst, |v| Some(sol.colors[v]), &sol.oriented_edges);
    let labels = (0..inst.node_count())
        .map(|v| {
            let x = sol.colors[v] as usize;
            color_node(inst, v, &groups[x], &marked[v], defects.defects()[x] as usize)
        })
        .collect();
    Ok(FamilyLabeling {
        delta,
        z: FamilyVector::new(vec![delta as u64])?,
        labeling: HalfEdgeLabeling { labels },
    })
}

/// Members of color `j` take a set of `1 + α` level-0 colors, disjoint across
/// colors; a node at distance `i ≥ 1` from the set points `P_i` to a neighbor
/// at distance `i - 1` and puts `U_i` on its other ports. The target is
/// `Π_Δ([c(1+α), 0, ..., 0])` with `β` zeros.
pub fn reduce_ruling(inst: &Instance, delta: usize, sol: &RulingSetOutput) -> Result<FamilyLabeling> {
    check_degree(inst, delta)?;
    let size = sol.c as u64 * (1 + sol.alpha as u64);
    if size > delta as u64 {
        return Err(Error::Invalid(format!("c(1+α) = {size} exceeds Δ = {delta}; no family problem covers this set")));
    }
    let verdict = verify_ruling(inst, sol.alpha, sol.c, sol.beta, sol);
    if !verdict.ok {
        return Err(Error::Invalid(format!("invalid ruling set: {}", verdict.violations.join("; "))));
    }
    let mut color_of = vec![None; inst.node_count()];
    for (&v, &c) in sol.members.iter().zip(&sol.colors) {
        color_of[v] = Some(c);
    }
    let width = 1 + sol.alpha as u64;
    let marked = monochromatic_out_ports(inst, |v| color_of[v], &sol.orientation);
    let dist = inst.distances(sol.members.iter().copied());
    let labels = (0..inst.node_count())
        .map(|v| match color_of[v] {
            Some(c) => color_node(inst, v, &group(c as u64 * width, width), &marked[v], sol.alpha as usize),
            None => {
                let i = dist[v];
                let parent = inst.ports(v).iter().position(|h| dist[h.neighbor] + 1 == i).expect("distances are consistent");
                (0..inst.degree(v))
                    .map(|k| if k == parent { Label::pointer(i as u32) } else { Label::unpointed(i as u32) })
                    .collect()
            }
        })
        .collect();
    let mut z = vec![0u64; sol.beta as usize + 1];
    z[0] = size;
    Ok(FamilyLabeling {
        delta,
        z: FamilyVector::new(z)?,
        labeling: HalfEdgeLabeling { labels },
    })
}
