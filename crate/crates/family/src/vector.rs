//! Family vectors `z = [z_0, ..., z_β]` and arbdefect vectors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use relim_problems::{ColorId, Error, Result};

/// Number of colors per level: `z_0, ..., z_β`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct FamilyVector {
    entries: Vec<u64>,
}

impl FamilyVector {
    /// Fails on an empty vector or one without any color.
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Invalid("a family vector needs at least one entry".into()));
        }
        if entries.iter().all(|&e| e == 0) {
            return Err(Error::Invalid("a family vector needs at least one color".into()));
        }
        Ok(FamilyVector { entries })
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// `β = len(z)`, the index of the last entry.
    pub fn beta(&self) -> usize {
        self.entries.len() - 1
    }

    /// `|z|`, the total number of colors.
    pub fn size(&self) -> u64 {
        self.entries.iter().sum()
    }

    /// All colors ordered by level, then index.
    pub fn colors(&self) -> Vec<ColorId> {
        self.entries
            .iter()
            .enumerate()
            .flat_map(|(level, &count)| (1..=count).map(move |index| ColorId::new(level as u32, index as u32)))
            .collect()
    }

    /// Inclusive prefix sums; fails on overflow.
    pub fn prefix(&self) -> Result<FamilyVector> {
        let mut acc: u64 = 0;
        let mut out = Vec::with_capacity(self.entries.len());
        for &e in &self.entries {
            acc = acc
                .checked_add(e)
                .ok_or_else(|| Error::Invalid("prefix sum overflows 64 bits".into()))?;
            out.push(acc);
        }
        Ok(FamilyVector { entries: out })
    }

    /// `prefix` applied `j` times.
    pub fn prefix_iter(&self, j: u64) -> Result<FamilyVector> {
        let mut z = self.clone();
        for _ in 0..j {
            let next = z.prefix()?;
            if next == z {
                break;
            }
            z = next;
        }
        Ok(z)
    }

    /// Whether the one-step results apply: `|z| ≤ Δ` when `β = 0`, else `|z| ≤ Δ - 1`.
    pub fn within_step_hypothesis(&self, delta: usize) -> bool {
        let bound = if self.beta() == 0 { delta as u64 } else { (delta as u64).saturating_sub(1) };
        self.size() <= bound
    }
}

impl TryFrom<Vec<u64>> for FamilyVector {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        FamilyVector::new(v)
    }
}

impl From<FamilyVector> for Vec<u64> {
    fn from(z: FamilyVector) -> Self {
        z.entries
    }
}

impl fmt::Display for FamilyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(u64::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for FamilyVector {
    type Err = Error;

    /// Accepts `1,0,2` with optional surrounding brackets and spaces.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let entries = inner
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Invalid(format!("`{}` is not a nonnegative integer", part.trim())))
            })
            .collect::<Result<Vec<u64>>>()?;
        FamilyVector::new(entries)
    }
}

/// Arbdefects `d_1, ..., d_c` of a generalized arbdefective coloring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct ArbdefectVector {
    defects: Vec<u32>,
}

impl ArbdefectVector {
    pub fn new(defects: Vec<u32>) -> Result<Self> {
        if defects.is_empty() {
            return Err(Error::Invalid("an arbdefect vector needs at least one color".into()));
        }
        Ok(ArbdefectVector { defects })
    }

    /// `d⃗ = (d, ..., d)` with `c` entries.
    pub fn uniform(c: usize, d: u32) -> Result<Self> {
        ArbdefectVector::new(vec![d; c])
    }

    pub fn defects(&self) -> &[u32] {
        &self.defects
    }

    /// Number of colors `c`.
    pub fn colors(&self) -> usize {
        self.defects.len()
    }

    /// `Σ (d_i + 1)`.
    pub fn capacity(&self) -> u64 {
        self.defects.iter().map(|&d| d as u64 + 1).sum()
    }

    /// `capacity > σ·Δ`.
    pub fn is_relaxed(&self, sigma: f64, delta: usize) -> bool {
        self.capacity() as f64 > sigma * delta as f64
    }
}

impl TryFrom<Vec<u32>> for ArbdefectVector {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        ArbdefectVector::new(v)
    }
}

impl From<ArbdefectVector> for Vec<u32> {
    fn from(d: ArbdefectVector) -> Self {
        d.defects
    }
}

impl FromStr for ArbdefectVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let defects = inner
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Invalid(format!("`{}` is not a nonnegative integer", part.trim())))
            })
            .collect::<Result<Vec<u32>>>()?;
        ArbdefectVector::new(defects)
    }
}
