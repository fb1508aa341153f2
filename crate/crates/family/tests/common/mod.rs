#![allow(dead_code)]

use relim_family::FamilyVector;
use relim_problems::{parse_problem, Problem};

pub fn z(entries: &[u64]) -> FamilyVector {
    FamilyVector::new(entries.to_vec()).unwrap()
}

/// `Π_3` written out with colors `A = 0.1`, `B = 0.2`, `C = 0.3`.
pub const PI3_LISTING: &str = "\
delta 3 2
nodes:
L{0.1}^3
L{0.2}^3
L{0.3}^3
L{0.1,0.2}^2 X
L{0.1,0.3}^2 X
L{0.2,0.3}^2 X
L{0.1,0.2,0.3} X^2
edges:
X [X L{0.1} L{0.2} L{0.3} L{0.1,0.2} L{0.2,0.3} L{0.1,0.3} L{0.1,0.2,0.3}]
L{0.1} [X L{0.2} L{0.3} L{0.2,0.3}]
L{0.2} [X L{0.1} L{0.3} L{0.1,0.3}]
L{0.3} [X L{0.1} L{0.2} L{0.1,0.2}]
L{0.1,0.2} [X L{0.3}]
L{0.1,0.3} [X L{0.2}]
L{0.2,0.3} [X L{0.1}]
L{0.1,0.2,0.3} X
";

pub fn pi3_listing() -> Problem {
    parse_problem(PI3_LISTING).unwrap()
}

/// Every vector with `1..=max_entries` entries and `lo ≤ |z| ≤ hi`.
pub fn vectors(max_entries: usize, lo: u64, hi: u64) -> Vec<FamilyVector> {
    let mut out = Vec::new();
    for len in 1..=max_entries {
        let mut v = vec![0u64; len];
        loop {
            let s: u64 = v.iter().sum();
            if s >= lo && s <= hi {
                out.push(FamilyVector::new(v.clone()).unwrap());
            }
            let mut k = 0;
            while k < len {
                v[k] += 1;
                if v[k] <= hi {
                    break;
                }
                v[k] = 0;
                k += 1;
            }
            if k == len {
                break;
            }
        }
    }
    out
}
