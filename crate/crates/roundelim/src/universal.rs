//! The universal quantifier: maximal tuples of label sets all of whose
//! choices are allowed configurations.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use relim_problems::{Config, Constraint, Error, LabelSet, Limits, Result};

/// Counters reported by [`maximal_tuples`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct ClosureStats {
    /// Candidate tuples produced by combining two tuples.
    pub candidates: u64,
    /// Largest size reached by the working antichain.
    pub peak_antichain: usize,
}

/// Returns every maximal tuple `(S_1, ..., S_k)` of nonempty label sets such
/// that each choice `(x_1 in S_1, ..., x_k in S_k)` is a concrete
/// configuration of `c`. Maximality is up to slot permutation and slotwise
/// inclusion; each tuple is returned with sorted slots, and the list is sorted.
///
/// The search starts from the condensed configurations and repeatedly
/// combines two tuples `t1, t2` under a slot bijection `pi`: one position
/// takes the union `t1[p] ∪ t2[pi p]`, every other position the intersection
/// `t1[q] ∩ t2[pi q]`, which must be nonempty. Dominated tuples are dropped.
/// Each selected tuple is combined with itself and with the tuples selected
/// before it that are still kept, heaviest tuples first. Since combination is
/// monotone under domination, at the fixpoint every valid tuple is dominated
/// by a returned one.
pub fn maximal_tuples(c: &Constraint, limits: &Limits) -> Result<(Vec<Config>, ClosureStats)> {
    let mut stats = ClosureStats::default();
    let mut chain = Antichain::default();
    let mut seen: HashSet<Config> = HashSet::new();
    let mut queue: BinaryHeap<(usize, Reverse<usize>)> = BinaryHeap::new();
    for config in c.configs() {
        seen.insert(config.clone());
        if let Some(i) = chain.insert(config.clone()) {
            queue.push((chain.weight(i), Reverse(i)));
        }
    }
    let mut combiner = Combiner::new(c.arity());
    let mut produced = Vec::new();
    let mut processed: Vec<usize> = Vec::new();
    while let Some((_, Reverse(i))) = queue.pop() {
        let Some(t1) = chain.pool[i].as_ref().map(|e| e.config.clone()) else { continue };
        limits.check(|| {
            format!(
                "universal quantifier: {} tuples kept, {} queued, {} candidates examined",
                chain.alive,
                queue.len(),
                stats.candidates
            )
        })?;
        processed.retain(|&j| chain.pool[j].is_some());
        processed.push(i);
        produced.clear();
        for &j in &processed {
            let t2 = &chain.pool[j].as_ref().expect("processed tuples are alive").config;
            combiner.combine(t1.slots(), t2.slots(), &mut produced);
        }
        for slots in produced.drain(..) {
            stats.candidates += 1;
            let candidate = Config::new(slots).expect("combined slots are nonempty");
            if !seen.insert(candidate.clone()) {
                continue;
            }
            if let Some(j) = chain.insert(candidate) {
                queue.push((chain.weight(j), Reverse(j)));
                stats.peak_antichain = stats.peak_antichain.max(chain.alive);
                if chain.alive > limits.max_antichain {
                    return Err(Error::Cap {
                        what: "universal-quantifier antichain size".into(),
                        cap: limits.max_antichain as u64,
                        partial: format!("{} tuples, {} candidates examined", chain.alive, stats.candidates),
                    });
                }
            }
        }
    }
    let mut out: Vec<Config> = chain.pool.into_iter().flatten().map(|e| e.config).collect();
    out.sort();
    stats.peak_antichain = stats.peak_antichain.max(out.len());
    Ok((out, stats))
}

struct Entry {
    config: Config,
    support: LabelSet,
    weight: usize,
}

/// Tuples under domination; evicted entries become `None` so indices stay valid.
#[derive(Default)]
struct Antichain {
    pool: Vec<Option<Entry>>,
    alive: usize,
}

impl Antichain {
    fn weight(&self, i: usize) -> usize {
        self.pool[i].as_ref().map_or(0, |e| e.weight)
    }

    /// Adds `t` unless an alive tuple dominates it, evicting the tuples `t`
    /// dominates. Returns the index of the new entry.
    fn insert(&mut self, t: Config) -> Option<usize> {
        let support = t.support();
        let weight = t.weight();
        for other in self.pool.iter().flatten() {
            if other.weight >= weight && support.is_subset(&other.support) && t.relaxes_to(&other.config) {
                return None;
            }
        }
        for entry in self.pool.iter_mut() {
            let dominated = matches!(entry, Some(other)
                if other.weight <= weight && other.support.is_subset(&support) && other.config.relaxes_to(&t));
            if dominated {
                *entry = None;
                self.alive -= 1;
            }
        }
        self.pool.push(Some(Entry { config: t, support, weight }));
        self.alive += 1;
        Some(self.pool.len() - 1)
    }
}

/// Enumerates the combinations of two tuples over all slot bijections.
struct Combiner {
    arity: usize,
    used: Vec<bool>,
    inter: Vec<LabelSet>,
    union: Vec<LabelSet>,
}

impl Combiner {
    fn new(arity: usize) -> Self {
        Combiner {
            arity,
            used: vec![false; arity],
            inter: vec![LabelSet::EMPTY; arity],
            union: vec![LabelSet::EMPTY; arity],
        }
    }

    fn combine(&mut self, a: &[LabelSet], b: &[LabelSet], out: &mut Vec<Vec<LabelSet>>) {
        self.dfs(0, None, a, b, out);
    }

    /// Assigns slot `q` of `a` to an unused slot of `b`. At most one
    /// intersection may be empty, and that position must take the union.
    fn dfs(&mut self, q: usize, empty_at: Option<usize>, a: &[LabelSet], b: &[LabelSet], out: &mut Vec<Vec<LabelSet>>) {
        if q == self.arity {
            match empty_at {
                Some(p) => {
                    let mut t = self.inter.clone();
                    t[p] = self.union[p];
                    out.push(t);
                }
                None => {
                    for p in 0..self.arity {
                        if self.union[p] != self.inter[p] {
                            let mut t = self.inter.clone();
                            t[p] = self.union[p];
                            out.push(t);
                        }
                    }
                }
            }
            return;
        }
        for j in 0..self.arity {
            // Slots of `b` are sorted, so equal slots are adjacent; try only the first unused copy.
            if self.used[j] || (j > 0 && b[j] == b[j - 1] && !self.used[j - 1]) {
                continue;
            }
            let inter = a[q].intersection(&b[j]);
            let next_empty = if inter.is_empty() {
                if empty_at.is_some() {
                    continue;
                }
                Some(q)
            } else {
                empty_at
            };
            self.used[j] = true;
            self.inter[q] = inter;
            self.union[q] = a[q].union(&b[j]);
            self.dfs(q + 1, next_empty, a, b, out);
            self.used[j] = false;
        }
    }
}
