//! Lower-bound lengths and lifting bounds.
//!
//! Sequence lengths use exact arbitrary-precision integers. Lifting bounds
//! are evaluated in natural-log space, since they span far more orders of
//! magnitude than a double can hold.

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use relim_problems::{Error, Result};

use crate::vector::FamilyVector;

/// Iteration cap of [`lower_bound_length`] before it reports [`Length::CapHit`].
pub const PREFIX_ITERATION_CAP: u64 = 1_000_000;

/// A sequence length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Length {
    Finite { t: u64 },
    /// The condition holds for every `t`.
    Infinite,
    /// The condition still held after the iteration cap.
    CapHit { iterations: u64 },
    /// The condition fails already at `t = 0`.
    Unsatisfied,
}

impl std::fmt::Display for Length {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Length::Finite { t } => write!(f, "{t}"),
            Length::Infinite => f.write_str("infinity"),
            Length::CapHit { iterations } => write!(f, "at least {iterations} (iteration cap)"),
            Length::Unsatisfied => f.write_str("none"),
        }
    }
}

/// A length together with warnings about the parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthResult {
    pub length: Length,
    pub warnings: Vec<String>,
}

/// Inclusive prefix sums over arbitrary-precision entries.
pub fn prefix_big(v: &[BigUint]) -> Vec<BigUint> {
    let mut acc = BigUint::zero();
    v.iter()
        .map(|e| {
            acc += e;
            acc.clone()
        })
        .collect()
}

/// `prefix^j(z)` over arbitrary-precision entries.
pub fn prefix_iter_big(z: &FamilyVector, j: u64) -> Vec<BigUint> {
    let mut v: Vec<BigUint> = z.entries().iter().map(|&e| BigUint::from(e)).collect();
    for _ in 0..j {
        let next = prefix_big(&v);
        if next == v {
            break;
        }
        v = next;
    }
    v
}

fn beta_warning(delta: u64, beta: usize) -> Option<String> {
    let limit = if delta >= 64 { u64::MAX } else { 1u64 << delta };
    (beta as u64 > limit).then(|| format!("len(z) = {beta} exceeds 2^Δ; the label-count bound of the sequence no longer applies"))
}

/// Largest `t` with `|prefix^t(z)| ≤ Δ` when `len(z) = 0`, and `|prefix^t(z)| < Δ` otherwise.
pub fn lower_bound_length(delta: u64, z: &FamilyVector) -> LengthResult {
    let warnings: Vec<String> = beta_warning(delta, z.beta()).into_iter().collect();
    let bound = BigUint::from(delta);
    let holds = |v: &[BigUint]| {
        let size: BigUint = v.iter().sum();
        if z.beta() == 0 {
            size <= bound
        } else {
            size < bound
        }
    };
    let mut v: Vec<BigUint> = z.entries().iter().map(|&e| BigUint::from(e)).collect();
    let mut t = 0u64;
    let length = loop {
        if !holds(&v) {
            break if t == 0 { Length::Unsatisfied } else { Length::Finite { t: t - 1 } };
        }
        let next = prefix_big(&v);
        if next == v {
            break Length::Infinite;
        }
        if t == PREFIX_ITERATION_CAP {
            break Length::CapHit { iterations: t };
        }
        v = next;
        t += 1;
    };
    LengthResult { length, warnings }
}

/// Result of [`ruling_set_lower_bound`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RulingBound {
    /// Largest `t` with `c(α+1) · C(t+β, β) < Δ`.
    pub t: Length,
    /// `t - β`, the bound for the ruling-set problem itself, when `t` is finite.
    pub reduced: Option<i64>,
    pub warnings: Vec<String>,
}

/// Largest `t` with `C(t+β, β) < Δ / (c(α+1))`, by exact binomials and binary search.
pub fn ruling_set_lower_bound(delta: u64, alpha: u64, c: u64, beta: u64) -> Result<RulingBound> {
    if c == 0 {
        return Err(Error::Invalid("the number of colors c must be positive".into()));
    }
    let mut warnings: Vec<String> = beta_warning(delta, beta as usize).into_iter().collect();
    let k = BigUint::from(c) * BigUint::from(alpha + 1);
    let d = BigUint::from(delta);
    let holds = |t: u64| -> bool {
        let n = BigUint::from(t) + BigUint::from(beta);
        &k * binomial(n, BigUint::from(beta)) < d
    };
    let t = if !holds(0) {
        Length::Unsatisfied
    } else if beta == 0 {
        Length::Infinite
    } else {
        // C(t+β, β) ≥ t+1 for β ≥ 1, so the condition fails at t = Δ.
        let (mut lo, mut hi) = (0u64, 1u64);
        while holds(hi) {
            lo = hi;
            hi = hi.saturating_mul(2).min(delta);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if holds(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Length::Finite { t: lo }
    };
    let reduced = match t {
        Length::Finite { t } => Some(t as i64 - beta as i64),
        _ => None,
    };
    if matches!(reduced, Some(r) if r <= 0) {
        warnings.push("t - β is not positive; the bound is vacuous".into());
    }
    Ok(RulingBound { t, reduced, warnings })
}

/// `C(n, k)` exactly.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    if k == 0 {
        return BigUint::one();
    }
    binomial(BigUint::from(n), BigUint::from(k))
}

/// The lifting formulas that [`lifting_bound`] evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiftingKind {
    /// Failure probability after one operator, given failure probability `p`.
    SingleStep,
    /// Failure probability after `j` steps.
    MultiStep,
    /// Failure probability forced on zero-round algorithms.
    ZeroRound,
    /// Failure probability forced on algorithms faster than `t` rounds.
    PnLower,
    /// Randomized round threshold `(1/10)(log_Δ log n - log_Δ log f)`.
    Threshold,
    /// Deterministic round bound `min(t, log_Δ n - log_Δ log f)`.
    Deterministic,
}

impl std::str::FromStr for LiftingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "single-step" => LiftingKind::SingleStep,
            "multi-step" => LiftingKind::MultiStep,
            "zero-round" => LiftingKind::ZeroRound,
            "pn-lower" => LiftingKind::PnLower,
            "threshold" => LiftingKind::Threshold,
            "deterministic" => LiftingKind::Deterministic,
            _ => {
                return Err(Error::Invalid(format!(
                    "unknown lifting formula `{s}` (expected single-step, multi-step, zero-round, pn-lower, threshold or deterministic)"
                )))
            }
        })
    }
}

/// Parameters of the lifting formulas; each formula reads the ones it needs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LiftingParams {
    /// Degree `Δ`.
    pub delta: u64,
    /// Label-count bound `f(Δ)`.
    pub f: f64,
    /// Local failure probability.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Number of steps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<u64>,
    /// Number of rounds; `None` stands for an unbounded sequence where allowed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    /// Number of nodes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<f64>,
}

/// A calculator result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalcRecord<P> {
    pub params: P,
    pub which: String,
    /// The value as a double; may underflow to zero or overflow to infinity.
    pub value: f64,
    /// Natural logarithm of the value for probability bounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ln_value: Option<f64>,
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn need<T: Copy>(v: Option<T>, name: &str, which: LiftingKind) -> Result<T> {
    v.ok_or_else(|| Error::Invalid(format!("{which:?} needs parameter `{name}`")))
}

fn probability(p: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(Error::Invalid(format!("p = {p} is not a probability")))
    }
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// `ln` of `p_k = (2Δf) p_{k-1}^{1/(Δ+1)}` for `k = 0..=steps`, starting at `p_0 = p`.
pub fn multi_step_chain(delta: u64, f: f64, p: f64, steps: u64) -> Vec<f64> {
    let d = delta as f64;
    let step = (2.0 * d * f).ln();
    let mut out = vec![p.ln()];
    for _ in 0..steps {
        let prev = *out.last().expect("chain is nonempty");
        out.push(step + prev / (d + 1.0));
    }
    out
}

/// Evaluates one lifting formula.
pub fn lifting_bound(params: &LiftingParams, which: LiftingKind) -> Result<CalcRecord<LiftingParams>> {
    if params.delta < 2 {
        return Err(Error::Invalid(format!("Δ = {} must be at least 2", params.delta)));
    }
    if params.f.is_nan() || params.f < 1.0 {
        return Err(Error::Invalid(format!("f(Δ) = {} must be at least 1", params.f)));
    }
    let d = params.delta as f64;
    let f = params.f;
    let mut warnings = Vec::new();
    let (value, ln_value) = match which {
        LiftingKind::SingleStep => {
            let p = probability(need(params.p, "p", which)?)?;
            let ln_a = (2f64.ln() + d * (d * f).ln() + p.ln()) / (d + 1.0);
            let ln = log_add_exp(ln_a, p.ln());
            (ln.exp(), Some(ln))
        }
        LiftingKind::MultiStep => {
            let p = probability(need(params.p, "p", which)?)?;
            let j = need(params.j, "j", which)?;
            let ln = if j == 0 {
                p.ln()
            } else {
                2.0 * (2.0 * d * f).ln() + p.ln() / (d + 1.0).powf(2.0 * j as f64)
            };
            (ln.exp(), Some(ln))
        }
        LiftingKind::ZeroRound => {
            let ln = -(3.0 * d * d * d.ln() + d * d * f.ln());
            (ln.exp(), Some(ln))
        }
        LiftingKind::PnLower => {
            let t = need(params.t, "t", which)?;
            if t < 0.0 {
                return Err(Error::Invalid(format!("t = {t} must be nonnegative")));
            }
            let ln = -(d.powf(10.0 * t) * f.ln());
            (ln.exp(), Some(ln))
        }
        LiftingKind::Threshold => {
            let n = need(params.n, "n", which)?;
            if n <= 1.0 {
                return Err(Error::Invalid(format!("log log n is undefined for n = {n}")));
            }
            if f <= 1.0 {
                return Err(Error::Invalid(format!("log log f(Δ) is undefined for f(Δ) = {f}")));
            }
            let v = 0.1 * (n.ln().ln() - f.ln().ln()) / d.ln();
            if v <= 0.0 {
                warnings.push("the threshold is not positive; n is too small for the label count".into());
            }
            (v, None)
        }
        LiftingKind::Deterministic => {
            let n = need(params.n, "n", which)?;
            if n < 1.0 {
                return Err(Error::Invalid(format!("log n is undefined for n = {n}")));
            }
            if f <= 1.0 {
                return Err(Error::Invalid(format!("log log f(Δ) is undefined for f(Δ) = {f}")));
            }
            let v = (n.ln() - f.ln().ln()) / d.ln();
            let v = match params.t {
                Some(t) => v.min(t),
                None => v,
            };
            (v, None)
        }
    };
    Ok(CalcRecord {
        params: params.clone(),
        which: serde_name(which),
        value,
        ln_value,
        exact: false,
        warnings,
    })
}

fn serde_name(which: LiftingKind) -> String {
    match which {
        LiftingKind::SingleStep => "single-step",
        LiftingKind::MultiStep => "multi-step",
        LiftingKind::ZeroRound => "zero-round",
        LiftingKind::PnLower => "pn-lower",
        LiftingKind::Threshold => "threshold",
        LiftingKind::Deterministic => "deterministic",
    }
    .into()
}

/// Converts a length to a calculator record value: the integer, or infinity.
pub fn length_value(l: &Length) -> f64 {
    match l {
        Length::Finite { t } => *t as f64,
        Length::Infinite => f64::INFINITY,
        Length::CapHit { iterations } => *iterations as f64,
        Length::Unsatisfied => f64::NAN,
    }
}

/// Exact small binomials as `u128`, for callers that need machine integers.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    binomial_big(n, k).to_u128()
}
