//! Resource caps and deadlines for exponential operations.

use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Caps applied by expansion, diagram and round-elimination operations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Maximum number of concrete configurations produced by one expansion.
    pub max_expansion: usize,
    /// Largest arity on which `re` runs its universal quantifier.
    pub max_re_arity: usize,
    /// Largest arity on which `rere` runs its universal quantifier.
    pub max_rere_arity: usize,
    /// Largest intermediate antichain kept by the universal quantifier.
    pub max_antichain: usize,
    /// Maximum number of label bijections tried by a bijection search.
    pub max_bijections: u64,
    /// Wall-clock budget in milliseconds; `None` means unbounded.
    pub deadline_ms: Option<u64>,
    /// When the deadline clock started; set by [`Limits::started`].
    #[serde(skip)]
    pub started: Option<Instant>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_expansion: 1_000_000,
            max_re_arity: 6,
            max_rere_arity: 4,
            max_antichain: 200_000,
            max_bijections: 10_000_000,
            deadline_ms: None,
            started: None,
        }
    }
}

impl Limits {
    /// Starts the deadline clock; further calls keep the first start time.
    pub fn started(mut self) -> Self {
        if self.started.is_none() {
            self.started = Some(Instant::now());
        }
        self
    }

    pub fn with_deadline(mut self, d: Duration) -> Self {
        self.deadline_ms = Some(d.as_millis() as u64);
        self.started = Some(Instant::now());
        self
    }

    /// Fails with [`Error::Deadline`] once the budget is spent.
    pub fn check(&self, partial: impl FnOnce() -> String) -> Result<()> {
        if let (Some(ms), Some(start)) = (self.deadline_ms, self.started) {
            if start.elapsed() > Duration::from_millis(ms) {
                return Err(Error::Deadline { partial: partial() });
            }
        }
        Ok(())
    }

    /// Reads overrides from the `RELIM_CAPS` environment variable, if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var("RELIM_CAPS") {
            Ok(s) if !s.trim().is_empty() => s.parse(),
            _ => Ok(Limits::default()),
        }
    }
}

impl FromStr for Limits {
    type Err = Error;

    /// Parses `key=value` pairs separated by commas, e.g. `expansion=5000,deadline_ms=100`.
    fn from_str(s: &str) -> Result<Self> {
        let mut limits = Limits::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("cap `{part}` is not key=value")))?;
            let n: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("cap `{key}` needs an integer value")))?;
            match key.trim() {
                "expansion" => limits.max_expansion = n as usize,
                "re_arity" => limits.max_re_arity = n as usize,
                "rere_arity" => limits.max_rere_arity = n as usize,
                "antichain" => limits.max_antichain = n as usize,
                "bijections" => limits.max_bijections = n,
                "deadline_ms" => limits.deadline_ms = Some(n),
                other => return Err(Error::invalid(format!("unknown cap `{other}`"))),
            }
        }
        Ok(limits)
    }
}
