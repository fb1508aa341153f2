//! Single steps and sequences of `re` followed by `rere`.

use std::time::Instant;

use serde::Serialize;

use relim_problems::{Error, Limits, Problem, Result};

use crate::ops::{apply_operator, OperatorStats};
use crate::rename::{rename_labels, RenamingPolicy};
use relim_problems::Side;

/// Post-processing applied after each operator of a step.
pub trait StepPolicy {
    /// Short name recorded in traces.
    fn name(&self) -> String;

    /// Transforms the result of `re(input)`; returns the problem and notes for the trace.
    fn after_re(&mut self, input: &Problem, re: Problem, limits: &Limits) -> Result<(Problem, Vec<String>)>;

    /// Transforms the result of `rere(intermediate)`.
    fn after_rere(
        &mut self,
        input: &Problem,
        intermediate: &Problem,
        rere: Problem,
        limits: &Limits,
    ) -> Result<(Problem, Vec<String>)>;
}

/// Applies one renaming policy after `re` and another after `rere`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RenameSteps {
    pub first: RenamingPolicy,
    pub second: RenamingPolicy,
}

impl StepPolicy for RenameSteps {
    fn name(&self) -> String {
        format!("rename({:?}, {:?})", self.first, self.second)
    }

    fn after_re(&mut self, _input: &Problem, re: Problem, _limits: &Limits) -> Result<(Problem, Vec<String>)> {
        Ok((rename_labels(&re, &self.first)?, Vec::new()))
    }

    fn after_rere(
        &mut self,
        _input: &Problem,
        _intermediate: &Problem,
        rere: Problem,
        _limits: &Limits,
    ) -> Result<(Problem, Vec<String>)> {
        Ok((rename_labels(&rere, &self.second)?, Vec::new()))
    }
}

/// Record of one step `input -> intermediate -> output`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepTrace {
    pub index: usize,
    pub policy: String,
    pub input: Problem,
    pub intermediate: Problem,
    pub output: Problem,
    pub re_stats: OperatorStats,
    pub rere_stats: OperatorStats,
    pub notes: Vec<String>,
    pub elapsed_ms: u64,
}

/// Runs `re`, the first policy hook, `rere` and the second hook.
pub fn step(p: &Problem, policy: &mut dyn StepPolicy, limits: &Limits) -> Result<StepTrace> {
    step_at(0, p, policy, limits)
}

fn step_at(index: usize, p: &Problem, policy: &mut dyn StepPolicy, limits: &Limits) -> Result<StepTrace> {
    let start = Instant::now();
    let re = apply_operator(p, Side::Edge, limits)?;
    let (intermediate, mut notes) = policy.after_re(p, re.problem, limits)?;
    let rere = apply_operator(&intermediate, Side::Node, limits)?;
    let (output, more) = policy.after_rere(p, &intermediate, rere.problem, limits)?;
    notes.extend(more);
    notes.extend(re.stats.warnings.iter().cloned());
    notes.extend(rere.stats.warnings.iter().cloned());
    Ok(StepTrace {
        index,
        policy: policy.name(),
        input: p.clone(),
        intermediate,
        output,
        re_stats: re.stats,
        rere_stats: rere.stats,
        notes,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Steps completed by [`run_sequence`], and the error that stopped it early, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceOutcome {
    pub steps: Vec<StepTrace>,
    pub error: Option<Error>,
}

impl SequenceOutcome {
    /// The last problem reached.
    pub fn last<'a>(&'a self, start: &'a Problem) -> &'a Problem {
        self.steps.last().map_or(start, |s| &s.output)
    }
}

/// Runs `k >= 1` steps. A cap, deadline or policy failure stops the sequence
/// and is reported next to the steps already completed.
pub fn run_sequence(p: &Problem, k: usize, policy: &mut dyn StepPolicy, limits: &Limits) -> Result<SequenceOutcome> {
    if k == 0 {
        return Err(Error::Invalid("a sequence needs at least one step".into()));
    }
    let mut steps: Vec<StepTrace> = Vec::with_capacity(k);
    let mut current = p.clone();
    for i in 0..k {
        match step_at(i, &current, policy, limits) {
            Ok(trace) => {
                current = trace.output.clone();
                steps.push(trace);
            }
            Err(e) => return Ok(SequenceOutcome { steps, error: Some(e) }),
        }
    }
    Ok(SequenceOutcome { steps, error: None })
}
