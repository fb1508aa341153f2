//! A step policy that follows the family: each step from `Π_Δ(z)` ends at `Π_Δ(prefix(z))`.

use relim_problems::{Error, Limits, Problem, Result};
use relim_roundelim::StepPolicy;

use crate::build::Family;
use crate::intermediate::{require_hypothesis, StarOracle};
use crate::law::star_relaxation_failures;
use crate::vector::FamilyVector;

/// Replaces `rere(re(Π_Δ(z)))` by its relaxation `Π_Δ(prefix(z))` after
/// checking that the engine output relaxes into `N*`.
#[derive(Clone, Debug)]
pub struct FamilyPolicy {
    delta: usize,
    z: FamilyVector,
}

impl FamilyPolicy {
    pub fn new(delta: usize, z: FamilyVector) -> Result<FamilyPolicy> {
        Family::new(delta, z.clone())?;
        Ok(FamilyPolicy { delta, z })
    }

    /// The vector of the problem the next step starts from.
    pub fn z(&self) -> &FamilyVector {
        &self.z
    }

    fn family(&self) -> Result<Family> {
        Family::new(self.delta, self.z.clone())
    }
}

impl StepPolicy for FamilyPolicy {
    fn name(&self) -> String {
        format!("family(Δ={}, z={})", self.delta, self.z)
    }

    fn after_re(&mut self, input: &Problem, re: Problem, limits: &Limits) -> Result<(Problem, Vec<String>)> {
        let expected = self.family()?.problem()?;
        let same = input.labels() == expected.labels()
            && input.nodes().same_concrete(expected.nodes(), limits)?
            && input.edges().same_concrete(expected.edges(), limits)?;
        if !same {
            return Err(Error::Invalid(format!(
                "the input of this step is not Π_{}({})",
                self.delta, self.z
            )));
        }
        require_hypothesis(self.delta, &self.z)?;
        Ok((re, vec![format!("input is Π_{}({})", self.delta, self.z)]))
    }

    fn after_rere(
        &mut self,
        _input: &Problem,
        _intermediate: &Problem,
        rere: Problem,
        limits: &Limits,
    ) -> Result<(Problem, Vec<String>)> {
        let star = StarOracle::new(self.family()?)?;
        let failures = star_relaxation_failures(&star, &rere, limits)?;
        if let Some(first) = failures.first() {
            return Err(Error::Invalid(format!(
                "{} node configurations of rere do not relax into N*, e.g. {first}",
                failures.len()
            )));
        }
        let next = self.z.prefix()?;
        let out = Family::new(self.delta, next.clone())?.problem()?;
        let note = format!(
            "relaxed {} labels to Π_{}({next}) with {} labels",
            rere.label_count(),
            self.delta,
            out.label_count()
        );
        self.z = next;
        Ok((out, vec![note]))
    }
}
