//! Actions on a problem snapshot. The HTTP service and the command line both
//! run actions through [`execute`], so their results are identical.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use relim_family::{
    build_family_problem, build_fixedpoint_variant, label_bound, lifting_bound, lower_bound_length,
    ruling_set_lower_bound, ArbdefectVector, FamilyPolicy, FamilyVector, LiftingKind, LiftingParams,
};
use relim_problems::{
    parse_problem, zero_round_check, Diagram, Error, Limits, PortConstraint, Problem, Result, Side,
};
use relim_roundelim::{
    apply_operator, apply_relaxations, detect_fixed_point, rename_labels, run_sequence, step, Relaxation,
    RenameSteps, RenamingPolicy, StepPolicy,
};
use relim_simulator::{
    arb_colored_ruling_set, build_instance, greedy_arbdefective, mis_by_sweep, reduce_solution_to_family,
    sweep_ruling_set, verify, Instance, InstanceSpec, ReductionInput, RulingSetOutput, Solution, Verdict, VerifyKind,
};

/// The first snapshot of a session.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Initial {
    /// Problem text in the canonical format.
    Text { text: String },
    /// `Π_Δ(z)`.
    Family { delta: usize, z: FamilyVector },
    /// The fixed-point variant of the family at degree `Δ`.
    Variant { delta: usize },
}

impl Initial {
    pub fn problem(&self) -> Result<Problem> {
        match self {
            Initial::Text { text } => parse_problem(text),
            Initial::Family { delta, z } => build_family_problem(*delta, z),
            Initial::Variant { delta } => build_fixedpoint_variant(*delta),
        }
    }
}

/// Policy of a `sequence` action.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SequencePolicy {
    Rename {
        #[serde(default)]
        first: RenamingPolicy,
        #[serde(default)]
        second: RenamingPolicy,
    },
    /// Relax each step onto the next family member; the snapshot must be `Π_Δ(z)`.
    Family { delta: usize, z: FamilyVector },
}

/// A calculator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "calc", rename_all = "kebab-case")]
pub enum Calculation {
    /// Largest `t` such that the `t`-fold prefix of `z` stays within `Δ` colors.
    LowerBound { delta: u64, z: FamilyVector },
    /// The `j`-fold prefix of `z`.
    Prefix { z: FamilyVector, j: u64 },
    RulingSet { delta: u64, alpha: u64, c: u64, beta: u64 },
    Lifting {
        which: LiftingKind,
        #[serde(flatten)]
        params: LiftingParams,
    },
}

/// A distributed algorithm run by `simulate`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "kebab-case")]
pub enum Algorithm {
    GreedyArbdefective { defects: ArbdefectVector },
    SweepRulingSet {
        beta: u32,
        #[serde(default)]
        schedule: Option<Vec<u32>>,
    },
    Mis,
    ArbColoredRulingSet { alpha: u32, c: u32, beta: u32 },
}

/// The property checked by `verify`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Check {
    /// Against the current snapshot.
    Labeling,
    /// Against `Π_Δ(z)`.
    FamilyLabeling { delta: usize, z: FamilyVector },
    Arbdefective { defects: ArbdefectVector },
    Ruling { alpha: u32, c: u32, beta: u32 },
}

/// An instance given explicitly or by a generator spec.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceInput {
    Spec(InstanceSpec),
    Instance(Instance),
}

impl InstanceInput {
    pub fn instance(&self) -> Result<Instance> {
        match self {
            InstanceInput::Spec(s) => build_instance(s),
            InstanceInput::Instance(i) => Ok(i.clone()),
        }
    }
}

/// One action of a session history.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Action {
    Parse {
        text: String,
    },
    Re,
    Rere,
    Step {
        #[serde(default)]
        first: RenamingPolicy,
        #[serde(default)]
        second: RenamingPolicy,
    },
    Rename {
        policy: RenamingPolicy,
    },
    Relax {
        actions: Vec<Relaxation>,
    },
    FixedPointCheck {
        #[serde(default)]
        first: RenamingPolicy,
        #[serde(default)]
        second: RenamingPolicy,
    },
    FamilyBuild {
        delta: usize,
        #[serde(default)]
        z: Option<FamilyVector>,
    },
    Sequence {
        k: usize,
        policy: SequencePolicy,
    },
    Diagram {
        side: Side,
    },
    ZeroRound,
    Calculate {
        #[serde(flatten)]
        calc: Calculation,
    },
    Simulate {
        instance: InstanceInput,
        #[serde(flatten)]
        algorithm: Algorithm,
        /// Also map the solution to a labeling of the matching family problem at this degree.
        #[serde(default)]
        reduce: Option<usize>,
    },
    Verify {
        instance: InstanceInput,
        check: Check,
        solution: Solution,
    },
}

impl Action {
    /// The `op` tag.
    pub fn name(&self) -> &'static str {
        match self {
            Action::Parse { .. } => "parse",
            Action::Re => "re",
            Action::Rere => "rere",
            Action::Step { .. } => "step",
            Action::Rename { .. } => "rename",
            Action::Relax { .. } => "relax",
            Action::FixedPointCheck { .. } => "fixed-point-check",
            Action::FamilyBuild { .. } => "family-build",
            Action::Sequence { .. } => "sequence",
            Action::Diagram { .. } => "diagram",
            Action::ZeroRound => "zero-round",
            Action::Calculate { .. } => "calculate",
            Action::Simulate { .. } => "simulate",
            Action::Verify { .. } => "verify",
        }
    }
}

/// The snapshot after an action and a summary of what it computed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionResult {
    pub op: String,
    pub snapshot: Problem,
    pub summary: Value,
}

fn sizes(p: &Problem) -> Value {
    json!({ "labels": p.label_count(), "node_configs": p.nodes().len(), "edge_configs": p.edges().len() })
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("summaries serialize")
}

/// Runs `action` on `current`. Summaries contain no timings, so equal inputs give equal results.
pub fn execute(action: &Action, current: &Problem, limits: &Limits) -> Result<ActionResult> {
    let (snapshot, summary) = match action {
        Action::Parse { text } => {
            let p = parse_problem(text)?;
            let s = sizes(&p);
            (p, s)
        }
        Action::Re | Action::Rere => {
            let side = if matches!(action, Action::Re) { Side::Edge } else { Side::Node };
            let out = apply_operator(current, side, limits)?;
            let s = json!({ "sizes": sizes(&out.problem), "stats": to_value(&out.stats) });
            (out.problem, s)
        }
        Action::Step { first, second } => {
            let mut policy = RenameSteps { first: first.clone(), second: second.clone() };
            let trace = step(current, &mut policy, limits)?;
            let fixed = trace.output.same_concrete(current, limits)?;
            let s = json!({
                "fixed_point": fixed,
                "intermediate": trace.intermediate,
                "sizes": sizes(&trace.output),
                "re_stats": to_value(&trace.re_stats),
                "rere_stats": to_value(&trace.rere_stats),
                "notes": trace.notes,
            });
            (trace.output, s)
        }
        Action::Rename { policy } => {
            let p = rename_labels(current, policy)?;
            let s = json!({ "before": sizes(current), "after": sizes(&p) });
            (p, s)
        }
        Action::Relax { actions } => {
            let p = apply_relaxations(current, actions, limits)?;
            let applied: Vec<String> = actions.iter().map(ToString::to_string).collect();
            let s = json!({ "applied": applied, "sizes": sizes(&p) });
            (p, s)
        }
        Action::FixedPointCheck { first, second } => {
            let r = detect_fixed_point(current, first, second, limits)?;
            let s = json!({
                "is_fixed_point": r.is_fixed_point,
                "equality": r.equality,
                "bijection": r.bijection,
                "intermediate": r.trace.intermediate,
                "output": r.trace.output,
            });
            (current.clone(), s)
        }
        Action::FamilyBuild { delta, z } => {
            let (p, z_value) = match z {
                Some(z) => (build_family_problem(*delta, z)?, to_value(z)),
                None => (build_fixedpoint_variant(*delta)?, Value::Null),
            };
            let beta = z.as_ref().map_or(0, FamilyVector::beta);
            let s = json!({
                "delta": delta,
                "z": z_value,
                "sizes": sizes(&p),
                "label_bound": label_bound(*delta, beta).to_string(),
            });
            (p, s)
        }
        Action::Sequence { k, policy } => sequence(current, *k, policy, limits)?,
        Action::Diagram { side } => {
            let d = Diagram::compute(current, *side, limits)?;
            (current.clone(), to_value(d.view()))
        }
        Action::ZeroRound => {
            let r = zero_round_check(current, &PortConstraint::Unconstrained, limits)?;
            (current.clone(), to_value(r))
        }
        Action::Calculate { calc } => (current.clone(), calculate(calc)?),
        Action::Simulate { instance, algorithm, reduce } => {
            (current.clone(), simulate(&instance.instance()?, algorithm, *reduce, limits)?)
        }
        Action::Verify { instance, check, solution } => {
            let inst = instance.instance()?;
            let kind = match check {
                Check::Labeling => VerifyKind::Labeling { problem: current.clone() },
                Check::FamilyLabeling { delta, z } => {
                    VerifyKind::Labeling { problem: build_family_problem(*delta, z)? }
                }
                Check::Arbdefective { defects } => VerifyKind::Arbdefective { defects: defects.clone() },
                Check::Ruling { alpha, c, beta } => VerifyKind::Ruling { alpha: *alpha, c: *c, beta: *beta },
            };
            (current.clone(), to_value(verify(&kind, &inst, solution)))
        }
    };
    Ok(ActionResult { op: action.name().into(), snapshot, summary })
}

fn sequence(current: &Problem, k: usize, policy: &SequencePolicy, limits: &Limits) -> Result<(Problem, Value)> {
    let mut rename;
    let mut family;
    let policy: &mut dyn StepPolicy = match policy {
        SequencePolicy::Rename { first, second } => {
            rename = RenameSteps { first: first.clone(), second: second.clone() };
            &mut rename
        }
        SequencePolicy::Family { delta, z } => {
            let expected = build_family_problem(*delta, z)?;
            if !expected.same_concrete(current, limits)? {
                return Err(Error::Invalid(format!("the snapshot is not the family problem for Δ = {delta}, z = {z}")));
            }
            family = FamilyPolicy::new(*delta, z.clone())?;
            &mut family
        }
    };
    let outcome = run_sequence(current, k, policy, limits)?;
    let steps: Vec<Value> = outcome
        .steps
        .iter()
        .map(|t| {
            json!({
                "index": t.index,
                "sizes": sizes(&t.output),
                "intermediate_labels": t.intermediate.label_count(),
                "notes": t.notes,
            })
        })
        .collect();
    let error = outcome.error.as_ref().map(|e| json!({ "code": error_code(e), "message": e.to_string() }));
    let last = outcome.last(current).clone();
    Ok((last, json!({ "completed": outcome.steps.len(), "requested": k, "steps": steps, "error": error })))
}

fn calculate(calc: &Calculation) -> Result<Value> {
    Ok(match calc {
        Calculation::LowerBound { delta, z } => {
            let r = lower_bound_length(*delta, z);
            json!({ "length": r.length, "display": r.length.to_string(), "warnings": r.warnings })
        }
        Calculation::Prefix { z, j } => {
            let v: Vec<String> = relim_family::calc::prefix_iter_big(z, *j).iter().map(ToString::to_string).collect();
            json!({ "z": z, "j": j, "prefix": v })
        }
        Calculation::RulingSet { delta, alpha, c, beta } => {
            let r = ruling_set_lower_bound(*delta, *alpha, *c, *beta)?;
            json!({ "t": r.t, "display": r.t.to_string(), "reduced": r.reduced, "warnings": r.warnings })
        }
        Calculation::Lifting { which, params } => to_value(lifting_bound(params, *which)?),
    })
}

fn ruling_from_members(members: Vec<usize>, beta: u32, rounds: usize) -> RulingSetOutput {
    let k = members.len();
    RulingSetOutput { members, colors: vec![0; k], orientation: Vec::new(), alpha: 0, c: 1, beta, rounds }
}

fn simulate(inst: &Instance, algorithm: &Algorithm, reduce: Option<usize>, limits: &Limits) -> Result<Value> {
    limits.check(|| "before the simulation".into())?;
    let (solution, kind, rounds, reduction) = match algorithm {
        Algorithm::GreedyArbdefective { defects } => {
            let out = greedy_arbdefective(inst, defects)?;
            let input = ReductionInput::Arbdefective { defects: defects.clone(), solution: out.output.clone() };
            (
                Solution::Arbdefective(out.output),
                VerifyKind::Arbdefective { defects: defects.clone() },
                out.rounds,
                input,
            )
        }
        Algorithm::SweepRulingSet { beta, schedule } => {
            let out = sweep_ruling_set(inst, *beta, schedule.clone())?;
            let sol = ruling_from_members(out.output, *beta, out.rounds);
            let kind = VerifyKind::Ruling { alpha: 0, c: 1, beta: *beta };
            (Solution::Ruling(sol.clone()), kind, out.rounds, ReductionInput::Ruling { solution: sol })
        }
        Algorithm::Mis => {
            let sol = mis_by_sweep(inst)?;
            let rounds = sol.rounds;
            let kind = VerifyKind::Ruling { alpha: 0, c: 1, beta: 1 };
            (Solution::Ruling(sol.clone()), kind, rounds, ReductionInput::Ruling { solution: sol })
        }
        Algorithm::ArbColoredRulingSet { alpha, c, beta } => {
            let sol = arb_colored_ruling_set(inst, *alpha, *c, *beta)?;
            let rounds = sol.rounds;
            let kind = VerifyKind::Ruling { alpha: *alpha, c: *c, beta: *beta };
            (Solution::Ruling(sol.clone()), kind, rounds, ReductionInput::Ruling { solution: sol })
        }
    };
    let verdict: Verdict = verify(&kind, inst, &solution);
    let reduced = match reduce {
        None => Value::Null,
        Some(delta) => {
            let labeling = reduce_solution_to_family(inst, delta, &reduction)?;
            let problem = build_family_problem(delta, &labeling.z)?;
            let verdict = relim_simulator::verify_labeling(inst, &problem, &labeling.labeling);
            json!({ "family": labeling, "verdict": verdict })
        }
    };
    Ok(json!({
        "instance": { "nodes": inst.node_count(), "edges": inst.edges().len(), "max_degree": inst.max_degree() },
        "rounds": rounds,
        "solution": solution,
        "verdict": verdict,
        "reduction": reduced,
    }))
}

/// Stable error code of an engine error.
pub fn error_code(e: &Error) -> &'static str {
    match e {
        Error::Syntax { .. } => "parse_error",
        Error::Arity { .. } => "arity",
        Error::UnknownLabel(_) => "unknown_label",
        Error::Cap { .. } => "cap_exceeded",
        Error::Deadline { .. } => "deadline_exceeded",
        Error::Unsupported(_) => "unsupported",
        Error::Invalid(_) => "invalid",
    }
}

/// Pretty JSON with a trailing newline; every JSON body of the service and the command line goes through here.
pub fn render_json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
