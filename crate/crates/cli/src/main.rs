//! `relim`: batch access to every operation of the HTTP service.
//!
//! Problem-valued commands print the canonical problem text, or with `--json`
//! the `ActionResult` that `POST /run` returns for the same input. Calculators
//! and simulations print the `summary` of that result.

mod args;

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use serde_json::{json, Value};

use relim_family::{check_one_step, project_intermediate_labeling, FamilyVector, LiftingParams};
use relim_problems::{format_problem, Error, Label, Limits};
use relim_roundelim::RenamingPolicy;
use relim_service::{
    execute, render_json, Action, ActionResult, Algorithm, ApiError, Calculation, Check, Config, Initial,
    InstanceInput, DEFAULT_DEADLINE,
};
use relim_simulator::{
    build_instance, reduce_solution_to_family, ArbdefectiveColoring, ColoringSpec, GraphSpec, Instance,
    InstanceSpec, PortSpec, ReductionInput, RulingSetOutput, Solution,
};

use args::{
    AlgorithmKind, CalcCommand, Cli, Command, FamilyCommand, GraphKind, PortKind, ProblemArgs, Renaming,
    RulingParams, ServeArgs, SimCommand, SolutionKind,
};

/// Snapshot for actions that do not read one.
const PLACEHOLDER: &str = "nodes: A^2 ; edges: A^2";

enum Failure {
    /// Bad arguments or missing inputs.
    Usage(String),
    Engine(Error),
    /// A verifier rejected a solution; the report is already printed.
    Rejected,
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Engine(e)
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    json: bool,
    limits: Limits,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Engine(e)) => {
            let code = if matches!(e, Error::Cap { .. } | Error::Deadline { .. }) { 3 } else { 1 };
            if json {
                eprint!("{}", render_json(&ApiError::from(e).body()));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code)
        }
    }
}

fn limits(cli: &Cli) -> Result<Limits, Failure> {
    let mut limits = match &cli.caps {
        Some(caps) if !caps.trim().is_empty() => {
            caps.parse::<Limits>().map_err(|e| Failure::Usage(format!("bad caps: {e}")))?
        }
        _ => Limits::default(),
    };
    if cli.deadline_ms.is_some() {
        limits.deadline_ms = cli.deadline_ms;
    }
    Ok(limits)
}

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx { json: cli.json, limits: limits(&cli)? };
    match cli.command {
        Command::Parse(p) => {
            let text = read_problem_text(&p)?;
            problem_action(&ctx, Initial::Text { text: text.clone() }, Action::Parse { text })
        }
        Command::Re(p) => problem_action(&ctx, initial(&p)?, Action::Re),
        Command::Rere(p) => problem_action(&ctx, initial(&p)?, Action::Rere),
        Command::Step { problem, renaming } => {
            let (first, second) = policies(&problem, &renaming);
            problem_action(&ctx, initial(&problem)?, Action::Step { first, second })
        }
        Command::Relax { problem, merges, actions } => {
            let actions: Vec<_> = merges.into_iter().chain(actions).collect();
            if actions.is_empty() {
                return Err(Failure::Usage("give at least one --merge or --action".into()));
            }
            problem_action(&ctx, initial(&problem)?, Action::Relax { actions })
        }
        Command::Diagram { problem, side } => {
            let result = perform(&ctx, &initial(&problem)?, &Action::Diagram { side })?;
            print_result(&ctx, &result, || diagram_text(&result.summary))
        }
        Command::Fixedpoint { problem, renaming } => {
            let (first, second) = policies(&problem, &renaming);
            let result = perform(&ctx, &initial(&problem)?, &Action::FixedPointCheck { first, second })?;
            let yes = result.summary["is_fixed_point"] == json!(true);
            print_result(&ctx, &result, || format!("fixed point: {}\n", if yes { "yes" } else { "no" }))
        }
        Command::Family(cmd) => family(&ctx, cmd),
        Command::Calc(CalcCommand::Lifting { kind, delta, f, p, j, t, n }) => {
            let calc = Calculation::Lifting { which: kind, params: LiftingParams { delta, f, p, j, t, n } };
            let summary = summary(&ctx, Action::Calculate { calc })?;
            print_summary(&ctx, &summary, || format!("{}\n", summary["value"]))
        }
        Command::Sim(cmd) => sim(&ctx, cmd),
        Command::Serve(args) => serve(&ctx, args),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("standard input: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))
}

fn from_json<T: serde::de::DeserializeOwned>(path: &Path, v: Value) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))
}

fn write_output(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))
}

fn read_problem_text(p: &ProblemArgs) -> Result<String, Failure> {
    match (&p.input, &p.text) {
        (Some(path), _) => read_input(path),
        (None, Some(text)) => Ok(text.clone()),
        _ => Err(Failure::Usage("expected problem text".into())),
    }
}

fn initial(p: &ProblemArgs) -> Result<Initial, Failure> {
    if let Some(v) = &p.family {
        let delta = v[0].parse().map_err(|_| Failure::Usage(format!("bad degree `{}`", v[0])))?;
        let z: FamilyVector = v[1].parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
        return Ok(Initial::Family { delta, z });
    }
    if let Some(delta) = p.variant {
        return Ok(Initial::Variant { delta });
    }
    Ok(Initial::Text { text: read_problem_text(p)? })
}

/// Family problems default to the union/intersection renaming, other problems to keeping labels.
fn policies(p: &ProblemArgs, r: &Renaming) -> (RenamingPolicy, RenamingPolicy) {
    let family = p.family.is_some() || p.variant.is_some();
    let (first, second) =
        if family { (RenamingPolicy::Union, RenamingPolicy::Intersection) } else { Default::default() };
    (r.first.clone().unwrap_or(first), r.second.clone().unwrap_or(second))
}

fn perform(ctx: &Ctx, initial: &Initial, action: &Action) -> Result<ActionResult, Failure> {
    let limits = ctx.limits.clone().started();
    let p = initial.problem()?;
    Ok(execute(action, &p, &limits)?)
}

fn summary(ctx: &Ctx, action: Action) -> Result<Value, Failure> {
    let initial = Initial::Text { text: PLACEHOLDER.into() };
    Ok(perform(ctx, &initial, &action)?.summary)
}

fn emit(text: &str) -> Outcome {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).and_then(|()| out.flush()).map_err(|e| Failure::Other(e.to_string()))
}

fn print_result(ctx: &Ctx, result: &ActionResult, text: impl FnOnce() -> String) -> Outcome {
    emit(&if ctx.json { render_json(result) } else { text() })
}

fn print_summary(ctx: &Ctx, summary: &Value, text: impl FnOnce() -> String) -> Outcome {
    emit(&if ctx.json { render_json(summary) } else { text() })
}

fn problem_action(ctx: &Ctx, initial: Initial, action: Action) -> Outcome {
    let result = perform(ctx, &initial, &action)?;
    print_result(ctx, &result, || format_problem(&result.snapshot))
}

fn label_text(v: &Value) -> String {
    v.as_str().map_or_else(|| v.to_string(), str::to_string)
}

fn diagram_text(view: &Value) -> String {
    let mut out = String::new();
    for class in view["equal"].as_array().into_iter().flatten() {
        let names: Vec<String> = class.as_array().into_iter().flatten().map(label_text).collect();
        out.push_str(&format!("{}\n", names.join(" = ")));
    }
    for edge in view["edges"].as_array().into_iter().flatten() {
        out.push_str(&format!("{} -> {}\n", label_text(&edge[0]), label_text(&edge[1])));
    }
    if view["exact"] == json!(false) {
        out.push_str("(approximate: the constraint was too large to expand)\n");
    }
    out
}

fn family(ctx: &Ctx, cmd: FamilyCommand) -> Outcome {
    match cmd {
        FamilyCommand::Build { delta, z } => {
            let initial = match &z {
                Some(z) => Initial::Family { delta, z: z.clone() },
                None => Initial::Variant { delta },
            };
            problem_action(ctx, initial, Action::FamilyBuild { delta, z })
        }
        FamilyCommand::Prefix { z, j } => {
            let s = summary(ctx, Action::Calculate { calc: Calculation::Prefix { z, j } })?;
            let parts: Vec<String> = s["prefix"].as_array().into_iter().flatten().map(label_text).collect();
            print_summary(ctx, &s, || format!("[{}]\n", parts.join(",")))
        }
        FamilyCommand::Lowerbound { delta, z } => {
            let s = summary(ctx, Action::Calculate { calc: Calculation::LowerBound { delta, z } })?;
            for w in s["warnings"].as_array().into_iter().flatten() {
                eprintln!("warning: {}", label_text(w));
            }
            print_summary(ctx, &s, || format!("{}\n", label_text(&s["display"])))
        }
        FamilyCommand::Oracle { delta, z } => {
            let limits = ctx.limits.clone().started();
            let report = check_one_step(delta, &z, &limits)?;
            let passed = report.passed();
            if ctx.json {
                emit(&render_json(&report))?;
            } else {
                let mut out = format!("one-step law for delta {delta}, z {z}: {}\n", if passed { "pass" } else { "fail" });
                out.push_str(&format!(
                    "re labels/edges/nodes match: {}/{}/{}\n",
                    report.re_labels_match, report.re_edges_match, report.re_nodes_match
                ));
                out.push_str(&format!("rere node configurations: {}\n", report.rere_node_configs));
                for f in report.star_relaxation_failures.iter().chain(&report.estar_mismatches).chain(&report.projection_violations) {
                    out.push_str(&format!("  {f}\n"));
                }
                emit(&out)?;
            }
            if passed {
                Ok(())
            } else {
                Err(Failure::Rejected)
            }
        }
        FamilyCommand::Project { delta, z, labeling } => {
            let v = read_json(&labeling)?;
            let v = if v.get("labels").is_some() { v["labels"].clone() } else { v };
            let labels: Vec<Vec<Label>> = from_json(&labeling, v)?;
            let projected = project_intermediate_labeling(delta, &z, &labels)?;
            emit(&render_json(&json!({ "labels": projected })))
        }
    }
}

fn instance(path: &Path) -> Result<Instance, Failure> {
    let input: InstanceInput = from_json(path, read_json(path)?)?;
    Ok(input.instance()?)
}

fn instance_input(path: &Path) -> Result<InstanceInput, Failure> {
    from_json(path, read_json(path)?)
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required here")))
}

fn ruling_triple(r: &RulingParams) -> Result<(u32, u32, u32), Failure> {
    Ok((need(r.alpha, "alpha")?, need(r.c, "c")?, need(r.beta, "beta")?))
}

fn verdict_ok(v: &Value) -> bool {
    v["ok"] == json!(true)
}

fn report_violations(v: &Value) {
    for line in v["violations"].as_array().into_iter().flatten() {
        eprintln!("violation: {}", label_text(line));
    }
}

fn sim(ctx: &Ctx, cmd: SimCommand) -> Outcome {
    match cmd {
        SimCommand::Build { spec, graph, delta, depth, n, ports, proper, arbdefective, seed, out } => {
            let spec: InstanceSpec = match spec {
                Some(path) => from_json(&path, read_json(&path)?)?,
                None => InstanceSpec {
                    graph: match graph {
                        GraphKind::RegularTree => GraphSpec::RegularTree { delta, depth },
                        GraphKind::RandomTree => GraphSpec::RandomTree { delta, n },
                    },
                    ports: match ports {
                        PortKind::Random => PortSpec::Random,
                        PortKind::EdgeColoring => PortSpec::EdgeColoring,
                    },
                    coloring: match (proper, arbdefective) {
                        (Some(m), _) => ColoringSpec::Proper { m },
                        (None, Some(v)) => ColoringSpec::Arbdefective { alpha: v[0], colors: v[1] },
                        (None, None) => ColoringSpec::None,
                    },
                    seed,
                },
            };
            let text = render_json(&build_instance(&spec)?);
            match out {
                Some(path) => write_output(&path, &text),
                None => emit(&text),
            }
        }
        SimCommand::Run { instance, algorithm, defects, ruling, schedule, reduce, out } => {
            let algorithm = match algorithm {
                AlgorithmKind::GreedyArbdefective => {
                    Algorithm::GreedyArbdefective { defects: defects.ok_or_else(|| Failure::Usage("--defects is required here".into()))? }
                }
                AlgorithmKind::SweepRulingSet => {
                    Algorithm::SweepRulingSet { beta: need(ruling.beta, "beta")?, schedule }
                }
                AlgorithmKind::Mis => Algorithm::Mis,
                AlgorithmKind::ArbColoredRulingSet => {
                    let (alpha, c, beta) = ruling_triple(&ruling)?;
                    Algorithm::ArbColoredRulingSet { alpha, c, beta }
                }
            };
            let action = Action::Simulate { instance: instance_input(&instance)?, algorithm, reduce };
            let s = summary(ctx, action)?;
            if let Some(path) = out {
                write_output(&path, &render_json(&s["solution"]))?;
            }
            let ok = verdict_ok(&s["verdict"]) && (s["reduction"].is_null() || verdict_ok(&s["reduction"]["verdict"]));
            print_summary(ctx, &s, || {
                let mut text = format!("rounds: {}\nverdict: {}\n", s["rounds"], if verdict_ok(&s["verdict"]) { "ok" } else { "rejected" });
                if !s["reduction"].is_null() {
                    let r = &s["reduction"];
                    let verdict = if verdict_ok(&r["verdict"]) { "ok" } else { "rejected" };
                    text.push_str(&format!("reduction: delta {} z {} {verdict}\n", r["family"]["delta"], r["family"]["z"]));
                }
                text
            })?;
            report_violations(&s["verdict"]);
            report_violations(&s["reduction"]["verdict"]);
            if ok {
                Ok(())
            } else {
                Err(Failure::Rejected)
            }
        }
        SimCommand::Verify { instance, solution, kind, problem, defects, ruling } => {
            let raw = read_json(&solution)?;
            let mut current = Initial::Text { text: PLACEHOLDER.into() };
            let (check, body) = match kind {
                SolutionKind::Labeling => match problem {
                    Some(path) => {
                        current = Initial::Text { text: read_input(&path)? };
                        let body = raw.get("labeling").cloned().unwrap_or(raw);
                        (Check::Labeling, body)
                    }
                    None => {
                        let (Some(delta), Some(z)) = (raw.get("delta"), raw.get("z")) else {
                            return Err(Failure::Usage("labelings need --problem unless the file is a family labeling".into()));
                        };
                        let delta: usize = from_json(&solution, delta.clone())?;
                        let z: FamilyVector = from_json(&solution, z.clone())?;
                        (Check::FamilyLabeling { delta, z }, raw["labeling"].clone())
                    }
                },
                SolutionKind::Arbdefective => (
                    Check::Arbdefective { defects: defects.ok_or_else(|| Failure::Usage("--defects is required here".into()))? },
                    raw,
                ),
                SolutionKind::Ruling => {
                    let (alpha, c, beta) = ruling_triple(&ruling)?;
                    (Check::Ruling { alpha, c, beta }, raw)
                }
            };
            let solution: Solution = from_json(&solution, body)?;
            let action = Action::Verify { instance: instance_input(&instance)?, check, solution };
            let verdict = perform(ctx, &current, &action)?.summary;
            print_summary(ctx, &verdict, || if verdict_ok(&verdict) { "ok\n".into() } else { "rejected\n".into() })?;
            report_violations(&verdict);
            if verdict_ok(&verdict) {
                Ok(())
            } else {
                Err(Failure::Rejected)
            }
        }
        SimCommand::Reduce { instance: path, solution, kind, defects, ruling, delta, out } => {
            let inst = instance(&path)?;
            let raw = read_json(&solution)?;
            let input = match kind {
                SolutionKind::Labeling => return Err(Failure::Usage("only arbdefective and ruling outputs reduce".into())),
                SolutionKind::Arbdefective => {
                    let defects = defects.ok_or_else(|| Failure::Usage("--defects is required here".into()))?;
                    let solution: ArbdefectiveColoring = from_json(&solution, raw)?;
                    ReductionInput::Arbdefective { defects, solution }
                }
                SolutionKind::Ruling => {
                    let sol: RulingSetOutput = from_json(&solution, raw)?;
                    let given = [(ruling.alpha, sol.alpha, "alpha"), (ruling.c, sol.c, "c"), (ruling.beta, sol.beta, "beta")];
                    for (flag, stored, name) in given {
                        if flag.is_some_and(|f| f != stored) {
                            return Err(Failure::Usage(format!("--{name} {} differs from {stored} in the solution file", flag.unwrap_or(0))));
                        }
                    }
                    ReductionInput::Ruling { solution: sol }
                }
            };
            let delta = delta.unwrap_or_else(|| inst.max_degree());
            let labeling = reduce_solution_to_family(&inst, delta, &input)?;
            let text = render_json(&labeling);
            match out {
                Some(path) => write_output(&path, &text),
                None => emit(&text),
            }
        }
    }
}

fn serve(ctx: &Ctx, args: ServeArgs) -> Outcome {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(std::io::stderr)
        .init();
    let deadline = ctx.limits.deadline_ms.map_or(DEFAULT_DEADLINE, Duration::from_millis);
    let config = Config { store: PathBuf::from(&args.store), limits: ctx.limits.clone(), deadline };
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Other(e.to_string()))?;
    runtime
        .block_on(relim_service::serve(config, args.listen, |addr| {
            println!("listening on http://{addr}");
            let _ = std::io::stdout().flush();
        }))
        .map_err(Failure::Other)
}

