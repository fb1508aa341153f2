//! Command-line syntax.

use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use relim_family::{ArbdefectVector, FamilyVector, LiftingKind};
use relim_problems::Side;
use relim_roundelim::{Relaxation, RenamingPolicy};

#[derive(Parser, Debug)]
#[command(name = "relim", version, about = "Round elimination, the colored pointer family and its simulator")]
pub struct Cli {
    /// Print results in the JSON schema of the HTTP service.
    #[arg(long, global = true)]
    pub json: bool,
    /// Engine caps, e.g. `expansion=100000,antichain=5000`.
    #[arg(long, global = true, env = "RELIM_CAPS")]
    pub caps: Option<String>,
    /// Wall-clock budget of one engine call in milliseconds.
    #[arg(long, global = true)]
    pub deadline_ms: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a problem and print it in canonical form.
    Parse(ProblemArgs),
    /// Print the strength diagram of one constraint.
    Diagram {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value = "edge", value_parser = parse_side)]
        side: Side,
    },
    /// Apply the operator with the universal quantifier on the edge side.
    Re(ProblemArgs),
    /// Apply the operator with the universal quantifier on the node side.
    Rere(ProblemArgs),
    /// Apply both operators with the given renamings.
    Step {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        renaming: Renaming,
    },
    /// Decide whether one step maps the problem to itself.
    Fixedpoint {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        renaming: Renaming,
    },
    /// Apply relaxations in order.
    Relax {
        #[command(flatten)]
        problem: ProblemArgs,
        /// `FROM=INTO`: replace label FROM by INTO.
        #[arg(long = "merge", value_parser = parse_merge)]
        merges: Vec<Relaxation>,
        /// A relaxation as JSON, e.g. `{"action":"widen","side":"edge","label":"A","target":"B"}`.
        #[arg(long = "action", value_parser = parse_relaxation)]
        actions: Vec<Relaxation>,
    },
    /// The colored pointer family.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Calculators.
    #[command(subcommand)]
    Calc(CalcCommand),
    /// Instances, distributed algorithms, verifiers and reductions.
    #[command(subcommand)]
    Sim(SimCommand),
    /// Run the HTTP service.
    Serve(ServeArgs),
}

/// Where the problem comes from; exactly one source.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct ProblemArgs {
    /// Problem file, or `-` for standard input.
    pub input: Option<PathBuf>,
    /// Problem text given inline.
    #[arg(long)]
    pub text: Option<String>,
    /// The family problem for degree DELTA and level vector Z, e.g. `--family 3 [3]`.
    #[arg(long, num_args = 2, value_names = ["DELTA", "Z"])]
    pub family: Option<Vec<String>>,
    /// The fixed-point variant of the family at degree DELTA.
    #[arg(long, value_name = "DELTA")]
    pub variant: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct Renaming {
    /// Renaming after the first operator: keep, union, intersection, search-bijection, or a JSON policy.
    #[arg(long, value_parser = parse_policy)]
    pub first: Option<RenamingPolicy>,
    /// Renaming after the second operator.
    #[arg(long, value_parser = parse_policy)]
    pub second: Option<RenamingPolicy>,
}

#[derive(Subcommand, Debug)]
pub enum FamilyCommand {
    /// Build the family problem, or the fixed-point variant without `--z`.
    Build {
        #[arg(long)]
        delta: usize,
        #[arg(long, value_parser = parse_vector)]
        z: Option<FamilyVector>,
    },
    /// The J-fold prefix sum of Z.
    Prefix {
        #[arg(long, value_parser = parse_vector)]
        z: FamilyVector,
        #[arg(long)]
        j: u64,
    },
    /// Number of steps before the prefix sums exceed DELTA colors.
    Lowerbound {
        #[arg(long)]
        delta: u64,
        #[arg(long, value_parser = parse_vector)]
        z: FamilyVector,
    },
    /// Check one step of the engine against the closed-form oracles.
    Oracle {
        #[arg(long)]
        delta: usize,
        #[arg(long, value_parser = parse_vector)]
        z: FamilyVector,
    },
    /// Map a labeling of the intermediate problem to the next family member.
    Project {
        #[arg(long)]
        delta: usize,
        #[arg(long, value_parser = parse_vector)]
        z: FamilyVector,
        /// JSON file with one list of labels per node.
        #[arg(long)]
        labeling: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum CalcCommand {
    /// Failure-probability and round bounds for lifting.
    Lifting {
        #[arg(long, value_parser = parse_lifting)]
        kind: LiftingKind,
        #[arg(long)]
        delta: u64,
        /// Label-count bound.
        #[arg(long)]
        f: f64,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        j: Option<u64>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        n: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphKind {
    RegularTree,
    RandomTree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PortKind {
    Random,
    EdgeColoring,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmKind {
    GreedyArbdefective,
    SweepRulingSet,
    Mis,
    ArbColoredRulingSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolutionKind {
    Labeling,
    Arbdefective,
    Ruling,
}

#[derive(Args, Debug, Clone)]
pub struct RulingParams {
    #[arg(long)]
    pub alpha: Option<u32>,
    #[arg(long)]
    pub c: Option<u32>,
    #[arg(long)]
    pub beta: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum SimCommand {
    /// Generate an instance.
    Build {
        /// Instance spec JSON file; replaces the generator flags.
        #[arg(long, conflicts_with_all = ["graph", "delta", "depth", "n", "ports", "proper", "arbdefective"])]
        spec: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "random-tree")]
        graph: GraphKind,
        #[arg(long, default_value_t = 3)]
        delta: usize,
        /// Depth of a regular tree.
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Node count of a random tree.
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, value_enum, default_value = "random")]
        ports: PortKind,
        /// Attach a proper coloring with at most M colors.
        #[arg(long, value_name = "M", conflicts_with = "arbdefective")]
        proper: Option<u32>,
        /// Attach an ALPHA-arbdefective coloring with COLORS colors.
        #[arg(long, num_args = 2, value_names = ["ALPHA", "COLORS"])]
        arbdefective: Option<Vec<u32>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run a distributed algorithm and verify its output.
    Run {
        /// Instance or instance spec JSON file.
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        algorithm: AlgorithmKind,
        #[arg(long, value_parser = parse_defects)]
        defects: Option<ArbdefectVector>,
        #[command(flatten)]
        ruling: RulingParams,
        /// Block sizes of the sweep, one per level.
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<u32>>,
        /// Also map the output to a labeling of the family problem at this degree.
        #[arg(long, value_name = "DELTA")]
        reduce: Option<usize>,
        /// Write the solution JSON here.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Check a solution; exits nonzero when it is rejected.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, value_enum)]
        kind: SolutionKind,
        /// Problem file for labelings; a family labeling file names its own problem.
        #[arg(long)]
        problem: Option<PathBuf>,
        #[arg(long, value_parser = parse_defects)]
        defects: Option<ArbdefectVector>,
        #[command(flatten)]
        ruling: RulingParams,
    },
    /// Map a verified solution to a labeling of the family problem.
    Reduce {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, value_enum)]
        kind: SolutionKind,
        #[arg(long, value_parser = parse_defects)]
        defects: Option<ArbdefectVector>,
        #[command(flatten)]
        ruling: RulingParams,
        /// Degree of the family problem; defaults to the maximum degree of the instance.
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub listen: SocketAddr,
    /// Directory holding one JSON file per session.
    #[arg(long, env = "RELIM_STORE", default_value = "relim-store")]
    pub store: PathBuf,
}

fn parse_side(s: &str) -> Result<Side, String> {
    s.parse().map_err(|e: relim_problems::Error| e.to_string())
}

fn parse_vector(s: &str) -> Result<FamilyVector, String> {
    s.parse().map_err(|e: relim_problems::Error| e.to_string())
}

fn parse_defects(s: &str) -> Result<ArbdefectVector, String> {
    s.parse().map_err(|e: relim_problems::Error| e.to_string())
}

fn parse_lifting(s: &str) -> Result<LiftingKind, String> {
    s.parse().map_err(|e: relim_problems::Error| e.to_string())
}

fn parse_policy(s: &str) -> Result<RenamingPolicy, String> {
    let json = if s.trim_start().starts_with('{') { s.to_string() } else { format!("{{\"kind\":\"{s}\"}}") };
    serde_json::from_str(&json).map_err(|e| format!("bad renaming policy `{s}`: {e}"))
}

fn parse_merge(s: &str) -> Result<Relaxation, String> {
    let (from, into) = s.split_once('=').ok_or_else(|| format!("expected FROM=INTO, got `{s}`"))?;
    let label = |t: &str| relim_problems::Label::parse(t.trim()).map_err(|e| e.to_string());
    Ok(Relaxation::Merge { from: label(from)?, into: label(into)? })
}

fn parse_relaxation(s: &str) -> Result<Relaxation, String> {
    serde_json::from_str(s).map_err(|e| format!("bad relaxation `{s}`: {e}"))
}
