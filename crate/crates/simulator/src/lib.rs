//! A synchronous message-passing simulator on port-numbered graphs, with
//! coloring and ruling-set algorithms, verifiers for their outputs, and maps
//! from those outputs to labelings of the colored pointer family.

pub mod algorithms;
pub mod engine;
pub mod instance;
pub mod reduce;
pub mod solution;
pub mod verify;

pub use algorithms::{
    arb_colored_ruling_set, default_block_size, greedy_arbdefective, mis_by_sweep, sweep_ruling_set, Timed,
};
pub use engine::{run_algorithm, unfold, BallCollector, Constant, Flood, NodeContext, Program, RunResult, View};
pub use instance::{
    build_instance, ArbdefectiveInput, ColoringSpec, Edge, GraphSpec, Half, Instance, InstanceSpec, PortSpec,
};
pub use reduce::{reduce_arbdefective, reduce_ruling, reduce_solution_to_family, FamilyLabeling, ReductionInput};
pub use solution::{ArbdefectiveColoring, HalfEdgeLabeling, RulingSetOutput, Verdict};
pub use verify::{verify, verify_arbdefective, verify_labeling, verify_ruling, Solution, VerifyKind};
