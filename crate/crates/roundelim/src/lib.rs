//! Round elimination on problems in the black-white formalism.
//!
//! [`apply_re`] and [`apply_rere`] compute the two operators: the universal
//! quantifier yields maximal tuples of label sets on one side, the
//! existential quantifier rewrites the other side over the new set-labels.
//! A step is `re` followed by `rere`, with renaming or custom post-processing
//! in between ([`StepPolicy`]). The crate also applies user relaxations,
//! runs step sequences and detects fixed points.

pub mod fixed_point;
pub mod ops;
pub mod relax;
pub mod rename;
pub mod sequence;
pub mod universal;

pub use fixed_point::{detect_fixed_point, find_bijection, saturate, Equality, FixedPointReport};
pub use ops::{apply_operator, apply_re, apply_rere, OperatorOutput, OperatorStats};
pub use relax::{apply_relaxation, apply_relaxations, canonical_config, relaxation_counterexample, Relaxation};
pub use rename::{rename_labels, RenamingPolicy};
pub use sequence::{run_sequence, step, RenameSteps, SequenceOutcome, StepPolicy, StepTrace};
pub use universal::{maximal_tuples, ClosureStats};
