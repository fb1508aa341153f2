//! The problem family `Π_Δ(z)`: construction, the closed forms of one
//! round-elimination step, projection to `Π_Δ(prefix(z))`, sequence lengths
//! and lifting bounds.

pub mod build;
pub mod calc;
pub mod intermediate;
pub mod law;
pub mod policy;
pub mod project;
pub mod vector;

pub use build::{build_family_problem, build_fixedpoint_variant, label_bound, Family, Sym, MAX_COLORS};
pub use calc::{lifting_bound, lower_bound_length, ruling_set_lower_bound, Length, LiftingKind, LiftingParams};
pub use intermediate::{expected_intermediate, Intermediate, IntermediateKind, ReOracle, StarForm, StarOracle};
pub use law::{check_one_step, OneStepReport};
pub use policy::FamilyPolicy;
pub use project::{project_intermediate_labeling, Projection};
pub use vector::{ArbdefectVector, FamilyVector};
