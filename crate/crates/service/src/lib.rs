//! Session-based HTTP/JSON access to the round-elimination engine, the
//! problem family and the simulator.
//!
//! A session holds a linear history of problem snapshots. Applying an
//! action at the cursor drops the entries after it and appends the result.
//! Each session is stored as one JSON file, replaced atomically on every
//! change, and can be replayed from its initial problem.

pub mod app;
pub mod ops;
pub mod session;
pub mod store;

pub use app::{router, serve, ApiError, AppState, Config, DEFAULT_DEADLINE};
pub use ops::{execute, render_json, Action, ActionResult, Algorithm, Calculation, Check, Initial, InstanceInput, SequencePolicy};
pub use session::{Entry, ReplayDiff, Session};
pub use store::{Fault, Store};
