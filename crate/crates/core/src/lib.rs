//! Manipulating stable marriage instances: minimum-cost swaps, reorders,
//! acceptability deletions, agent deletions and additions that make a pair
//! stable, a matching stable, or a matching the unique stable one.
//!
//! - [`model`] and [`format`]: instances, matchings, actions and their text forms.
//! - [`engine`]: stability, Gale–Shapley, uniqueness and rotations.
//! - [`graphkit`]: minimum cut, bipartite vertex cover, minimum anti-arborescence.
//! - [`solvers`]: one solver per supported goal and action.
//! - [`testkit`]: oracles, reduction gadgets, seeded generators and the benchmark protocol.

mod combinatorics;
pub mod engine;
pub mod format;
pub mod graphkit;
pub mod model;
pub mod solvers;
pub mod testkit;

pub use model::{
    apply_action, apply_actions, Action, ActionError, ActionKind, AgentRef, Instance, Matching, ModelError,
    PresenceMask, SameSideQuery, Side,
};
pub use solvers::{Budget, Goal, ManipulationResult, Quality, SolveError, SolveRequest, Status, Target, Witness};
