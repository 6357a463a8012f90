//! Deterministic self-stabilizing gathering of anonymous, oblivious,
//! disoriented robots in the plane with strong multiplicity detection.
//!
//! The crate is `no_std` (it needs `alloc`) and purely computational:
//!
//! - [`geometry`]: tolerance-aware planar predicates, smallest enclosing
//!   circle, convex hull and sectors.
//! - [`model`]: configurations, multiplicity detection, local frames, views.
//! - [`protocol`]: the per-robot gathering rule.
//! - [`simulator`]: fair semi-synchronous schedulers and monitored runs.
//! - [`analysis`]: brute-force oracles, property checks, lemma monitors,
//!   the even-`n` livelock witness and sweeps.
#![no_std]

extern crate alloc;

pub mod analysis;
pub mod geometry;
pub mod model;
pub mod protocol;
pub mod sampling;
pub mod simulator;
pub mod streams;

pub use geometry::{Circle, Point, Tolerance};
pub use model::{Configuration, DetectionMode, Frame, View};
pub use protocol::{Action, ActionKind, Branch, Decision};
pub use simulator::{Robot, RunOutcome, RunStatus, SchedulerSpec, SimConfig, Strategy, TraceEvent};
