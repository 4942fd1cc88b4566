//! Discrete Fréchet distance between two planar point sequences.
//!
//! Two frogs hop along their respective sequences of stepping stones, never
//! backtracking, joined by a rope of length `delta`. The discrete Fréchet
//! distance is the smallest rope length for which both frogs can reach the
//! final stones. This crate provides:
//!
//! * [`naive`] — the classic O(mn) dynamic program, used as the reference
//!   oracle throughout the test suite;
//! * [`pipeline`] — a subquadratic decision procedure that partitions one
//!   sequence into layers and blocks, builds a disk arrangement per layer,
//!   and runs table-compacted finite automata over face/flag streams;
//! * [`selection`] — distance selection plus a rank binary search that turns
//!   the decision procedure into an optimizer;
//! * [`lowerbound`] — a disk configuration realizing exponentially many
//!   automaton states, used as an adversarial stress generator.

pub mod arrangement;
pub mod automaton;
mod bits;
pub mod error;
pub mod geometry;
pub mod lowerbound;
pub mod naive;
pub mod params;
pub mod pipeline;
pub mod selection;

pub use error::Error;
pub use geometry::{check_traversal, within, MoveModel, Point2, PointSeq, SeqRole, Traversal};
pub use params::{TableMode, TuningParams};

/// Convenience result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
