//! Random digraphs built from subset tuples, and the exact probability that
//! they are trees.
//!
//! A ground set `[k] = {1, …, k}` and an occupancy vector `p` determine a
//! family of tuples `(S_1, …, S_r)` of subsets of `[k]` in which element `j`
//! belongs to exactly `p_j` of the subsets. Four arc rules (`alpha`, `beta`,
//! `gamma`, `delta`) turn a tuple plus an assignment map `[k-1] -> [r]` into
//! a digraph with one out-arc per vertex below `k`. This crate computes, in
//! exact rational arithmetic:
//!
//! * brute-force tree probabilities over those families ([`counting`]),
//! * closed-form predictions for the same probabilities ([`counting`]),
//! * a probabilistic analogue of the matrix-tree theorem, where matrix
//!   entries are events and the determinant expands intersections
//!   ([`events`], [`matrices`]),
//! * seeded Monte Carlo estimates as an independent statistical cross-check
//!   ([`montecarlo`]),
//! * grid sweeps that compare every identity and conjecture cell by cell and
//!   emit machine-readable reports ([`verify`]).
//!
//! Everything outside [`montecarlo`] is exact: probabilities, determinants,
//! and counts are arbitrary-precision rationals and integers, never floats.

pub mod assignment;
pub mod counting;
pub mod digraph;
pub mod error;
pub mod events;
pub mod mask;
pub mod matrices;
pub mod montecarlo;
pub mod ratio;
pub mod tuple;
pub mod verify;

pub use assignment::{AssignmentMap, AssignmentMode};
pub use digraph::{build_digraph, ArcRule, Digraph};
pub use error::{Error, Result};
pub use events::{EventMatrix, GeneralizedEvent, SampleSpace};
pub use mask::{cyclic, cyclic_interval, SubsetMask, MAX_K};
pub use matrices::{CellPoint, CellSpace};
pub use montecarlo::Estimate;
pub use ratio::{BigCount, Rational};
pub use tuple::{OccupancyVector, SubsetTuple};
pub use verify::{CellStatus, GridCell, GridReport};
