//! Rotor-router aggregation and internal DLA on the integer lattice Z^d,
//! with exact exit-time solvers, shape-error diagnostics against the
//! Euclidean ball, Steiner symmetrization, and seeded Monte Carlo
//! experiments for first-passage probabilities.
//!
//! Everything is deterministic: rotor dynamics by construction, random
//! experiments through explicit 64-bit seeds, and every iteration order is
//! fixed so that reports and snapshots are bit-stable across runs.

pub mod engine;
pub mod exittime;
pub mod lattice;
pub mod montecarlo;
pub mod rotors;
pub mod shape;
pub mod snapshot;
pub mod symmetry;

pub use engine::{aggregate, df_relax, idla, rotor_walk, AggState, Mover, Schedule};
pub use exittime::{solve_exit, ExitField};
pub use lattice::{cube, in_orthant, lattice_ball, Direction, Point, Region};
pub use rotors::{discrepancy_audit, next_direction, RotorPolicy, RotorState};
