//! Shared fixtures for the benchmark targets.

use rotorlab_core::engine::{aggregate, AggState};
use rotorlab_core::lattice::{lattice_ball, Region};
use rotorlab_core::rotors::RotorPolicy;

pub fn nesw_aggregate(n: u64) -> AggState {
    aggregate(n, &RotorPolicy::nesw(), None).expect("aggregation")
}

pub fn ball_2d(n: u64) -> Region {
    lattice_ball(n, 2)
}
