//! Flat-array fast path for aggregation and internal DLA.
//!
//! The occupied set, rotor counters and next-read cursors live in dense
//! windows centered on the origin, so the inner walk loop is pure index
//! arithmetic. The window regrows geometrically when growth approaches its
//! edge. Cyclic and scripted policies compile to one shared cycle table;
//! explicit per-site stacks take the generic path in the parent module.

use super::{walk_step_cap, AggState, EngineError, IdlaState};
use crate::lattice::{ball_volume_coeff, Point, Window, MAX_DIM};
use crate::rotors::{OffsetRule, RotorPolicy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

enum CycleKind<'a> {
    Cyclic(&'a OffsetRule),
    Scripted,
}

struct Cycle<'a> {
    dirs: Vec<u8>,
    kind: CycleKind<'a>,
}

impl Cycle<'_> {
    fn build(policy: &RotorPolicy) -> Cycle<'_> {
        let d = policy.dim();
        match policy {
            RotorPolicy::Cyclic { order, offsets } => Cycle {
                dirs: order.iter().map(|dir| dir.index(d) as u8).collect(),
                kind: CycleKind::Cyclic(offsets),
            },
            RotorPolicy::Scripted { pattern } => Cycle {
                dirs: pattern.iter().map(|dir| dir.index(d) as u8).collect(),
                kind: CycleKind::Scripted,
            },
            RotorPolicy::Explicit { .. } => unreachable!("explicit policies use the generic path"),
        }
    }

    /// Cursor position for the next read at a site already read `visits`
    /// times. Matches `RotorPolicy::direction_at` exactly.
    fn init_pos(&self, p: &Point, visits: u64) -> u16 {
        let len = self.dirs.len() as u64;
        match &self.kind {
            CycleKind::Cyclic(offsets) => {
                (((offsets.offset_at(p, self.dirs.len()) as u64) + visits + 1) % len) as u16
            }
            CycleKind::Scripted => (visits % len) as u16,
        }
    }
}

struct Grid {
    d: usize,
    radius: i32,
    win: Window,
    occ: Vec<bool>,
    visits: Vec<u64>,
    arrival: Vec<u64>,
    pos: Vec<u16>,
    deltas: [isize; 2 * MAX_DIM],
    origin_idx: usize,
    // bounding box of the occupied set, per axis
    lo: [i32; MAX_DIM],
    hi: [i32; MAX_DIM],
    occupied_count: u64,
}

impl Grid {
    fn new(d: usize, radius: i32, with_cursors: bool) -> Grid {
        let win = Window::centered(d, radius);
        assert!(win.cells < (1usize << 34), "window of {} cells is past desk scale", win.cells);
        let deltas = win.dir_deltas();
        let origin_idx = win.idx(&Point::origin(d));
        Grid {
            d,
            radius,
            occ: vec![false; win.cells],
            visits: vec![0; win.cells],
            arrival: vec![0; win.cells],
            pos: if with_cursors { vec![0; win.cells] } else { Vec::new() },
            deltas,
            origin_idx,
            win,
            lo: [0; MAX_DIM],
            hi: [0; MAX_DIM],
            occupied_count: 0,
        }
    }

    fn place(&mut self, p: &Point, arrival: u64) {
        let idx = self.win.idx(p);
        debug_assert!(!self.occ[idx]);
        self.occ[idx] = true;
        self.arrival[idx] = arrival;
        self.occupied_count += 1;
        for i in 0..self.d {
            self.lo[i] = self.lo[i].min(p.coord(i));
            self.hi[i] = self.hi[i].max(p.coord(i));
        }
    }

    fn diam(&self) -> u64 {
        (0..self.d).map(|i| (self.hi[i] - self.lo[i]) as u64 + 1).max().unwrap()
    }

    fn needs_regrow(&self, p: &Point) -> bool {
        p.norm_inf() >= self.radius - 2
    }

    fn regrow(&mut self, needed: i32, cycle: Option<&Cycle<'_>>) {
        let new_radius = (self.radius + self.radius / 2).max(needed + 8);
        let mut next = Grid::new(self.d, new_radius, !self.pos.is_empty());
        for idx in 0..self.win.cells {
            if !self.occ[idx] {
                continue;
            }
            let p = self.win.point(idx);
            let nidx = next.win.idx(&p);
            next.occ[nidx] = true;
            next.visits[nidx] = self.visits[idx];
            next.arrival[nidx] = self.arrival[idx];
            if let Some(cy) = cycle {
                next.pos[nidx] = cy.init_pos(&p, self.visits[idx]);
            }
        }
        next.lo = self.lo;
        next.hi = self.hi;
        next.occupied_count = self.occupied_count;
        *self = next;
    }

    /// Collects the state back out of the dense arrays.
    fn snapshot(&self, total_steps: u64, policy_descriptor: String) -> AggState {
        let mut by_arrival: Vec<(u64, Point)> = Vec::with_capacity(self.occupied_count as usize);
        let mut visits = BTreeMap::new();
        for idx in 0..self.win.cells {
            if !self.occ[idx] {
                continue;
            }
            let p = self.win.point(idx);
            by_arrival.push((self.arrival[idx], p));
            if self.visits[idx] > 0 {
                visits.insert(p, self.visits[idx]);
            }
        }
        by_arrival.sort_unstable();
        let sites: Vec<Point> = by_arrival.into_iter().map(|(_, p)| p).collect();
        AggState::from_parts(sites, visits, total_steps, policy_descriptor)
            .expect("dense state is internally consistent")
    }
}

fn initial_radius(n: u64, d: usize, existing_max: i32) -> i32 {
    let est = (n as f64 / ball_volume_coeff(d)).powf(1.0 / d as f64) * 1.3 + 8.0;
    (est as i32).max(existing_max + 8).max(16)
}

pub(super) fn aggregate_dense(
    n: u64,
    policy: &RotorPolicy,
    resume: Option<AggState>,
    checkpoints: &[u64],
    mut on_checkpoint: impl FnMut(&AggState),
) -> Result<AggState, EngineError> {
    let d = policy.dim();
    let cycle = Cycle::build(policy);
    let cycle_len = cycle.dirs.len() as u16;
    let two_d = 2 * d as u64;
    let descriptor = policy.descriptor();
    let checkpoints: BTreeSet<u64> = checkpoints.iter().copied().collect();

    let (sites, visit_map, mut total_steps) = match resume {
        Some(state) => {
            let visits = state.rotor().counts().clone();
            (state.sites_in_arrival_order(), visits, state.total_steps())
        }
        None => (vec![Point::origin(d)], BTreeMap::new(), 0u64),
    };

    let existing_max = sites.iter().map(|p| p.norm_inf()).max().unwrap_or(0);
    let mut grid = Grid::new(d, initial_radius(n, d, existing_max), true);
    for (i, p) in sites.iter().enumerate() {
        grid.place(p, i as u64 + 1);
        let idx = grid.win.idx(p);
        grid.pos[idx] = cycle.init_pos(p, 0);
    }
    for (p, &v) in &visit_map {
        let idx = grid.win.idx(p);
        grid.visits[idx] = v;
        grid.pos[idx] = cycle.init_pos(p, v);
    }

    let mut placed = grid.occupied_count;
    if checkpoints.contains(&placed) {
        on_checkpoint(&grid.snapshot(total_steps, descriptor.clone()));
    }

    while placed < n {
        let cap = walk_step_cap(two_d, placed, grid.diam(), total_steps);
        let mut idx = grid.origin_idx;
        let mut steps = 0u64;
        loop {
            let q = grid.pos[idx];
            let di = grid.dirs_read(&cycle, idx, q, cycle_len);
            steps += 1;
            idx = (idx as isize + grid.deltas[di as usize]) as usize;
            if !grid.occ[idx] {
                break;
            }
            assert!(steps <= cap, "rotor walk exceeded watchdog bound {cap}");
        }
        total_steps += steps;
        placed += 1;
        let p = grid.win.point(idx);
        grid.place(&p, placed);
        grid.pos[grid.win.idx(&p)] = cycle.init_pos(&p, 0);
        if grid.needs_regrow(&p) {
            grid.regrow(p.norm_inf(), Some(&cycle));
        }
        if checkpoints.contains(&placed) {
            on_checkpoint(&grid.snapshot(total_steps, descriptor.clone()));
        }
    }

    Ok(grid.snapshot(total_steps, descriptor))
}

impl Grid {
    /// One rotor read at the cell: bump the cursor and counter, return the
    /// direction index taken.
    #[inline]
    fn dirs_read(&mut self, cycle: &Cycle<'_>, idx: usize, q: u16, cycle_len: u16) -> u8 {
        let di = cycle.dirs[q as usize];
        self.pos[idx] = if q + 1 == cycle_len { 0 } else { q + 1 };
        self.visits[idx] += 1;
        di
    }
}

pub(super) fn idla_dense(n: u64, d: usize, seed: u64) -> IdlaState {
    assert!(n >= 1, "internal DLA needs n >= 1");
    let two_d = 2 * d as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grid = Grid::new(d, initial_radius(n, d, 0), false);
    grid.place(&Point::origin(d), 1);
    let mut total_steps = 0u64;
    let mut placed = 1u64;
    while placed < n {
        let mut idx = grid.origin_idx;
        loop {
            let di = rng.random_range(0..two_d) as usize;
            total_steps += 1;
            idx = (idx as isize + grid.deltas[di]) as usize;
            if !grid.occ[idx] {
                break;
            }
        }
        placed += 1;
        let p = grid.win.point(idx);
        grid.place(&p, placed);
        if grid.needs_regrow(&p) {
            grid.regrow(p.norm_inf(), None);
        }
    }

    let mut by_arrival: Vec<(u64, Point)> = Vec::with_capacity(placed as usize);
    for idx in 0..grid.win.cells {
        if grid.occ[idx] {
            by_arrival.push((grid.arrival[idx], grid.win.point(idx)));
        }
    }
    by_arrival.sort_unstable();
    let arrival: BTreeMap<Point, u64> = by_arrival.iter().map(|&(i, p)| (p, i)).collect();
    let region =
        crate::lattice::Region::from_points(d, by_arrival.into_iter().map(|(_, p)| p));
    IdlaState { region, total_steps, arrival }
}
