//! Growth processes: rotor-router walks and aggregation, internal DLA, and
//! the Diaconis-Fulton multi-particle relaxation with pluggable schedulers.
//!
//! A single run is inherently sequential and owns its state; independent
//! runs (different seeds, policies, particle counts) parallelize freely.

use crate::lattice::{BBox, Direction, Point, Region};
use crate::rotors::{next_direction, RotorPolicy, RotorState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

mod dense;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("resume state already holds {placed} particles, target is {requested}")]
    ResumeExceedsTarget { placed: u64, requested: u64 },
    #[error("resume state was produced by policy `{snapshot}`, not `{given}`")]
    PolicyMismatch { snapshot: String, given: String },
    #[error("inconsistent aggregation state: {0}")]
    InconsistentState(String),
}

/// State of a rotor-router aggregation run.
///
/// The odometer (routings emitted from each site) coincides with the rotor
/// visit counters: every step of every walk reads exactly one rotor at the
/// site it leaves. `sum(odometer) == total_steps` always holds.
#[derive(Clone, Debug, PartialEq)]
pub struct AggState {
    region: Region,
    rotor: RotorState,
    arrival: BTreeMap<Point, u64>,
    total_steps: u64,
    policy_descriptor: String,
}

impl AggState {
    /// Rebuilds a state from raw counters, validating the bookkeeping
    /// invariants. Snapshot loading goes through here.
    pub fn from_parts(
        sites_in_arrival_order: Vec<Point>,
        visits: BTreeMap<Point, u64>,
        total_steps: u64,
        policy_descriptor: String,
    ) -> Result<AggState, EngineError> {
        if sites_in_arrival_order.is_empty() {
            return Err(EngineError::InconsistentState("no sites".into()));
        }
        if !sites_in_arrival_order[0].is_origin() {
            return Err(EngineError::InconsistentState(
                "first adjoined site is not the origin".into(),
            ));
        }
        let d = sites_in_arrival_order[0].dim();
        let mut arrival = BTreeMap::new();
        for (i, p) in sites_in_arrival_order.iter().enumerate() {
            if p.dim() != d {
                return Err(EngineError::InconsistentState("mixed dimensions".into()));
            }
            if arrival.insert(*p, i as u64 + 1).is_some() {
                return Err(EngineError::InconsistentState(format!("duplicate site {p}")));
            }
        }
        let region = Region::from_points(d, sites_in_arrival_order);
        let visit_sum: u64 = visits.values().sum();
        if visit_sum != total_steps {
            return Err(EngineError::InconsistentState(format!(
                "odometer sums to {visit_sum} but total steps is {total_steps}"
            )));
        }
        for site in visits.keys() {
            if !region.contains(site) {
                return Err(EngineError::InconsistentState(format!(
                    "rotor counter at unoccupied site {site}"
                )));
            }
        }
        Ok(AggState {
            region,
            rotor: RotorState::from_counts(visits),
            arrival,
            total_steps,
            policy_descriptor,
        })
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn rotor(&self) -> &RotorState {
        &self.rotor
    }

    /// Routings emitted from each site (identical to the rotor counters).
    pub fn odometer(&self) -> &BTreeMap<Point, u64> {
        self.rotor.counts()
    }

    /// Particle index (1-based) that first occupied each site.
    pub fn arrival(&self) -> &BTreeMap<Point, u64> {
        &self.arrival
    }

    /// Sites in the order they were adjoined.
    pub fn sites_in_arrival_order(&self) -> Vec<Point> {
        let mut v: Vec<(u64, Point)> = self.arrival.iter().map(|(p, &i)| (i, *p)).collect();
        v.sort_unstable();
        v.into_iter().map(|(_, p)| p).collect()
    }

    pub fn particles_placed(&self) -> u64 {
        self.region.len() as u64
    }

    pub fn total_steps(&self) -> u64 {
        self.total_steps
    }

    pub fn dim(&self) -> usize {
        self.region.dim()
    }

    pub fn policy_descriptor(&self) -> &str {
        &self.policy_descriptor
    }
}

/// Watchdog bound on a single rotor walk; exceeding it means the dynamics
/// are broken, not that the region is large.
fn walk_step_cap(two_d: u64, sites: u64, diam: u64, max_visit: u64) -> u64 {
    two_d
        .saturating_mul(sites + 1)
        .saturating_mul(diam + 2)
        .saturating_mul(max_visit + two_d + 2)
}

/// Performs one rotor-router walk from `start` until the particle first
/// occupies a point outside `region`. Returns the exit point and the number
/// of rotor reads; the rotor state is mutated accordingly.
///
/// A start outside the region exits immediately with zero steps.
pub fn rotor_walk(
    region: &Region,
    start: Point,
    rotor: &mut RotorState,
    policy: &RotorPolicy,
) -> (Point, u64) {
    if !region.contains(&start) {
        return (start, 0);
    }
    let d = region.dim();
    let diam = region.bbox().map(|b| b.max_extent(d)).unwrap_or(1) as u64;
    let max_visit = region.iter().map(|p| rotor.visit_count(p)).max().unwrap_or(0);
    let cap = walk_step_cap(2 * d as u64, region.len() as u64, diam, max_visit);
    let mut p = start;
    let mut steps = 0u64;
    while region.contains(&p) {
        let dir = next_direction(rotor, policy, &p);
        p = p.step(dir);
        steps += 1;
        assert!(steps <= cap, "rotor walk exceeded watchdog bound {cap}; dynamics are broken");
    }
    (p, steps)
}

/// Rotor-router aggregation of `n` particles released from the origin.
///
/// Each particle walks in the current region until it exits; its endpoint is
/// adjoined. Pass a previous state to continue a run; the policy descriptor
/// must match the one the state was built with.
pub fn aggregate(
    n: u64,
    policy: &RotorPolicy,
    resume: Option<AggState>,
) -> Result<AggState, EngineError> {
    aggregate_with_checkpoints(n, policy, resume, &[], |_| {})
}

/// Like [`aggregate`], invoking `on_checkpoint` with the current state right
/// after the k-th particle settles, for every k listed in `checkpoints`.
pub fn aggregate_with_checkpoints(
    n: u64,
    policy: &RotorPolicy,
    resume: Option<AggState>,
    checkpoints: &[u64],
    on_checkpoint: impl FnMut(&AggState),
) -> Result<AggState, EngineError> {
    assert!(n >= 1, "aggregation needs n >= 1");
    if let Some(state) = &resume {
        if state.policy_descriptor != policy.descriptor() {
            return Err(EngineError::PolicyMismatch {
                snapshot: state.policy_descriptor.clone(),
                given: policy.descriptor(),
            });
        }
        if state.particles_placed() > n {
            return Err(EngineError::ResumeExceedsTarget {
                placed: state.particles_placed(),
                requested: n,
            });
        }
    }
    match policy {
        RotorPolicy::Cyclic { .. } | RotorPolicy::Scripted { .. } => {
            dense::aggregate_dense(n, policy, resume, checkpoints, on_checkpoint)
        }
        RotorPolicy::Explicit { .. } => {
            aggregate_generic(n, policy, resume, checkpoints, on_checkpoint)
        }
    }
}

/// Hash-map based aggregation path; used for explicit per-site stacks where
/// no dense cycle table applies. Small-scale only.
fn aggregate_generic(
    n: u64,
    policy: &RotorPolicy,
    resume: Option<AggState>,
    checkpoints: &[u64],
    mut on_checkpoint: impl FnMut(&AggState),
) -> Result<AggState, EngineError> {
    let d = policy.dim();
    let origin = Point::origin(d);
    let checkpoints: BTreeSet<u64> = checkpoints.iter().copied().collect();

    let (mut sites, mut rotor, mut total_steps) = match resume {
        Some(state) => {
            (state.sites_in_arrival_order(), state.rotor.clone(), state.total_steps)
        }
        None => (vec![origin], RotorState::new(), 0),
    };
    let mut occupied: std::collections::HashSet<Point> = sites.iter().copied().collect();
    let mut max_visit = sites.iter().map(|p| rotor.visit_count(p)).max().unwrap_or(0);
    let mut bbox = BBox { min: origin, max: origin };
    for p in &sites {
        for i in 0..d {
            bbox = BBox {
                min: bbox.min.with_coord(i, bbox.min.coord(i).min(p.coord(i))),
                max: bbox.max.with_coord(i, bbox.max.coord(i).max(p.coord(i))),
            };
        }
    }

    let emit = |sites: &[Point], rotor: &RotorState, total_steps: u64| {
        AggState::from_parts(
            sites.to_vec(),
            rotor.counts().clone(),
            total_steps,
            policy.descriptor(),
        )
        .expect("internally consistent state")
    };

    if checkpoints.contains(&(sites.len() as u64)) {
        on_checkpoint(&emit(&sites, &rotor, total_steps));
    }
    while (sites.len() as u64) < n {
        let diam = bbox.max_extent(d) as u64;
        let cap = walk_step_cap(2 * d as u64, sites.len() as u64, diam, max_visit);
        let mut p = origin;
        let mut steps = 0u64;
        while occupied.contains(&p) {
            let dir = next_direction(&mut rotor, policy, &p);
            max_visit = max_visit.max(rotor.visit_count(&p));
            p = p.step(dir);
            steps += 1;
            assert!(steps <= cap, "rotor walk exceeded watchdog bound {cap}");
        }
        total_steps += steps;
        occupied.insert(p);
        sites.push(p);
        for i in 0..d {
            bbox = BBox {
                min: bbox.min.with_coord(i, bbox.min.coord(i).min(p.coord(i))),
                max: bbox.max.with_coord(i, bbox.max.coord(i).max(p.coord(i))),
            };
        }
        if checkpoints.contains(&(sites.len() as u64)) {
            on_checkpoint(&emit(&sites, &rotor, total_steps));
        }
    }
    Ok(emit(&sites, &rotor, total_steps))
}

/// Internal DLA: region of size n grown by simple random walks from the
/// origin, each stopped on its first exit. Deterministic given the seed.
pub fn idla(n: u64, d: usize, seed: u64) -> (Region, u64) {
    let state = idla_run(n, d, seed);
    (state.region, state.total_steps)
}

/// Internal DLA with the adjunction order retained (for renders).
pub struct IdlaState {
    pub region: Region,
    pub total_steps: u64,
    pub arrival: BTreeMap<Point, u64>,
}

pub fn idla_run(n: u64, d: usize, seed: u64) -> IdlaState {
    dense::idla_dense(n, d, seed)
}

/// How the next multi-occupied site is chosen in [`df_relax`].
#[derive(Clone, Debug)]
pub enum Schedule {
    /// Priority list: the first listed site holding at least two particles
    /// fires; sites not listed are served afterwards in lexicographic order.
    FixedOrder(Vec<Point>),
    /// Uniformly random multi-occupied site, from a dedicated seeded stream.
    RandomSite { seed: u64 },
    /// The site holding the highest-labelled particle fires, and that
    /// particle is the one moved.
    HighestLabel,
}

/// How a fired particle takes its step.
#[derive(Clone, Debug)]
pub enum Mover {
    Rotor(RotorPolicy),
    Random { seed: u64 },
}

/// Diaconis-Fulton relaxation: starting from a finite multiset of particle
/// positions, repeatedly pick a site occupied by more than one particle and
/// move one of its particles a single step, until every site holds at most
/// one. Returns the final occupied set and the number of moves.
pub fn df_relax(initial: &[Point], schedule: &Schedule, mover: &Mover) -> (Region, u64) {
    assert!(!initial.is_empty(), "df_relax needs at least one particle");
    let d = initial[0].dim();
    let two_d = 2 * d;

    // Label particles by their index in `initial`.
    let mut position: Vec<Point> = initial.to_vec();
    let mut at_site: HashMap<Point, Vec<usize>> = HashMap::new();
    for (label, p) in position.iter().enumerate() {
        assert_eq!(p.dim(), d, "mixed dimensions in initial configuration");
        at_site.entry(*p).or_default().push(label);
    }
    let mut active: BTreeSet<Point> =
        at_site.iter().filter(|(_, v)| v.len() >= 2).map(|(p, _)| *p).collect();

    let mut schedule_rng = match schedule {
        Schedule::RandomSite { seed } => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    let mut mover_rng = match mover {
        Mover::Random { seed } => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    let mut rotor = RotorState::new();

    let mut steps = 0u64;
    while !active.is_empty() {
        let site = match schedule {
            Schedule::FixedOrder(list) => list
                .iter()
                .find(|p| active.contains(p))
                .copied()
                .unwrap_or_else(|| *active.iter().next().unwrap()),
            Schedule::RandomSite { .. } => {
                let rng = schedule_rng.as_mut().unwrap();
                let k = rng.random_range(0..active.len());
                *active.iter().nth(k).unwrap()
            }
            Schedule::HighestLabel => {
                let label = (0..position.len())
                    .rev()
                    .find(|&l| active.contains(&position[l]))
                    .expect("active site implies an active particle");
                position[label]
            }
        };

        // Move the highest-labelled particle at the site.
        let labels = at_site.get_mut(&site).expect("scheduled site is occupied");
        debug_assert!(labels.len() >= 2);
        let (slot, _) =
            labels.iter().enumerate().max_by_key(|(_, &l)| l).expect("nonempty");
        let label = labels.swap_remove(slot);
        if labels.len() < 2 {
            active.remove(&site);
        }

        let dir = match mover {
            Mover::Rotor(policy) => next_direction(&mut rotor, policy, &site),
            Mover::Random { .. } => {
                let rng = mover_rng.as_mut().unwrap();
                Direction::from_index(d, rng.random_range(0..two_d as u32) as usize)
            }
        };
        let dest = site.step(dir);
        position[label] = dest;
        let dest_labels = at_site.entry(dest).or_default();
        dest_labels.push(label);
        if dest_labels.len() >= 2 {
            active.insert(dest);
        }
        steps += 1;
    }

    let occupied =
        Region::from_points(d, at_site.iter().filter(|(_, v)| !v.is_empty()).map(|(p, _)| *p));
    (occupied, steps)
}
