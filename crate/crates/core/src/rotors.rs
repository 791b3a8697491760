//! Rotor stack policies and their discrepancy audit.
//!
//! Every site carries an infinite stack of directions r_1, r_2, ...; on the
//! m-th visit the particle travels in direction r_m. Policies here are pure
//! functions of (site, m), so resuming a run needs only the per-site visit
//! counters. A stack has discrepancy D when every prefix count of every
//! direction stays within D of the uniform share m/2d; any fixed cyclic
//! permutation achieves D <= 1.

use crate::lattice::{Direction, Point};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RotorError {
    #[error("explicit rotor stack at {site} has {have} entries, need {need}")]
    InsufficientStack { site: Point, have: usize, need: u64 },
    #[error("bad policy descriptor: {0}")]
    BadDescriptor(String),
}

/// Assigns each site its initial position within a cyclic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OffsetRule {
    /// Every rotor starts at position 0 of the order.
    Zero,
    /// Every rotor starts at the same fixed position.
    Constant(u8),
    /// Deterministic per-site pseudo-random offset derived from a seed.
    Hashed { seed: u64 },
}

impl OffsetRule {
    pub fn offset_at(&self, p: &Point, two_d: usize) -> u8 {
        match self {
            OffsetRule::Zero => 0,
            OffsetRule::Constant(k) => k % two_d as u8,
            OffsetRule::Hashed { seed } => {
                let mut h = *seed ^ 0x9e37_79b9_7f4a_7c15;
                for &c in p.coords() {
                    h ^= c as u64;
                    h = h.wrapping_mul(0xbf58_476d_1ce4_e5b9);
                    h ^= h >> 27;
                }
                h = h.wrapping_mul(0x94d0_49bb_1331_11eb);
                h ^= h >> 31;
                (h % two_d as u64) as u8
            }
        }
    }
}

/// A per-site explicit stack: a finite prefix, optionally continued by a
/// repeating cyclic order. Without a tail the stack is exhausted after the
/// prefix, which only the audit treats as a recoverable error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitStack {
    pub prefix: Vec<Direction>,
    pub tail: Option<Vec<Direction>>,
}

impl ExplicitStack {
    pub fn finite(prefix: Vec<Direction>) -> ExplicitStack {
        ExplicitStack { prefix, tail: None }
    }

    pub fn with_cyclic_tail(prefix: Vec<Direction>, tail: Vec<Direction>) -> ExplicitStack {
        ExplicitStack { prefix, tail: Some(tail) }
    }

    fn at(&self, m: u64) -> Option<Direction> {
        debug_assert!(m >= 1);
        let i = (m - 1) as usize;
        if i < self.prefix.len() {
            Some(self.prefix[i])
        } else {
            self.tail.as_ref().map(|t| t[(i - self.prefix.len()) % t.len()])
        }
    }
}

/// Rotor policy: how the infinite stack at each site is generated.
#[derive(Clone, Debug, PartialEq)]
pub enum RotorPolicy {
    /// The classic model: a fixed permutation of the 2d directions, cycled
    /// forever. `offsets` selects where in the cycle each site starts; the
    /// m-th read at a site with offset o returns order[(o + m) mod 2d], i.e.
    /// the rotor is advanced first and then followed.
    Cyclic { order: Vec<Direction>, offsets: OffsetRule },
    /// Per-site explicit stacks; sites without an override use `default`.
    Explicit { stacks: BTreeMap<Point, ExplicitStack>, default: ExplicitStack },
    /// One global repeating pattern (period = pattern length), identical at
    /// every site. The pattern need not be a permutation, so this is the
    /// general bounded-discrepancy model.
    Scripted { pattern: Vec<Direction> },
}

impl RotorPolicy {
    /// Default cyclic order +e1, ..., +ed, -e1, ..., -ed with zero offsets.
    pub fn default_cyclic(d: usize) -> RotorPolicy {
        RotorPolicy::Cyclic { order: Direction::all(d).collect(), offsets: OffsetRule::Zero }
    }

    /// Sign-interleaved cyclic order +e1, -e1, +e2, -e2, ...
    pub fn alternating(d: usize) -> RotorPolicy {
        let mut order = Vec::with_capacity(2 * d);
        for i in 0..d {
            order.push(Direction::new(i, 1));
            order.push(Direction::new(i, -1));
        }
        RotorPolicy::Cyclic { order, offsets: OffsetRule::Zero }
    }

    /// The two-dimensional North, East, South, West clockwise preset with all
    /// rotors initially pointing North. Reproduces the textbook example:
    /// the first three aggregates are {o}, {o,(1,0)}, {o,(1,0),(0,-1)}.
    pub fn nesw() -> RotorPolicy {
        RotorPolicy::Cyclic {
            order: vec![
                Direction::new(1, 1),  // N
                Direction::new(0, 1),  // E
                Direction::new(1, -1), // S
                Direction::new(0, -1), // W
            ],
            offsets: OffsetRule::Zero,
        }
    }

    pub fn scripted(pattern: Vec<Direction>) -> RotorPolicy {
        assert!(!pattern.is_empty());
        RotorPolicy::Scripted { pattern }
    }

    pub fn dim(&self) -> usize {
        match self {
            RotorPolicy::Cyclic { order, .. } => order.len() / 2,
            RotorPolicy::Explicit { default, .. } => {
                let dir = default
                    .prefix
                    .first()
                    .or_else(|| default.tail.as_ref().and_then(|t| t.first()))
                    .expect("explicit default stack must be nonempty");
                // Highest axis mentioned anywhere decides the dimension.
                let mut d = dir.axis() + 1;
                let mut scan = |dirs: &[Direction]| {
                    for dd in dirs {
                        d = d.max(dd.axis() + 1);
                    }
                };
                scan(&default.prefix);
                if let Some(t) = &default.tail {
                    scan(t);
                }
                d
            }
            RotorPolicy::Scripted { pattern } => {
                pattern.iter().map(|dir| dir.axis() + 1).max().unwrap()
            }
        }
    }

    /// Direction of the m-th read (m >= 1) at site x. `None` signals an
    /// exhausted finite explicit stack.
    pub fn direction_at(&self, x: &Point, m: u64) -> Option<Direction> {
        debug_assert!(m >= 1);
        match self {
            RotorPolicy::Cyclic { order, offsets } => {
                let len = order.len() as u64;
                let off = offsets.offset_at(x, order.len()) as u64;
                Some(order[((off + m) % len) as usize])
            }
            RotorPolicy::Explicit { stacks, default } => {
                stacks.get(x).unwrap_or(default).at(m)
            }
            RotorPolicy::Scripted { pattern } => {
                Some(pattern[((m - 1) % pattern.len() as u64) as usize])
            }
        }
    }

    /// Whether direction_at is total (never exhausts).
    pub fn is_total(&self) -> bool {
        match self {
            RotorPolicy::Cyclic { .. } | RotorPolicy::Scripted { .. } => true,
            RotorPolicy::Explicit { stacks, default } => {
                default.tail.is_some() && stacks.values().all(|s| s.tail.is_some())
            }
        }
    }

    /// Canonical one-line descriptor, stored in snapshots and config files.
    pub fn descriptor(&self) -> String {
        fn dirs(out: &mut String, list: &[Direction]) {
            for (i, dir) in list.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}{}", if dir.sign() > 0 { '+' } else { '-' }, dir.axis() + 1);
            }
        }
        let mut s = String::new();
        match self {
            RotorPolicy::Cyclic { order, offsets } => {
                s.push_str("cyclic:order=");
                dirs(&mut s, order);
                s.push_str(":offset=");
                match offsets {
                    OffsetRule::Zero => s.push_str("zero"),
                    OffsetRule::Constant(k) => {
                        let _ = write!(s, "constant/{k}");
                    }
                    OffsetRule::Hashed { seed } => {
                        let _ = write!(s, "hashed/{seed}");
                    }
                }
            }
            RotorPolicy::Scripted { pattern } => {
                s.push_str("scripted:pattern=");
                dirs(&mut s, pattern);
            }
            RotorPolicy::Explicit { .. } => {
                // Explicit stacks are for experiments and tests; snapshots of
                // such runs are keyed by this opaque tag.
                s.push_str("explicit");
            }
        }
        s
    }

    /// Parses a descriptor produced by [`RotorPolicy::descriptor`], plus the
    /// named presets `nesw`, `default`, and `alternating` (which need `d`).
    pub fn from_descriptor(text: &str, d: usize) -> Result<RotorPolicy, RotorError> {
        fn parse_dirs(text: &str, d: usize) -> Result<Vec<Direction>, RotorError> {
            text.split(',')
                .map(|tok| {
                    let tok = tok.trim();
                    let alias = match tok.to_ascii_uppercase().as_str() {
                        "N" => Some(Direction::new(1, 1)),
                        "S" => Some(Direction::new(1, -1)),
                        "E" => Some(Direction::new(0, 1)),
                        "W" => Some(Direction::new(0, -1)),
                        _ => None,
                    };
                    if let Some(dir) = alias {
                        if d != 2 {
                            return Err(RotorError::BadDescriptor(format!(
                                "compass token {tok} only valid in d=2"
                            )));
                        }
                        return Ok(dir);
                    }
                    let (sign, rest) = match tok.as_bytes().first() {
                        Some(b'+') => (1, &tok[1..]),
                        Some(b'-') => (-1, &tok[1..]),
                        _ => {
                            return Err(RotorError::BadDescriptor(format!("bad direction {tok})")))
                        }
                    };
                    let axis: usize = rest
                        .parse::<usize>()
                        .map_err(|_| RotorError::BadDescriptor(format!("bad axis in {tok}")))?;
                    if axis == 0 || axis > d {
                        return Err(RotorError::BadDescriptor(format!(
                            "axis {axis} out of range for d={d}"
                        )));
                    }
                    Ok(Direction::new(axis - 1, sign))
                })
                .collect()
        }

        match text {
            "nesw" => {
                if d != 2 {
                    return Err(RotorError::BadDescriptor("nesw preset needs d=2".into()));
                }
                return Ok(RotorPolicy::nesw());
            }
            "default" | "cyclic" => return Ok(RotorPolicy::default_cyclic(d)),
            "alternating" => return Ok(RotorPolicy::alternating(d)),
            _ => {}
        }
        let mut kind = None;
        let mut order = None;
        let mut offsets = OffsetRule::Zero;
        let mut pattern = None;
        for (i, part) in text.split(':').enumerate() {
            if i == 0 {
                kind = Some(part.to_string());
                continue;
            }
            if let Some(v) = part.strip_prefix("order=") {
                order = Some(parse_dirs(v, d)?);
            } else if let Some(v) = part.strip_prefix("pattern=") {
                pattern = Some(parse_dirs(v, d)?);
            } else if part == "offset=zero" {
                offsets = OffsetRule::Zero;
            } else if let Some(v) = part.strip_prefix("offset=constant/") {
                let k = v
                    .parse::<u8>()
                    .map_err(|_| RotorError::BadDescriptor(format!("bad offset {part}")))?;
                offsets = OffsetRule::Constant(k);
            } else if let Some(v) = part.strip_prefix("offset=hashed/") {
                let seed = v
                    .parse::<u64>()
                    .map_err(|_| RotorError::BadDescriptor(format!("bad offset {part}")))?;
                offsets = OffsetRule::Hashed { seed };
            } else if part.starts_with("offset=") {
                return Err(RotorError::BadDescriptor(format!("bad offset {part}")));
            } else {
                return Err(RotorError::BadDescriptor(format!("unknown field {part}")));
            }
        }
        match kind.as_deref() {
            Some("cyclic") => {
                let order =
                    order.ok_or_else(|| RotorError::BadDescriptor("cyclic needs order=".into()))?;
                if order.len() != 2 * d {
                    return Err(RotorError::BadDescriptor(format!(
                        "cyclic order must list all {} directions",
                        2 * d
                    )));
                }
                let mut seen = vec![false; 2 * d];
                for dir in &order {
                    let i = dir.index(d);
                    if seen[i] {
                        return Err(RotorError::BadDescriptor(
                            "cyclic order repeats a direction".into(),
                        ));
                    }
                    seen[i] = true;
                }
                Ok(RotorPolicy::Cyclic { order, offsets })
            }
            Some("scripted") => {
                let pattern = pattern
                    .ok_or_else(|| RotorError::BadDescriptor("scripted needs pattern=".into()))?;
                Ok(RotorPolicy::scripted(pattern))
            }
            _ => Err(RotorError::BadDescriptor(format!("unknown policy {text}"))),
        }
    }
}

/// Per-site rotor read counters. m_x equals the number of `next_direction`
/// calls made at x.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RotorState {
    visits: BTreeMap<Point, u64>,
}

impl RotorState {
    pub fn new() -> RotorState {
        RotorState::default()
    }

    pub fn from_counts(visits: BTreeMap<Point, u64>) -> RotorState {
        RotorState { visits }
    }

    pub fn visit_count(&self, x: &Point) -> u64 {
        self.visits.get(x).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.visits.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, &u64)> {
        self.visits.iter()
    }

    pub fn counts(&self) -> &BTreeMap<Point, u64> {
        &self.visits
    }
}

/// Advances the rotor at x and returns the direction it now points to:
/// the visit counter is incremented first, then r_{m_x} is read.
///
/// Panics if an explicit finite stack is exhausted; walks are expected to
/// run on total policies (construct explicit stacks with a cyclic tail).
pub fn next_direction(state: &mut RotorState, policy: &RotorPolicy, x: &Point) -> Direction {
    let m = state.visits.entry(*x).or_insert(0);
    *m += 1;
    policy
        .direction_at(x, *m)
        .unwrap_or_else(|| panic!("explicit rotor stack exhausted at {x} after {} reads", *m))
}

/// Maximum over directions eps and prefixes m <= m_max of
/// |#{i <= m : r_i = eps} - m/2d| for the stack at site x.
pub fn discrepancy_audit(
    policy: &RotorPolicy,
    x: &Point,
    m_max: u64,
) -> Result<f64, RotorError> {
    assert!(m_max >= 1);
    let d = policy.dim();
    let two_d = 2 * d;
    let mut counts = vec![0u64; two_d];
    let mut worst_num = 0i64; // discrepancy numerator, in units of 1/(2d)
    for m in 1..=m_max {
        let dir = policy.direction_at(x, m).ok_or_else(|| RotorError::InsufficientStack {
            site: *x,
            have: (m - 1) as usize,
            need: m_max,
        })?;
        counts[dir.index(d)] += 1;
        // |c - m/2d| maximized at the largest and smallest counts.
        let max_c = *counts.iter().max().unwrap() as i64;
        let min_c = *counts.iter().min().unwrap() as i64;
        let m = m as i64;
        let hi = max_c * two_d as i64 - m;
        let lo = m - min_c * two_d as i64;
        worst_num = worst_num.max(hi).max(lo);
    }
    Ok(worst_num as f64 / two_d as f64)
}

/// Audit over the realized visit counts of a run: for each visited site the
/// stack is audited up to its realized read count, and the maximum is
/// returned. This is the discrepancy D that the weight and exit-time
/// identities are entitled to.
pub fn audit_realized(policy: &RotorPolicy, state: &RotorState) -> Result<f64, RotorError> {
    let mut worst = 0.0f64;
    for (x, &m) in state.iter() {
        if m == 0 {
            continue;
        }
        worst = worst.max(discrepancy_audit(policy, x, m)?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o() -> Point {
        Point::origin(2)
    }

    #[test]
    fn nesw_first_reads_match_worked_example() {
        // All rotors point North; the first read rotates to East, the second
        // to South.
        let policy = RotorPolicy::nesw();
        let mut state = RotorState::new();
        assert_eq!(next_direction(&mut state, &policy, &o()), Direction::new(0, 1));
        assert_eq!(next_direction(&mut state, &policy, &o()), Direction::new(1, -1));
        assert_eq!(state.visit_count(&o()), 2);
    }

    #[test]
    fn cyclic_full_period_is_permutation() {
        for d in 1..=4 {
            let policy = RotorPolicy::default_cyclic(d);
            let mut state = RotorState::new();
            let x = Point::origin(d);
            let mut seen = vec![false; 2 * d];
            for _ in 0..2 * d {
                let dir = next_direction(&mut state, &policy, &x);
                let i = dir.index(d);
                assert!(!seen[i]);
                seen[i] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn audit_nesw_prefixes() {
        // Worst prefix is m=1: |1 - 1/4| = 3/4.
        let policy = RotorPolicy::nesw();
        let v = discrepancy_audit(&policy, &o(), 4).unwrap();
        assert_eq!(v, 0.75);
    }

    #[test]
    fn audit_all_north_explicit() {
        let north = Direction::new(1, 1);
        let policy = RotorPolicy::Explicit {
            stacks: BTreeMap::new(),
            default: ExplicitStack::finite(vec![north; 4]),
        };
        let v = discrepancy_audit(&policy, &o(), 4).unwrap();
        assert_eq!(v, 3.0); // |4 - 4/4| at m=4

        let err = discrepancy_audit(&policy, &o(), 5).unwrap_err();
        assert!(matches!(err, RotorError::InsufficientStack { have: 4, need: 5, .. }));
    }

    #[test]
    fn cyclic_presets_discrepancy_at_most_one() {
        let mut policies = vec![RotorPolicy::nesw()];
        for d in 1..=4 {
            policies.push(RotorPolicy::default_cyclic(d));
            policies.push(RotorPolicy::alternating(d));
        }
        for policy in policies {
            let x = Point::origin(policy.dim());
            let v = discrepancy_audit(&policy, &x, 1_000).unwrap();
            assert!(v <= 1.0, "cyclic discrepancy {v} > 1 for {}", policy.descriptor());
        }
    }

    #[test]
    fn deterministic_replay() {
        let policy = RotorPolicy::Cyclic {
            order: Direction::all(3).collect(),
            offsets: OffsetRule::Hashed { seed: 7 },
        };
        let xs: Vec<Point> =
            vec![Point::new(&[0, 0, 0]), Point::new(&[1, -2, 3]), Point::new(&[0, 0, 0])];
        let run = |xs: &[Point]| {
            let mut state = RotorState::new();
            xs.iter().map(|x| next_direction(&mut state, &policy, x)).collect::<Vec<_>>()
        };
        assert_eq!(run(&xs), run(&xs));
    }

    #[test]
    fn descriptor_roundtrip() {
        let policies = vec![
            RotorPolicy::nesw(),
            RotorPolicy::default_cyclic(3),
            RotorPolicy::alternating(4),
            RotorPolicy::Cyclic {
                order: Direction::all(2).collect(),
                offsets: OffsetRule::Hashed { seed: 99 },
            },
            RotorPolicy::scripted(vec![Direction::new(0, 1), Direction::new(0, -1)]),
        ];
        for p in policies {
            let d = p.dim();
            let text = p.descriptor();
            let back = RotorPolicy::from_descriptor(&text, d).unwrap();
            assert_eq!(p, back, "descriptor {text} did not round-trip");
        }
    }

    #[test]
    fn descriptor_rejects_garbage() {
        assert!(RotorPolicy::from_descriptor("cyclic:order=+1,+1,-1,-2", 2).is_err());
        assert!(RotorPolicy::from_descriptor("cyclic:order=+1,-1", 2).is_err());
        assert!(RotorPolicy::from_descriptor("nonsense", 2).is_err());
        assert!(RotorPolicy::from_descriptor("nesw", 3).is_err());
    }
}
