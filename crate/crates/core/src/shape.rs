//! Shape functionals measuring how far a region is from the ball: the
//! quadratic weight psi, symmetric difference against the lattice ball,
//! Lebesgue volume error against the unit-volume Euclidean ball, radii, and
//! the exact weight inequality of the step-count analysis.
//!
//! psi is accumulated in exact integer arithmetic; only the final value is
//! converted to floating point.

use crate::engine::AggState;
use crate::lattice::{ball_volume_coeff, lattice_ball, Point, Region};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ShapeError {
    #[error("radii need the origin inside the region")]
    OriginNotInRegion,
}

/// psi(A) = sum of squared Euclidean norms over the region, exact.
pub fn quadratic_weight_exact(a: &Region) -> u64 {
    a.iter().map(|p| p.norm2() as u64).sum()
}

pub fn quadratic_weight(a: &Region) -> f64 {
    quadratic_weight_exact(a) as f64
}

/// The smallest possible psi over all sets of k sites in Z^d: fill sites by
/// ascending squared norm. Equals psi(B_n) whenever k = |B_n|; lattice balls
/// do not realize every cardinality, so this greedy form is the minimizer
/// used for psi-optimality checks.
pub fn min_quadratic_weight(k: usize, d: usize) -> u64 {
    assert!(k >= 1);
    // A ball of volume ~k plus slack certainly contains k sites.
    let mut radius = ((k as f64 / ball_volume_coeff(d)).powf(1.0 / d as f64)).ceil() as i32 + 2;
    loop {
        let mut norms: Vec<u64> = Vec::new();
        let mut cursor = vec![-radius; d];
        'outer: loop {
            let p = Point::new(&cursor);
            norms.push(p.norm2() as u64);
            for i in (0..d).rev() {
                cursor[i] += 1;
                if cursor[i] <= radius {
                    continue 'outer;
                }
                cursor[i] = -radius;
            }
            break;
        }
        if norms.len() >= k {
            norms.sort_unstable();
            // All sites of norm <= radius are inside the scanned cube, so the
            // k smallest are correct as long as the k-th is below radius^2.
            if norms[k - 1] < (radius as u64) * (radius as u64) {
                return norms[..k].iter().sum();
            }
        }
        radius *= 2;
    }
}

/// |A symmetric-difference B_n| for the lattice ball of parameter n.
pub fn sym_diff_count(a: &Region, n: u64) -> u64 {
    let b = lattice_ball(n, a.dim());
    let missing = b.iter().filter(|p| !a.contains(p)).count() as u64;
    let extra = a.iter().filter(|p| !b.contains(p)).count() as u64;
    missing + extra
}

/// Volume of the intersection of the unit cube centered at `center` with the
/// origin-centered ball of squared radius r2, by adaptive subdivision.
/// Cells entirely inside or outside are exact; straddling cells are split
/// (depth cap 12, corner-sign classification at the leaves) until the
/// remaining ambiguous volume per leaf falls under `tol`.
fn cube_ball_volume(center: &Point, r2: f64, tol: f64) -> f64 {
    let d = center.dim();
    let mut lo = [0.0f64; crate::lattice::MAX_DIM];
    let mut hi = [0.0f64; crate::lattice::MAX_DIM];
    for i in 0..d {
        lo[i] = center.coord(i) as f64 - 0.5;
        hi[i] = center.coord(i) as f64 + 0.5;
    }
    fn recurse(lo: &[f64], hi: &[f64], d: usize, r2: f64, tol: f64, depth: u32) -> f64 {
        let mut min2 = 0.0f64;
        let mut max2 = 0.0f64;
        let mut vol = 1.0f64;
        for i in 0..d {
            let (l, h) = (lo[i], hi[i]);
            let closest = if l > 0.0 {
                l
            } else if h < 0.0 {
                h
            } else {
                0.0
            };
            min2 += closest * closest;
            max2 += l.abs().max(h.abs()).powi(2);
            vol *= h - l;
        }
        if max2 <= r2 {
            return vol;
        }
        if min2 >= r2 {
            return 0.0;
        }
        if depth >= 12 || vol <= tol {
            return vol / 2.0;
        }
        let mut acc = 0.0;
        let mut clo = [0.0f64; crate::lattice::MAX_DIM];
        let mut chi = [0.0f64; crate::lattice::MAX_DIM];
        for corner in 0..(1usize << d) {
            for i in 0..d {
                let mid = 0.5 * (lo[i] + hi[i]);
                if corner & (1 << i) == 0 {
                    clo[i] = lo[i];
                    chi[i] = mid;
                } else {
                    clo[i] = mid;
                    chi[i] = hi[i];
                }
            }
            acc += recurse(&clo[..d], &chi[..d], d, r2, tol, depth + 1);
        }
        acc
    }
    recurse(&lo[..d], &hi[..d], d, r2, tol, 0)
}

/// Lebesgue measure of the symmetric difference between the rescaled cube
/// union n^(-1/d) A-box and the ball of unit volume centered at the origin.
///
/// Since the unscaled comparison ball B(R) with R = (n/omega_d)^(1/d) has
/// volume exactly n, the error reduces to 2 (1 - covered/n) where `covered`
/// is the total cube-ball intersection volume; it always lies in [0, 2].
/// `tol` is the absolute accuracy requested per boundary-straddling cube.
pub fn lebesgue_error(a: &Region, n: u64, tol: f64) -> f64 {
    assert_eq!(a.len() as u64, n, "lebesgue error is defined at |A| = n");
    assert!(tol > 0.0);
    let d = a.dim();
    let r2 = (n as f64 / ball_volume_coeff(d)).powf(2.0 / d as f64);
    let mut covered = 0.0;
    for p in a.iter() {
        covered += cube_ball_volume(p, r2, tol);
    }
    (2.0 * (1.0 - covered / n as f64)).clamp(0.0, 2.0)
}

/// (inradius, outradius): the largest r with {||y|| < r} contained in A,
/// and the largest occupied norm. Requires the origin to be occupied.
pub fn radii(a: &Region) -> Result<(f64, f64), ShapeError> {
    let d = a.dim();
    if !a.contains(&Point::origin(d)) {
        return Err(ShapeError::OriginNotInRegion);
    }
    let out2 = a.iter().map(|p| p.norm2()).max().unwrap();
    // The nearest unoccupied site lies within the bounding box padded by one:
    // just outside the box there is always a site at distance <= max extent.
    let bbox = a.bbox().unwrap();
    let mut in2 = i64::MAX;
    let mut cursor: Vec<i32> = (0..d).map(|i| bbox.min.coord(i) - 1).collect();
    'outer: loop {
        let p = Point::new(&cursor);
        if !a.contains(&p) {
            in2 = in2.min(p.norm2());
        }
        for i in (0..d).rev() {
            cursor[i] += 1;
            if cursor[i] <= bbox.max.coord(i) + 1 {
                continue 'outer;
            }
            cursor[i] = bbox.min.coord(i) - 1;
        }
        break;
    }
    Ok(((in2 as f64).sqrt(), (out2 as f64).sqrt()))
}

/// Slack of the exact weight inequality
/// psi(A_n) <= T_n + 8 sqrt(d) D sum ||x|| + 4 d D n.
/// Nonnegative slack certifies the run; `discrepancy` must dominate the
/// audited discrepancy of the realized rotor stacks.
pub fn verify_weight_inequality(agg: &AggState, discrepancy: f64) -> f64 {
    let d = agg.dim() as f64;
    let n = agg.particles_placed() as f64;
    let psi = quadratic_weight(agg.region());
    let norm_sum: f64 = agg.region().iter().map(|p| p.norm()).sum();
    let rhs = agg.total_steps() as f64
        + 8.0 * d.sqrt() * discrepancy * norm_sum
        + 4.0 * d * discrepancy * n;
    rhs - psi
}

/// One row of the psi-excess diagnostic: how far the aggregate's quadratic
/// weight sits above the ball's, normalized by n^(1+1/d).
#[derive(Clone, Debug)]
pub struct MainpropRecord {
    pub n: u64,
    pub psi: f64,
    pub psi_ball: f64,
    pub diff: f64,
    pub normalized: f64,
    /// Greedy minimum of psi at the same cardinality; psi >= psi_min always.
    pub psi_min: f64,
    pub phi_partial: Option<f64>,
}

pub fn verify_mainprop(agg: &AggState, phi_partial: Option<f64>) -> MainpropRecord {
    let n = agg.particles_placed();
    let d = agg.dim();
    let psi = quadratic_weight(agg.region());
    let psi_ball = quadratic_weight(&lattice_ball(n, d));
    let diff = psi - psi_ball;
    let normalized = diff / (n as f64).powf(1.0 + 1.0 / d as f64);
    let psi_min = min_quadratic_weight(n as usize, d) as f64;
    MainpropRecord { n, psi, psi_ball, diff, normalized, psi_min, phi_partial }
}

/// All shape diagnostics for one aggregation state.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeReport {
    pub n: u64,
    pub psi: f64,
    pub psi_ball: f64,
    pub sym_diff: u64,
    pub lebesgue_error: f64,
    pub inradius: f64,
    pub outradius: f64,
    pub total_steps: u64,
}

pub fn shape_report(agg: &AggState, tol: f64) -> ShapeReport {
    let n = agg.particles_placed();
    let (inradius, outradius) = radii(agg.region()).expect("aggregates contain the origin");
    ShapeReport {
        n,
        psi: quadratic_weight(agg.region()),
        psi_ball: quadratic_weight(&lattice_ball(n, agg.dim())),
        sym_diff: sym_diff_count(agg.region(), n),
        lebesgue_error: lebesgue_error(agg.region(), n, tol),
        inradius,
        outradius,
        total_steps: agg.total_steps(),
    }
}
