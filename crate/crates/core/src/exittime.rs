//! Exact expected exit times of simple random walk.
//!
//! The field e_x(A) solves the discrete Dirichlet problem: the lattice
//! Laplacian (1/2d) sum_{y~x} e(y) - e(x) equals -1 inside A, and e vanishes
//! outside. Red-black Gauss-Seidel sweeps over the bounding window converge
//! at desk scale without any sparse factorization machinery, and the fixed
//! sweep order keeps results bit-stable (and exactly translation
//! equivariant, since the coloring is window-relative).

use crate::engine::AggState;
use crate::lattice::{ball_volume_coeff, lattice_ball, Point, Region, Window};
use crate::symmetry;
use rayon::prelude::*;
use thiserror::Error;

/// Default absolute tolerance on the maximum residual of the Laplacian
/// equation.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Tolerance used for the exhaustive small-region searches, where fields are
/// compared to within 1e-8.
pub const BRUTE_FORCE_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("exit solver stalled at residual {residual:.3e} after {sweeps} sweeps (tol {tol:.1e})")]
    NotConverged { residual: f64, sweeps: u64, tol: f64 },
}

#[derive(Debug, Error)]
pub enum BudgetError {
    #[error("exhaustive search budget exceeded: d={d}, n={n} (supported: d=1 n<=50, d=2 n<=10)")]
    Exceeded { d: usize, n: usize },
}

/// The solved exit-time field on a region.
#[derive(Clone, Debug)]
pub struct ExitField {
    region: Region,
    values: Vec<f64>, // aligned with region.sites()
    residual: f64,
    iterations: u64,
}

impl ExitField {
    pub fn region(&self) -> &Region {
        &self.region
    }

    /// e_x(A); zero outside the region.
    pub fn value(&self, p: &Point) -> f64 {
        match self.region.sites().binary_search(p) {
            Ok(i) => self.values[i],
            Err(_) => 0.0,
        }
    }

    pub fn origin_value(&self) -> f64 {
        self.value(&Point::origin(self.region.dim()))
    }

    /// Sum of e_x over the region, accumulated in site order.
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Maximum residual of the defining equation at acceptance.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Number of red-black sweeps performed.
    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, f64)> {
        self.region.sites().iter().zip(self.values.iter().copied())
    }
}

/// Solves the exit-time Dirichlet problem on a finite nonempty region to the
/// given absolute residual tolerance.
pub fn solve_exit(a: &Region, tol: f64) -> Result<ExitField, SolveError> {
    assert!(!a.is_empty(), "exit times need a nonempty region");
    assert!(tol > 0.0);
    let d = a.dim();
    let win = Window::covering(d, a.bbox().unwrap(), 1);
    let inv = 1.0 / (2 * d) as f64;
    let strides: Vec<usize> = (0..d).map(|i| win.strides[i]).collect();

    // Window-relative parity so that translates of a region sweep in the
    // identical order.
    let mut colors: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for p in a.iter() {
        let rel: i64 = (0..d).map(|i| (p.coord(i) - win.min[i]) as i64).sum();
        colors[(rel & 1) as usize].push(win.idx(p));
    }

    let mut vals = vec![0.0f64; win.cells];
    let neighbor_sum = |vals: &[f64], i: usize| -> f64 {
        let mut s = 0.0;
        for &st in &strides {
            s += vals[i - st] + vals[i + st];
        }
        s
    };

    let longest = a.bbox().unwrap().max_extent(d) as u64;
    let cap = 10 * longest * longest + 10_000;
    let check_every = if a.len() < 512 { 1 } else { 16 };
    let mut sweeps = 0u64;
    loop {
        for color in 0..2 {
            for &i in &colors[color] {
                vals[i] = 1.0 + inv * neighbor_sum(&vals, i);
            }
        }
        sweeps += 1;
        if sweeps % check_every == 0 {
            let mut residual = 0.0f64;
            for color in 0..2 {
                for &i in &colors[color] {
                    residual = residual.max((1.0 + inv * neighbor_sum(&vals, i) - vals[i]).abs());
                }
            }
            if residual <= tol {
                let values = a.sites().iter().map(|p| vals[win.idx(p)]).collect();
                return Ok(ExitField { region: a.clone(), values, residual, iterations: sweeps });
            }
            if sweeps >= cap {
                return Err(SolveError::NotConverged { residual, sweeps, tol });
            }
        }
    }
}

/// Maximum of the field over the region (the quantity written e-bar).
pub fn max_exit(field: &ExitField) -> f64 {
    field.values.iter().copied().fold(0.0, f64::max)
}

/// Leading term (n/omega_d)^(2/d) of the central exit time from the lattice
/// ball B_n.
pub fn ball_exit_asymptotic(n: u64, d: usize) -> f64 {
    (n as f64 / ball_volume_coeff(d)).powf(2.0 / d as f64)
}

/// Sum over unordered adjacent pairs within A union its boundary of
/// |e_x - e_y| (boundary values are zero).
pub fn gradient_sum(field: &ExitField) -> f64 {
    let a = field.region();
    let d = a.dim();
    let closure = Region::from_points(
        d,
        a.iter().copied().chain(a.boundary().iter().copied()),
    );
    let mut acc = 0.0;
    for p in closure.iter() {
        for axis in 0..d {
            let q = p.with_coord(axis, p.coord(axis) + 1);
            if closure.contains(&q) {
                acc += (field.value(p) - field.value(&q)).abs();
            }
        }
    }
    acc
}

/// Normalized residual of the step-count identity
/// T_n = n e_o(A_n) - sum_x e_x(A_n) + O(D n^(1+1/d)):
/// returns |T_n - (n e_o - sum e)| / (D n^(1+1/d)). A zero numerator yields
/// zero regardless of D.
pub fn verify_exit_identity(agg: &AggState, field: &ExitField, discrepancy: f64) -> f64 {
    assert_eq!(
        field.region(),
        agg.region(),
        "exit field must be solved on the aggregate's region"
    );
    let n = agg.particles_placed() as f64;
    let d = agg.dim() as f64;
    let predicted = n * field.origin_value() - field.sum();
    let numerator = (agg.total_steps() as f64 - predicted).abs();
    if numerator == 0.0 {
        return 0.0;
    }
    numerator / (discrepancy * n.powf(1.0 + 1.0 / d))
}

/// Error exponents gamma_d of the isoperimetric theorem, used only to label
/// reported bounds.
pub fn gamma_exponent(d: usize) -> f64 {
    match d {
        1 => 1.0,
        2 => 1.0 / 3.0,
        _ => 0.5f64.powi(d as i32) / (2.0 * (d * d) as f64 * 3.0f64.ln()),
    }
}

/// Result of the exhaustive search for the worst exit time at a fixed size.
#[derive(Clone, Debug)]
pub struct IsoReport {
    pub n: usize,
    pub d: usize,
    /// Largest e-bar over all enumerated regions.
    pub max_exit: f64,
    /// A region attaining the maximum, in canonical form.
    pub argmax: Region,
    /// Central exit time of the lattice ball of the same parameter.
    pub ball_center_exit: f64,
    /// max_exit - ball_center_exit.
    pub phi_hat: f64,
    pub shapes_enumerated: usize,
}

/// Enumerates every connected region of the given size up to lattice
/// symmetry, solves each exactly, and reports the maximizer of e-bar.
///
/// Connected regions suffice: e_x depends only on the component of x, so the
/// supremum over all size-n regions is attained on a connected one.
/// Disconnected shapes are therefore excluded from the enumeration.
pub fn brute_force_phi(n: usize, d: usize) -> Result<IsoReport, BudgetError> {
    let shapes = match (d, n) {
        (1, 1..=50) | (2, 1..=10) => symmetry::enumerate_connected(n, d)
            .map_err(|_| BudgetError::Exceeded { d, n })?,
        _ => return Err(BudgetError::Exceeded { d, n }),
    };
    let solved: Vec<f64> = shapes
        .par_iter()
        .map(|shape| {
            let field = solve_exit(shape, BRUTE_FORCE_TOL).expect("tiny region converges");
            max_exit(&field)
        })
        .collect();
    let (mut best, mut best_idx) = (f64::NEG_INFINITY, 0);
    for (i, &e) in solved.iter().enumerate() {
        if e > best {
            best = e;
            best_idx = i;
        }
    }
    let ball = lattice_ball(n as u64, d);
    let ball_center_exit =
        solve_exit(&ball, BRUTE_FORCE_TOL).expect("ball converges").origin_value();
    Ok(IsoReport {
        n,
        d,
        max_exit: best,
        argmax: shapes[best_idx].clone(),
        ball_center_exit,
        phi_hat: best - ball_center_exit,
        shapes_enumerated: shapes.len(),
    })
}

/// Partial sums of phi-hat over 1..=n, from exhaustive reports.
pub fn phi_partial_sum(n: usize, d: usize) -> Result<f64, BudgetError> {
    let mut acc = 0.0;
    for j in 1..=n {
        acc += brute_force_phi(j, d)?.phi_hat;
    }
    Ok(acc)
}
