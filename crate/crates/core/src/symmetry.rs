//! Steiner symmetrization and small-region enumeration.
//!
//! The symmetrization sigma_i compresses each column of a region along axis
//! i to an interval and centers it about the hyperplane x_i = 0, putting the
//! extra site on the positive side when the column has even length. The
//! tie-breaking functional xi(A) = sum |x_i + 1/4| is exact in quarter
//! units. Termination of repeated symmetrization is certified by the
//! mirrored functional sum |x_i - 1/4|, which strictly decreases under every
//! non-fixing application (the target interval is exactly the set of column
//! offsets with the smallest |j - 1/4| values); the published +1/4 form is
//! only guaranteed to decrease on regions with nonnegative coordinates.

use crate::lattice::{Point, Region};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SymmetryError {
    #[error("enumeration budget exceeded: d={d}, n={n} (supported: d=1 n<=50, d=2 n<=10)")]
    BudgetExceeded { d: usize, n: usize },
}

/// A region sliced into columns along one axis: base points (axis coordinate
/// zeroed) mapped to the sorted offsets occupied in that column.
#[derive(Clone, Debug)]
pub struct ColumnDecomposition {
    pub axis: usize,
    pub columns: BTreeMap<Point, Vec<i32>>,
}

pub fn column_decomposition(a: &Region, axis: usize) -> ColumnDecomposition {
    assert!(axis < a.dim());
    let mut columns: BTreeMap<Point, Vec<i32>> = BTreeMap::new();
    for p in a.iter() {
        columns.entry(p.with_coord(axis, 0)).or_default().push(p.coord(axis));
    }
    for offsets in columns.values_mut() {
        offsets.sort_unstable();
    }
    ColumnDecomposition { axis, columns }
}

impl ColumnDecomposition {
    /// Reassembles the region the decomposition was built from.
    pub fn reassemble(&self, d: usize) -> Region {
        Region::from_points(
            d,
            self.columns.iter().flat_map(|(base, offsets)| {
                offsets.iter().map(move |&j| base.with_coord(self.axis, j))
            }),
        )
    }
}

/// Steiner symmetrization along the given axis: each column of alpha sites
/// becomes the interval -alpha/2 < j <= alpha/2. Cardinality is preserved.
pub fn steiner(a: &Region, axis: usize) -> Region {
    let cols = column_decomposition(a, axis);
    Region::from_points(
        a.dim(),
        cols.columns.into_iter().flat_map(move |(base, offsets)| {
            let alpha = offsets.len() as i32;
            let lo = -((alpha + 1) / 2) + 1;
            let hi = alpha / 2;
            (lo..=hi).map(move |j| base.with_coord(axis, j))
        }),
    )
}

/// True iff every axis-parallel line meets the region in a (possibly empty)
/// interval.
pub fn is_orthoconvex(a: &Region) -> bool {
    for axis in 0..a.dim() {
        for offsets in column_decomposition(a, axis).columns.values() {
            let span = offsets.last().unwrap() - offsets.first().unwrap();
            if span as usize + 1 != offsets.len() {
                return false;
            }
        }
    }
    true
}

/// The tie-breaking functional xi(A) = sum_x sum_i |x_i + 1/4|.
pub fn xi(a: &Region) -> f64 {
    xi_quarters(a) as f64 / 4.0
}

/// xi in exact quarter units: sum_x sum_i |4 x_i + 1|.
pub fn xi_quarters(a: &Region) -> u64 {
    a.iter()
        .map(|p| p.coords().iter().map(|&x| (4 * x as i64 + 1).unsigned_abs()).sum::<u64>())
        .sum()
}

/// The mirrored functional sum_x sum_i |4 x_i - 1|; strictly decreases under
/// every non-fixing symmetrization, so it certifies termination.
fn xi_mirror_quarters(a: &Region) -> u64 {
    a.iter()
        .map(|p| p.coords().iter().map(|&x| (4 * x as i64 - 1).unsigned_abs()).sum::<u64>())
        .sum()
}

/// Applies sigma_1, ..., sigma_d repeatedly until the region is a fixed
/// point of all of them. The result is orthoconvex.
pub fn symmetrize_to_fixpoint(a: &Region) -> Region {
    let d = a.dim();
    let budget = (d as u64) * (xi_mirror_quarters(a) + 2) + 8;
    let mut cur = a.clone();
    let mut applications = 0u64;
    loop {
        let mut changed = false;
        for axis in 0..d {
            let next = steiner(&cur, axis);
            applications += 1;
            assert!(
                applications <= budget,
                "symmetrization failed to terminate within {budget} applications"
            );
            if next != cur {
                debug_assert!(xi_mirror_quarters(&next) < xi_mirror_quarters(&cur));
                cur = next;
                changed = true;
            }
        }
        if !changed {
            return cur;
        }
    }
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut axes: Vec<usize> = (0..d).collect();
    fn heap(k: usize, axes: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(axes.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, axes, out);
            if k % 2 == 0 {
                axes.swap(i, k - 1);
            } else {
                axes.swap(0, k - 1);
            }
        }
    }
    heap(d, &mut axes, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}

fn normalize_to_min_corner(pts: &mut Vec<Point>) {
    let d = pts[0].dim();
    let mut mins = [i32::MAX; crate::lattice::MAX_DIM];
    for p in pts.iter() {
        for i in 0..d {
            mins[i] = mins[i].min(p.coord(i));
        }
    }
    for p in pts.iter_mut() {
        let mut q = *p;
        for i in 0..d {
            q = q.with_coord(i, q.coord(i) - mins[i]);
        }
        *p = q;
    }
    pts.sort_unstable();
}

/// Canonical representative of a region under translations and the
/// 2^d d! signed coordinate permutations: the lexicographically smallest
/// coordinate sequence after moving the minimum corner to the origin.
pub fn canonical_form(a: &Region) -> Region {
    assert!(!a.is_empty());
    let d = a.dim();
    let mut best: Option<Vec<Point>> = None;
    for perm in permutations(d) {
        for signs in 0..(1u32 << d) {
            let mut pts: Vec<Point> = a
                .iter()
                .map(|p| {
                    let mut coords = [0i32; crate::lattice::MAX_DIM];
                    for (i, &src) in perm.iter().enumerate() {
                        let s = if signs & (1 << i) != 0 { -1 } else { 1 };
                        coords[i] = s * p.coord(src);
                    }
                    Point::new(&coords[..d])
                })
                .collect();
            normalize_to_min_corner(&mut pts);
            if best.as_ref().map_or(true, |b| pts < *b) {
                best = Some(pts);
            }
        }
    }
    Region::from_points(d, best.unwrap())
}

/// All connected regions of size n, one per equivalence class under
/// translation and point symmetry, in deterministic sorted order.
pub fn enumerate_connected(n: usize, d: usize) -> Result<Vec<Region>, SymmetryError> {
    match (d, n) {
        (1, 1..=50) => {
            // The only connected 1d region of size n is the interval.
            Ok(vec![Region::from_points(1, (0..n as i32).map(|x| Point::new(&[x])))])
        }
        (2, 1..=10) => {
            let mut level: BTreeSet<Vec<Point>> =
                BTreeSet::from([vec![Point::origin(2)]]);
            for _ in 1..n {
                let mut next = BTreeSet::new();
                for shape in &level {
                    let region = Region::from_points(2, shape.iter().copied());
                    for p in shape {
                        for nb in p.neighbors() {
                            if region.contains(&nb) {
                                continue;
                            }
                            let grown = Region::from_points(
                                2,
                                shape.iter().copied().chain(std::iter::once(nb)),
                            );
                            next.insert(canonical_form(&grown).sites().to_vec());
                        }
                    }
                }
                level = next;
            }
            Ok(level
                .into_iter()
                .map(|pts| Region::from_points(2, pts))
                .collect())
        }
        _ => Err(SymmetryError::BudgetExceeded { d, n }),
    }
}

/// Run-length encoding of a 1d or 2d region for CSV reports: the region is
/// translated so its minimum corner sits at the origin, then each row (fixed
/// second coordinate, ascending) lists its runs "a-b" joined by '+', with
/// rows joined by '|'. Empty rows encode as empty strings.
pub fn rle_encode(a: &Region) -> String {
    assert!(a.dim() <= 2, "run-length encoding is defined for d <= 2");
    if a.is_empty() {
        return String::new();
    }
    let bbox = *a.bbox().unwrap();
    let shift = match a.dim() {
        1 => Point::new(&[-bbox.min.coord(0)]),
        _ => Point::new(&[-bbox.min.coord(0), -bbox.min.coord(1)]),
    };
    let a = a.translate(&shift);
    let bbox = *a.bbox().unwrap();
    let height = if a.dim() == 1 { 1 } else { bbox.max.coord(1) + 1 };
    let mut rows = Vec::new();
    for y in 0..height {
        let mut xs: Vec<i32> = a
            .iter()
            .filter(|p| a.dim() == 1 || p.coord(1) == y)
            .map(|p| p.coord(0))
            .collect();
        xs.sort_unstable();
        let mut runs = Vec::new();
        let mut i = 0;
        while i < xs.len() {
            let start = xs[i];
            let mut end = start;
            while i + 1 < xs.len() && xs[i + 1] == end + 1 {
                i += 1;
                end = xs[i];
            }
            runs.push(format!("{start}-{end}"));
            i += 1;
        }
        rows.push(runs.join("+"));
    }
    rows.join("|")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::lattice_ball;
    use proptest::prelude::*;

    fn pts(coords: &[(i32, i32)]) -> Region {
        Region::from_points(2, coords.iter().map(|&(x, y)| Point::new(&[x, y])))
    }

    #[test]
    fn steiner_examples() {
        // Column {0,2} along y becomes {0,1}.
        assert_eq!(steiner(&pts(&[(0, 0), (0, 2)]), 1), pts(&[(0, 0), (0, 1)]));
        // A single off-axis site maps onto the hyperplane.
        assert_eq!(steiner(&pts(&[(0, -3)]), 1), pts(&[(0, 0)]));
        // A correctly centered even interval is a fixed point.
        let fixed = pts(&[(0, 0), (0, 1)]);
        assert_eq!(steiner(&fixed, 1), fixed);
        // Odd intervals center symmetrically.
        assert_eq!(steiner(&pts(&[(5, 2), (5, 3), (5, 4)]), 1), pts(&[(5, -1), (5, 0), (5, 1)]));
    }

    #[test]
    fn orthoconvexity_cases() {
        assert!(is_orthoconvex(&lattice_ball(100, 2)));
        assert!(!is_orthoconvex(&pts(&[(0, 0), (2, 0)])));
        // L-tromino.
        assert!(is_orthoconvex(&pts(&[(0, 0), (1, 0), (0, 1)])));
    }

    #[test]
    fn xi_examples() {
        assert_eq!(xi(&Region::singleton(Point::origin(2))), 0.5);
        let a = pts(&[(0, 0), (0, 2)]);
        assert_eq!(xi(&a), 3.0);
        let b = steiner(&a, 1);
        assert_eq!(xi(&b), 2.0);
        assert!(xi(&b) < xi(&a));
    }

    #[test]
    fn xi_strict_decrease_exhaustive_small() {
        // Over all canonical regions of size <= 6: xi(sigma A) = xi(A) iff
        // sigma A = A, in exact quarter arithmetic.
        for n in 1..=6 {
            for shape in enumerate_connected(n, 2).unwrap() {
                for axis in 0..2 {
                    let s = steiner(&shape, axis);
                    if s == shape {
                        assert_eq!(xi_quarters(&s), xi_quarters(&shape));
                    } else {
                        assert!(
                            xi_quarters(&s) < xi_quarters(&shape),
                            "xi did not decrease for {:?} axis {axis}",
                            shape.sites()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn fixpoint_is_orthoconvex_and_stable() {
        let ball = lattice_ball(80, 2);
        assert_eq!(symmetrize_to_fixpoint(&ball), ball);

        // Vertical I-tromino far from the origin.
        let a = pts(&[(5, 0), (5, 1), (5, 2)]);
        let f = symmetrize_to_fixpoint(&a);
        assert_eq!(f, pts(&[(0, -1), (0, 0), (0, 1)]));

        for n in 1..=8 {
            for shape in enumerate_connected(n, 2).unwrap() {
                let f = symmetrize_to_fixpoint(&shape);
                assert_eq!(f.len(), shape.len());
                assert!(is_orthoconvex(&f));
                for axis in 0..2 {
                    assert_eq!(steiner(&f, axis), f);
                }
            }
        }
    }

    #[test]
    fn free_polyomino_counts() {
        // Published free polyomino counts are the oracle here.
        let expected = [1usize, 1, 2, 5, 12, 35, 108, 369];
        for (i, &count) in expected.iter().enumerate() {
            let shapes = enumerate_connected(i + 1, 2).unwrap();
            assert_eq!(shapes.len(), count, "n={}", i + 1);
        }
    }

    #[test]
    fn enumerate_1d_and_budget() {
        assert_eq!(enumerate_connected(7, 1).unwrap().len(), 1);
        assert!(enumerate_connected(11, 2).is_err());
        assert!(enumerate_connected(2, 3).is_err());
    }

    #[test]
    fn canonical_form_invariant_under_symmetry() {
        let a = pts(&[(0, 0), (1, 0), (1, 1), (2, 1)]);
        let transforms = [
            pts(&[(0, 0), (0, 1), (1, 1), (1, 2)]),  // rotation
            pts(&[(9, 4), (10, 4), (10, 5), (11, 5)]), // translation
            pts(&[(0, 1), (1, 1), (1, 0), (2, 0)]),  // reflection
        ];
        let c = canonical_form(&a);
        for t in &transforms {
            assert_eq!(canonical_form(t), c);
        }
    }

    #[test]
    fn rle_roundtrip_format() {
        // L-tromino: bottom row 0-1, top row 0-0.
        let l = pts(&[(0, 0), (1, 0), (0, 1)]);
        assert_eq!(rle_encode(&l), "0-1|0-0");
        // Two disconnected runs in one row.
        let gap = pts(&[(0, 0), (2, 0)]);
        assert_eq!(rle_encode(&gap), "0-0+2-2");
        let i1 = Region::from_points(1, (3..6).map(|x| Point::new(&[x])));
        assert_eq!(rle_encode(&i1), "0-2");
    }

    #[test]
    fn column_decomposition_reassembles() {
        let a = pts(&[(0, 0), (0, 2), (1, 1), (-3, 0)]);
        for axis in 0..2 {
            let cols = column_decomposition(&a, axis);
            assert_eq!(cols.reassemble(2), a);
        }
    }

    proptest! {
        #[test]
        fn steiner_preserves_cardinality(
            coords in prop::collection::btree_set((-8i32..8, -8i32..8), 1..20),
            axis in 0usize..2,
        ) {
            let a = Region::from_points(2, coords.into_iter().map(|(x, y)| Point::new(&[x, y])));
            let s = steiner(&a, axis);
            prop_assert_eq!(s.len(), a.len());
        }

        #[test]
        fn mirror_functional_decreases(
            coords in prop::collection::btree_set((-8i32..8, -8i32..8), 1..20),
            axis in 0usize..2,
        ) {
            let a = Region::from_points(2, coords.into_iter().map(|(x, y)| Point::new(&[x, y])));
            let s = steiner(&a, axis);
            if s == a {
                prop_assert_eq!(xi_mirror_quarters(&s), xi_mirror_quarters(&a));
            } else {
                prop_assert!(xi_mirror_quarters(&s) < xi_mirror_quarters(&a));
            }
        }
    }
}
