//! Geometry of the integer lattice Z^d: points, cardinal directions, finite
//! regions, lattice balls, cubes and orthants.
//!
//! Dimensions 1 through 4 are supported. All points participating in one
//! computation must share the same dimension; constructors assert this.

use std::collections::HashSet;
use std::fmt;

/// Highest supported lattice dimension.
pub const MAX_DIM: usize = 4;

/// Volume of the unit ball in R^d, i.e. pi^(d/2) / Gamma(d/2 + 1).
pub fn ball_volume_coeff(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI / 3.0,
        4 => std::f64::consts::PI * std::f64::consts::PI / 2.0,
        _ => panic!("dimension {d} out of range 1..=4"),
    }
}

/// A site of Z^d. Unused coordinate slots are kept at zero so that equality
/// and hashing see a canonical representation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    d: u8,
    c: [i32; MAX_DIM],
}

impl Point {
    pub fn new(coords: &[i32]) -> Point {
        let d = coords.len();
        assert!((1..=MAX_DIM).contains(&d), "dimension {d} out of range 1..=4");
        let mut c = [0i32; MAX_DIM];
        c[..d].copy_from_slice(coords);
        Point { d: d as u8, c }
    }

    pub fn origin(d: usize) -> Point {
        assert!((1..=MAX_DIM).contains(&d), "dimension {d} out of range 1..=4");
        Point { d: d as u8, c: [0; MAX_DIM] }
    }

    pub fn dim(&self) -> usize {
        self.d as usize
    }

    pub fn coords(&self) -> &[i32] {
        &self.c[..self.d as usize]
    }

    pub fn coord(&self, axis: usize) -> i32 {
        debug_assert!(axis < self.dim());
        self.c[axis]
    }

    /// Returns a copy with the given axis coordinate replaced.
    pub fn with_coord(&self, axis: usize, value: i32) -> Point {
        debug_assert!(axis < self.dim());
        let mut p = *self;
        p.c[axis] = value;
        p
    }

    pub fn is_origin(&self) -> bool {
        self.c == [0; MAX_DIM]
    }

    /// Squared Euclidean norm, exact.
    pub fn norm2(&self) -> i64 {
        self.coords().iter().map(|&x| (x as i64) * (x as i64)).sum()
    }

    pub fn norm(&self) -> f64 {
        (self.norm2() as f64).sqrt()
    }

    /// L-infinity norm.
    pub fn norm_inf(&self) -> i32 {
        self.coords().iter().map(|x| x.abs()).max().unwrap()
    }

    /// L1 norm, exact.
    pub fn norm1(&self) -> i64 {
        self.coords().iter().map(|&x| (x as i64).abs()).sum()
    }

    pub fn step(&self, dir: Direction) -> Point {
        let mut p = *self;
        p.c[dir.axis as usize] += dir.sign as i32;
        p
    }

    pub fn translate(&self, v: &Point) -> Point {
        debug_assert_eq!(self.d, v.d);
        let mut p = *self;
        for i in 0..self.dim() {
            p.c[i] += v.c[i];
        }
        p
    }

    /// The 2d lattice neighbors of this point, in the fixed order
    /// +e1, ..., +ed, -e1, ..., -ed. Rotor orderings are expressed
    /// relative to this convention.
    pub fn neighbors(&self) -> Vec<Point> {
        Direction::all(self.dim()).map(|dir| self.step(dir)).collect()
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One of the 2d cardinal directions: a coordinate axis together with a sign.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Direction {
    axis: u8,
    sign: i8,
}

impl Direction {
    pub fn new(axis: usize, sign: i32) -> Direction {
        assert!(axis < MAX_DIM);
        assert!(sign == 1 || sign == -1);
        Direction { axis: axis as u8, sign: sign as i8 }
    }

    pub fn axis(&self) -> usize {
        self.axis as usize
    }

    pub fn sign(&self) -> i32 {
        self.sign as i32
    }

    pub fn opposite(&self) -> Direction {
        Direction { axis: self.axis, sign: -self.sign }
    }

    /// All 2d directions in the fixed order +e1, ..., +ed, -e1, ..., -ed.
    pub fn all(d: usize) -> impl Iterator<Item = Direction> {
        assert!((1..=MAX_DIM).contains(&d));
        (0..2 * d).map(move |i| Direction::from_index(d, i))
    }

    /// Index of this direction in the fixed ordering, in [0, 2d).
    pub fn index(&self, d: usize) -> usize {
        debug_assert!(self.axis() < d);
        if self.sign > 0 {
            self.axis()
        } else {
            d + self.axis()
        }
    }

    pub fn from_index(d: usize, i: usize) -> Direction {
        debug_assert!(i < 2 * d);
        if i < d {
            Direction { axis: i as u8, sign: 1 }
        } else {
            Direction { axis: (i - d) as u8, sign: -1 }
        }
    }
}

/// Axis-aligned bounding box, inclusive on both ends.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    fn of_points(points: &[Point]) -> Option<BBox> {
        let first = *points.first()?;
        let d = first.dim();
        let mut min = first;
        let mut max = first;
        for p in points {
            for i in 0..d {
                min.c[i] = min.c[i].min(p.c[i]);
                max.c[i] = max.c[i].max(p.c[i]);
            }
        }
        Some(BBox { min, max })
    }

    pub fn contains(&self, p: &Point) -> bool {
        (0..p.dim()).all(|i| self.min.c[i] <= p.c[i] && p.c[i] <= self.max.c[i])
    }

    /// Extent along the given axis (number of sites).
    pub fn extent(&self, axis: usize) -> usize {
        (self.max.c[axis] - self.min.c[axis]) as usize + 1
    }

    pub fn max_extent(&self, d: usize) -> usize {
        (0..d).map(|i| self.extent(i)).max().unwrap()
    }
}

/// A finite set of lattice sites with O(1) membership queries.
///
/// Sites are held in sorted order; every iteration over a region is
/// deterministic, which keeps floating-point reductions and serialized
/// reports bit-stable across runs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Region {
    d: u8,
    sites: Vec<Point>,
    index: HashSet<Point>,
    bbox: Option<BBox>,
}

impl Region {
    pub fn from_points(d: usize, points: impl IntoIterator<Item = Point>) -> Region {
        assert!((1..=MAX_DIM).contains(&d));
        let index: HashSet<Point> = points
            .into_iter()
            .inspect(|p| assert_eq!(p.dim(), d, "mixed dimensions in region"))
            .collect();
        let mut sites: Vec<Point> = index.iter().copied().collect();
        sites.sort_unstable();
        let bbox = BBox::of_points(&sites);
        Region { d: d as u8, sites, index, bbox }
    }

    pub fn empty(d: usize) -> Region {
        Region::from_points(d, std::iter::empty())
    }

    pub fn singleton(p: Point) -> Region {
        Region::from_points(p.dim(), std::iter::once(p))
    }

    pub fn dim(&self) -> usize {
        self.d as usize
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.index.contains(p)
    }

    /// Sites in sorted (lexicographic) order.
    pub fn iter(&self) -> impl Iterator<Item = &Point> {
        self.sites.iter()
    }

    pub fn sites(&self) -> &[Point] {
        &self.sites
    }

    pub fn bbox(&self) -> Option<&BBox> {
        self.bbox.as_ref()
    }

    /// The outer boundary: sites outside the region adjacent to it.
    pub fn boundary(&self) -> Region {
        let mut out = HashSet::new();
        for p in &self.sites {
            for nb in p.neighbors() {
                if !self.contains(&nb) {
                    out.insert(nb);
                }
            }
        }
        Region::from_points(self.dim(), out)
    }

    pub fn translate(&self, v: &Point) -> Region {
        Region::from_points(self.dim(), self.sites.iter().map(|p| p.translate(v)))
    }

    /// Connectivity with respect to nearest-neighbor adjacency.
    pub fn is_connected(&self) -> bool {
        if self.sites.len() <= 1 {
            return true;
        }
        let mut seen = HashSet::with_capacity(self.len());
        let mut stack = vec![self.sites[0]];
        seen.insert(self.sites[0]);
        while let Some(p) = stack.pop() {
            for nb in p.neighbors() {
                if self.contains(&nb) && seen.insert(nb) {
                    stack.push(nb);
                }
            }
        }
        seen.len() == self.len()
    }
}

/// The lattice ball B_n = { y in Z^d : omega_d * ||y||^d < n }, with strict
/// inequality. Its cardinality is n + O(n^(1-1/d)).
pub fn lattice_ball(n: u64, d: usize) -> Region {
    assert!(n >= 1, "lattice ball needs n >= 1");
    assert!((1..=MAX_DIM).contains(&d));
    if d == 1 {
        // omega_1 = 2: membership 2|y| < n decided in exact integers.
        let half = ((n as i64) - 1) / 2; // largest |y| with 2|y| <= n-1
        return Region::from_points(1, (-half..=half).map(|y| Point::new(&[y as i32])));
    }
    // For d >= 2 the threshold (n/omega_d)^(2/d) is irrational, so comparing
    // the integer norm2 against one precomputed f64 threshold is tie-free.
    let threshold = (n as f64 / ball_volume_coeff(d)).powf(2.0 / d as f64);
    let radius = threshold.sqrt().ceil() as i32;
    let mut pts = Vec::new();
    let mut cursor = vec![-radius; d];
    'outer: loop {
        let p = Point::new(&cursor);
        if (p.norm2() as f64) < threshold {
            pts.push(p);
        }
        for i in (0..d).rev() {
            cursor[i] += 1;
            if cursor[i] <= radius {
                continue 'outer;
            }
            cursor[i] = -radius;
        }
        break;
    }
    Region::from_points(d, pts)
}

/// The L-infinity ball of radius r (cube of side 2r+1) centered at x.
pub fn cube(x: &Point, r: u32) -> Region {
    let d = x.dim();
    let r = r as i32;
    let mut pts = Vec::new();
    let mut cursor = vec![-r; d];
    'outer: loop {
        let mut p = *x;
        for i in 0..d {
            p.c[i] += cursor[i];
        }
        pts.push(p);
        for i in (0..d).rev() {
            cursor[i] += 1;
            if cursor[i] <= r {
                continue 'outer;
            }
            cursor[i] = -r;
        }
        break;
    }
    Region::from_points(d, pts)
}

/// True iff x lies in the nonnegative orthant based at `base`, i.e.
/// x_i >= base_i for every axis.
pub fn in_orthant(x: &Point, base: &Point) -> bool {
    debug_assert_eq!(x.dim(), base.dim());
    (0..x.dim()).all(|i| x.c[i] >= base.c[i])
}

/// Flat-indexed window over a bounding box. Internal helper for the hot
/// loops; never part of a public interface.
#[derive(Clone, Debug)]
pub(crate) struct Window {
    pub d: usize,
    pub min: [i32; MAX_DIM],
    pub size: [usize; MAX_DIM],
    pub strides: [usize; MAX_DIM],
    pub cells: usize,
}

impl Window {
    /// Window covering `bbox` padded by `pad` cells on every side. Strides
    /// are chosen so that ascending flat index equals lexicographic point
    /// order.
    pub fn covering(d: usize, bbox: &BBox, pad: i32) -> Window {
        let mut min = [0i32; MAX_DIM];
        let mut size = [1usize; MAX_DIM];
        for i in 0..d {
            min[i] = bbox.min.c[i] - pad;
            size[i] = (bbox.max.c[i] - bbox.min.c[i]) as usize + 1 + 2 * pad as usize;
        }
        let mut strides = [0usize; MAX_DIM];
        let mut acc = 1usize;
        for i in (0..d).rev() {
            strides[i] = acc;
            acc *= size[i];
        }
        Window { d, min, size, strides, cells: acc }
    }

    pub fn centered(d: usize, radius: i32) -> Window {
        let o = Point::origin(d);
        let bbox = BBox { min: o, max: o };
        Window::covering(d, &bbox, radius)
    }

    #[inline]
    pub fn idx(&self, p: &Point) -> usize {
        let mut acc = 0usize;
        for i in 0..self.d {
            let off = (p.c[i] - self.min[i]) as usize;
            debug_assert!(off < self.size[i], "point outside window");
            acc += off * self.strides[i];
        }
        acc
    }

    pub fn point(&self, mut idx: usize) -> Point {
        let mut c = [0i32; MAX_DIM];
        for i in 0..self.d {
            c[i] = (idx / self.strides[i]) as i32 + self.min[i];
            idx %= self.strides[i];
        }
        Point { d: self.d as u8, c }
    }

    /// Signed flat-index deltas for the 2d directions in canonical order.
    pub fn dir_deltas(&self) -> [isize; 2 * MAX_DIM] {
        let mut deltas = [0isize; 2 * MAX_DIM];
        for i in 0..self.d {
            deltas[i] = self.strides[i] as isize;
            deltas[self.d + i] = -(self.strides[i] as isize);
        }
        deltas
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(coords: &[i32]) -> Point {
        Point::new(coords)
    }

    #[test]
    fn neighbors_fixed_order() {
        assert_eq!(pt(&[0]).neighbors(), vec![pt(&[1]), pt(&[-1])]);
        assert_eq!(
            pt(&[0, 0]).neighbors(),
            vec![pt(&[1, 0]), pt(&[0, 1]), pt(&[-1, 0]), pt(&[0, -1])]
        );
        assert_eq!(
            pt(&[3, -2]).neighbors(),
            vec![pt(&[4, -2]), pt(&[3, -1]), pt(&[2, -2]), pt(&[3, -3])]
        );
    }

    #[test]
    fn boundary_small_cases() {
        let a = Region::from_points(1, [pt(&[0])]);
        assert_eq!(a.boundary(), Region::from_points(1, [pt(&[-1]), pt(&[1])]));

        let a = Region::singleton(pt(&[0, 0]));
        let b = a.boundary();
        assert_eq!(b.len(), 4);
        for nb in pt(&[0, 0]).neighbors() {
            assert!(b.contains(&nb));
        }

        // Domino: enumerate the 6 boundary sites by hand from the definition.
        let a = Region::from_points(2, [pt(&[0, 0]), pt(&[1, 0])]);
        let expected = Region::from_points(
            2,
            [
                pt(&[-1, 0]),
                pt(&[0, 1]),
                pt(&[0, -1]),
                pt(&[2, 0]),
                pt(&[1, 1]),
                pt(&[1, -1]),
            ],
        );
        assert_eq!(a.boundary(), expected);
    }

    #[test]
    fn lattice_ball_small() {
        let b1 = lattice_ball(1, 2);
        assert_eq!(b1.len(), 1);
        assert!(b1.contains(&Point::origin(2)));

        // n=4: norm2 < 4/pi ~ 1.27, so the origin plus its four neighbors.
        let b4 = lattice_ball(4, 2);
        assert_eq!(b4.len(), 5);
        assert!(b4.contains(&Point::origin(2)));
        for nb in Point::origin(2).neighbors() {
            assert!(b4.contains(&nb));
        }

        // d=1 membership is exact integer arithmetic: 2|y| < n.
        assert_eq!(lattice_ball(3, 1).sites(), &[pt(&[-1]), pt(&[0]), pt(&[1])]);
        assert_eq!(lattice_ball(4, 1).sites(), &[pt(&[-1]), pt(&[0]), pt(&[1])]);
        assert_eq!(lattice_ball(5, 1).len(), 5);
    }

    #[test]
    fn lattice_ball_cardinality_error() {
        // | |B_n| - n | <= C n^(1-1/d); report the fitted C and require it
        // stays modest.
        for d in [2usize, 3] {
            let mut worst = 0.0f64;
            for n in [100u64, 1_000, 10_000] {
                let b = lattice_ball(n, d);
                let err = (b.len() as f64 - n as f64).abs();
                let scale = (n as f64).powf(1.0 - 1.0 / d as f64);
                worst = worst.max(err / scale);
            }
            println!("ball cardinality fitted C (d={d}): {worst:.3}");
            assert!(worst <= 8.0, "cardinality error constant too large: {worst}");
        }
    }

    #[test]
    fn cube_sizes() {
        assert_eq!(cube(&Point::origin(2), 0).len(), 1);
        assert_eq!(cube(&Point::origin(2), 1).len(), 9);
        assert_eq!(cube(&Point::origin(3), 2).len(), 125);
    }

    #[test]
    fn orthant_membership() {
        let o = Point::origin(2);
        assert!(in_orthant(&o, &o));
        assert!(!in_orthant(&pt(&[-1, 5]), &o));
        assert!(in_orthant(&pt(&[2, 3]), &pt(&[1, 1])));
    }

    #[test]
    fn window_roundtrip() {
        let b = lattice_ball(40, 3);
        let w = Window::covering(3, b.bbox().unwrap(), 1);
        for p in b.iter() {
            assert_eq!(w.point(w.idx(p)), *p);
        }
        // Lexicographic point order must equal ascending flat index order.
        let mut last = 0usize;
        for p in b.iter() {
            let i = w.idx(p);
            assert!(i >= last);
            last = i;
        }
    }

    proptest! {
        #[test]
        fn neighbors_count_and_distance(d in 1usize..=4, coords in prop::collection::vec(-50i32..50, 4)) {
            let p = Point::new(&coords[..d]);
            let nbs = p.neighbors();
            prop_assert_eq!(nbs.len(), 2 * d);
            for nb in nbs {
                let diff: i64 = (0..d).map(|i| ((nb.coord(i) - p.coord(i)) as i64).pow(2)).sum();
                prop_assert_eq!(diff, 1);
            }
        }

        #[test]
        fn boundary_disjoint(pts in prop::collection::vec((-6i32..6, -6i32..6), 1..12)) {
            let a = Region::from_points(2, pts.into_iter().map(|(x, y)| Point::new(&[x, y])));
            let b = a.boundary();
            for p in b.iter() {
                prop_assert!(!a.contains(p));
            }
        }

        #[test]
        fn ball_symmetric(n in 1u64..400) {
            let b = lattice_ball(n, 2);
            for p in b.iter() {
                // sign flips and coordinate swap preserve membership
                prop_assert!(b.contains(&Point::new(&[-p.coord(0), p.coord(1)])));
                prop_assert!(b.contains(&Point::new(&[p.coord(0), -p.coord(1)])));
                prop_assert!(b.contains(&Point::new(&[p.coord(1), p.coord(0)])));
            }
        }
    }
}
