//! Points, point sets and centered grids over exact integers.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer used for every coordinate.
pub type Scalar = BigInt;

/// Default cap on the number of points a [`Grid`] may materialize.
pub const DEFAULT_POINT_CAP: u64 = 20_000_000;

/// A point of `Z^d`, `d >= 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Box<[Scalar]>,
}

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::domain("a point needs at least one coordinate"));
        }
        Ok(Point {
            coords: coords.into_boxed_slice(),
        })
    }

    /// Panics on an empty slice.
    pub fn from_i64s(coords: &[i64]) -> Self {
        assert!(!coords.is_empty(), "a point needs at least one coordinate");
        Point {
            coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn origin(dim: usize) -> Self {
        assert!(dim >= 1);
        Point {
            coords: vec![Scalar::zero(); dim].into_boxed_slice(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn coord(&self, k: usize) -> &Scalar {
        &self.coords[k]
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn norm_sq(&self) -> Scalar {
        norm_sq(self)
    }

    /// Coordinates as `i64` when they all fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.coords.iter().map(ToPrimitive::to_i64).collect()
    }

    pub(crate) fn from_scalars(coords: impl IntoIterator<Item = Scalar>) -> Self {
        let coords: Box<[Scalar]> = coords.into_iter().collect();
        assert!(!coords.is_empty());
        Point { coords }
    }
}

impl<const N: usize> From<[i64; N]> for Point {
    fn from(coords: [i64; N]) -> Self {
        Point::from_i64s(&coords)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Squared Euclidean norm, exact.
pub fn norm_sq(p: &Point) -> Scalar {
    p.coords.iter().map(|c| c * c).sum()
}

/// A finite, deduplicated set of points of one dimension, kept in
/// lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PointSet {
    dim: usize,
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(dim: usize, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("point sets need dimension >= 1"));
        }
        let mut points: Vec<Point> = points.into_iter().collect();
        if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        points.sort_unstable();
        points.dedup();
        Ok(PointSet { dim, points })
    }

    /// Infers the dimension from the first point; fails on an empty input.
    pub fn from_points(points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let points: Vec<Point> = points.into_iter().collect();
        let dim = points
            .first()
            .map(Point::dim)
            .ok_or_else(|| Error::domain("cannot infer the dimension of an empty point set"))?;
        PointSet::new(dim, points)
    }

    pub(crate) fn from_sorted_unchecked(dim: usize, points: Vec<Point>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        PointSet { dim, points }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.index_of(p).is_some()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.dim == other.dim && self.points.iter().all(|p| other.contains(p))
    }

    /// The subset of points satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Point) -> bool) -> PointSet {
        PointSet {
            dim: self.dim,
            points: self.points.iter().filter(|p| keep(p)).cloned().collect(),
        }
    }

    pub fn without(&self, p: &Point) -> PointSet {
        self.filter(|q| q != p)
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// The centered grid `[-n, n]^d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Grid {
    dim: usize,
    radius: u64,
}

impl Grid {
    pub fn new(dim: usize, radius: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("grid dimension must be >= 1"));
        }
        Ok(Grid { dim, radius })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    pub fn side(&self) -> BigInt {
        BigInt::from(self.radius) * 2 + 1
    }

    /// `(2n+1)^d`, exact.
    pub fn point_count(&self) -> BigInt {
        num_traits::pow(self.side(), self.dim)
    }

    pub fn contains(&self, p: &Point) -> bool {
        let n = BigInt::from(self.radius);
        p.dim() == self.dim && p.coords().iter().all(|c| c.abs() <= n)
    }

    /// The corner `(n, ..., n)`.
    pub fn corner(&self) -> Point {
        Point::from_scalars(std::iter::repeat_n(BigInt::from(self.radius), self.dim))
    }

    pub fn materialize(&self) -> Result<PointSet> {
        self.materialize_with_cap(DEFAULT_POINT_CAP)
    }

    /// All `(2n+1)^d` lattice points, in lexicographic order.
    pub fn materialize_with_cap(&self, cap: u64) -> Result<PointSet> {
        let count = self.point_count();
        if count > BigInt::from(cap) {
            return Err(Error::SizeLimit {
                count: count.to_string(),
                cap,
            });
        }
        let n = self.radius as i64;
        let total = count.to_usize().expect("bounded by cap");
        let mut points = Vec::with_capacity(total);
        let mut cur = vec![-n; self.dim];
        loop {
            points.push(Point::from_i64s(&cur));
            // odometer, last coordinate fastest => lexicographic order
            let mut k = self.dim;
            loop {
                if k == 0 {
                    return Ok(PointSet::from_sorted_unchecked(self.dim, points));
                }
                k -= 1;
                if cur[k] < n {
                    cur[k] += 1;
                    break;
                }
                cur[k] = -n;
            }
        }
    }
}

fn check_radius_range(p: &Point, lo: &BigInt, hi: &BigInt) -> Result<()> {
    match p.coords().iter().find(|c| *c < lo || *c > hi) {
        Some(c) => Err(Error::domain(format!(
            "coordinate {c} of {p} outside [{lo}, {hi}]"
        ))),
        None => Ok(()),
    }
}

/// Maps `[1, 2n+1]^d` onto `[-n, n]^d` by subtracting `n + 1` from every
/// coordinate.
pub fn to_centered(p: &Point, n: u64) -> Result<Point> {
    let shift = BigInt::from(n) + BigInt::one();
    check_radius_range(p, &BigInt::one(), &(BigInt::from(n) * 2 + 1))?;
    Ok(Point::from_scalars(p.coords().iter().map(|c| c - &shift)))
}

/// Inverse of [`to_centered`].
pub fn from_centered(p: &Point, n: u64) -> Result<Point> {
    let n_big = BigInt::from(n);
    check_radius_range(p, &-n_big.clone(), &n_big)?;
    let shift = n_big + BigInt::one();
    Ok(Point::from_scalars(p.coords().iter().map(|c| c + &shift)))
}
