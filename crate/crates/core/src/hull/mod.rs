//! Exact extreme-point classification.
//!
//! [`is_extreme`] answers one query with a single phase-one LP against every
//! other point of the ambient set. [`extreme_points`] classifies a whole set at
//! once through the layer engine, which prunes obvious interior points and
//! runs the LP only against a growing set of confirmed vertices.

mod engine;
pub(crate) mod lp;
pub mod oracle;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::point::{Point, PointSet};
use crate::ring::narrow_coords;

pub(crate) use engine::{midpoint_shifts, try_map, Ground, MidpointFilter, Peeler, Separation};
pub use oracle::{brute_force_is_extreme, DEFAULT_ORACLE_CAP};

use lp::Membership;

/// "Is `subject` a vertex of `conv(ambient)`?"
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremenessQuery {
    subject: Point,
    ambient: PointSet,
}

impl ExtremenessQuery {
    pub fn new(subject: Point, ambient: PointSet) -> Result<Self> {
        if subject.dim() != ambient.dim() {
            return Err(Error::DimensionMismatch {
                expected: ambient.dim(),
                found: subject.dim(),
            });
        }
        if !ambient.contains(&subject) {
            return Err(Error::domain(format!(
                "subject {subject} is not a member of the ambient set"
            )));
        }
        Ok(ExtremenessQuery { subject, ambient })
    }

    pub fn subject(&self) -> &Point {
        &self.subject
    }

    pub fn ambient(&self) -> &PointSet {
        &self.ambient
    }
}

/// `subject = sum coeff_i * support_i` with nonnegative coefficients summing
/// to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexCombinationWitness {
    subject: Point,
    support: Vec<(Point, BigRational)>,
}

impl ConvexCombinationWitness {
    /// Builds a witness without checking it; see [`Self::verify`].
    pub fn new(subject: Point, support: Vec<(Point, BigRational)>) -> Self {
        ConvexCombinationWitness { subject, support }
    }

    pub fn subject(&self) -> &Point {
        &self.subject
    }

    pub fn support(&self) -> &[(Point, BigRational)] {
        &self.support
    }

    /// Exact re-check of the combination. Coefficients must be nonnegative,
    /// sum to one, and the subject itself may not appear in the support.
    pub fn verify(&self) -> bool {
        let dim = self.subject.dim();
        if self.support.is_empty() {
            return false;
        }
        let mut total = BigRational::zero();
        let mut acc = vec![BigRational::zero(); dim];
        for (p, w) in &self.support {
            if p.dim() != dim || w.is_negative() || *p == self.subject {
                return false;
            }
            total += w;
            for (slot, c) in acc.iter_mut().zip(p.coords()) {
                *slot += w * BigRational::from_integer(c.clone());
            }
        }
        total.is_one()
            && acc
                .iter()
                .zip(self.subject.coords())
                .all(|(a, c)| *a == BigRational::from_integer(c.clone()))
    }

    /// [`Self::verify`] plus: every support point belongs to `ambient`.
    pub fn verify_within(&self, ambient: &PointSet) -> bool {
        self.verify() && self.support.iter().all(|(p, _)| ambient.contains(p))
    }

    /// Carathéodory reduction: an equivalent witness over at most `d + 1` of
    /// the current support points.
    pub fn reduced(&self) -> ConvexCombinationWitness {
        let dim = self.subject.dim();
        if self.support.len() <= dim + 1 {
            return self.clone();
        }
        let points: Vec<Point> = self.support.iter().map(|(p, _)| p.clone()).collect();
        match locate_exact(&self.subject, &points) {
            Membership::Inside { weights, denom } => {
                witness_from_weights(&self.subject, &points, weights.into_iter(), &denom)
            }
            Membership::Outside { .. } => self.clone(),
        }
    }
}

/// Outcome of an extremeness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extremeness {
    Vertex,
    Interior(ConvexCombinationWitness),
}

impl Extremeness {
    pub fn is_extreme(&self) -> bool {
        matches!(self, Extremeness::Vertex)
    }

    pub fn witness(&self) -> Option<&ConvexCombinationWitness> {
        match self {
            Extremeness::Vertex => None,
            Extremeness::Interior(w) => Some(w),
        }
    }
}

fn witness_from_weights(
    subject: &Point,
    columns: &[Point],
    weights: impl Iterator<Item = (usize, BigInt)>,
    denom: &BigInt,
) -> ConvexCombinationWitness {
    let support = weights
        .map(|(j, w)| (columns[j].clone(), BigRational::new(w, denom.clone())))
        .collect();
    ConvexCombinationWitness::new(subject.clone(), support)
}

fn widen(m: Membership<i128>) -> Membership<BigInt> {
    match m {
        Membership::Inside { weights, denom } => Membership::Inside {
            weights: weights
                .into_iter()
                .map(|(j, w)| (j, BigInt::from(w)))
                .collect(),
            denom: BigInt::from(denom),
        },
        Membership::Outside { separator } => Membership::Outside {
            separator: separator.into_iter().map(BigInt::from).collect(),
        },
    }
}

/// LP membership of `target` in `conv(columns)`, narrow backend first.
pub(crate) fn locate_exact(target: &Point, columns: &[Point]) -> Membership<BigInt> {
    let narrow = narrow_coords(target.coords()).and_then(|t| {
        let cols: Option<Vec<Vec<i128>>> =
            columns.iter().map(|c| narrow_coords(c.coords())).collect();
        let cols = cols?;
        let refs: Vec<&[i128]> = cols.iter().map(Vec::as_slice).collect();
        lp::locate(&t, &refs)
    });
    if let Some(m) = narrow {
        return widen(m);
    }
    let cols: Vec<&[BigInt]> = columns.iter().map(Point::coords).collect();
    lp::locate(target.coords(), &cols).expect("BigInt arithmetic cannot overflow")
}

/// Decides whether the query's subject is a vertex of the convex hull of its
/// ambient set, with a convex-combination witness when it is not.
pub fn is_extreme(query: &ExtremenessQuery) -> Extremeness {
    let others: Vec<Point> = query
        .ambient
        .iter()
        .filter(|p| **p != query.subject)
        .cloned()
        .collect();
    if others.is_empty() {
        return Extremeness::Vertex;
    }
    match locate_exact(&query.subject, &others) {
        Membership::Inside { weights, denom } => {
            let w = witness_from_weights(&query.subject, &others, weights.into_iter(), &denom);
            debug_assert!(w.verify());
            Extremeness::Interior(w)
        }
        Membership::Outside { .. } => Extremeness::Vertex,
    }
}

/// The members of `s` that are vertices of `conv(s)`.
pub fn extreme_points(s: &PointSet) -> PointSet {
    if s.is_empty() {
        return s.clone();
    }
    let layer = with_peeler(s, |peeler| peeler.peel_layer());
    PointSet::from_sorted_unchecked(
        s.dim(),
        layer.into_iter().map(|i| s.points()[i].clone()).collect(),
    )
}

/// Runs `f` on the narrow engine, falling back to `BigInt` on overflow.
pub(crate) fn with_peeler<T>(s: &PointSet, f: impl Fn(&mut dyn PeelStep) -> Option<T>) -> T {
    if let Some(mut narrow) = Peeler::<i128>::new(s) {
        if let Some(out) = f(&mut narrow) {
            return out;
        }
    }
    let mut wide = Peeler::<BigInt>::new(s).expect("every scalar fits BigInt");
    f(&mut wide).expect("BigInt arithmetic cannot overflow")
}

/// Object-safe view of the layer engine so callers need not be generic over
/// the arithmetic backend.
pub(crate) trait PeelStep {
    fn remaining(&self) -> usize;
    /// Removes and returns (sorted indices of) the current hull vertices.
    /// `None` signals backend overflow.
    fn peel_layer(&mut self) -> Option<Vec<usize>>;
}

impl<R: crate::ring::Ring> PeelStep for Peeler<R> {
    fn remaining(&self) -> usize {
        Peeler::remaining(self)
    }

    fn peel_layer(&mut self) -> Option<Vec<usize>> {
        Peeler::peel_layer(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::Grid;

    fn set(points: &[[i64; 2]]) -> PointSet {
        PointSet::from_points(points.iter().map(|p| Point::from(*p))).unwrap()
    }

    fn grid(d: usize, n: u64) -> PointSet {
        Grid::new(d, n).unwrap().materialize().unwrap()
    }

    #[test]
    fn singleton_is_extreme() {
        let q = ExtremenessQuery::new(Point::from([4, 4]), set(&[[4, 4]])).unwrap();
        assert!(is_extreme(&q).is_extreme());
    }

    #[test]
    fn origin_inside_triangle() {
        let ambient = set(&[[0, 0], [0, 1], [1, 0], [-1, -1]]);
        let q = ExtremenessQuery::new(Point::from([0, 0]), ambient.clone()).unwrap();
        let verdict = is_extreme(&q);
        let w = verdict.witness().expect("interior");
        assert!(w.verify_within(&ambient));
        assert_eq!(w.support().len(), 3);
    }

    #[test]
    fn midpoint_witness_on_segment() {
        let ambient = set(&[[0, 2], [-1, 2], [1, 2]]);
        let q = ExtremenessQuery::new(Point::from([0, 2]), ambient).unwrap();
        let w = is_extreme(&q).witness().cloned().unwrap();
        assert!(w.verify());
        let half = BigRational::new(1.into(), 2.into());
        assert!(w.support().iter().all(|(_, c)| *c == half));
    }

    #[test]
    fn unit_vector_after_corners_removed() {
        // [-1,1]^3 minus its 8 corners: (1,0,0) is the midpoint of two edge
        // centers, so it is not yet a vertex.
        let ambient = grid(3, 1).filter(|p| !p.coords().iter().all(|c| c != &BigInt::zero()));
        let q = ExtremenessQuery::new(Point::from([1, 0, 0]), ambient.clone()).unwrap();
        let w = is_extreme(&q).witness().cloned().expect("interior");
        assert!(w.verify_within(&ambient));
        assert!(w.support().len() <= 4);

        // Once the edge centers are gone too it becomes a vertex.
        let ambient = ambient.filter(|p| p.coords().iter().filter(|c| c.is_zero()).count() >= 2);
        assert_eq!(ambient.len(), 7);
        let q = ExtremenessQuery::new(Point::from([1, 0, 0]), ambient).unwrap();
        assert!(is_extreme(&q).is_extreme());
    }

    #[test]
    fn query_validation() {
        assert!(matches!(
            ExtremenessQuery::new(Point::from([1]), set(&[[1, 1]])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            ExtremenessQuery::new(Point::from([0, 0]), set(&[[1, 1]])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn extreme_points_of_small_grids() {
        let corners = |n: i64| set(&[[-n, -n], [-n, n], [n, -n], [n, n]]);
        assert_eq!(extreme_points(&grid(2, 1)), corners(1));
        assert_eq!(extreme_points(&grid(2, 3)), corners(3));
        let single = set(&[[7, -2]]);
        assert_eq!(extreme_points(&single), single);
    }

    #[test]
    fn extreme_points_matches_per_point_lp() {
        let s = set(&[
            [0, 0],
            [5, 1],
            [3, 3],
            [1, 4],
            [-2, 2],
            [-3, -1],
            [0, -3],
            [2, -2],
            [4, -1],
            [1, 1],
        ]);
        let fast = extreme_points(&s);
        let slow = s.filter(|p| {
            is_extreme(&ExtremenessQuery::new(p.clone(), s.clone()).unwrap()).is_extreme()
        });
        assert_eq!(fast, slow);
    }

    #[test]
    fn huge_coordinates_use_wide_backend() {
        let big = BigInt::from(10).pow(30);
        let pts = vec![
            Point::new(vec![big.clone(), BigInt::zero()]).unwrap(),
            Point::new(vec![-big.clone(), BigInt::zero()]).unwrap(),
            Point::new(vec![BigInt::zero(), big.clone()]).unwrap(),
            Point::new(vec![BigInt::zero(), BigInt::from(1)]).unwrap(),
        ];
        let s = PointSet::from_points(pts).unwrap();
        let ext = extreme_points(&s);
        assert_eq!(ext.len(), 3);
        assert!(!ext.contains(&Point::from([0, 1])));
        let q = ExtremenessQuery::new(Point::from([0, 1]), s).unwrap();
        assert!(is_extreme(&q).witness().unwrap().verify());
    }

    #[test]
    fn reduction_keeps_witness_valid() {
        let support: Vec<(Point, BigRational)> = [[1, 1], [1, -1], [-1, 1], [-1, -1]]
            .iter()
            .map(|p| (Point::from(*p), BigRational::new(1.into(), 4.into())))
            .collect();
        let w = ConvexCombinationWitness::new(Point::from([0, 0]), support);
        assert!(w.verify());
        let r = w.reduced();
        assert!(r.verify());
        assert!(r.support().len() <= 3);
    }

    #[test]
    fn malformed_witnesses_fail() {
        let half = BigRational::new(1.into(), 2.into());
        let w = ConvexCombinationWitness::new(
            Point::from([0, 0]),
            vec![
                (Point::from([1, 0]), half.clone()),
                (Point::from([-1, 1]), half.clone()),
            ],
        );
        assert!(!w.verify());
        let w = ConvexCombinationWitness::new(
            Point::from([0, 0]),
            vec![(Point::from([0, 0]), BigRational::one())],
        );
        assert!(!w.verify());
        let w = ConvexCombinationWitness::new(
            Point::from([0, 0]),
            vec![
                (Point::from([1, 0]), half.clone()),
                (
                    Point::from([-1, 0]),
                    half.clone() * BigRational::from_integer(3.into()),
                ),
            ],
        );
        assert!(!w.verify());
    }
}
