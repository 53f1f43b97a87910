//! The hyperoctahedral group (coordinate permutations and sign flips) acting
//! on `Z^d`, with orbit-reduced grid peeling built on it.
//!
//! The centered grid is invariant under the group, and so is every peeling
//! step. [`peel_orbits`] therefore classifies one canonical representative per
//! orbit and broadcasts the verdict.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::hull::{midpoint_shifts, try_map, Ground, MidpointFilter, Separation};
use crate::peel::LayerAssignment;
use crate::point::{Grid, Point, PointSet, Scalar};
use crate::ring::Ring;

/// `x -> (s_0 x_{p(0)}, ..., s_{d-1} x_{p(d-1)})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    negate: Vec<bool>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, negate: Vec<bool>) -> Result<Self> {
        let d = perm.len();
        let mut seen = vec![false; d];
        for &p in &perm {
            if p >= d || std::mem::replace(&mut seen[p], true) {
                return Err(Error::domain(format!("{perm:?} is not a permutation")));
            }
        }
        if negate.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: negate.len(),
            });
        }
        Ok(SignedPermutation { perm, negate })
    }

    pub fn identity(dim: usize) -> Self {
        SignedPermutation {
            perm: (0..dim).collect(),
            negate: vec![false; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn apply(&self, p: &Point) -> Point {
        assert_eq!(p.dim(), self.dim(), "dimension mismatch");
        Point::from_scalars(self.perm.iter().zip(&self.negate).map(|(&k, &neg)| {
            let c = p.coord(k);
            if neg {
                -c
            } else {
                c.clone()
            }
        }))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        let perm = self.perm.iter().map(|&k| other.perm[k]).collect();
        let negate = self
            .perm
            .iter()
            .zip(&self.negate)
            .map(|(&k, &neg)| neg ^ other.negate[k])
            .collect();
        SignedPermutation { perm, negate }
    }

    /// All `2^d * d!` group elements.
    pub fn all(dim: usize) -> Vec<SignedPermutation> {
        let mut out = Vec::new();
        for perm in permutations(dim) {
            for mask in 0..(1u64 << dim) {
                out.push(SignedPermutation {
                    perm: perm.clone(),
                    negate: (0..dim).map(|i| mask >> i & 1 == 1).collect(),
                });
            }
        }
        out
    }
}

fn permutations(dim: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..dim).collect();
    let mut out = vec![cur.clone()];
    // lexicographic next-permutation
    loop {
        let Some(i) = (1..dim).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..dim).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// An orbit, represented by its canonical point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orbit {
    representative: Point,
    size: Scalar,
}

impl Orbit {
    pub fn representative(&self) -> &Point {
        &self.representative
    }

    /// Number of distinct images: `2^z d! / prod m_v!` with `z` nonzero
    /// coordinates and multiplicities `m_v` of the distinct absolute values.
    pub fn size(&self) -> &Scalar {
        &self.size
    }

    /// Every distinct image, in lexicographic order.
    pub fn images(&self) -> Vec<Point> {
        let values = self.representative.coords();
        let dim = values.len();
        let mut out = Vec::new();
        for perm in permutations(dim) {
            let placed: Vec<&Scalar> = perm.iter().map(|&k| &values[k]).collect();
            let nonzero: Vec<usize> = (0..dim)
                .filter(|&i| Signed::is_positive(placed[i]))
                .collect();
            for mask in 0..(1u64 << nonzero.len()) {
                let mut coords: Vec<Scalar> = placed.iter().map(|&c| c.clone()).collect();
                for (bit, &i) in nonzero.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        coords[i] = -&coords[i];
                    }
                }
                out.push(Point::from_scalars(coords));
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// The group image with nonnegative, nonincreasing coordinates.
pub fn canonicalize(p: &Point) -> Point {
    let mut abs: Vec<Scalar> = p.coords().iter().map(Signed::abs).collect();
    abs.sort_unstable_by(|a, b| b.cmp(a));
    Point::from_scalars(abs)
}

pub fn orbit_of(p: &Point) -> Orbit {
    let representative = canonicalize(p);
    let coords = representative.coords();
    let dim = coords.len();
    let nonzero = coords.iter().filter(|c| Signed::is_positive(*c)).count();
    let factorial = |k: usize| (1..=k).fold(<BigInt as One>::one(), |acc, i| acc * i);
    let mut size = factorial(dim) << nonzero;
    let mut run = 1;
    for i in 1..=dim {
        if i < dim && coords[i] == coords[i - 1] {
            run += 1;
        } else {
            size = size.div_floor(&factorial(run));
            run = 1;
        }
    }
    Orbit {
        representative,
        size,
    }
}

fn canonical_ring<R: Ring>(x: &[R], out: &mut Vec<R>) -> Option<()> {
    out.clear();
    for c in x {
        out.push(c.abs()?);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    Some(())
}

/// Orbit-level peeling state.
struct OrbitPeeler<R> {
    dim: usize,
    reps: Vec<R>,
    norms: Vec<R>,
    index: HashMap<Box<[R]>, u32>,
    filter: MidpointFilter,
    shifts: Vec<Vec<R>>,
}

struct OrbitGround<'a, R> {
    peeler: &'a OrbitPeeler<R>,
    members: &'a [u32],
}

impl<R: Ring> Ground<R> for OrbitGround<'_, R> {
    fn argmax(&self, c: &[R]) -> Option<Vec<R>> {
        let dim = c.len();
        // Rearrangement: the best image pairs the largest |c_i| with the
        // largest coordinate magnitude.
        let mut by_weight: Vec<usize> = (0..dim).collect();
        let weights: Vec<R> = c.iter().map(R::abs).collect::<Option<_>>()?;
        by_weight.sort_by(|&a, &b| weights[b].cmp(&weights[a]).then(a.cmp(&b)));
        let sorted_w: Vec<R> = by_weight.iter().map(|&i| weights[i].clone()).collect();

        let mut best_value: Option<R> = None;
        let mut best: Vec<R> = Vec::new();
        for &o in self.members {
            let rep = self.peeler.rep(o);
            let v = R::dot(&sorted_w, rep)?;
            let cmp = best_value.as_ref().map(|b| v.cmp(b));
            if cmp == Some(std::cmp::Ordering::Less) {
                continue;
            }
            let image = lex_max_image(c, &weights, &by_weight, rep)?;
            if cmp == Some(std::cmp::Ordering::Equal) && image <= best {
                continue;
            }
            best_value = Some(v);
            best = image;
        }
        best_value.map(|_| best)
    }
}

/// Lexicographically largest image of `rep` among those maximizing `c . x`.
fn lex_max_image<R: Ring>(
    c: &[R],
    weights: &[R],
    by_weight: &[usize],
    rep: &[R],
) -> Option<Vec<R>> {
    let dim = c.len();
    // Each block of equal |c| receives a fixed multiset of magnitudes.
    let mut group_of = vec![0usize; dim];
    let mut pools: Vec<Vec<R>> = Vec::new();
    for (rank, &i) in by_weight.iter().enumerate() {
        if rank == 0 || weights[i] != weights[by_weight[rank - 1]] {
            pools.push(Vec::new());
        }
        group_of[i] = pools.len() - 1;
        pools.last_mut().unwrap().push(rep[rank].clone());
    }
    for pool in &mut pools {
        pool.sort_unstable(); // ascending
    }
    let mut out = Vec::with_capacity(dim);
    for i in 0..dim {
        let pool = &mut pools[group_of[i]];
        if c[i].is_negative() {
            out.push(pool.remove(0).neg()?);
        } else {
            out.push(pool.pop().expect("pool sized to its block"));
        }
    }
    Some(out)
}

impl<R: Ring> OrbitPeeler<R> {
    fn new(grid: &Grid) -> Option<Self> {
        let dim = grid.dim();
        let n = R::from_scalar(&BigInt::from(grid.radius()))?;
        let mut reps: Vec<R> = Vec::new();
        // nonincreasing tuples in [0, n]^d, lexicographically descending
        let mut cur = vec![n.clone(); dim];
        loop {
            reps.extend(cur.iter().cloned());
            let Some(k) = (0..dim).rev().find(|&k| cur[k].is_positive()) else {
                break;
            };
            cur[k] = cur[k].sub(&R::one())?;
            for j in k + 1..dim {
                cur[j] = cur[k].clone();
            }
        }
        let count = reps.len() / dim;
        let mut norms = Vec::with_capacity(count);
        let mut index = HashMap::with_capacity(count);
        for o in 0..count {
            let x = &reps[o * dim..(o + 1) * dim];
            norms.push(R::dot(x, x)?);
            index.insert(x.to_vec().into_boxed_slice(), o as u32);
        }
        let shifts = midpoint_shifts(dim)
            .into_iter()
            .map(|v| v.into_iter().map(R::from_i64).collect())
            .collect();
        Some(OrbitPeeler {
            dim,
            reps,
            norms,
            index,
            filter: MidpointFilter::new(count),
            shifts,
        })
    }

    fn rep(&self, o: u32) -> &[R] {
        let o = o as usize;
        &self.reps[o * self.dim..(o + 1) * self.dim]
    }

    fn orbit_of(&self, x: &[R], scratch: &mut Vec<R>) -> Option<Option<u32>> {
        canonical_ring(x, scratch)?;
        Some(self.index.get(scratch.as_slice()).copied())
    }

    fn find_pair(&self, o: u32) -> Option<Option<(u32, u32)>> {
        let x = self.rep(o);
        let mut moved = Vec::with_capacity(self.dim);
        let mut scratch = Vec::with_capacity(self.dim);
        for v in &self.shifts {
            moved.clear();
            for (a, b) in x.iter().zip(v) {
                moved.push(a.add(b)?);
            }
            let Some(up) = self.orbit_of(&moved, &mut scratch)? else {
                continue;
            };
            if !self.filter.is_alive(up) {
                continue;
            }
            moved.clear();
            for (a, b) in x.iter().zip(v) {
                moved.push(a.sub(b)?);
            }
            if let Some(down) = self.orbit_of(&moved, &mut scratch)? {
                if self.filter.is_alive(down) {
                    return Some(Some((up, down)));
                }
            }
        }
        Some(None)
    }

    fn peel_layer(&mut self) -> Option<Vec<u32>> {
        let stale = self.filter.take_stale();
        let found = try_map(&stale, |&o| self.find_pair(o))?;
        self.filter.absorb(&stale, found);
        let mut cands = self.filter.candidates().to_vec();
        cands.sort_by(|&a, &b| {
            self.norms[b as usize]
                .cmp(&self.norms[a as usize])
                .then_with(|| self.rep(a).cmp(self.rep(b)))
        });

        let mut vertex: HashMap<u32, bool> = cands.iter().map(|&o| (o, false)).collect();
        let ground = OrbitGround {
            peeler: self,
            members: &cands,
        };
        let mut sep = Separation::new();
        let mut scratch = Vec::new();
        for v in &self.shifts {
            for dir in [v.clone(), v.iter().map(R::neg).collect::<Option<Vec<R>>>()?] {
                let q = ground.argmax(&dir)?;
                let o = self
                    .orbit_of(&q, &mut scratch)?
                    .expect("argmax returns grid points");
                if !vertex[&o] {
                    vertex.insert(o, true);
                    sep.push(q);
                }
            }
        }
        let pending: Vec<u32> = cands.iter().copied().filter(|o| !vertex[o]).collect();
        let targets: Vec<&[R]> = pending.iter().map(|&o| self.rep(o)).collect();
        let inside = sep.inside_current(&targets)?;
        for (&o, inside) in pending.iter().zip(inside) {
            if inside || vertex[&o] {
                continue;
            }
            let mut overflow = false;
            let is_vertex = sep.classify(self.rep(o), &ground, |q| {
                match self.orbit_of(q, &mut scratch) {
                    Some(Some(found)) => {
                        vertex.insert(found, true);
                        found == o
                    }
                    _ => {
                        overflow = true;
                        false
                    }
                }
            })?;
            if overflow {
                return None;
            }
            if is_vertex {
                vertex.insert(o, true);
            }
        }

        let mut layer: Vec<u32> = cands.iter().copied().filter(|o| vertex[o]).collect();
        layer.sort_unstable();
        self.filter.remove(&layer);
        Some(layer)
    }

    /// Layer of every orbit, indexed like `reps`.
    fn run(mut self) -> Option<(Self, Vec<usize>)> {
        let mut layer_of = vec![0usize; self.filter.len()];
        let mut round = 0;
        while self.filter.remaining() > 0 {
            round += 1;
            for o in self.peel_layer()? {
                layer_of[o as usize] = round;
            }
        }
        Some((self, layer_of))
    }
}

fn peel_orbits_on<R: Ring>(grid: &Grid, points: &PointSet) -> Option<LayerAssignment> {
    let (peeler, orbit_layer) = OrbitPeeler::<R>::new(grid)?.run()?;
    let mut scratch = Vec::new();
    let mut layer_of = Vec::with_capacity(points.len());
    for p in points {
        let x: Vec<R> = p
            .coords()
            .iter()
            .map(R::from_scalar)
            .collect::<Option<_>>()?;
        let o = peeler.orbit_of(&x, &mut scratch)?.expect("grid point");
        layer_of.push(orbit_layer[o as usize]);
    }
    Some(LayerAssignment::new(points.clone(), layer_of).expect("orbit layers are contiguous"))
}

/// Peels a centered grid by classifying one representative per orbit.
/// Produces the same assignment as [`crate::peel::peel`] on the materialized
/// grid.
pub fn peel_orbits(grid: &Grid) -> Result<LayerAssignment> {
    let points = grid.materialize()?;
    peel_orbits_materialized(grid, &points)
}

pub(crate) fn peel_orbits_materialized(grid: &Grid, points: &PointSet) -> Result<LayerAssignment> {
    Ok(peel_orbits_on::<i128>(grid, points)
        .or_else(|| peel_orbits_on::<BigInt>(grid, points))
        .expect("BigInt arithmetic cannot overflow"))
}

/// The grid `s` materializes, if it is exactly some centered grid.
pub fn as_centered_grid(s: &PointSet) -> Option<Grid> {
    let first = s.points().first()?;
    let n = Signed::abs(first.coord(0));
    let radius: u64 = (&n).try_into().ok()?;
    let grid = Grid::new(s.dim(), radius).ok()?;
    (grid.point_count() == BigInt::from(s.len()) && s.iter().all(|p| grid.contains(p)))
        .then_some(grid)
}

/// [`peel_orbits`] for a point set, which must be a centered grid.
pub fn peel_orbits_set(s: &PointSet) -> Result<LayerAssignment> {
    let grid = as_centered_grid(s)
        .ok_or_else(|| Error::domain("orbit peeling needs a centered grid [-n, n]^d as input"))?;
    peel_orbits_materialized(&grid, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::peel::peel_generic;

    #[test]
    fn canonical_forms() {
        assert_eq!(
            canonicalize(&Point::from([-2, 0, 1])),
            Point::from([2, 1, 0])
        );
        assert_eq!(canonicalize(&Point::from([3, 1])), Point::from([3, 1]));
        assert_eq!(canonicalize(&Point::origin(5)), Point::origin(5));
    }

    #[test]
    fn orbit_sizes() {
        let o = orbit_of(&Point::from([1, 3]));
        assert_eq!(o.representative(), &Point::from([3, 1]));
        assert_eq!(o.size(), &BigInt::from(8));
        assert_eq!(orbit_of(&Point::from([2, 2])).size(), &BigInt::from(4));
        assert_eq!(orbit_of(&Point::origin(6)).size(), &BigInt::from(1));
        assert_eq!(orbit_of(&Point::from([0, 1, 1])).size(), &BigInt::from(12));
        assert_eq!(orbit_of(&Point::from([3, -1, 2])).size(), &BigInt::from(48));
    }

    #[test]
    fn images_match_size() {
        for p in [[1, 3, 0], [2, 2, 2], [0, 0, 1], [5, -5, 1], [0, 0, 0]] {
            let o = orbit_of(&Point::from(p));
            assert_eq!(BigInt::from(o.images().len()), *o.size(), "{p:?}");
        }
    }

    #[test]
    fn group_order_and_action() {
        assert_eq!(SignedPermutation::all(3).len(), 48);
        assert_eq!(SignedPermutation::all(4).len(), 384);
        let g = SignedPermutation::new(vec![1, 0], vec![true, false]).unwrap();
        assert_eq!(g.apply(&Point::from([1, 3])), Point::from([-3, 1]));
        let h = SignedPermutation::new(vec![0, 1], vec![false, true]).unwrap();
        let p = Point::from([4, 7]);
        assert_eq!(g.compose(&h).apply(&p), g.apply(&h.apply(&p)));
        assert!(SignedPermutation::new(vec![0, 0], vec![false, false]).is_err());
    }

    #[test]
    fn representative_counts() {
        let peeler = OrbitPeeler::<i128>::new(&Grid::new(2, 3).unwrap()).unwrap();
        assert_eq!(peeler.filter.len(), 10);
        let peeler = OrbitPeeler::<i128>::new(&Grid::new(1, 5).unwrap()).unwrap();
        assert_eq!(peeler.filter.len(), 6);
    }

    #[test]
    fn orbit_peeling_small_grids() {
        let a = peel_orbits(&Grid::new(3, 1).unwrap()).unwrap();
        assert_eq!(a.num_layers(), 4);
        for (rep, layer) in [
            ([1, 1, 1], 1),
            ([1, 1, 0], 2),
            ([1, 0, 0], 3),
            ([0, 0, 0], 4),
        ] {
            assert_eq!(a.layer_of(&Point::from(rep)), Some(layer));
        }
        let a = peel_orbits(&Grid::new(1, 5).unwrap()).unwrap();
        for k in 0..=5i64 {
            assert_eq!(a.layer_of(&Point::from([-k])), Some(6 - k as usize));
        }
    }

    #[test]
    fn orbit_matches_generic() {
        for (d, n) in [(2, 3), (2, 5), (3, 2), (4, 1)] {
            let g = Grid::new(d, n).unwrap();
            assert_eq!(
                peel_orbits(&g).unwrap(),
                peel_generic(&g.materialize().unwrap()),
                "d={d} n={n}"
            );
        }
    }

    #[test]
    fn orbit_peeling_requires_grid() {
        let s = PointSet::from_points([Point::from([0, 0]), Point::from([1, 0])]).unwrap();
        assert!(matches!(peel_orbits_set(&s), Err(Error::Domain(_))));
        let g = Grid::new(2, 2).unwrap().materialize().unwrap();
        assert_eq!(as_centered_grid(&g), Some(Grid::new(2, 2).unwrap()));
        assert!(peel_orbits_set(&g).is_ok());
    }

    #[test]
    fn lex_max_image_prefers_matching_signs() {
        let c = [2i128, -5, 0];
        let weights = [2i128, 5, 0];
        let by_weight = [1, 0, 2];
        let img = lex_max_image(&c, &weights, &by_weight, &[3, 2, 1]).unwrap();
        assert_eq!(img, vec![2, -3, 1]);
    }
}
