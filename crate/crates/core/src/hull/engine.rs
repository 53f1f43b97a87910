//! Layer engine: classify all points of a shrinking set at once.
//!
//! Two facts keep the LP count low:
//!
//! * a point that is the midpoint of two other live points is never a vertex,
//!   and the hull of the remaining *candidates* equals the hull of the whole
//!   set, so every LP can be posed against candidates only;
//! * vertices are discovered lazily (Clarkson style): a candidate is tested
//!   against the vertices found so far, and on failure the LP's separating
//!   functional is maximized over the candidates to reveal a new vertex.

use std::collections::HashMap;

use rayon::prelude::*;

use super::lp::{locate, Membership};
use crate::point::PointSet;
use crate::ring::Ring;

/// Below this many items the work stays on the calling thread.
const PARALLEL_MIN: usize = 256;

/// `items.map(f)`, in parallel for large inputs; `None` if any call fails.
pub(crate) fn try_map<T: Sync, U: Send>(
    items: &[T],
    f: impl Fn(&T) -> Option<U> + Sync + Send,
) -> Option<Vec<U>> {
    if items.len() < PARALLEL_MIN {
        items.iter().map(f).collect()
    } else {
        items.par_iter().map(f).collect()
    }
}

/// Something the separating functional can be maximized over.
pub(crate) trait Ground<R> {
    /// Lexicographically largest maximizer of `c . x`; always a vertex of the
    /// ground set's hull.
    fn argmax(&self, c: &[R]) -> Option<Vec<R>>;
}

/// Vertices confirmed so far in the current layer.
pub(crate) struct Separation<R> {
    hull: Vec<Vec<R>>,
}

impl<R: Ring> Separation<R> {
    pub(crate) fn new() -> Self {
        Separation { hull: Vec::new() }
    }

    pub(crate) fn push(&mut self, v: Vec<R>) {
        self.hull.push(v);
    }

    fn columns(&self) -> Vec<&[R]> {
        self.hull.iter().map(Vec::as_slice).collect()
    }

    /// Parallel prefilter: `Some(true)` for targets inside the current hull.
    pub(crate) fn inside_current(&self, targets: &[&[R]]) -> Option<Vec<bool>> {
        if self.hull.is_empty() {
            return Some(vec![false; targets.len()]);
        }
        let cols = self.columns();
        try_map(targets, |t| {
            locate(t, &cols).map(|m| matches!(m, Membership::Inside { .. }))
        })
    }

    /// Whether `target` is a vertex of the ground hull. Every vertex newly
    /// discovered along the way is reported through `found`, which returns
    /// `true` once that discovery settles `target` as a vertex.
    pub(crate) fn classify(
        &mut self,
        target: &[R],
        ground: &impl Ground<R>,
        mut found: impl FnMut(&[R]) -> bool,
    ) -> Option<bool> {
        loop {
            if self.hull.iter().any(|h| h.as_slice() == target) {
                return Some(true);
            }
            let cols = self.columns();
            match locate(target, &cols)? {
                Membership::Inside { .. } => return Some(false),
                Membership::Outside { separator } => {
                    let q = ground.argmax(&separator)?;
                    debug_assert!(!self.hull.contains(&q));
                    let done = found(&q) || q.as_slice() == target;
                    self.hull.push(q);
                    if done {
                        return Some(true);
                    }
                }
            }
        }
    }
}

/// Short integer directions used by the midpoint filter, one per `{v, -v}`
/// pair, shortest first.
pub(crate) fn midpoint_shifts(dim: usize) -> Vec<Vec<i64>> {
    let reach: i64 = match dim {
        1..=3 => 2,
        4..=6 => 1,
        _ => 0,
    };
    let mut out = Vec::new();
    if reach == 0 {
        for i in 0..dim {
            let mut v = vec![0; dim];
            v[i] = 1;
            out.push(v);
        }
        for i in 0..dim {
            for j in i + 1..dim {
                for s in [1, -1] {
                    let mut v = vec![0; dim];
                    v[i] = 1;
                    v[j] = s;
                    out.push(v);
                }
            }
        }
    } else {
        let base = (2 * reach + 1) as usize;
        for code in 0..base.pow(dim as u32) {
            let mut rest = code;
            let v: Vec<i64> = (0..dim)
                .map(|_| {
                    let digit = (rest % base) as i64 - reach;
                    rest /= base;
                    digit
                })
                .collect();
            if v.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0) {
                out.push(v);
            }
        }
    }
    out.sort_by_key(|v| (v.iter().map(|c| c * c).sum::<i64>(), v.clone()));
    out
}

/// Live points and the midpoint filter, maintained incrementally. Points
/// only ever die, so a point with no live pair never regains one: the
/// candidate list persists across layers and only points whose recorded pair
/// lost a member are re-examined.
pub(crate) struct MidpointFilter {
    alive: Vec<bool>,
    remaining: usize,
    pair: Vec<Option<(u32, u32)>>,
    /// Points whose recorded pair uses this point.
    dependents: Vec<Vec<u32>>,
    queued: Vec<bool>,
    stale: Vec<u32>,
    cands: Vec<u32>,
}

impl MidpointFilter {
    pub(crate) fn new(n: usize) -> Self {
        MidpointFilter {
            alive: vec![true; n],
            remaining: n,
            pair: vec![None; n],
            dependents: vec![Vec::new(); n],
            queued: vec![true; n],
            stale: (0..n as u32).collect(),
            cands: Vec::new(),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.alive.len()
    }

    pub(crate) fn is_alive(&self, i: u32) -> bool {
        self.alive[i as usize]
    }

    pub(crate) fn remaining(&self) -> usize {
        self.remaining
    }

    /// Points that need a fresh pair search.
    pub(crate) fn take_stale(&mut self) -> Vec<u32> {
        let stale = std::mem::take(&mut self.stale);
        for &i in &stale {
            self.queued[i as usize] = false;
        }
        stale
    }

    /// Records the pair searches for `stale`; points without a pair become
    /// candidates.
    pub(crate) fn absorb(&mut self, stale: &[u32], found: Vec<Option<(u32, u32)>>) {
        for (&i, res) in stale.iter().zip(found) {
            self.pair[i as usize] = res;
            match res {
                Some((a, b)) => {
                    self.dependents[a as usize].push(i);
                    self.dependents[b as usize].push(i);
                }
                None => self.cands.push(i),
            }
        }
    }

    /// Live points that are not a midpoint of two other live points.
    pub(crate) fn candidates(&self) -> &[u32] {
        &self.cands
    }

    pub(crate) fn remove(&mut self, layer: &[u32]) {
        for &i in layer {
            self.alive[i as usize] = false;
            self.remaining -= 1;
        }
        for &i in layer {
            for dep in std::mem::take(&mut self.dependents[i as usize]) {
                let d = dep as usize;
                let uses_i = self.pair[d].is_some_and(|(a, b)| a == i || b == i);
                if self.alive[d] && uses_i && !self.queued[d] {
                    self.pair[d] = None;
                    self.queued[d] = true;
                    self.stale.push(dep);
                }
            }
        }
        let alive = &self.alive;
        self.cands.retain(|&i| alive[i as usize]);
    }
}

/// Flat-array peeling state over one arithmetic backend.
pub(crate) struct Peeler<R> {
    dim: usize,
    coords: Vec<R>,
    norms: Vec<R>,
    index: HashMap<Box<[R]>, u32>,
    filter: MidpointFilter,
    shifts: Vec<Vec<R>>,
}

struct Candidates<'a, R> {
    peeler: &'a Peeler<R>,
    members: &'a [u32],
}

impl<R: Ring> Ground<R> for Candidates<'_, R> {
    fn argmax(&self, c: &[R]) -> Option<Vec<R>> {
        let mut best: Option<(R, &[R])> = None;
        for &i in self.members {
            let x = self.peeler.point(i);
            let v = R::dot(c, x)?;
            let better = match &best {
                None => true,
                Some((bv, bx)) => v > *bv || (v == *bv && x > *bx),
            };
            if better {
                best = Some((v, x));
            }
        }
        best.map(|(_, x)| x.to_vec())
    }
}

impl<R: Ring> Peeler<R> {
    pub(crate) fn new(s: &PointSet) -> Option<Self> {
        let dim = s.dim();
        let mut coords = Vec::with_capacity(s.len() * dim);
        for p in s {
            for c in p.coords() {
                coords.push(R::from_scalar(c)?);
            }
        }
        let n = s.len();
        let mut norms = Vec::with_capacity(n);
        let mut index = HashMap::with_capacity(n);
        for i in 0..n {
            let x = &coords[i * dim..(i + 1) * dim];
            norms.push(R::dot(x, x)?);
            index.insert(x.to_vec().into_boxed_slice(), i as u32);
        }
        let shifts = midpoint_shifts(dim)
            .into_iter()
            .map(|v| v.into_iter().map(R::from_i64).collect())
            .collect();
        Some(Peeler {
            dim,
            coords,
            norms,
            index,
            filter: MidpointFilter::new(n),
            shifts,
        })
    }

    pub(crate) fn remaining(&self) -> usize {
        self.filter.remaining()
    }

    fn point(&self, i: u32) -> &[R] {
        let i = i as usize;
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    fn find_pair(&self, i: u32, scratch: &mut Vec<R>) -> Option<Option<(u32, u32)>> {
        let x = self.point(i);
        for v in &self.shifts {
            scratch.clear();
            for (a, b) in x.iter().zip(v) {
                scratch.push(a.add(b)?);
            }
            let Some(&up) = self.index.get(scratch.as_slice()) else {
                continue;
            };
            if !self.filter.is_alive(up) {
                continue;
            }
            scratch.clear();
            for (a, b) in x.iter().zip(v) {
                scratch.push(a.sub(b)?);
            }
            if let Some(&down) = self.index.get(scratch.as_slice()) {
                if self.filter.is_alive(down) {
                    return Some(Some((up, down)));
                }
            }
        }
        Some(None)
    }

    /// Candidates ordered by decreasing norm then coordinates.
    fn candidates(&mut self) -> Option<Vec<u32>> {
        let stale = self.filter.take_stale();
        let found = try_map(&stale, |&i| self.find_pair(i, &mut Vec::new()))?;
        self.filter.absorb(&stale, found);
        let mut cands = self.filter.candidates().to_vec();
        cands.sort_by(|&a, &b| {
            self.norms[b as usize]
                .cmp(&self.norms[a as usize])
                .then_with(|| self.point(a).cmp(self.point(b)))
        });
        Some(cands)
    }

    /// Removes the current hull vertices and returns their indices (into the
    /// original point set), sorted.
    pub(crate) fn peel_layer(&mut self) -> Option<Vec<usize>> {
        if self.filter.remaining() == 0 {
            return Some(Vec::new());
        }
        let cands = self.candidates()?;
        let mut vertex = vec![false; cands.len()];
        let mut slot: HashMap<u32, usize> =
            cands.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let ground = Candidates {
            peeler: self,
            members: &cands,
        };

        let mut sep = Separation::new();
        // Seed with maximizers of the filter directions (and their negations).
        for v in &self.shifts {
            for dir in [
                v.clone(),
                v.iter().map(|c| c.neg()).collect::<Option<Vec<R>>>()?,
            ] {
                let q = ground.argmax(&dir)?;
                let k = slot[&self.index[q.as_slice()]];
                if !vertex[k] {
                    vertex[k] = true;
                    sep.push(q);
                }
            }
        }

        let pending: Vec<usize> = (0..cands.len()).filter(|&k| !vertex[k]).collect();
        let targets: Vec<&[R]> = pending.iter().map(|&k| self.point(cands[k])).collect();
        let inside = sep.inside_current(&targets)?;
        for (&k, inside) in pending.iter().zip(inside) {
            if inside || vertex[k] {
                continue;
            }
            let index = &self.index;
            let is_vertex = sep.classify(self.point(cands[k]), &ground, |q| {
                vertex[slot[&index[q]]] = true;
                false
            })?;
            vertex[k] |= is_vertex;
        }
        slot.clear();

        let mut layer: Vec<u32> = cands
            .iter()
            .zip(&vertex)
            .filter(|(_, &v)| v)
            .map(|(&i, _)| i)
            .collect();
        layer.sort_unstable();
        self.filter.remove(&layer);
        Some(layer.into_iter().map(|i| i as usize).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifts_are_half_of_the_cube() {
        assert_eq!(midpoint_shifts(1), vec![vec![1], vec![2]]);
        // (5^2 - 1) / 2
        assert_eq!(midpoint_shifts(2).len(), 12);
        // (3^4 - 1) / 2
        assert_eq!(midpoint_shifts(4).len(), 40);
        for v in midpoint_shifts(3) {
            assert!(v.iter().find(|&&c| c != 0).unwrap() > &0);
        }
        assert_eq!(midpoint_shifts(8).len(), 8 + 2 * 28);
    }
}
