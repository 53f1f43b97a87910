//! Fixtures shared by the benchmarks.

use layers_core::{Grid, Point, PointSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `[-n, n]^d`.
pub fn grid(d: usize, n: u64) -> PointSet {
    Grid::new(d, n)
        .and_then(|g| g.materialize())
        .expect("benchmark grids are small")
}

/// `count` distinct-or-not points drawn uniformly from `[-reach, reach]^d`
/// with a fixed seed.
pub fn random_set(d: usize, count: usize, reach: i64, seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..count).map(|_| {
        let coords: Vec<i64> = (0..d).map(|_| rng.gen_range(-reach..=reach)).collect();
        Point::from_i64s(&coords)
    });
    PointSet::new(d, points).expect("coordinates have dimension d")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_reproducible() {
        assert_eq!(grid(2, 3).len(), 49);
        let a = random_set(3, 200, 50, 7);
        assert_eq!(a, random_set(3, 200, 50, 7));
        assert!(a.len() <= 200 && a.dim() == 3);
    }
}
