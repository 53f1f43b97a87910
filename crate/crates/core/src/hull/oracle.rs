//! Brute-force extremeness oracle for tests.
//!
//! Shares nothing with the simplex: it enumerates every subset of
//! at most `d + 1` other points, keeps the affinely independent ones, solves
//! the square barycentric system by Cramer's rule and checks the signs.

use num_bigint::BigInt;

use super::ExtremenessQuery;
use crate::error::{Error, Result};
use crate::point::Point;
use crate::ring::Ring;

pub const DEFAULT_ORACLE_CAP: usize = 64;

/// Decides extremeness by exhaustive enumeration. Fails with a size-limit
/// error above `cap` ambient points (the cost is combinatorial).
pub fn brute_force_is_extreme(query: &ExtremenessQuery, cap: usize) -> Result<bool> {
    let ambient = query.ambient();
    if ambient.len() > cap {
        return Err(Error::SizeLimit {
            count: ambient.len().to_string(),
            cap: cap as u64,
        });
    }
    let others: Vec<&Point> = ambient.iter().filter(|p| *p != query.subject()).collect();
    let subject = query.subject();
    if let Some(found) = search::<i128>(subject, &others) {
        return Ok(!found);
    }
    Ok(!search::<BigInt>(subject, &others).expect("BigInt cannot overflow"))
}

/// `Some(true)` if some small affinely independent subset contains `subject`
/// in its convex hull.
fn search<R: Ring>(subject: &Point, others: &[&Point]) -> Option<bool> {
    let dim = subject.dim();
    let to_ring = |p: &Point| -> Option<Vec<R>> {
        let mut v: Vec<R> = p
            .coords()
            .iter()
            .map(R::from_scalar)
            .collect::<Option<_>>()?;
        v.push(R::one());
        Some(v)
    };
    let target = to_ring(subject)?;
    let cols: Vec<Vec<R>> = others.iter().map(|p| to_ring(p)).collect::<Option<_>>()?;
    let max_k = (dim + 1).min(cols.len());
    let mut chosen = Vec::with_capacity(max_k);
    for k in 1..=max_k {
        if subsets(&cols, &target, k, 0, &mut chosen)? {
            return Some(true);
        }
    }
    Some(false)
}

fn subsets<R: Ring>(
    cols: &[Vec<R>],
    target: &[R],
    k: usize,
    start: usize,
    chosen: &mut Vec<usize>,
) -> Option<bool> {
    if chosen.len() == k {
        return solves(cols, target, chosen);
    }
    let need = k - chosen.len();
    for j in start..=cols.len() - need {
        chosen.push(j);
        let hit = subsets(cols, target, k, j + 1, chosen)?;
        chosen.pop();
        if hit {
            return Some(true);
        }
    }
    Some(false)
}

/// Does `sum lambda_j cols[j] = target` have a unique solution with
/// `lambda >= 0`?
fn solves<R: Ring>(cols: &[Vec<R>], target: &[R], chosen: &[usize]) -> Option<bool> {
    let rows = target.len();
    let k = chosen.len();
    // Augmented matrix, row-major: rows x (k + 1).
    let mut m: Vec<Vec<R>> = (0..rows)
        .map(|r| {
            let mut row: Vec<R> = chosen.iter().map(|&j| cols[j][r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut order: Vec<usize> = (0..rows).collect();
    let mut prev = R::one();
    for c in 0..k {
        let Some(p) = (c..rows).find(|&r| !m[r][c].is_zero()) else {
            return Some(false); // affinely dependent subset
        };
        m.swap(c, p);
        order.swap(c, p);
        for r in c + 1..rows {
            for j in c + 1..=k {
                m[r][j] = R::cross(&m[r][j], &m[c][c], &m[r][c], &m[c][j])?.div_exact(&prev);
            }
            m[r][c] = R::zero();
        }
        prev = m[c][c].clone();
    }
    if (k..rows).any(|r| !m[r][k].is_zero()) {
        return Some(false); // inconsistent
    }

    let pivot_rows = &order[..k];
    let square: Vec<Vec<R>> = pivot_rows
        .iter()
        .map(|&r| chosen.iter().map(|&j| cols[j][r].clone()).collect())
        .collect();
    let det = determinant(square.clone())?;
    debug_assert!(!det.is_zero());
    for col in 0..k {
        let mut replaced = square.clone();
        for (row, &r) in replaced.iter_mut().zip(pivot_rows) {
            row[col] = target[r].clone();
        }
        let num = determinant(replaced)?;
        if !num.is_zero() && num.is_negative() != det.is_negative() {
            return Some(false);
        }
    }
    Some(true)
}

/// Bareiss determinant.
fn determinant<R: Ring>(mut m: Vec<Vec<R>>) -> Option<R> {
    let n = m.len();
    let mut sign_flip = false;
    let mut prev = R::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Some(R::zero());
        };
        if p != c {
            m.swap(c, p);
            sign_flip = !sign_flip;
        }
        for r in c + 1..n {
            for j in c + 1..n {
                m[r][j] = R::cross(&m[r][j], &m[c][c], &m[r][c], &m[c][j])?.div_exact(&prev);
            }
        }
        prev = m[c][c].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        det.neg()
    } else {
        Some(det)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::{Grid, PointSet};

    fn query(subject: [i64; 2], ambient: &[[i64; 2]]) -> ExtremenessQuery {
        let set = PointSet::from_points(ambient.iter().map(|p| Point::from(*p))).unwrap();
        ExtremenessQuery::new(Point::from(subject), set).unwrap()
    }

    #[test]
    fn determinants() {
        let m = vec![vec![2i128, 0, 1], vec![1, 3, 2], vec![1, 1, 2]];
        assert_eq!(determinant(m), Some(6));
        let m = vec![vec![2i128, 0, 1], vec![1, 3, 2], vec![1, 1, 1]];
        assert_eq!(determinant(m), Some(0));
        let m = vec![vec![0i128, 1], vec![1, 0]];
        assert_eq!(determinant(m), Some(-1));
        let m = vec![vec![1i128, 2], vec![2, 4]];
        assert_eq!(determinant(m), Some(0));
    }

    #[test]
    fn oracle_examples() {
        assert!(brute_force_is_extreme(&query([4, 4], &[[4, 4]]), 64).unwrap());
        assert!(!brute_force_is_extreme(&query([0, 2], &[[0, 2], [-1, 2], [1, 2]]), 64).unwrap());
        assert!(
            !brute_force_is_extreme(&query([0, 0], &[[0, 0], [0, 1], [1, 0], [-1, -1]]), 64)
                .unwrap()
        );
        let g = Grid::new(2, 2).unwrap().materialize().unwrap();
        let q = ExtremenessQuery::new(Point::from([2, 2]), g.clone()).unwrap();
        assert!(brute_force_is_extreme(&q, 64).unwrap());
        let q = ExtremenessQuery::new(Point::from([2, 1]), g).unwrap();
        assert!(!brute_force_is_extreme(&q, 64).unwrap());
    }

    #[test]
    fn oracle_cap() {
        let g = Grid::new(2, 4).unwrap().materialize().unwrap();
        let q = ExtremenessQuery::new(Point::from([0, 0]), g).unwrap();
        assert!(matches!(
            brute_force_is_extreme(&q, DEFAULT_ORACLE_CAP),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn boundary_point_on_segment_is_not_extreme() {
        // subject is on an edge, so a 2-subset witnesses it
        assert!(
            !brute_force_is_extreme(&query([1, 1], &[[0, 0], [2, 2], [1, 1], [3, -5]]), 64)
                .unwrap()
        );
        assert!(
            brute_force_is_extreme(&query([3, -5], &[[0, 0], [2, 2], [1, 1], [3, -5]]), 64)
                .unwrap()
        );
    }
}
