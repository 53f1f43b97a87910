use num_bigint::BigInt;

use super::LayerAssignment;
use crate::error::{Error, Result};
use crate::point::PointSet;
use crate::ring::Ring;

/// Planar peeling: one monotone-chain pass per layer over the (already
/// lexicographically sorted) surviving points, so `O(L * N)` overall.
pub fn peel_2d(s: &PointSet) -> Result<LayerAssignment> {
    if s.dim() != 2 {
        return Err(Error::domain(format!(
            "the planar engine needs dimension 2, got {}",
            s.dim()
        )));
    }
    let layers = peel_planar::<i128>(s)
        .or_else(|| peel_planar::<BigInt>(s))
        .expect("BigInt arithmetic cannot overflow");
    Ok(LayerAssignment::from_layers(s.clone(), layers))
}

fn peel_planar<R: Ring>(s: &PointSet) -> Option<Vec<Vec<usize>>> {
    let pts: Vec<[R; 2]> = s
        .iter()
        .map(|p| Some([R::from_scalar(p.coord(0))?, R::from_scalar(p.coord(1))?]))
        .collect::<Option<_>>()?;
    let mut alive: Vec<u32> = (0..pts.len() as u32).collect();
    let mut on_hull = vec![false; pts.len()];
    let mut layers = Vec::new();
    let mut chain: Vec<u32> = Vec::new();
    while !alive.is_empty() {
        let mut layer = hull_vertices(&pts, &alive, &mut chain)?;
        layer.sort_unstable();
        layer.dedup();
        for &i in &layer {
            on_hull[i as usize] = true;
        }
        alive.retain(|&i| !on_hull[i as usize]);
        layers.push(layer.into_iter().map(|i| i as usize).collect());
    }
    Some(layers)
}

/// `(a - o) x (b - o)`; positive for a counter-clockwise turn.
fn turn<R: Ring>(o: &[R; 2], a: &[R; 2], b: &[R; 2]) -> Option<R> {
    let ax = a[0].sub(&o[0])?;
    let ay = a[1].sub(&o[1])?;
    let bx = b[0].sub(&o[0])?;
    let by = b[1].sub(&o[1])?;
    R::cross(&ax, &by, &ay, &bx)
}

/// Strict vertices (collinear points dropped) of the hull of `alive`, which
/// must be in lexicographic order.
fn hull_vertices<R: Ring>(pts: &[[R; 2]], alive: &[u32], chain: &mut Vec<u32>) -> Option<Vec<u32>> {
    if alive.len() <= 2 {
        return Some(alive.to_vec());
    }
    let mut out = Vec::new();
    for pass in [true, false] {
        chain.clear();
        let mut push = |i: u32| -> Option<()> {
            while chain.len() >= 2 {
                let o = &pts[chain[chain.len() - 2] as usize];
                let a = &pts[chain[chain.len() - 1] as usize];
                if turn(o, a, &pts[i as usize])?.is_positive() {
                    break;
                }
                chain.pop();
            }
            chain.push(i);
            Some(())
        };
        if pass {
            alive.iter().try_for_each(|&i| push(i))?;
        } else {
            alive.iter().rev().try_for_each(|&i| push(i))?;
        }
        chain.pop();
        out.extend_from_slice(chain);
    }
    Some(out)
}
