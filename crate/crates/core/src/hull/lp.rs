//! Phase-one simplex for convex-hull membership, in integer (fraction-free)
//! pivoting with Bland's rule.
//!
//! The system solved is
//!
//! ```text
//!     sum_j lambda_j (e_j - p) = 0,   sum_j lambda_j = 1,   lambda >= 0
//! ```
//!
//! with one artificial variable per row. The tableau is stored scaled by the
//! last pivot `D`, so every stored entry is an integer minor of the input and
//! each pivot's division is exact. When the system is infeasible the dual
//! values of the optimal phase-one basis give a linear functional `c` with
//! `c . e_j < c . p` for every column.

use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Membership<R> {
    /// `p = sum weight_j / denom * e_j`; indices refer to the input columns.
    Inside { weights: Vec<(usize, R)>, denom: R },
    /// `separator . e_j < separator . p` for every column `e_j`.
    Outside { separator: Vec<R> },
}

struct Tableau<R> {
    rows: usize,
    width: usize,
    cells: Vec<R>,
    basis: Vec<usize>,
    scale: R,
}

impl<R: Ring> Tableau<R> {
    fn at(&self, r: usize, c: usize) -> &R {
        &self.cells[r * self.width + c]
    }

    fn objective(&self, c: usize) -> &R {
        self.at(self.rows, c)
    }

    fn rhs(&self) -> usize {
        self.width - 1
    }

    fn pivot(&mut self, pr: usize, pc: usize) -> Option<()> {
        let piv = self.at(pr, pc).clone();
        let w = self.width;
        let pivot_row: Vec<R> = self.cells[pr * w..(pr + 1) * w].to_vec();
        for r in 0..=self.rows {
            if r == pr {
                continue;
            }
            let factor = self.at(r, pc).clone();
            let row = &mut self.cells[r * w..(r + 1) * w];
            if factor.is_zero() {
                // (x * piv - 0) / scale
                for x in row.iter_mut() {
                    *x = x.mul(&piv)?.div_exact(&self.scale);
                }
            } else {
                for (x, pv) in row.iter_mut().zip(&pivot_row) {
                    *x = R::cross(x, &piv, &factor, pv)?.div_exact(&self.scale);
                }
            }
        }
        self.basis[pr] = pc;
        self.scale = piv;
        Some(())
    }

    /// Bland: lowest-index column with negative reduced cost.
    fn entering(&self) -> Option<usize> {
        (0..self.rhs()).find(|&c| self.objective(c).is_negative())
    }

    /// Minimum ratio, ties broken by the lowest basic variable index.
    fn leaving(&self, pc: usize) -> Option<Option<usize>> {
        let rhs = self.rhs();
        let mut best: Option<usize> = None;
        for r in 0..self.rows {
            if !self.at(r, pc).is_positive() {
                continue;
            }
            best = match best {
                None => Some(r),
                Some(b) => {
                    // rhs_r / a_r  vs  rhs_b / a_b
                    let lhs = self.at(r, rhs).mul(self.at(b, pc))?;
                    let cur = self.at(b, rhs).mul(self.at(r, pc))?;
                    if lhs < cur || (lhs == cur && self.basis[r] < self.basis[b]) {
                        Some(r)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        Some(best)
    }
}

/// Decides whether `target` lies in the convex hull of `columns`.
///
/// Returns `None` only if the `Ring` backend overflowed.
pub(crate) fn locate<R: Ring>(target: &[R], columns: &[&[R]]) -> Option<Membership<R>> {
    let dim = target.len();
    let rows = dim + 1;
    let k = columns.len();
    if k == 0 {
        // Empty hull: any functional works; pick one that still satisfies
        // the contract vacuously.
        return Some(Membership::Outside {
            separator: vec![R::zero(); dim],
        });
    }
    let width = k + rows + 1;
    let mut cells = vec![R::zero(); (rows + 1) * width];
    for (j, col) in columns.iter().enumerate() {
        debug_assert_eq!(col.len(), dim);
        let mut colsum = R::one();
        for i in 0..dim {
            let v = col[i].sub(&target[i])?;
            colsum = colsum.add(&v)?;
            cells[i * width + j] = v;
        }
        cells[dim * width + j] = R::one();
        cells[rows * width + j] = colsum.neg()?;
    }
    for i in 0..rows {
        cells[i * width + k + i] = R::one();
    }
    cells[dim * width + width - 1] = R::one();
    cells[rows * width + width - 1] = R::one().neg()?;

    let mut t = Tableau {
        rows,
        width,
        cells,
        basis: (k..k + rows).collect(),
        scale: R::one(),
    };

    while let Some(pc) = t.entering() {
        let pr = t
            .leaving(pc)?
            .expect("phase-one objective is bounded below");
        t.pivot(pr, pc)?;
    }

    let rhs = t.rhs();
    if t.objective(rhs).is_zero() {
        let weights = (0..rows)
            .filter(|&r| t.basis[r] < k && !t.at(r, rhs).is_zero())
            .map(|r| (t.basis[r], t.at(r, rhs).clone()))
            .collect();
        Some(Membership::Inside {
            weights,
            denom: t.scale,
        })
    } else {
        // dual value of row i, scaled by D: D - reduced_cost(artificial_i)
        let separator = (0..dim)
            .map(|i| t.scale.sub(t.objective(k + i)))
            .collect::<Option<Vec<R>>>()?;
        Some(Membership::Outside { separator })
    }
}
