//! Empirical growth exponent of the layer number of planar grids.

use std::fmt;

use layers_core::{peel_with, Engine};

use crate::args::{CapArgs, GridArgs};
use crate::error::CliError;
use crate::io::resolve;

/// Fits below this side are flagged: small grids are far from the
/// asymptotic regime.
pub const PRE_ASYMPTOTIC_SIDE: u64 = 51;

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    /// `(side, layer number)` in input order.
    pub rows: Vec<(u64, usize)>,
    /// Least-squares slope of `ln L` against `ln side`.
    pub slope: f64,
    pub pre_asymptotic: bool,
}

/// Ordinary least-squares slope of `y` on `x`. `None` without two distinct
/// `x` values.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Peels `[side]^2` for every side and fits the exponent.
pub fn growth(sides: &[u64], engine: Engine, cap: CapArgs) -> Result<GrowthReport, CliError> {
    let mut distinct = sides.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(CliError::usage("need ≥ 2 sizes"));
    }
    let mut rows = Vec::with_capacity(sides.len());
    for &side in sides {
        let grid = GridArgs {
            d: Some(2),
            n: None,
            side: Some(side),
        };
        let input = resolve(&grid, None, cap)?;
        rows.push((side, peel_with(&input.set, engine)?.num_layers()));
    }
    let logs: Vec<(f64, f64)> = rows
        .iter()
        .map(|&(s, l)| ((s as f64).ln(), (l as f64).ln()))
        .collect();
    let slope = least_squares_slope(&logs).expect("two distinct sides");
    Ok(GrowthReport {
        rows,
        slope,
        pre_asymptotic: distinct[0] < PRE_ASYMPTOTIC_SIDE,
    })
}

impl fmt::Display for GrowthReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>8}  {:>8}", "side", "layers")?;
        for (side, layers) in &self.rows {
            writeln!(f, "{side:>8}  {layers:>8}")?;
        }
        write!(f, "slope: {:.4}", self.slope)?;
        if self.pre_asymptotic {
            write!(f, " (pre-asymptotic: sides below {PRE_ASYMPTOTIC_SIDE})")?;
        }
        writeln!(f)
    }
}
