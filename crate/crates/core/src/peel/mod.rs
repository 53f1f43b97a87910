//! Onion peeling: repeatedly strip the hull vertices and record the round in
//! which each point left.

mod planar;

use crate::error::{Error, Result};
use crate::hull::{with_peeler, PeelStep};
use crate::point::{norm_sq, Point, PointSet, Scalar};
use crate::symmetry::{as_centered_grid, peel_orbits_materialized, peel_orbits_set};

pub use planar::peel_2d;

/// Layer index (1-based) of every point of a set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LayerAssignment {
    source: PointSet,
    layer_of: Vec<usize>,
    num_layers: usize,
}

impl LayerAssignment {
    /// `layer_of[i]` is the layer of `source.points()[i]`. Rejects zero
    /// indices and gaps.
    pub fn new(source: PointSet, layer_of: Vec<usize>) -> Result<Self> {
        if layer_of.len() != source.len() {
            return Err(Error::inconsistency(format!(
                "{} layer indices for {} points",
                layer_of.len(),
                source.len()
            )));
        }
        let num_layers = layer_of.iter().copied().max().unwrap_or(0);
        let mut seen = vec![false; num_layers + 1];
        for &l in &layer_of {
            if l == 0 {
                return Err(Error::inconsistency("layer indices are 1-based"));
            }
            seen[l] = true;
        }
        if let Some(gap) = (1..=num_layers).find(|&l| !seen[l]) {
            return Err(Error::inconsistency(format!("layer {gap} is empty")));
        }
        Ok(LayerAssignment {
            source,
            layer_of,
            num_layers,
        })
    }

    pub(crate) fn from_layers(source: PointSet, layers: Vec<Vec<usize>>) -> Self {
        let mut layer_of = vec![0; source.len()];
        for (k, layer) in layers.iter().enumerate() {
            for &i in layer {
                layer_of[i] = k + 1;
            }
        }
        debug_assert!(layer_of.iter().all(|&l| l > 0));
        LayerAssignment {
            source,
            layer_of,
            num_layers: layers.len(),
        }
    }

    pub fn source(&self) -> &PointSet {
        &self.source
    }

    pub fn num_layers(&self) -> usize {
        self.num_layers
    }

    /// Layer of `p`, or `None` if `p` is not in the source set.
    pub fn layer_of(&self, p: &Point) -> Option<usize> {
        self.source.index_of(p).map(|i| self.layer_of[i])
    }

    /// Layer indices aligned with `source().points()`.
    pub fn indices(&self) -> &[usize] {
        &self.layer_of
    }

    /// Points of layer `i` (1-based), in lexicographic order.
    pub fn layer(&self, i: usize) -> Vec<&Point> {
        self.source
            .iter()
            .zip(&self.layer_of)
            .filter(|(_, &l)| l == i)
            .map(|(p, _)| p)
            .collect()
    }

    /// All layers, outermost first.
    pub fn layers(&self) -> Vec<Vec<&Point>> {
        let mut out = vec![Vec::new(); self.num_layers];
        for (p, &l) in self.source.iter().zip(&self.layer_of) {
            out[l - 1].push(p);
        }
        out
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_layers];
        for &l in &self.layer_of {
            sizes[l - 1] += 1;
        }
        sizes
    }

    /// The points still present when layer `i` is peeled (`C_i`).
    pub fn remaining_at(&self, i: usize) -> PointSet {
        let mut k = 0;
        let layer_of = &self.layer_of;
        self.source.filter(|_| {
            let keep = layer_of[k] >= i;
            k += 1;
            keep
        })
    }
}

/// Which peeling implementation to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Engine {
    /// Orbit engine on centered grids, planar engine in two dimensions,
    /// generic otherwise.
    #[default]
    Auto,
    /// LP-based engine, any dimension.
    Generic,
    /// Monotone-chain engine, two dimensions only.
    Planar,
    /// One representative per symmetry orbit; centered grids only.
    Orbit,
}

/// Peels `s` completely with [`Engine::Auto`].
pub fn peel(s: &PointSet) -> LayerAssignment {
    peel_with(s, Engine::Auto).expect("auto engine accepts every dimension")
}

pub fn peel_with(s: &PointSet, engine: Engine) -> Result<LayerAssignment> {
    match engine {
        Engine::Auto => match as_centered_grid(s) {
            Some(grid) => peel_orbits_materialized(&grid, s),
            None if s.dim() == 2 => peel_2d(s),
            None => Ok(peel_generic(s)),
        },
        Engine::Generic => Ok(peel_generic(s)),
        Engine::Planar => peel_2d(s),
        Engine::Orbit => peel_orbits_set(s),
    }
}

/// LP-based peeling in any dimension.
pub fn peel_generic(s: &PointSet) -> LayerAssignment {
    let layers = with_peeler(s, |peeler: &mut dyn PeelStep| {
        let mut layers = Vec::new();
        while peeler.remaining() > 0 {
            layers.push(peeler.peel_layer()?);
        }
        Some(layers)
    });
    LayerAssignment::from_layers(s.clone(), layers)
}

/// Maximum squared norm over each layer, outermost first.
pub fn layer_max_norm_sq(a: &LayerAssignment) -> Vec<Scalar> {
    let mut out: Vec<Option<Scalar>> = vec![None; a.num_layers()];
    for (p, &l) in a.source().iter().zip(a.indices()) {
        let r = norm_sq(p);
        let slot = &mut out[l - 1];
        if slot.as_ref().is_none_or(|cur| r > *cur) {
            *slot = Some(r);
        }
    }
    out.into_iter()
        .map(|r| r.expect("layers are nonempty"))
        .collect()
}
