//! SVG drawings of single peeling steps.
//!
//! A step `i` highlights the vertices of layer `i` over the gray points that
//! remain after it. The origin-centered circle passes through its farthest
//! vertex. Every element carries `data-*`
//! attributes with the exact values it depicts.

use std::fmt::Write as _;

use layers_core::{layer_max_norm_sq, LayerAssignment};

use crate::error::CliError;
use crate::io::to_f64;

/// Styling. Changing these changes the bytes but not the structure.
pub mod style {
    /// Pixels per lattice unit.
    pub const UNIT: f64 = 40.0;
    /// Blank border in lattice units.
    pub const MARGIN: f64 = 1.0;
    pub const BACKGROUND: &str = "#ffffff";
    pub const REMAINING_FILL: &str = "#9e9e9e";
    pub const REMAINING_RADIUS: f64 = 5.0;
    pub const VERTEX_FILL: &str = "#1f77b4";
    pub const VERTEX_RADIUS: f64 = 7.0;
    pub const CIRCLE_STROKE: &str = "#ff7f0e";
    pub const CIRCLE_WIDTH: f64 = 2.0;
}

/// Renders step `step` (1-based) of a planar peeling.
pub fn render_step(a: &LayerAssignment, step: usize) -> Result<String, CliError> {
    if a.source().dim() != 2 {
        return Err(CliError::usage(format!(
            "rendering needs dimension 2, got {}",
            a.source().dim()
        )));
    }
    if step == 0 || step > a.num_layers() {
        return Err(CliError::usage(format!(
            "step {step} is out of range 1..={}",
            a.num_layers()
        )));
    }
    let radius_sq = layer_max_norm_sq(a).swap_remove(step - 1);
    let radius = to_f64(&radius_sq).sqrt();

    let xy = |p: &layers_core::Point| (to_f64(p.coord(0)), to_f64(p.coord(1)));
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (-radius, radius, -radius, radius);
    for p in a.source().iter() {
        let (x, y) = xy(p);
        lo_x = lo_x.min(x);
        hi_x = hi_x.max(x);
        lo_y = lo_y.min(y);
        hi_y = hi_y.max(y);
    }
    use style::*;
    let view_x = (lo_x - MARGIN) * UNIT;
    let view_y = -(hi_y + MARGIN) * UNIT;
    let width = (hi_x - lo_x + 2.0 * MARGIN) * UNIT;
    let height = (hi_y - lo_y + 2.0 * MARGIN) * UNIT;

    let mut remaining = Vec::new();
    let mut vertices = Vec::new();
    for (p, &l) in a.source().iter().zip(a.indices()) {
        match l.cmp(&step) {
            std::cmp::Ordering::Equal => vertices.push(p),
            std::cmp::Ordering::Greater => remaining.push(p),
            std::cmp::Ordering::Less => {}
        }
    }

    let mut svg = String::new();
    let w = &mut svg;
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{view_x:.3} {view_y:.3} {width:.3} {height:.3}" width="{width:.0}" height="{height:.0}" data-step="{step}" data-num-layers="{}">"#,
        a.num_layers()
    )
    .unwrap();
    writeln!(
        w,
        r#"  <rect x="{view_x:.3}" y="{view_y:.3}" width="{width:.3}" height="{height:.3}" fill="{BACKGROUND}"/>"#
    )
    .unwrap();
    writeln!(
        w,
        r#"  <g class="remaining" data-count="{}">"#,
        remaining.len()
    )
    .unwrap();
    for p in remaining {
        let (x, y) = xy(p);
        writeln!(
            w,
            r#"    <circle class="point" data-x="{}" data-y="{}" cx="{:.3}" cy="{:.3}" r="{REMAINING_RADIUS:.3}" fill="{REMAINING_FILL}"/>"#,
            p.coord(0),
            p.coord(1),
            px(x),
            px(-y)
        )
        .unwrap();
    }
    writeln!(w, "  </g>").unwrap();
    writeln!(
        w,
        r#"  <circle class="radius" data-radius-sq="{radius_sq}" cx="0.000" cy="0.000" r="{:.3}" fill="none" stroke="{CIRCLE_STROKE}" stroke-width="{CIRCLE_WIDTH:.3}"/>"#,
        radius * UNIT
    )
    .unwrap();
    writeln!(
        w,
        r#"  <g class="layer" data-layer="{step}" data-count="{}">"#,
        vertices.len()
    )
    .unwrap();
    for p in vertices {
        let (x, y) = xy(p);
        writeln!(
            w,
            r#"    <circle class="vertex" data-x="{}" data-y="{}" cx="{:.3}" cy="{:.3}" r="{VERTEX_RADIUS:.3}" fill="{VERTEX_FILL}"/>"#,
            p.coord(0),
            p.coord(1),
            px(x),
            px(-y)
        )
        .unwrap();
    }
    writeln!(w, "  </g>").unwrap();
    writeln!(w, "</svg>").unwrap();
    Ok(svg)
}

/// Lattice to pixel units, without negative zero.
fn px(v: f64) -> f64 {
    v * style::UNIT + 0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use layers_core::{peel, Grid};

    fn grid(n: u64) -> LayerAssignment {
        peel(&Grid::new(2, n).unwrap().materialize().unwrap())
    }

    #[test]
    fn single_point() {
        let svg = render_step(&grid(0), 1).unwrap();
        assert_eq!(svg.matches(r#"class="vertex""#).count(), 1);
        assert_eq!(svg.matches(r#"class="point""#).count(), 0);
        assert!(svg.contains(r#"data-radius-sq="0" cx="0.000" cy="0.000" r="0.000""#));
    }

    #[test]
    fn unit_square_corners() {
        let svg = render_step(&grid(1), 1).unwrap();
        assert_eq!(svg.matches(r#"class="vertex""#).count(), 4);
        assert_eq!(svg.matches(r#"class="point""#).count(), 5);
        assert!(svg.contains(r#"data-radius-sq="2""#));
    }

    #[test]
    fn deterministic() {
        let a = grid(3);
        assert_eq!(render_step(&a, 4).unwrap(), render_step(&a, 4).unwrap());
    }

    #[test]
    fn bad_steps_and_dimensions() {
        assert_eq!(render_step(&grid(1), 4).unwrap_err().exit_code(), 2);
        assert_eq!(render_step(&grid(1), 0).unwrap_err().exit_code(), 2);
        let cube = peel(&Grid::new(3, 1).unwrap().materialize().unwrap());
        assert_eq!(render_step(&cube, 1).unwrap_err().exit_code(), 2);
    }
}
