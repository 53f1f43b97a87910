//! Input resolution and layer-data formats.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use layers_core::{Grid, LayerAssignment, Point, PointSet};
use num_bigint::{BigInt, Sign};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::args::{CapArgs, GridArgs};
use crate::error::CliError;

/// The point set a command works on.
#[derive(Debug, Clone)]
pub struct Input {
    pub set: PointSet,
    /// Present when `set` is exactly a centered grid.
    pub grid: Option<Grid>,
}

/// The centered grid named by `--d` with `--n` or an odd `--side`.
pub fn centered_grid(args: &GridArgs) -> Result<Grid, CliError> {
    let d = args.d.ok_or_else(|| CliError::usage("--d is required"))?;
    let n = match (args.n, args.side) {
        (Some(n), None) => n,
        (None, Some(side)) if side % 2 == 1 => side / 2,
        (None, Some(side)) => {
            return Err(CliError::usage(format!(
                "side {side} is even; this command needs an odd side (a centered grid)"
            )))
        }
        _ => return Err(CliError::usage("give exactly one of --n and --side")),
    };
    Ok(Grid::new(d, n)?)
}

/// Grid or file input. Even sides become `[-side/2, side/2 - 1]^d`.
pub fn resolve(grid: &GridArgs, input: Option<&Path>, cap: CapArgs) -> Result<Input, CliError> {
    if let Some(path) = input {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let set = parse_point_set(&text)?;
        check_cap(BigInt::from(set.len()), cap)?;
        return Ok(Input { set, grid: None });
    }
    if let (Some(d), Some(side)) = (grid.d, grid.side) {
        if side == 0 {
            return Err(CliError::usage("side must be positive"));
        }
        if side % 2 == 0 {
            check_cap(BigInt::from(side).pow(d as u32), cap)?;
            let top = BigInt::from(side / 2 - 1);
            let set = Grid::new(d, side / 2)?
                .materialize_with_cap(u64::MAX)?
                .filter(|p| p.coords().iter().all(|c| *c <= top));
            return Ok(Input { set, grid: None });
        }
    }
    let g = centered_grid(grid)?;
    Ok(Input {
        set: g.materialize_with_cap(cap.cap)?,
        grid: Some(g),
    })
}

fn check_cap(count: BigInt, cap: CapArgs) -> Result<(), CliError> {
    if count > BigInt::from(cap.cap) {
        return Err(layers_core::Error::SizeLimit {
            count: count.to_string(),
            cap: cap.cap,
        }
        .into());
    }
    Ok(())
}

/// One point per nonblank line; `#` starts a comment.
pub fn parse_point_set(text: &str) -> Result<PointSet, CliError> {
    let mut dim = None;
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let coords = line
            .split_whitespace()
            .map(BigInt::from_str)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CliError::Parse(format!("line {}: expected integers", i + 1)))?;
        match dim {
            None => dim = Some(coords.len()),
            Some(d) if d != coords.len() => {
                return Err(CliError::Parse(format!(
                    "line {}: {} coordinates, expected {d}",
                    i + 1,
                    coords.len()
                )))
            }
            Some(_) => {}
        }
        points.push(Point::new(coords)?);
    }
    let dim = dim.ok_or_else(|| CliError::Parse("no points in input".into()))?;
    Ok(PointSet::new(dim, points)?)
}

/// JSON layer file: layers outermost first, points in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerDocument {
    pub d: usize,
    pub n: Option<u64>,
    pub num_layers: usize,
    pub layers: Vec<Vec<Vec<Number>>>,
}

fn to_number(x: &BigInt) -> Number {
    Number::from_str(&x.to_string()).expect("decimal integers are JSON numbers")
}

fn from_number(x: &Number) -> Result<BigInt, CliError> {
    BigInt::from_str(&x.to_string()).map_err(|_| CliError::Parse(format!("{x} is not an integer")))
}

impl LayerDocument {
    pub fn new(a: &LayerAssignment, grid: Option<&Grid>) -> Self {
        let layers = a
            .layers()
            .into_iter()
            .map(|layer| {
                layer
                    .into_iter()
                    .map(|p| p.coords().iter().map(to_number).collect())
                    .collect()
            })
            .collect();
        LayerDocument {
            d: a.source().dim(),
            n: grid.map(Grid::radius),
            num_layers: a.num_layers(),
            layers,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("layer JSON: {e}")))
    }

    pub fn to_assignment(&self) -> Result<LayerAssignment, CliError> {
        if self.layers.len() != self.num_layers {
            return Err(CliError::Parse(format!(
                "num_layers is {} but {} layers are listed",
                self.num_layers,
                self.layers.len()
            )));
        }
        let mut tagged = Vec::new();
        for (k, layer) in self.layers.iter().enumerate() {
            for coords in layer {
                if coords.len() != self.d {
                    return Err(CliError::Parse(format!(
                        "point with {} coordinates in a {}-dimensional file",
                        coords.len(),
                        self.d
                    )));
                }
                let p = Point::new(coords.iter().map(from_number).collect::<Result<_, _>>()?)?;
                tagged.push((p, k + 1));
            }
        }
        tagged.sort();
        let count = tagged.len();
        let set = PointSet::new(self.d, tagged.iter().map(|(p, _)| p.clone()))?;
        if set.len() != count {
            return Err(CliError::Parse("a point is listed twice".into()));
        }
        let layer_of = tagged.into_iter().map(|(_, l)| l).collect();
        Ok(LayerAssignment::new(set, layer_of)?)
    }
}

/// One row per point: coordinates, then layer index.
pub fn to_csv(a: &LayerAssignment) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let d = a.source().dim();
    let header: Vec<String> = (1..=d)
        .map(|k| format!("x{k}"))
        .chain(std::iter::once("layer".to_string()))
        .collect();
    w.write_record(&header).expect("in-memory write");
    for (p, l) in a.source().iter().zip(a.indices()) {
        let row = p
            .coords()
            .iter()
            .map(ToString::to_string)
            .chain(std::iter::once(l.to_string()));
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ASCII output")
}

/// Lossy conversion for drawing.
pub(crate) fn to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(match x.sign() {
        Sign::Minus => f64::MIN,
        _ => f64::MAX,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use layers_core::peel;

    #[test]
    fn point_file() {
        let s = parse_point_set("# square\n0 0\n0 1\n\n1 0  \n1 1 # corner\n").unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.dim(), 2);
        assert!(matches!(
            parse_point_set("0 0\n1\n"),
            Err(CliError::Parse(_))
        ));
        assert!(matches!(parse_point_set("0 x\n"), Err(CliError::Parse(_))));
        assert!(matches!(
            parse_point_set("\n# nothing\n"),
            Err(CliError::Parse(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let g = Grid::new(2, 1).unwrap();
        let a = peel(&g.materialize().unwrap());
        let doc = LayerDocument::new(&a, Some(&g));
        let json = doc.to_json();
        assert_eq!(
            json,
            "{\"d\":2,\"n\":1,\"num_layers\":3,\"layers\":[[[-1,-1],[-1,1],[1,-1],[1,1]],\
             [[-1,0],[0,-1],[0,1],[1,0]],[[0,0]]]}\n"
        );
        let back = LayerDocument::from_json(&json).unwrap();
        assert_eq!(back.to_json(), json);
        assert_eq!(back.to_assignment().unwrap(), a);
    }

    #[test]
    fn json_keeps_huge_integers() {
        let json = "{\"d\":1,\"n\":null,\"num_layers\":1,\"layers\":[[[-123456789012345678901234567890],[98765432109876543210987654321]]]}\n";
        let doc = LayerDocument::from_json(json).unwrap();
        assert_eq!(doc.to_json(), json);
        assert_eq!(doc.to_assignment().unwrap().source().len(), 2);
    }

    #[test]
    fn csv_rows() {
        let a = peel(&Grid::new(1, 1).unwrap().materialize().unwrap());
        assert_eq!(to_csv(&a), "x1,layer\n-1,1\n0,2\n1,1\n");
    }

    #[test]
    fn even_side_is_half_open() {
        let grid = GridArgs {
            d: Some(2),
            n: None,
            side: Some(4),
        };
        let input = resolve(&grid, None, CapArgs { cap: 100 }).unwrap();
        assert!(input.grid.is_none());
        assert_eq!(input.set.len(), 16);
        assert_eq!(input.set.points()[0], Point::from([-2, -2]));
        assert_eq!(input.set.points()[15], Point::from([1, 1]));
        assert!(centered_grid(&grid).is_err());
        let odd = GridArgs {
            side: Some(7),
            ..grid
        };
        assert_eq!(centered_grid(&odd).unwrap().radius(), 3);
    }

    #[test]
    fn cap_is_enforced() {
        let grid = GridArgs {
            d: Some(3),
            n: Some(5),
            side: None,
        };
        let err = resolve(&grid, None, CapArgs { cap: 1000 }).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
