//! Certificates for the layer number of a centered grid.
//!
//! * [`NormDescentCertificate`]: the maximum squared norm of each layer. It
//!   starts at `d n^2` and strictly decreases through nonnegative integers,
//!   so there are at most `d n^2 + 1` layers.
//! * [`ChainCertificate`]: a staircase from the origin to `(n, ..., n)` whose
//!   consecutive points are related by [`prec`], together with their layers.
//!   Strictly decreasing layers along `d n + 1` points force at least
//!   `d n + 1` layers.
//!
//! Verification only uses integer arithmetic and [`prec`]; it never peels.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hull::ConvexCombinationWitness;
use crate::peel::{layer_max_norm_sq, LayerAssignment};
use crate::point::{Grid, Point, Scalar};

/// `d n^2 + 1`.
pub fn upper_bound(d: usize, n: u64) -> Scalar {
    BigInt::from(d) * BigInt::from(n) * BigInt::from(n) + 1
}

/// `d n + 1`.
pub fn lower_bound(d: usize, n: u64) -> Scalar {
    BigInt::from(d) * BigInt::from(n) + 1
}

/// The coordinate in which `x` and `y` differ if `x ≺ y`.
fn prec_axis(x: &Point, y: &Point) -> Option<usize> {
    if x.dim() != y.dim() {
        return None;
    }
    let mut diff = (0..x.dim()).filter(|&k| x.coord(k) != y.coord(k));
    let k = diff.next()?;
    if diff.next().is_some() {
        return None;
    }
    (x.coord(k).abs() < y.coord(k).abs()).then_some(k)
}

/// `x ≺ y`: the points agree outside one coordinate `k`, and `|x_k| < |y_k|`.
/// Points of different dimension are never related.
pub fn prec(x: &Point, y: &Point) -> bool {
    prec_axis(x, y).is_some()
}

/// For `x ≺ y` differing in coordinate `k`, writes `x` as a combination of
/// `y` and its reflection `y'` in coordinate `k`, with weights
/// `(1 ± x_k / y_k) / 2`. Both support points must sit in the same layer of
/// `a`.
pub fn convex_witness_for_prec(
    x: &Point,
    y: &Point,
    a: &LayerAssignment,
) -> Result<ConvexCombinationWitness> {
    let k = prec_axis(x, y).ok_or_else(|| Error::domain(format!("{x} ≺ {y} does not hold")))?;
    let mut reflected = y.coords().to_vec();
    reflected[k] = -&reflected[k];
    let reflected = Point::new(reflected)?;

    let ratio = BigRational::new(x.coord(k).clone(), y.coord(k).clone());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let w_y = &half * (BigRational::one() + &ratio);
    let w_reflected = &half * (BigRational::one() - &ratio);

    let layer_y = a
        .layer_of(y)
        .ok_or_else(|| Error::domain(format!("{y} is not in the peeled set")))?;
    let layer_r = a
        .layer_of(&reflected)
        .ok_or_else(|| Error::domain(format!("{reflected} is not in the peeled set")))?;
    if layer_y != layer_r {
        return Err(Error::inconsistency(format!(
            "{y} is in layer {layer_y} but its reflection {reflected} is in layer {layer_r}"
        )));
    }
    Ok(ConvexCombinationWitness::new(
        x.clone(),
        vec![(y.clone(), w_y), (reflected, w_reflected)],
    ))
}

/// Why a certificate failed verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Defect {
    WrongLength {
        expected: String,
        found: usize,
    },
    WrongStart,
    WrongEnd,
    OutsideGrid {
        index: usize,
    },
    PrecViolated {
        index: usize,
    },
    NotStrictlyDecreasing {
        index: usize,
    },
    ZeroLayerIndex {
        index: usize,
    },
    WrongFirstRadius {
        expected: Scalar,
        found: Scalar,
    },
    NegativeRadius {
        index: usize,
    },
    LayerMismatch {
        index: usize,
        recorded: String,
        actual: String,
    },
    GridMismatch,
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::WrongLength { expected, found } => {
                write!(f, "wrong length: expected {expected}, found {found}")
            }
            Defect::WrongStart => f.write_str("chain does not start at the origin"),
            Defect::WrongEnd => f.write_str("chain does not end at the corner (n, ..., n)"),
            Defect::OutsideGrid { index } => {
                write!(f, "point at index {index} lies outside the grid")
            }
            Defect::PrecViolated { index } => write!(f, "prec violated at index {index}"),
            Defect::NotStrictlyDecreasing { index } => {
                write!(f, "not strictly decreasing at index {index}")
            }
            Defect::ZeroLayerIndex { index } => write!(f, "layer index 0 at index {index}"),
            Defect::WrongFirstRadius { expected, found } => {
                write!(f, "first squared radius is {found}, expected {expected}")
            }
            Defect::NegativeRadius { index } => {
                write!(f, "negative squared radius at index {index}")
            }
            Defect::LayerMismatch {
                index,
                recorded,
                actual,
            } => write!(
                f,
                "entry {index} records {recorded} but the assignment gives {actual}"
            ),
            Defect::GridMismatch => f.write_str("assignment is not over the certificate's grid"),
        }
    }
}

impl std::error::Error for Defect {}

/// Maximum squared norm of every layer, outermost first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormDescentCertificate {
    grid: Grid,
    radii_sq: Vec<Scalar>,
}

impl NormDescentCertificate {
    /// Unchecked; see [`Self::verify`].
    pub fn new(grid: Grid, radii_sq: Vec<Scalar>) -> Self {
        NormDescentCertificate { grid, radii_sq }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn radii_sq(&self) -> &[Scalar] {
        &self.radii_sq
    }

    /// Number of layers this certificate accounts for.
    pub fn len(&self) -> usize {
        self.radii_sq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii_sq.is_empty()
    }

    pub fn verify(&self) -> Result<(), Defect> {
        let d = self.grid.dim();
        let n = self.grid.radius();
        let corner = upper_bound(d, n) - 1;
        let Some(first) = self.radii_sq.first() else {
            return Err(Defect::WrongLength {
                expected: "at least 1".into(),
                found: 0,
            });
        };
        if *first != corner {
            return Err(Defect::WrongFirstRadius {
                expected: corner,
                found: first.clone(),
            });
        }
        if let Some(index) = self.radii_sq.iter().position(Signed::is_negative) {
            return Err(Defect::NegativeRadius { index });
        }
        if let Some(i) = self.radii_sq.windows(2).position(|w| w[1] >= w[0]) {
            return Err(Defect::NotStrictlyDecreasing { index: i + 1 });
        }
        // implied by the checks above; kept explicit since it is the claim
        if BigInt::from(self.radii_sq.len()) > upper_bound(d, n) {
            return Err(Defect::WrongLength {
                expected: format!("at most {}", upper_bound(d, n)),
                found: self.radii_sq.len(),
            });
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.verify().is_ok()
    }

    /// Compares the recorded radii with an independently produced assignment.
    pub fn check_against(&self, a: &LayerAssignment) -> Result<(), Defect> {
        if a.source().dim() != self.grid.dim() || a.source().is_empty() {
            return Err(Defect::GridMismatch);
        }
        let actual = layer_max_norm_sq(a);
        if actual.len() != self.radii_sq.len() {
            return Err(Defect::WrongLength {
                expected: actual.len().to_string(),
                found: self.radii_sq.len(),
            });
        }
        match actual.iter().zip(&self.radii_sq).position(|(x, y)| x != y) {
            Some(index) => Err(Defect::LayerMismatch {
                index,
                recorded: self.radii_sq[index].to_string(),
                actual: actual[index].to_string(),
            }),
            None => Ok(()),
        }
    }
}

/// A `≺`-chain from the origin to `(n, ..., n)` with the layer of each point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainCertificate {
    grid: Grid,
    chain: Vec<Point>,
    layer_indices: Vec<usize>,
}

impl ChainCertificate {
    /// Unchecked; see [`Self::verify`]. Panics if the two lists differ in
    /// length.
    pub fn new(grid: Grid, chain: Vec<Point>, layer_indices: Vec<usize>) -> Self {
        assert_eq!(chain.len(), layer_indices.len());
        ChainCertificate {
            grid,
            chain,
            layer_indices,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn chain(&self) -> &[Point] {
        &self.chain
    }

    pub fn layer_indices(&self) -> &[usize] {
        &self.layer_indices
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// Accepts any valid chain, not only the staircase the builder emits.
    pub fn verify(&self) -> Result<(), Defect> {
        let d = self.grid.dim();
        let n = self.grid.radius();
        let expected = lower_bound(d, n);
        if BigInt::from(self.chain.len()) != expected {
            return Err(Defect::WrongLength {
                expected: expected.to_string(),
                found: self.chain.len(),
            });
        }
        if let Some(index) = self.chain.iter().position(|p| !self.grid.contains(p)) {
            return Err(Defect::OutsideGrid { index });
        }
        if !self.chain[0].is_origin() {
            return Err(Defect::WrongStart);
        }
        if *self.chain.last().expect("nonempty") != self.grid.corner() {
            return Err(Defect::WrongEnd);
        }
        if let Some(i) = self.chain.windows(2).position(|w| !prec(&w[0], &w[1])) {
            return Err(Defect::PrecViolated { index: i + 1 });
        }
        if let Some(index) = self.layer_indices.iter().position(|&l| l == 0) {
            return Err(Defect::ZeroLayerIndex { index });
        }
        if let Some(i) = self.layer_indices.windows(2).position(|w| w[1] >= w[0]) {
            return Err(Defect::NotStrictlyDecreasing { index: i + 1 });
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.verify().is_ok()
    }

    /// Compares the recorded layers with an independently produced assignment.
    pub fn check_against(&self, a: &LayerAssignment) -> Result<(), Defect> {
        for (index, (p, &recorded)) in self.chain.iter().zip(&self.layer_indices).enumerate() {
            let actual = a.layer_of(p).ok_or(Defect::GridMismatch)?;
            if actual != recorded {
                return Err(Defect::LayerMismatch {
                    index,
                    recorded: recorded.to_string(),
                    actual: actual.to_string(),
                });
            }
        }
        Ok(())
    }
}

fn check_assignment(g: &Grid, a: &LayerAssignment) -> Result<()> {
    let count = g.point_count();
    if a.source().dim() != g.dim() || BigInt::from(a.source().len()) != count {
        return Err(Error::domain(format!(
            "assignment over {} points in dimension {} is not a peeling of [-{}, {}]^{}",
            a.source().len(),
            a.source().dim(),
            g.radius(),
            g.radius(),
            g.dim()
        )));
    }
    Ok(())
}

/// Staircase chain: raise coordinate 1 from 0 to n, then coordinate 2, and
/// so on, reading each point's layer from `a`.
pub fn build_chain_certificate(g: &Grid, a: &LayerAssignment) -> Result<ChainCertificate> {
    check_assignment(g, a)?;
    let mut cur = vec![BigInt::zero(); g.dim()];
    let mut chain = vec![Point::new(cur.clone())?];
    for k in 0..g.dim() {
        for _ in 0..g.radius() {
            cur[k] += 1;
            chain.push(Point::new(cur.clone())?);
        }
    }
    let layer_indices = chain
        .iter()
        .map(|p| {
            a.layer_of(p)
                .ok_or_else(|| Error::domain(format!("{p} is missing from the assignment")))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(i) = layer_indices.windows(2).position(|w| w[1] >= w[0]) {
        return Err(Error::inconsistency(format!(
            "{} (layer {}) is not peeled after {} (layer {})",
            chain[i],
            layer_indices[i],
            chain[i + 1],
            layer_indices[i + 1]
        )));
    }
    Ok(ChainCertificate::new(*g, chain, layer_indices))
}

pub fn build_norm_certificate(g: &Grid, a: &LayerAssignment) -> Result<NormDescentCertificate> {
    check_assignment(g, a)?;
    let cert = NormDescentCertificate::new(*g, layer_max_norm_sq(a));
    cert.verify()
        .map_err(|defect| Error::inconsistency(format!("norm descent fails: {defect}")))?;
    Ok(cert)
}

/// Either certificate kind, for (de)serialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    NormDescent(NormDescentCertificate),
    Chain(ChainCertificate),
}

impl Certificate {
    pub fn verify(&self) -> Result<(), Defect> {
        match self {
            Certificate::NormDescent(c) => c.verify(),
            Certificate::Chain(c) => c.verify(),
        }
    }

    pub fn grid(&self) -> &Grid {
        match self {
            Certificate::NormDescent(c) => c.grid(),
            Certificate::Chain(c) => c.grid(),
        }
    }

    pub fn check_against(&self, a: &LayerAssignment) -> Result<(), Defect> {
        match self {
            Certificate::NormDescent(c) => c.check_against(a),
            Certificate::Chain(c) => c.check_against(a),
        }
    }
}

const NORM_KIND: &str = "norm-descent";
const CHAIN_KIND: &str = "chain";

/// Text form: `key: value` header lines (`kind`, `d`, `n`, `entries`), then
/// one line per entry. Norm entries are `radius_sq layer`; chain entries are
/// the point's coordinates followed by its layer.
impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, grid, entries) = match self {
            Certificate::NormDescent(c) => (NORM_KIND, c.grid, c.len()),
            Certificate::Chain(c) => (CHAIN_KIND, c.grid, c.len()),
        };
        writeln!(f, "kind: {kind}")?;
        writeln!(f, "d: {}", grid.dim())?;
        writeln!(f, "n: {}", grid.radius())?;
        writeln!(f, "entries: {entries}")?;
        match self {
            Certificate::NormDescent(c) => {
                for (i, r) in c.radii_sq.iter().enumerate() {
                    writeln!(f, "{r} {}", i + 1)?;
                }
            }
            Certificate::Chain(c) => {
                for (p, l) in c.chain.iter().zip(&c.layer_indices) {
                    for x in p.coords() {
                        write!(f, "{x} ")?;
                    }
                    writeln!(f, "{l}")?;
                }
            }
        }
        Ok(())
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_num<T: FromStr>(line: usize, token: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("not an integer: {token:?}")))
}

impl FromStr for Certificate {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let mut header = |key: &str| -> Result<(usize, String)> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| parse_err(0, format!("missing header `{key}`")))?;
            let value = line
                .strip_prefix(key)
                .and_then(|rest| rest.strip_prefix(':'))
                .ok_or_else(|| parse_err(no, format!("expected `{key}: ...`")))?;
            Ok((no, value.trim().to_string()))
        };
        let (kind_line, kind) = header("kind")?;
        let (d_line, d) = header("d")?;
        let (n_line, n) = header("n")?;
        let (e_line, entries) = header("entries")?;
        let d: usize = parse_num(d_line, &d)?;
        let n: u64 = parse_num(n_line, &n)?;
        let entries: usize = parse_num(e_line, &entries)?;
        let grid = Grid::new(d, n).map_err(|e| parse_err(d_line, e.to_string()))?;

        let rows: Vec<(usize, Vec<&str>)> = lines
            .map(|(no, l)| (no, l.split_whitespace().collect()))
            .collect();
        if rows.len() != entries {
            return Err(parse_err(
                e_line,
                format!("header announces {entries} entries, found {}", rows.len()),
            ));
        }
        match kind.as_str() {
            NORM_KIND => {
                let mut radii = Vec::with_capacity(entries);
                for (i, (no, toks)) in rows.iter().enumerate() {
                    let [r, layer] = toks.as_slice() else {
                        return Err(parse_err(*no, "expected `radius_sq layer`"));
                    };
                    if parse_num::<usize>(*no, layer)? != i + 1 {
                        return Err(parse_err(*no, "layer indices must run 1, 2, 3, ..."));
                    }
                    radii.push(parse_num::<BigInt>(*no, r)?);
                }
                Ok(Certificate::NormDescent(NormDescentCertificate::new(
                    grid, radii,
                )))
            }
            CHAIN_KIND => {
                let mut chain = Vec::with_capacity(entries);
                let mut layers = Vec::with_capacity(entries);
                for (no, toks) in &rows {
                    if toks.len() != d + 1 {
                        return Err(parse_err(
                            *no,
                            format!("expected {d} coordinates and a layer index"),
                        ));
                    }
                    let coords = toks[..d]
                        .iter()
                        .map(|t| parse_num::<BigInt>(*no, t))
                        .collect::<Result<Vec<_>>>()?;
                    chain.push(Point::new(coords)?);
                    layers.push(parse_num::<usize>(*no, toks[d])?);
                }
                Ok(Certificate::Chain(ChainCertificate::new(
                    grid, chain, layers,
                )))
            }
            other => Err(parse_err(
                kind_line,
                format!("unknown certificate kind {other:?}"),
            )),
        }
    }
}
