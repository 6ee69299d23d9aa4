//! The regular d-simplex, its d+1 halving contractions and the evaluation of
//! addresses (compositions of contractions) on simplex points.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported dimension. Address digits are stored as `u8`.
pub const MAX_DIMENSION: usize = 255;

/// Base tolerance for geometric equality; see [`level_tolerance`].
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Tolerance for point comparisons at a given level, `1e-9 / 2^level`.
pub fn level_tolerance(level: usize) -> f64 {
    DEFAULT_TOLERANCE * 0.5f64.powi(level as i32)
}

pub(crate) fn check_dimension(d: usize) -> Result<()> {
    if (2..=MAX_DIMENSION).contains(&d) {
        Ok(())
    } else {
        Err(Error::Dimension(d))
    }
}

/// A point in R^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some((index, value)) = coords.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            return Err(Error::NonFinite {
                index,
                value: value.to_string(),
            });
        }
        Ok(Self { coords })
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        Point {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| (a + b) / 2.0)
                .collect(),
        }
    }
}

/// A contraction address `t_{n-1} ... t_0`.
///
/// Digits are stored outermost first: `digits()[0]` is `t_{n-1}` and the last
/// digit is `t_0`, the contraction applied first. An empty address is the
/// identity (level 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Address {
    digits: Vec<u8>,
}

impl Address {
    /// Builds an address, checking every digit against dimension `d`.
    pub fn new(digits: Vec<u8>, d: usize) -> Result<Self> {
        check_dimension(d)?;
        check_digits(&digits, d)?;
        Ok(Self { digits })
    }

    pub fn from_digits(digits: &[usize], d: usize) -> Result<Self> {
        check_dimension(d)?;
        let digits = digits
            .iter()
            .enumerate()
            .map(|(position, &digit)| {
                if digit <= d {
                    Ok(digit as u8)
                } else {
                    Err(Error::Digit {
                        digit,
                        position,
                        dimension: d,
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { digits })
    }

    pub(crate) fn from_raw(digits: Vec<u8>) -> Self {
        Self { digits }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// The address level `n`.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// The last entry `t_0`, if any.
    pub fn last(&self) -> Option<usize> {
        self.digits.last().map(|&t| t as usize)
    }

    /// Text form: concatenated digits when `d <= 9`, comma-separated otherwise.
    pub fn to_text(&self, d: usize) -> String {
        format_digits(&self.digits, d)
    }

    /// Parses the text form produced by [`Address::to_text`].
    pub fn parse(text: &str, d: usize) -> Result<Self> {
        check_dimension(d)?;
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::empty());
        }
        let syntax = |message: String| Error::AddressSyntax {
            text: text.to_string(),
            message,
        };
        let digits: Vec<usize> = if d <= 9 {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|v| v as usize)
                        .ok_or_else(|| syntax(format!("unexpected character {c:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            text.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<usize>()
                        .map_err(|_| syntax(format!("unexpected token {tok:?}")))
                })
                .collect::<Result<_>>()?
        };
        Self::from_digits(&digits, d)
    }
}

pub(crate) fn format_digits(digits: &[u8], d: usize) -> String {
    if d <= 9 {
        digits.iter().map(|&t| char::from(b'0' + t)).collect()
    } else {
        digits
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn check_digits(digits: &[u8], d: usize) -> Result<()> {
    match digits.iter().position(|&t| t as usize > d) {
        Some(position) => Err(Error::Digit {
            digit: digits[position] as usize,
            position,
            dimension: d,
        }),
        None => Ok(()),
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.digits.iter().copied().max().unwrap_or(0) as usize;
        f.write_str(&format_digits(&self.digits, d.max(2)))
    }
}

/// The regular d-simplex with vertices `p_0 .. p_d`.
///
/// Vertices `0..d` are the standard basis vectors and `p_d` is
/// `(1 + sqrt(d+1)) / d * (1, ..., 1)`, so every edge has length `sqrt(2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexGeometry {
    dimension: usize,
    vertices: Vec<Point>,
}

impl SimplexGeometry {
    pub fn new(d: usize) -> Result<Self> {
        check_dimension(d)?;
        let c = (1.0 + ((d + 1) as f64).sqrt()) / d as f64;
        let mut vertices: Vec<Point> = (0..d)
            .map(|i| {
                let mut coords = vec![0.0; d];
                coords[i] = 1.0;
                Point::from_vec_unchecked(coords)
            })
            .collect();
        vertices.push(Point::from_vec_unchecked(vec![c; d]));
        Ok(Self {
            dimension: d,
            vertices,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Result<&Point> {
        self.vertices.get(i).ok_or(Error::VertexIndex {
            index: i,
            dimension: self.dimension,
        })
    }

    /// Edge length of the level-`n` contracted simplices.
    pub fn edge_length(&self, level: usize) -> f64 {
        std::f64::consts::SQRT_2 * 0.5f64.powi(level as i32)
    }

    /// The contraction `f_i(x) = (x + p_i) / 2`.
    pub fn contract(&self, i: usize, x: &Point) -> Result<Point> {
        let p = self.vertex(i)?;
        self.check_point(x)?;
        Ok(x.midpoint(p))
    }

    /// Evaluates `t_{n-1} ... t_0 (v)`, applying the rightmost digit first.
    pub fn apply_address(&self, address: &Address, v: usize) -> Result<Point> {
        check_digits(address.digits(), self.dimension)?;
        self.vertex(v)?;
        Ok(self.apply_digits(address.digits(), v))
    }

    pub(crate) fn apply_digits(&self, digits: &[u8], v: usize) -> Point {
        let mut x = self.vertices[v].coords.clone();
        for &t in digits.iter().rev() {
            let p = &self.vertices[t as usize].coords;
            for (xc, pc) in x.iter_mut().zip(p) {
                *xc = (*xc + pc) / 2.0;
            }
        }
        Point::from_vec_unchecked(x)
    }

    /// All `d+1` vertices of the simplex contracted by `address`, in index order.
    pub fn simplex_vertices(&self, address: &Address) -> Result<Vec<Point>> {
        check_digits(address.digits(), self.dimension)?;
        Ok(self.simplex_vertices_raw(address.digits()))
    }

    pub(crate) fn simplex_vertices_raw(&self, digits: &[u8]) -> Vec<Point> {
        (0..=self.dimension)
            .map(|v| self.apply_digits(digits, v))
            .collect()
    }

    /// The unique vertex of the contracted simplex within `tol` of `q`.
    ///
    /// Returns `Ok(None)` when no vertex is close enough and an
    /// [`Error::AmbiguousVertex`] when two are, which means `tol` is too
    /// coarse for the address level.
    pub fn vertex_index_of_point(
        &self,
        address: &Address,
        q: &Point,
        tol: f64,
    ) -> Result<Option<usize>> {
        check_digits(address.digits(), self.dimension)?;
        self.check_point(q)?;
        vertex_match(&self.simplex_vertices_raw(address.digits()), q, tol)
    }

    fn check_point(&self, x: &Point) -> Result<()> {
        if x.dim() == self.dimension {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: x.dim(),
            })
        }
    }
}

pub(crate) fn vertex_match(vertices: &[Point], q: &Point, tol: f64) -> Result<Option<usize>> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Tolerance);
    }
    let mut found = None;
    for (v, p) in vertices.iter().enumerate() {
        if p.distance(q) <= tol {
            if let Some(first) = found {
                return Err(Error::AmbiguousVertex { first, second: v });
            }
            found = Some(v);
        }
    }
    Ok(found)
}
