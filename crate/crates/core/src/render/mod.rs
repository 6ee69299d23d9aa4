//! Deterministic document builders: SVG sequence charts, projected curve
//! drawings, knitting charts and OBJ line exports.
//!
//! All numbers are written fixed-point with six decimals and elements are
//! emitted in input order, so equal inputs give byte-identical output.

mod chart;
mod curve_svg;
mod knit;
mod obj;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use chart::{chart_cells, render_sequence_chart, Cell, ChartStyle};
pub use curve_svg::{render_curve_svg, CurveStyle, Projection};
pub use knit::{build_knit_chart, render_knit_chart, KnitChart, KnitColor, KnitRow, KnitSpec, RowKind};
pub use obj::{export_obj, select_axes, simplex_wireframe};

/// A `#RRGGBB` color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Color([u8; 3]);

impl Color {
    pub const fn rgb(r: u8, g: u8, b: u8) -> Self {
        Self([r, g, b])
    }
}

impl FromStr for Color {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let hex = s.strip_prefix('#').unwrap_or(s);
        if hex.len() != 6 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(Error::Style(format!("{s:?} is not a 6-digit hex color")));
        }
        let channel = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).expect("checked hex");
        Ok(Self([channel(0), channel(2), channel(4)]))
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [r, g, b] = self.0;
        write!(f, "#{r:02X}{g:02X}{b:02X}")
    }
}

/// Fixed-point, six decimals, without a negative zero.
pub(crate) fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s.trim_start_matches('-').bytes().all(|b| b == b'0' || b == b'.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

pub(crate) fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Style(format!("{name} must be positive, got {v}")))
    }
}

pub(crate) fn svg_open(out: &mut String, width: f64, height: f64) {
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
        w = num(width),
        h = num(height)
    ));
}
