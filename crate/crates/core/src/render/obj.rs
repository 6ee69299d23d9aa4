use super::num;
use crate::curve::{AddressSequence, Polyline};
use crate::error::{Error, Result};
use crate::geometry::{Point, SimplexGeometry};

/// Vertices of every contracted simplex of the sequence, in curve order.
pub fn simplex_wireframe(geom: &SimplexGeometry, seq: &AddressSequence) -> Vec<Vec<Point>> {
    seq.iter().map(|a| geom.simplex_vertices_raw(a)).collect()
}

fn vertex_line(out: &mut String, p: &Point) {
    let c = p.coords();
    let z = c.get(2).copied().unwrap_or(0.0);
    out.push_str(&format!("v {} {} {}\n", num(c[0]), num(c[1]), num(z)));
}

/// OBJ text with `v` records for the curve points and one `l` record per
/// segment, followed by the edges of each wireframe simplex.
///
/// Points of dimension above 3 must be projected first.
pub fn export_obj(line: &Polyline, wireframe: Option<&[Vec<Point>]>) -> Result<String> {
    let wireframe = wireframe.unwrap_or_default();
    let too_wide = line
        .points
        .iter()
        .chain(wireframe.iter().flatten())
        .map(Point::dim)
        .find(|&d| !(2..=3).contains(&d));
    if let Some(d) = too_wide {
        return Err(Error::Projection(format!(
            "OBJ export needs 2 or 3 coordinates, got {d}; select axes first"
        )));
    }
    let mut out = format!(
        "# arrowhead curve, dimension {}, level {}\no curve\n",
        line.dimension, line.level
    );
    for p in &line.points {
        vertex_line(&mut out, p);
    }
    for i in 1..line.points.len() {
        out.push_str(&format!("l {} {}\n", i, i + 1));
    }
    if !wireframe.is_empty() {
        out.push_str("o wireframe\n");
        let mut base = line.points.len();
        for simplex in wireframe {
            for p in simplex {
                vertex_line(&mut out, p);
            }
            for i in 0..simplex.len() {
                for j in i + 1..simplex.len() {
                    out.push_str(&format!("l {} {}\n", base + i + 1, base + j + 1));
                }
            }
            base += simplex.len();
        }
    }
    Ok(out)
}

/// Keeps only the given coordinate axes of every point.
pub fn select_axes(points: &[Point], axes: &[usize]) -> Result<Vec<Point>> {
    points
        .iter()
        .map(|p| {
            let coords = axes
                .iter()
                .map(|&a| {
                    p.coords().get(a).copied().ok_or_else(|| {
                        Error::Projection(format!("axis {a} out of range for dimension {}", p.dim()))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Point::new(coords)
        })
        .collect()
}
