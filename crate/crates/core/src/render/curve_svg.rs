use super::{num, positive, svg_open, Color};
use crate::curve::Polyline;
use crate::error::{Error, Result};
use crate::geometry::{Point, SimplexGeometry};

/// Maps points of R^d to the drawing plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Projection {
    /// Orthographic projection onto two coordinate axes.
    Axes { x: usize, y: usize },
    /// Three coordinate axes viewed by an orthographic camera. The scene is
    /// turned by `azimuth_deg` about the third axis, then tilted by
    /// `elevation_deg`.
    Camera {
        axes: [usize; 3],
        azimuth_deg: f64,
        elevation_deg: f64,
    },
}

impl Projection {
    /// Axes 0 and 1.
    pub const PLANE: Projection = Projection::Axes { x: 0, y: 1 };

    pub fn validate(&self, dimension: usize) -> Result<()> {
        let axes: &[usize] = match self {
            Projection::Axes { x, y } => &[*x, *y],
            Projection::Camera { axes, .. } => axes,
        };
        for (i, &a) in axes.iter().enumerate() {
            if a >= dimension {
                return Err(Error::Projection(format!(
                    "axis {a} out of range for dimension {dimension}"
                )));
            }
            if axes[..i].contains(&a) {
                return Err(Error::Projection(format!("axis {a} repeated")));
            }
        }
        if let Projection::Camera {
            azimuth_deg,
            elevation_deg,
            ..
        } = self
        {
            if !(azimuth_deg.is_finite() && elevation_deg.is_finite()) {
                return Err(Error::Projection("camera angles must be finite".into()));
            }
        }
        Ok(())
    }

    /// Projects one point. Call [`Projection::validate`] first.
    pub fn project(&self, p: &Point) -> (f64, f64) {
        let c = p.coords();
        match *self {
            Projection::Axes { x, y } => (c[x], c[y]),
            Projection::Camera {
                axes: [a, b, z],
                azimuth_deg,
                elevation_deg,
            } => {
                let (sa, ca) = azimuth_deg.to_radians().sin_cos();
                let (se, ce) = elevation_deg.to_radians().sin_cos();
                let u = ca * c[a] - sa * c[b];
                let depth = sa * c[a] + ca * c[b];
                (u, se * depth + ce * c[z])
            }
        }
    }

    pub fn project_all(&self, points: &[Point]) -> Result<Vec<(f64, f64)>> {
        let d = points.first().map_or(0, Point::dim);
        self.validate(d)?;
        Ok(points.iter().map(|p| self.project(p)).collect())
    }
}

/// Appearance of a curve drawing.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveStyle {
    pub stroke: Color,
    pub stroke_width: f64,
    pub wireframe: Color,
    pub wireframe_width: f64,
    /// Side of the square canvas in px.
    pub size: f64,
    pub margin: f64,
    /// For `d = 2` with the plain axis projection, turn the drawing so that
    /// `p_0` and `p_2` lie on a horizontal bottom edge.
    pub rotate_2d: bool,
}

impl Default for CurveStyle {
    fn default() -> Self {
        Self {
            stroke: Color::rgb(0x1F, 0x3A, 0x93),
            stroke_width: 1.5,
            wireframe: Color::rgb(0x7F, 0xB3, 0xE8),
            wireframe_width: 0.5,
            size: 800.0,
            margin: 20.0,
            rotate_2d: true,
        }
    }
}

/// Rotation (cos, sin) taking `p_2 - p_0` of the triangle onto +x; `p_1` then
/// lies above the edge.
fn display_rotation() -> (f64, f64) {
    let g = SimplexGeometry::new(2).expect("d = 2");
    let (p0, p2) = (g.vertices()[0].coords(), g.vertices()[2].coords());
    let (dx, dy) = (p2[0] - p0[0], p2[1] - p0[1]);
    let len = dx.hypot(dy);
    (dx / len, -dy / len)
}

/// Draws the polyline as a single SVG path, optionally over the edges of the
/// given simplices.
pub fn render_curve_svg(
    line: &Polyline,
    projection: &Projection,
    style: &CurveStyle,
    wireframe: Option<&[Vec<Point>]>,
) -> Result<String> {
    positive("size", style.size)?;
    positive("stroke width", style.stroke_width)?;
    positive("wireframe width", style.wireframe_width)?;
    if !(style.margin >= 0.0 && 2.0 * style.margin < style.size) {
        return Err(Error::Style("margin must be in [0, size/2)".into()));
    }
    if line.points.is_empty() {
        return Err(Error::Input("empty polyline".into()));
    }
    projection.validate(line.dimension)?;

    let mut curve: Vec<(f64, f64)> = line.points.iter().map(|p| projection.project(p)).collect();
    let mut frames: Vec<Vec<(f64, f64)>> = wireframe
        .unwrap_or_default()
        .iter()
        .map(|s| s.iter().map(|p| projection.project(p)).collect())
        .collect();

    if style.rotate_2d && line.dimension == 2 && *projection == Projection::PLANE {
        let (c, s) = display_rotation();
        let rot = |(x, y): (f64, f64)| (c * x - s * y, s * x + c * y);
        curve.iter_mut().for_each(|p| *p = rot(*p));
        frames.iter_mut().flatten().for_each(|p| *p = rot(*p));
    }

    let all = curve.iter().chain(frames.iter().flatten());
    let (mut min_x, mut min_y, mut max_x, mut max_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &(x, y) in all {
        min_x = min_x.min(x);
        min_y = min_y.min(y);
        max_x = max_x.max(x);
        max_y = max_y.max(y);
    }
    let extent = (max_x - min_x).max(max_y - min_y);
    let scale = if extent > 0.0 {
        (style.size - 2.0 * style.margin) / extent
    } else {
        1.0
    };
    let to_screen = |(x, y): (f64, f64)| {
        (
            style.margin + (x - min_x) * scale,
            style.size - style.margin - (y - min_y) * scale,
        )
    };

    let mut out = String::new();
    svg_open(&mut out, style.size, style.size);
    if !frames.is_empty() {
        let mut d = String::new();
        for verts in &frames {
            for i in 0..verts.len() {
                for j in i + 1..verts.len() {
                    let (a, b) = (to_screen(verts[i]), to_screen(verts[j]));
                    if !d.is_empty() {
                        d.push(' ');
                    }
                    d.push_str(&format!(
                        "M{} {}L{} {}",
                        num(a.0),
                        num(a.1),
                        num(b.0),
                        num(b.1)
                    ));
                }
            }
        }
        out.push_str(&format!(
            "<path id=\"wireframe\" d=\"{d}\" stroke=\"{}\" stroke-width=\"{}\" fill=\"none\"/>\n",
            style.wireframe,
            num(style.wireframe_width)
        ));
    }
    let mut d = String::new();
    for (i, &p) in curve.iter().enumerate() {
        let (x, y) = to_screen(p);
        if i > 0 {
            d.push(' ');
        }
        d.push_str(&format!(
            "{}{} {}",
            if i == 0 { 'M' } else { 'L' },
            num(x),
            num(y)
        ));
    }
    out.push_str(&format!(
        "<path id=\"curve\" d=\"{d}\" stroke=\"{}\" stroke-width=\"{}\" fill=\"none\" stroke-linejoin=\"round\"/>\n",
        style.stroke,
        num(style.stroke_width)
    ));
    out.push_str("</svg>\n");
    Ok(out)
}
