use super::{num, positive, svg_open, Color};
use crate::analysis::BinarySequence;
use crate::error::{Error, Result};

/// Layout and palette of a binary-sequence chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartStyle {
    pub active: Color,
    pub inactive: Color,
    pub separator: Color,
    pub row_height: f64,
    pub width: f64,
    pub level_gap: f64,
    /// Upper bound on the separator stroke; narrower groups get thinner strokes.
    pub separator_width: f64,
}

impl Default for ChartStyle {
    fn default() -> Self {
        Self {
            active: Color::rgb(0xE8, 0x86, 0x0C),
            inactive: Color::rgb(0x2A, 0x6F, 0xB8),
            separator: Color::rgb(0, 0, 0),
            row_height: 40.0,
            width: 1024.0,
            level_gap: 12.0,
            separator_width: 1.0,
        }
    }
}

impl ChartStyle {
    pub fn validate(&self) -> Result<()> {
        positive("row height", self.row_height)?;
        positive("width", self.width)?;
        positive("separator width", self.separator_width)?;
        if !(self.level_gap >= 0.0 && self.level_gap.is_finite()) {
            return Err(Error::Style("level gap must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Active,
    Inactive,
}

/// The cell colors of one chart band, left to right.
pub fn chart_cells(seq: &BinarySequence) -> Vec<Cell> {
    seq.bits()
        .iter()
        .map(|&b| if b { Cell::Active } else { Cell::Inactive })
        .collect()
}

/// One band per sequence, top-down, all spanning `style.width`, with
/// separator strokes between simplex groups.
pub fn render_sequence_chart(sequences: &[BinarySequence], style: &ChartStyle) -> Result<String> {
    style.validate()?;
    let first = sequences
        .first()
        .ok_or_else(|| Error::Input("no sequences to chart".into()))?;
    for pair in sequences.windows(2) {
        if pair[1].dimension() != first.dimension() {
            return Err(Error::Input("sequences differ in dimension".into()));
        }
        if pair[1].level() != pair[0].level() + 1 {
            return Err(Error::Input("levels must be consecutive and ascending".into()));
        }
    }
    let bands = sequences.len() as f64;
    let height = bands * style.row_height + (bands - 1.0) * style.level_gap;
    let mut out = String::new();
    svg_open(&mut out, style.width, height);
    for (b, seq) in sequences.iter().enumerate() {
        let top = b as f64 * (style.row_height + style.level_gap);
        let cell_width = style.width / seq.bits().len() as f64;
        out.push_str(&format!(
            "<g id=\"level-{}\" class=\"band\">\n",
            seq.level()
        ));
        for (i, cell) in chart_cells(seq).into_iter().enumerate() {
            let fill = match cell {
                Cell::Active => style.active,
                Cell::Inactive => style.inactive,
            };
            out.push_str(&format!(
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\"/>\n",
                num(i as f64 * cell_width),
                num(top),
                num(cell_width),
                num(style.row_height)
            ));
        }
        let groups = seq.group_count();
        if groups > 1 {
            let group_width = style.width / groups as f64;
            let mut d = String::new();
            for g in 1..groups {
                if g > 1 {
                    d.push(' ');
                }
                d.push_str(&format!(
                    "M{} {}V{}",
                    num(g as f64 * group_width),
                    num(top),
                    num(top + style.row_height)
                ));
            }
            out.push_str(&format!(
                "<path d=\"{d}\" stroke=\"{}\" stroke-width=\"{}\" fill=\"none\"/>\n",
                style.separator,
                num(style.separator_width.min(group_width / 4.0))
            ));
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
