use super::{num, positive, svg_open, Color};
use crate::analysis::BinarySequence;
use crate::error::{Error, Result};

/// Stitch counts, row counts and yarn colors of a yoke chart.
///
/// Level `L` holds `(d+1)^(L+1)` sequence entries, so its stitch count must
/// be a multiple of that; each entry then spans `stitches / entries`
/// adjacent stitches.
#[derive(Debug, Clone, PartialEq)]
pub struct KnitSpec {
    /// Stitches per row for each charted level, in level order.
    pub stitches: Vec<usize>,
    pub pattern_rows: usize,
    /// Main-color rows between successive levels.
    pub separator_rows: usize,
    /// Main-color rows above the first and below the last level.
    pub border_rows: usize,
    pub main: Color,
    pub active: Color,
    pub inactive: Color,
    /// Height of one row (and width of one stitch at the widest level), px.
    pub cell_size: f64,
}

impl KnitSpec {
    pub fn new(stitches: Vec<usize>) -> Self {
        Self {
            stitches,
            pattern_rows: 9,
            separator_rows: 6,
            border_rows: 6,
            main: Color::rgb(0xF5, 0xF1, 0xE6),
            active: Color::rgb(0x1F, 0x3A, 0x93),
            inactive: Color::rgb(0x7F, 0xB3, 0xE8),
            cell_size: 4.0,
        }
    }

    /// Stitches per sequence entry for each level.
    pub fn entry_widths(&self, sequences: &[BinarySequence]) -> Result<Vec<usize>> {
        if sequences.len() != self.stitches.len() {
            return Err(Error::Input(format!(
                "{} stitch counts for {} levels",
                self.stitches.len(),
                sequences.len()
            )));
        }
        sequences
            .iter()
            .zip(&self.stitches)
            .map(|(seq, &stitches)| {
                let entries = seq.bits().len();
                if stitches == 0 || stitches % entries != 0 {
                    Err(Error::Divisibility {
                        level: seq.level(),
                        stitches,
                        entries,
                    })
                } else {
                    Ok(stitches / entries)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KnitColor {
    Main,
    Active,
    Inactive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Pattern { level: usize },
    Separator,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnitRow {
    pub kind: RowKind,
    pub cells: Vec<KnitColor>,
}

/// The chart as rows of stitches, top row first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnitChart {
    pub rows: Vec<KnitRow>,
    /// Stitches per entry for each level.
    pub entry_widths: Vec<usize>,
    /// Widest row, in stitches.
    pub width: usize,
}

impl KnitChart {
    pub fn pattern_row_count(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| matches!(r.kind, RowKind::Pattern { .. }))
            .count()
    }

    pub fn separator_row_count(&self) -> usize {
        self.rows.len() - self.pattern_row_count()
    }
}

/// Lays out the chart: border rows, then for each level its pattern rows
/// followed by separator rows (border rows after the last level).
///
/// Main-color rows take the stitch count of the level they lead into; the
/// trailing border keeps the last level's count.
pub fn build_knit_chart(sequences: &[BinarySequence], spec: &KnitSpec) -> Result<KnitChart> {
    if sequences.is_empty() {
        return Err(Error::Input("no sequences to chart".into()));
    }
    let entry_widths = spec.entry_widths(sequences)?;
    let main_rows = |count: usize, stitches: usize| {
        (0..count).map(move |_| KnitRow {
            kind: RowKind::Separator,
            cells: vec![KnitColor::Main; stitches],
        })
    };
    let mut rows: Vec<KnitRow> = main_rows(spec.border_rows, spec.stitches[0]).collect();
    for (i, (seq, &per_entry)) in sequences.iter().zip(&entry_widths).enumerate() {
        if i > 0 {
            rows.extend(main_rows(spec.separator_rows, spec.stitches[i]));
        }
        let cells: Vec<KnitColor> = seq
            .bits()
            .iter()
            .flat_map(|&b| {
                let c = if b { KnitColor::Active } else { KnitColor::Inactive };
                std::iter::repeat_n(c, per_entry)
            })
            .collect();
        rows.extend((0..spec.pattern_rows).map(|_| KnitRow {
            kind: RowKind::Pattern { level: seq.level() },
            cells: cells.clone(),
        }));
    }
    rows.extend(main_rows(spec.border_rows, *spec.stitches.last().expect("non-empty")));
    Ok(KnitChart {
        rows,
        entry_widths,
        width: spec.stitches.iter().copied().max().expect("non-empty"),
    })
}

/// SVG grid of the chart. Every row spans the same width, so stitches of
/// narrower levels are drawn wider and entry boundaries line up across
/// levels.
pub fn render_knit_chart(sequences: &[BinarySequence], spec: &KnitSpec) -> Result<String> {
    positive("cell size", spec.cell_size)?;
    let chart = build_knit_chart(sequences, spec)?;
    let width = chart.width as f64 * spec.cell_size;
    let height = chart.rows.len() as f64 * spec.cell_size;
    let mut out = String::new();
    svg_open(&mut out, width, height);
    for (r, row) in chart.rows.iter().enumerate() {
        let y = num(r as f64 * spec.cell_size);
        let h = num(spec.cell_size);
        let w = width / row.cells.len() as f64;
        let class = match row.kind {
            RowKind::Pattern { level } => format!("pattern level-{level}"),
            RowKind::Separator => "separator".to_string(),
        };
        out.push_str(&format!("<g class=\"{class}\">\n"));
        for (c, cell) in row.cells.iter().enumerate() {
            let fill = match cell {
                KnitColor::Main => spec.main,
                KnitColor::Active => spec.active,
                KnitColor::Inactive => spec.inactive,
            };
            out.push_str(&format!(
                "<rect x=\"{}\" y=\"{y}\" width=\"{}\" height=\"{h}\" fill=\"{fill}\"/>\n",
                num(c as f64 * w),
                num(w)
            ));
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
