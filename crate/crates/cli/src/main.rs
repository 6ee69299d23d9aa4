//! `arrowhead`: generate, analyse and render d-dimensional arrowhead curves.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use arrowhead::analysis::{
    classification_csv, classify_rules, rule_sequence, ClassifyOptions, RuleSelection,
};
use arrowhead::curve::{check_cap, expand_addresses_with_cap, polyline, DEFAULT_CAP};
use arrowhead::render::{
    export_obj, render_curve_svg, render_knit_chart, render_sequence_chart, select_axes,
    simplex_wireframe, ChartStyle, Color, CurveStyle, KnitSpec, Projection,
};
use arrowhead::rules::{self, count_rules, enumerate_rules, parse_rule, ReproductionRule};
use arrowhead::{BinarySequence, SimplexGeometry};

#[derive(Debug, Parser)]
#[command(name = "arrowhead", version, about = "d-dimensional Sierpinski arrowhead curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the ordered address list of a level.
    Addresses(LevelArgs),
    /// Print the curve polyline.
    Points {
        #[command(flatten)]
        args: LevelArgs,
        #[arg(long, value_enum, default_value_t = PointFormat::Json)]
        format: PointFormat,
    },
    /// Print the binary activity sequence, one simplex group per line.
    Sequence {
        #[command(flatten)]
        args: LevelArgs,
        /// Also report whether the sequence is a palindrome.
        #[arg(long)]
        check_symmetry: bool,
    },
    /// List, count or validate reproduction rules.
    #[command(subcommand)]
    Rules(RulesCommand),
    /// Classify rules by symmetry and geometric validity (CSV).
    Classify {
        #[arg(short = 'd', long = "dim")]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        max_level: usize,
        /// Classify this many seeded random rules instead of all of them.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        max_cells: u128,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Render charts, curve drawings, knitting charts or OBJ files.
    #[command(subcommand)]
    Render(RenderCommand),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PointFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct RuleArgs {
    #[arg(short = 'd', long = "dim")]
    dim: usize,
    /// Preset name, rule file, or inline rule ("d=3;0 3 2 1;...").
    #[arg(long, default_value = "canonical")]
    rule: String,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    max_cells: u128,
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LevelArgs {
    #[command(flatten)]
    rule: RuleArgs,
    #[arg(short = 'n', long = "level")]
    level: usize,
}

#[derive(Debug, Args)]
struct LevelRangeArgs {
    #[command(flatten)]
    rule: RuleArgs,
    /// Levels to chart, `a..b` (inclusive) or a single level.
    #[arg(long)]
    levels: String,
}

#[derive(Debug, Subcommand)]
enum RulesCommand {
    /// Print rules in enumeration order, one per line.
    List {
        #[arg(short = 'd', long = "dim")]
        dim: usize,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Print the enumerated rule count and the closed form (d-1)^(d+1).
    Count {
        #[arg(short = 'd', long = "dim")]
        dim: usize,
    },
    /// Check a rule and print it in file format.
    Validate {
        #[arg(short = 'd', long = "dim")]
        dim: usize,
        #[arg(long)]
        rule: String,
    },
}

#[derive(Debug, Args)]
struct ChartStyleArgs {
    #[arg(long)]
    active_color: Option<String>,
    #[arg(long)]
    inactive_color: Option<String>,
    #[arg(long)]
    separator_color: Option<String>,
    #[arg(long)]
    width: Option<f64>,
    #[arg(long)]
    row_height: Option<f64>,
    #[arg(long)]
    level_gap: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum RenderCommand {
    /// Binary-sequence chart, one band per level.
    Chart {
        #[command(flatten)]
        args: LevelRangeArgs,
        #[command(flatten)]
        style: ChartStyleArgs,
    },
    /// Projected curve drawing.
    Curve {
        #[command(flatten)]
        args: LevelArgs,
        /// Two axes, e.g. `0,1`; three axes select the camera projection.
        #[arg(long, default_value = "0,1")]
        axes: String,
        #[arg(long, default_value_t = 30.0)]
        azimuth: f64,
        #[arg(long, default_value_t = 20.0)]
        elevation: f64,
        /// Draw the edges of every contracted simplex underneath.
        #[arg(long)]
        wireframe: bool,
        /// Keep the raw orientation for d = 2.
        #[arg(long)]
        no_rotate: bool,
        #[arg(long)]
        stroke_color: Option<String>,
        #[arg(long)]
        size: Option<f64>,
    },
    /// Knitting yoke chart.
    Knit {
        #[command(flatten)]
        args: LevelRangeArgs,
        /// Stitches per row for each level, comma-separated.
        #[arg(long)]
        stitches: String,
        #[arg(long, default_value_t = 9)]
        pattern_rows: usize,
        #[arg(long, default_value_t = 6)]
        separator_rows: usize,
        #[arg(long, default_value_t = 6)]
        border_rows: usize,
        #[arg(long)]
        main_color: Option<String>,
        #[arg(long)]
        active_color: Option<String>,
        #[arg(long)]
        inactive_color: Option<String>,
    },
    /// OBJ line export; dimensions above 3 need `--axes`.
    Obj {
        #[command(flatten)]
        args: LevelArgs,
        #[arg(long)]
        axes: Option<String>,
        #[arg(long)]
        wireframe: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Addresses(args) => {
            let rule = resolve_rule(&args.rule)?;
            let seq = expand_addresses_with_cap(&rule, args.level, args.rule.max_cells)?;
            emit(args.rule.out.as_deref(), &seq.to_text())
        }
        Command::Points { args, format } => {
            let rule = resolve_rule(&args.rule)?;
            let seq = expand_addresses_with_cap(&rule, args.level, args.rule.max_cells)?;
            let line = polyline(&SimplexGeometry::new(rule.dimension())?, &seq)?;
            let text = match format {
                PointFormat::Json => line.to_json() + "\n",
                PointFormat::Csv => line.to_csv(),
            };
            emit(args.rule.out.as_deref(), &text)
        }
        Command::Sequence {
            args,
            check_symmetry,
        } => {
            let rule = resolve_rule(&args.rule)?;
            let seq = rule_sequence(&rule, args.level, args.rule.max_cells)?;
            let mut text = seq.to_text();
            let verdict = if seq.is_symmetric() {
                "symmetric\n"
            } else {
                "asymmetric\n"
            };
            match &args.rule.out {
                Some(path) => {
                    write_file(path, &text)?;
                    if check_symmetry {
                        emit(None, verdict)?;
                    }
                    Ok(())
                }
                None => {
                    if check_symmetry {
                        text.push_str(verdict);
                    }
                    emit(None, &text)
                }
            }
        }
        Command::Rules(cmd) => run_rules(cmd),
        Command::Classify {
            dim,
            max_level,
            sample,
            seed,
            jobs,
            max_cells,
            out,
        } => {
            ensure!(max_level >= 1, "--max-level must be at least 1");
            let options = ClassifyOptions {
                max_level,
                selection: match sample {
                    Some(count) => RuleSelection::Sample { count, seed },
                    None => RuleSelection::All,
                },
                jobs,
                cap: max_cells,
            };
            let reports = classify_rules(dim, &options)?;
            emit(out.as_deref(), &classification_csv(&reports, max_level))
        }
        Command::Render(cmd) => run_render(cmd),
    }
}

fn run_rules(cmd: RulesCommand) -> Result<()> {
    match cmd {
        RulesCommand::List { dim, limit } => {
            let mut out = std::io::stdout().lock();
            for (i, rule) in enumerate_rules(dim)?
                .take(limit.unwrap_or(usize::MAX))
                .enumerate()
            {
                writeln!(out, "{i} {}", rule.to_compact())?;
            }
            Ok(())
        }
        RulesCommand::Count { dim } => {
            let count = count_rules(dim)?;
            let show = |v: Option<u128>| v.map_or("overflow".to_string(), |v| v.to_string());
            let mut line = format!(
                "{} (formula (d-1)^(d+1): {})",
                show(count.enumerated),
                show(count.formula)
            );
            if !count.agrees() {
                line.push_str(" differs from enumeration");
            }
            emit(None, &(line + "\n"))
        }
        RulesCommand::Validate { dim, rule } => {
            let rule = load_rule(&rule, dim)?;
            emit(None, &format!("valid\n{}", rules::serialize_rule(&rule)))
        }
    }
}

fn run_render(cmd: RenderCommand) -> Result<()> {
    match cmd {
        RenderCommand::Chart { args, style } => {
            let rule = resolve_rule(&args.rule)?;
            let sequences = level_sequences(&rule, &args)?;
            let mut chart = ChartStyle::default();
            set_color(&mut chart.active, &style.active_color)?;
            set_color(&mut chart.inactive, &style.inactive_color)?;
            set_color(&mut chart.separator, &style.separator_color)?;
            if let Some(v) = style.width {
                chart.width = v;
            }
            if let Some(v) = style.row_height {
                chart.row_height = v;
            }
            if let Some(v) = style.level_gap {
                chart.level_gap = v;
            }
            let svg = render_sequence_chart(&sequences, &chart)?;
            emit(args.rule.out.as_deref(), &svg)
        }
        RenderCommand::Curve {
            args,
            axes,
            azimuth,
            elevation,
            wireframe,
            no_rotate,
            stroke_color,
            size,
        } => {
            let rule = resolve_rule(&args.rule)?;
            let geom = SimplexGeometry::new(rule.dimension())?;
            let seq = expand_addresses_with_cap(&rule, args.level, args.rule.max_cells)?;
            let line = polyline(&geom, &seq)?;
            let projection = match parse_list(&axes, "--axes")?[..] {
                [x, y] => Projection::Axes { x, y },
                [a, b, c] => Projection::Camera {
                    axes: [a, b, c],
                    azimuth_deg: azimuth,
                    elevation_deg: elevation,
                },
                _ => bail!("--axes takes two or three axis indices"),
            };
            let mut style = CurveStyle {
                rotate_2d: !no_rotate,
                ..CurveStyle::default()
            };
            set_color(&mut style.stroke, &stroke_color)?;
            if let Some(s) = size {
                style.size = s;
            }
            let frames = wireframe.then(|| simplex_wireframe(&geom, &seq));
            let svg = render_curve_svg(&line, &projection, &style, frames.as_deref())?;
            emit(args.rule.out.as_deref(), &svg)
        }
        RenderCommand::Knit {
            args,
            stitches,
            pattern_rows,
            separator_rows,
            border_rows,
            main_color,
            active_color,
            inactive_color,
        } => {
            let rule = resolve_rule(&args.rule)?;
            let sequences = level_sequences(&rule, &args)?;
            let mut spec = KnitSpec::new(parse_list(&stitches, "--stitches")?);
            spec.pattern_rows = pattern_rows;
            spec.separator_rows = separator_rows;
            spec.border_rows = border_rows;
            set_color(&mut spec.main, &main_color)?;
            set_color(&mut spec.active, &active_color)?;
            set_color(&mut spec.inactive, &inactive_color)?;
            let svg = render_knit_chart(&sequences, &spec)?;
            emit(args.rule.out.as_deref(), &svg)
        }
        RenderCommand::Obj {
            args,
            axes,
            wireframe,
        } => {
            let rule = resolve_rule(&args.rule)?;
            let geom = SimplexGeometry::new(rule.dimension())?;
            let seq = expand_addresses_with_cap(&rule, args.level, args.rule.max_cells)?;
            let mut line = polyline(&geom, &seq)?;
            let mut frames = wireframe.then(|| simplex_wireframe(&geom, &seq));
            if let Some(axes) = axes {
                let axes = parse_list(&axes, "--axes")?;
                ensure!(
                    (2..=3).contains(&axes.len()),
                    "--axes takes two or three axis indices"
                );
                line.points = select_axes(&line.points, &axes)?;
                line.dimension = axes.len();
                if let Some(f) = frames.as_mut() {
                    for simplex in f.iter_mut() {
                        *simplex = select_axes(simplex, &axes)?;
                    }
                }
            }
            let obj = export_obj(&line, frames.as_deref())?;
            emit(args.rule.out.as_deref(), &obj)
        }
    }
}

fn level_sequences(rule: &ReproductionRule, args: &LevelRangeArgs) -> Result<Vec<BinarySequence>> {
    let (first, last) = parse_levels(&args.levels)?;
    check_cap(rule.dimension(), last, args.rule.max_cells)?;
    (first..=last)
        .map(|n| Ok(rule_sequence(rule, n, args.rule.max_cells)?))
        .collect()
}

fn parse_levels(text: &str) -> Result<(usize, usize)> {
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .with_context(|| format!("invalid level {s:?} in --levels"))
    };
    let (first, last) = match text.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let n = parse(text)?;
            (n, n)
        }
    };
    ensure!(
        first >= 1 && first <= last,
        "--levels must be a..b with 1 <= a <= b"
    );
    Ok((first, last))
}

fn parse_list(text: &str, flag: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .with_context(|| format!("invalid entry {t:?} in {flag}"))
        })
        .collect()
}

fn set_color(slot: &mut Color, value: &Option<String>) -> Result<()> {
    if let Some(v) = value {
        *slot = v.parse()?;
    }
    Ok(())
}

fn resolve_rule(args: &RuleArgs) -> Result<ReproductionRule> {
    ensure!(args.dim >= 2, "dimension must be at least 2, got {}", args.dim);
    load_rule(&args.rule, args.dim)
}

/// Presets first, then rule files, then inline text with `;` line breaks.
fn load_rule(source: &str, d: usize) -> Result<ReproductionRule> {
    if let Some(rule) = rules::preset(source, d)
        .with_context(|| format!("preset {source:?} does not apply to dimension {d}"))?
    {
        return Ok(rule);
    }
    let path = Path::new(source);
    let rule = if path.is_file() {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read rule file {}", path.display()))?;
        parse_rule(&text).with_context(|| format!("in rule file {}", path.display()))?
    } else if source.trim_start().starts_with("d=") {
        parse_rule(&source.replace(';', "\n")).context("in inline rule")?
    } else {
        bail!(
            "unknown rule {source:?}: not a preset ({}), a file, or an inline rule",
            rules::PRESET_NAMES.join(", ")
        );
    };
    ensure!(
        rule.dimension() == d,
        "rule has dimension {}, but -d {d} was given",
        rule.dimension()
    );
    Ok(rule)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
