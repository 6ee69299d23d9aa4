//! Reproduction rules: validation, enumeration, presets and the text format.
//!
//! A rule for dimension `d` is a `(d+1) x (d+1)` table written in canonical
//! symbols `0..=d`. Row `i` lists, in order, the last entries of the child
//! block reproduced from the `i`-th address of a parent block. Each row is a
//! permutation whose first and last entries are fixed:
//!
//! | row        | first | last  |
//! |------------|-------|-------|
//! | `0`        | `0`   | `1`   |
//! | `1..d`     | `i-1` | `i+1` |
//! | `d`        | `d-1` | `d`   |
//!
//! The `d-1` middle entries of every row are free, so a dimension admits
//! `((d-1)!)^(d+1)` rules. The often quoted closed form `(d-1)^(d+1)` agrees
//! for `d <= 3` only; [`count_rules`] reports both.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result, RuleViolation};
use crate::geometry::check_dimension;

/// A validated reproduction rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReproductionRule {
    dimension: usize,
    rows: Vec<Vec<usize>>,
}

/// Fixed first entry of row `i`.
pub fn fixed_first(i: usize) -> usize {
    i.saturating_sub(1)
}

/// Fixed last entry of row `i` in dimension `d`.
pub fn fixed_last(i: usize, d: usize) -> usize {
    if i < d {
        i + 1
    } else {
        d
    }
}

/// Checks a candidate table and returns the first violated constraint.
pub fn validate_rule(
    rows: &[Vec<usize>],
    d: usize,
) -> std::result::Result<ReproductionRule, RuleViolation> {
    let width = d + 1;
    if rows.len() != width {
        return Err(RuleViolation::RowCount {
            expected: width,
            found: rows.len(),
        });
    }
    for (row, entries) in rows.iter().enumerate() {
        if entries.len() != width {
            return Err(RuleViolation::RowLength {
                row,
                expected: width,
                found: entries.len(),
            });
        }
        let mut seen = vec![false; width];
        for &value in entries {
            if value > d {
                return Err(RuleViolation::OutOfRange { row, value, max: d });
            }
            if std::mem::replace(&mut seen[value], true) {
                return Err(RuleViolation::Repeated { row, value });
            }
        }
        let (first, last) = (fixed_first(row), fixed_last(row, d));
        if entries[0] != first {
            return Err(RuleViolation::First {
                row,
                expected: first,
                found: entries[0],
            });
        }
        if entries[d] != last {
            return Err(RuleViolation::Last {
                row,
                expected: last,
                found: entries[d],
            });
        }
    }
    Ok(ReproductionRule {
        dimension: d,
        rows: rows.to_vec(),
    })
}

impl ReproductionRule {
    /// Validates `rows` as a rule for dimension `d`.
    pub fn new(rows: Vec<Vec<usize>>, d: usize) -> Result<Self> {
        check_dimension(d)?;
        Ok(validate_rule(&rows, d)?)
    }

    /// Builds a rule from the flat row-major listing `r_00, r_01, ..., r_dd`.
    pub fn from_flat(flat: &[usize], d: usize) -> Result<Self> {
        check_dimension(d)?;
        if flat.len() != (d + 1) * (d + 1) {
            return Err(RuleViolation::RowCount {
                expected: d + 1,
                found: flat.len() / (d + 1),
            }
            .into());
        }
        Self::new(flat.chunks(d + 1).map(<[usize]>::to_vec).collect(), d)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    /// Rows joined by `;`, entries by spaces: `0 3 2 1;0 1 3 2;...`.
    pub fn to_compact(&self) -> String {
        self.rows
            .iter()
            .map(|r| join(r, " "))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for ReproductionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_compact())
    }
}

fn join(values: &[usize], sep: &str) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

/// The rule whose free middle entries are ascending in every row.
///
/// For `d = 2` this is the only rule, `(0,2,1), (0,1,2), (1,0,2)`.
pub fn canonical_rule(d: usize) -> Result<ReproductionRule> {
    check_dimension(d)?;
    let rows = (0..=d).map(|i| canonical_row(i, d)).collect();
    Ok(ReproductionRule { dimension: d, rows })
}

fn canonical_row(i: usize, d: usize) -> Vec<usize> {
    let (first, last) = (fixed_first(i), fixed_last(i, d));
    let mut row = Vec::with_capacity(d + 1);
    row.push(first);
    row.extend((0..=d).filter(|&v| v != first && v != last));
    row.push(last);
    row
}

/// Number of rules for dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleCount {
    /// Length of [`enumerate_rules`], `((d-1)!)^(d+1)`; `None` on `u128` overflow.
    pub enumerated: Option<u128>,
    /// The closed form `(d-1)^(d+1)`; `None` on `u128` overflow.
    pub formula: Option<u128>,
}

impl RuleCount {
    pub fn agrees(&self) -> bool {
        self.enumerated.is_some() && self.enumerated == self.formula
    }
}

pub fn count_rules(d: usize) -> Result<RuleCount> {
    check_dimension(d)?;
    let rows = (d + 1) as u32;
    Ok(RuleCount {
        enumerated: factorial(d - 1).and_then(|f| f.checked_pow(rows)),
        formula: ((d - 1) as u128).checked_pow(rows),
    })
}

fn factorial(k: usize) -> Option<u128> {
    (1..=k as u128).try_fold(1u128, |acc, v| acc.checked_mul(v))
}

/// Lazily enumerates every valid rule for dimension `d` in lexicographic order
/// of the concatenated rows. The first rule is [`canonical_rule`].
pub fn enumerate_rules(d: usize) -> Result<RuleEnumerator> {
    Ok(RuleEnumerator {
        current: Some(canonical_rule(d)?.rows),
        dimension: d,
    })
}

/// Rule number `index` of [`enumerate_rules`], or `None` past the end.
///
/// Lets a caller partition the stream into index ranges.
pub fn rule_at(d: usize, index: u128) -> Result<Option<ReproductionRule>> {
    check_dimension(d)?;
    let Some(total) = count_rules(d)?.enumerated else {
        return Err(Error::Input(format!(
            "rule indices for dimension {d} exceed 128 bits"
        )));
    };
    if index >= total {
        return Ok(None);
    }
    let per_row = factorial(d - 1).expect("bounded by total");
    let mut rank = index;
    let mut rows = vec![Vec::new(); d + 1];
    for i in (0..=d).rev() {
        let mut row = canonical_row(i, d);
        unrank_permutation(&mut row[1..d], rank % per_row);
        rank /= per_row;
        rows[i] = row;
    }
    Ok(Some(ReproductionRule { dimension: d, rows }))
}

/// Position of `rule` in [`enumerate_rules`]; inverse of [`rule_at`].
pub fn rule_index(rule: &ReproductionRule) -> Option<u128> {
    let d = rule.dimension;
    let per_row = factorial(d - 1)?;
    let mut index: u128 = 0;
    for row in &rule.rows {
        index = index
            .checked_mul(per_row)?
            .checked_add(rank_permutation(&row[1..d]))?;
    }
    Some(index)
}

fn rank_permutation(items: &[usize]) -> u128 {
    let n = items.len();
    (0..n)
        .map(|pos| {
            let smaller_after = items[pos + 1..].iter().filter(|&&v| v < items[pos]).count();
            smaller_after as u128 * factorial(n - pos - 1).expect("small")
        })
        .sum()
}

/// Reorders an ascending slice into its `rank`-th lexicographic permutation.
fn unrank_permutation(items: &mut [usize], mut rank: u128) {
    let mut pool: Vec<usize> = items.to_vec();
    let n = pool.len();
    for (pos, slot) in items.iter_mut().enumerate() {
        let block = factorial(n - pos - 1).expect("small");
        let pick = (rank / block) as usize;
        rank %= block;
        *slot = pool.remove(pick);
    }
}

fn next_permutation(items: &mut [usize]) -> bool {
    if items.len() < 2 {
        return false;
    }
    let Some(pivot) = (0..items.len() - 1).rev().find(|&i| items[i] < items[i + 1]) else {
        return false;
    };
    let successor = (pivot + 1..items.len())
        .rev()
        .find(|&j| items[j] > items[pivot])
        .expect("exists past pivot");
    items.swap(pivot, successor);
    items[pivot + 1..].reverse();
    true
}

/// Iterator returned by [`enumerate_rules`].
#[derive(Debug, Clone)]
pub struct RuleEnumerator {
    dimension: usize,
    current: Option<Vec<Vec<usize>>>,
}

impl Iterator for RuleEnumerator {
    type Item = ReproductionRule;

    fn next(&mut self) -> Option<Self::Item> {
        let rows = self.current.take()?;
        let d = self.dimension;
        let mut next = rows.clone();
        let mut advanced = false;
        for i in (0..=d).rev() {
            if next_permutation(&mut next[i][1..d]) {
                advanced = true;
                break;
            }
            next[i][1..d].sort_unstable();
        }
        if advanced {
            self.current = Some(next);
        }
        Some(ReproductionRule { dimension: d, rows })
    }
}

/// A rule with uniformly shuffled middle entries in every row.
pub fn random_rule<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<ReproductionRule> {
    let mut rule = canonical_rule(d)?;
    for row in &mut rule.rows {
        row[1..d].shuffle(rng);
    }
    Ok(rule)
}

/// A named rule from the preset registry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RulePreset {
    pub name: &'static str,
    pub rule: ReproductionRule,
}

/// Names in the preset registry.
pub const PRESET_NAMES: [&str; 4] = ["canonical", "r1", "r2", "r3"];

const R1: [usize; 16] = [0, 3, 2, 1, 0, 1, 3, 2, 1, 0, 2, 3, 2, 1, 0, 3];
const R2: [usize; 16] = [0, 2, 3, 1, 0, 1, 3, 2, 1, 0, 2, 3, 2, 1, 0, 3];
#[rustfmt::skip]
const R3: [usize; 64] = [
    0, 2, 3, 4, 5, 6, 7, 1,
    0, 1, 3, 4, 5, 6, 7, 2,
    1, 0, 2, 4, 5, 6, 7, 3,
    2, 0, 1, 3, 5, 6, 7, 4,
    3, 0, 1, 2, 4, 6, 7, 5,
    4, 0, 1, 2, 3, 5, 7, 6,
    5, 0, 1, 2, 3, 4, 6, 7,
    6, 0, 1, 2, 3, 4, 5, 7,
];

/// The `d = 3` rule `R1` (symmetric binary sequences).
pub fn r1() -> ReproductionRule {
    ReproductionRule::from_flat(&R1, 3).expect("valid preset")
}

/// The `d = 3` rule `R2` (asymmetric at level 2).
pub fn r2() -> ReproductionRule {
    ReproductionRule::from_flat(&R2, 3).expect("valid preset")
}

/// The `d = 7` rule `R3`.
pub fn r3() -> ReproductionRule {
    ReproductionRule::from_flat(&R3, 7).expect("valid preset")
}

/// Looks up a preset by name. `canonical` exists for every dimension; the
/// others only for their own and reject a different `d`.
pub fn preset(name: &str, d: usize) -> Result<Option<ReproductionRule>> {
    let rule = match name {
        "canonical" => return canonical_rule(d).map(Some),
        "r1" => r1(),
        "r2" => r2(),
        "r3" => r3(),
        _ => return Ok(None),
    };
    if rule.dimension() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rule.dimension(),
        });
    }
    Ok(Some(rule))
}

/// Presets usable in dimension `d`, in registry order.
pub fn presets(d: usize) -> Vec<RulePreset> {
    PRESET_NAMES
        .iter()
        .filter_map(|&name| {
            preset(name, d)
                .ok()
                .flatten()
                .map(|rule| RulePreset { name, rule })
        })
        .collect()
}

/// Serializes a rule: `d=<d>` then one space-separated row per line.
pub fn serialize_rule(rule: &ReproductionRule) -> String {
    let mut out = format!("d={}\n", rule.dimension);
    for row in &rule.rows {
        out.push_str(&join(row, " "));
        out.push('\n');
    }
    out
}

/// Parses the rule file format. Blank lines and lines starting with `#` are
/// skipped.
pub fn parse_rule(text: &str) -> Result<ReproductionRule> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(Error::RuleSyntax {
        line: 1,
        message: "missing \"d=<integer>\" header".into(),
    })?;
    let d = header
        .strip_prefix("d=")
        .and_then(|v| v.trim().parse::<usize>().ok())
        .ok_or_else(|| Error::RuleSyntax {
            line: header_line,
            message: format!("expected \"d=<integer>\", found {header:?}"),
        })?;
    check_dimension(d)?;

    let rows = lines
        .map(|(line, l)| {
            l.split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| Error::RuleSyntax {
                        line,
                        message: format!("non-integer token {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    ReproductionRule::new(rows, d)
}
