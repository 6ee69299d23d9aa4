//! Binary-sequence encoding of curves, symmetry, index isomorphisms and
//! rule classification.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::curve::{
    check_cap, expand_addresses_with_cap, simplex_activity, verify_curve_default, Activity,
    DEFAULT_CAP,
};
use crate::error::{Error, Result};
use crate::geometry::SimplexGeometry;
use crate::rules::{count_rules, enumerate_rules, random_rule, rule_index, ReproductionRule};

/// Per-simplex groups of `d+1` activity bits, concatenated in curve order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarySequence {
    dimension: usize,
    level: usize,
    bits: Vec<bool>,
}

/// Group `k` has bit `j` set iff `j` is the enter or exit vertex of simplex `k`.
pub fn binary_sequence(activity: &[Activity], d: usize, n: usize) -> Result<BinarySequence> {
    let expected = crate::curve::simplex_count(d, n);
    if activity.len() as u128 != expected {
        return Err(Error::Input(format!(
            "{} activity pairs, expected (d+1)^n = {expected}",
            activity.len()
        )));
    }
    let width = d + 1;
    let mut bits = vec![false; activity.len() * width];
    for (k, a) in activity.iter().enumerate() {
        if a.enter > d || a.exit > d {
            return Err(Error::VertexIndex {
                index: a.enter.max(a.exit),
                dimension: d,
            });
        }
        bits[k * width + a.enter] = true;
        bits[k * width + a.exit] = true;
    }
    Ok(BinarySequence {
        dimension: d,
        level: n,
        bits,
    })
}

/// Expands `rule` to level `n` and encodes the resulting curve.
pub fn rule_sequence(rule: &ReproductionRule, n: usize, cap: u128) -> Result<BinarySequence> {
    let seq = expand_addresses_with_cap(rule, n, cap)?;
    binary_sequence(&simplex_activity(&seq), rule.dimension(), n)
}

impl BinarySequence {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn group_count(&self) -> usize {
        self.bits.len() / (self.dimension + 1)
    }

    pub fn groups(&self) -> impl ExactSizeIterator<Item = &[bool]> + '_ {
        self.bits.chunks_exact(self.dimension + 1)
    }

    /// One group per line, `1` for active and `0` for inactive.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.bits.len() + self.group_count());
        for g in self.groups() {
            out.extend(g.iter().map(|&b| if b { '1' } else { '0' }));
            out.push('\n');
        }
        out
    }

    /// True iff the flat bit string is a palindrome.
    pub fn is_symmetric(&self) -> bool {
        self.bits.iter().eq(self.bits.iter().rev())
    }

    pub fn reversed(&self) -> Self {
        Self {
            bits: self.bits.iter().rev().copied().collect(),
            ..self.clone()
        }
    }
}

/// A permutation of vertex indices `0..=d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexIsomorphism {
    mapping: Vec<usize>,
}

impl IndexIsomorphism {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; mapping.len()];
        for &v in &mapping {
            if v >= mapping.len() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Input(format!("{mapping:?} is not a permutation")));
            }
        }
        Ok(Self { mapping })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            mapping: (0..=d).collect(),
        }
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn apply(&self, v: usize) -> usize {
        self.mapping[v]
    }

    pub fn apply_activity(&self, a: Activity) -> Activity {
        Activity {
            enter: self.apply(a.enter),
            exit: self.apply(a.exit),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut mapping = vec![0; self.mapping.len()];
        for (j, &v) in self.mapping.iter().enumerate() {
            mapping[v] = j;
        }
        Self { mapping }
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(j, &v)| j == v)
    }
}

/// One isomorphism per rule row: `j -> row[i][j]`.
pub fn extract_isomorphisms(rule: &ReproductionRule) -> Vec<IndexIsomorphism> {
    rule.rows()
        .iter()
        .map(|row| IndexIsomorphism {
            mapping: row.clone(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkCheck {
    pub chunk: usize,
    pub isomorphism: IndexIsomorphism,
    /// First simplex in the chunk whose mapped pair differs, if any.
    pub first_mismatch: Option<usize>,
}

impl ChunkCheck {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfSimilarityReport {
    pub level: usize,
    pub chunks: Vec<ChunkCheck>,
}

impl SelfSimilarityReport {
    pub fn passed(&self) -> bool {
        self.chunks.iter().all(ChunkCheck::passed)
    }
}

/// Compares level `n` mapped through each row isomorphism with the matching
/// chunk of `(d+1)^n` simplices at level `n+1`. Pairs are compared as sets.
pub fn verify_self_similarity(
    rule: &ReproductionRule,
    n: usize,
    cap: u128,
) -> Result<SelfSimilarityReport> {
    let coarse = simplex_activity(&expand_addresses_with_cap(rule, n, cap)?);
    let fine = simplex_activity(&expand_addresses_with_cap(rule, n + 1, cap)?);
    let chunks = extract_isomorphisms(rule)
        .into_iter()
        .zip(fine.chunks_exact(coarse.len()))
        .enumerate()
        .map(|(chunk, (iso, target))| {
            let first_mismatch = coarse
                .iter()
                .zip(target)
                .position(|(&a, b)| iso.apply_activity(a).sorted() != b.sorted());
            ChunkCheck {
                chunk,
                isomorphism: iso,
                first_mismatch,
            }
        })
        .collect();
    Ok(SelfSimilarityReport { level: n, chunks })
}

/// Classification of one rule.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleReport {
    /// Position in the enumeration, when it fits in 128 bits.
    pub index: Option<u128>,
    pub rule: ReproductionRule,
    /// Palindrome verdict for levels `1..=max_level`.
    pub symmetric_by_level: Vec<bool>,
    pub symmetric: bool,
    pub isomorphisms: Vec<IndexIsomorphism>,
    pub geometric_valid: bool,
    pub notes: Vec<String>,
}

/// Which rules [`classify_rules`] looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleSelection {
    /// Every enumerated rule, in enumeration order.
    All,
    /// `count` rules with uniformly shuffled rows, drawn from a seeded stream.
    Sample { count: usize, seed: u64 },
}

/// Upper bound on the number of rules [`RuleSelection::All`] accepts.
pub const MAX_EXHAUSTIVE_RULES: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub max_level: usize,
    pub selection: RuleSelection,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub cap: u128,
}

impl ClassifyOptions {
    pub fn new(max_level: usize) -> Self {
        Self {
            max_level,
            selection: RuleSelection::All,
            jobs: None,
            cap: DEFAULT_CAP,
        }
    }
}

/// Analyses one rule at levels `1..=max_level`.
pub fn classify_rule(rule: &ReproductionRule, max_level: usize, cap: u128) -> Result<RuleReport> {
    if max_level == 0 {
        return Err(Error::Level(0));
    }
    let d = rule.dimension();
    let geom = SimplexGeometry::new(d)?;
    let mut symmetric_by_level = Vec::with_capacity(max_level);
    let mut notes = Vec::new();
    let mut geometric_valid = true;
    for n in 1..=max_level {
        let seq = expand_addresses_with_cap(rule, n, cap)?;
        let activity = simplex_activity(&seq);
        symmetric_by_level.push(binary_sequence(&activity, d, n)?.is_symmetric());
        let report = verify_curve_default(&geom, &seq)?;
        if !report.is_valid() {
            geometric_valid = false;
            notes.push(format!(
                "level {n}: {} geometric failures",
                report.failures.len()
            ));
        }
    }
    Ok(RuleReport {
        index: rule_index(rule),
        rule: rule.clone(),
        symmetric: symmetric_by_level.iter().all(|&s| s),
        symmetric_by_level,
        isomorphisms: extract_isomorphisms(rule),
        geometric_valid,
        notes,
    })
}

/// Classifies the selected rules of dimension `d`. Reports follow
/// enumeration (or sampling) order regardless of `jobs`.
pub fn classify_rules(d: usize, options: &ClassifyOptions) -> Result<Vec<RuleReport>> {
    if options.max_level == 0 {
        return Err(Error::Level(0));
    }
    check_cap(d, options.max_level, options.cap)?;
    let rules: Vec<ReproductionRule> = match options.selection {
        RuleSelection::All => {
            let total = count_rules(d)?.enumerated.unwrap_or(u128::MAX);
            if total > MAX_EXHAUSTIVE_RULES {
                return Err(Error::CapExceeded {
                    requested: total,
                    cap: MAX_EXHAUSTIVE_RULES,
                });
            }
            enumerate_rules(d)?.collect()
        }
        RuleSelection::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| random_rule(d, &mut rng))
                .collect::<Result<_>>()?
        }
    };
    let run = || -> Result<Vec<RuleReport>> {
        rules
            .par_iter()
            .map(|rule| classify_rule(rule, options.max_level, options.cap))
            .collect()
    };
    match options.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::Input(e.to_string()))?
            .install(run),
        None => run(),
    }
}

/// CSV with columns `rule-id, rule, symmetric@1..L, overall, geometric_valid`.
pub fn classification_csv(reports: &[RuleReport], max_level: usize) -> String {
    let mut out = String::from("rule-id,rule");
    for n in 1..=max_level {
        out.push_str(&format!(",symmetric@{n}"));
    }
    out.push_str(",overall,geometric_valid\n");
    for (i, r) in reports.iter().enumerate() {
        let id = r
            .index
            .map_or_else(|| format!("sample-{i}"), |idx| idx.to_string());
        out.push_str(&format!("{id},{}", r.rule.to_compact()));
        for s in &r.symmetric_by_level {
            out.push_str(if *s { ",true" } else { ",false" });
        }
        out.push_str(&format!(",{},{}\n", r.symmetric, r.geometric_valid));
    }
    out
}
