//! Address expansion, curve point references, simplex activity and the
//! geometric polyline of a d-arrowhead curve.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{format_digits, level_tolerance, vertex_match, Address, Point, SimplexGeometry};
use crate::rules::ReproductionRule;

/// Default cap on `(d+1)^n` for expansions.
pub const DEFAULT_CAP: u128 = 10_000_000;

/// `(d+1)^n` with overflow mapped to `u128::MAX`.
pub fn simplex_count(d: usize, n: usize) -> u128 {
    ((d + 1) as u128).checked_pow(n as u32).unwrap_or(u128::MAX)
}

/// Fails with [`Error::CapExceeded`] unless `(d+1)^n <= cap`.
pub fn check_cap(d: usize, n: usize, cap: u128) -> Result<()> {
    let requested = simplex_count(d, n);
    if requested > cap {
        Err(Error::CapExceeded { requested, cap })
    } else {
        Ok(())
    }
}

/// The ordered addresses of one level, grouped in blocks of `d+1` that share
/// every digit but the last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddressSequence {
    dimension: usize,
    level: usize,
    // row-major, `level` digits per address
    digits: Vec<u8>,
}

impl AddressSequence {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.digits.len() / self.level
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digits of address `k` (0-based).
    pub fn digits(&self, k: usize) -> &[u8] {
        &self.digits[k * self.level..(k + 1) * self.level]
    }

    pub fn address(&self, k: usize) -> Address {
        Address::from_raw(self.digits(k).to_vec())
    }

    /// Last entry of address `k` (0-based).
    pub fn last(&self, k: usize) -> usize {
        self.digits[(k + 1) * self.level - 1] as usize
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u8]> + '_ {
        self.digits.chunks_exact(self.level)
    }

    pub fn addresses(&self) -> Vec<Address> {
        self.iter().map(|a| Address::from_raw(a.to_vec())).collect()
    }

    /// Last entries of all addresses, in order.
    pub fn last_entries(&self) -> Vec<usize> {
        (0..self.len()).map(|k| self.last(k)).collect()
    }

    /// One address per line in address text form.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.digits.len() + self.len());
        for a in self.iter() {
            out.push_str(&format_digits(a, self.dimension));
            out.push('\n');
        }
        out
    }
}

/// Reproduces one block of `d+1` addresses into `d+1` child blocks.
///
/// Child block `i` extends the `i`-th input address with the entries of rule
/// row `i`, where canonical symbol `j` stands for the last entry of the
/// `j`-th input address.
pub fn reproduce_block(rule: &ReproductionRule, block: &[Address]) -> Result<Vec<Vec<Address>>> {
    let d = rule.dimension();
    if block.len() != d + 1 {
        return Err(Error::Block(format!(
            "expected {} addresses, found {}",
            d + 1,
            block.len()
        )));
    }
    let level = block[0].len();
    if level == 0 {
        return Err(Error::Block("addresses must be non-empty".into()));
    }
    let prefix = &block[0].digits()[..level - 1];
    let mut seen = vec![false; d + 1];
    for a in block {
        if a.len() != level || &a.digits()[..level - 1] != prefix {
            return Err(Error::Block(format!(
                "address {} does not share the block prefix",
                a.to_text(d)
            )));
        }
        let last = a.last().expect("non-empty");
        if last > d || std::mem::replace(&mut seen[last], true) {
            return Err(Error::Block(
                "last entries are not a permutation of 0..=d".into(),
            ));
        }
    }
    let flat: Vec<u8> = block.iter().flat_map(|a| a.digits().iter().copied()).collect();
    let mut out = Vec::with_capacity(flat.len() * (d + 1) + (d + 1) * (d + 1));
    reproduce_raw(rule, &flat, level, &mut out);
    Ok(out
        .chunks_exact(level + 1)
        .map(|a| Address::from_raw(a.to_vec()))
        .collect::<Vec<_>>()
        .chunks(d + 1)
        .map(<[Address]>::to_vec)
        .collect())
}

/// Appends the `(d+1)^2` children of a flat block to `out`.
fn reproduce_raw(rule: &ReproductionRule, block: &[u8], level: usize, out: &mut Vec<u8>) {
    let d = rule.dimension();
    let last = |j: usize| block[(j + 1) * level - 1];
    for (i, row) in rule.rows().iter().enumerate() {
        let parent = &block[i * level..(i + 1) * level];
        for &symbol in row {
            out.extend_from_slice(parent);
            out.push(last(symbol));
        }
    }
    debug_assert_eq!(rule.rows().len(), d + 1);
}

/// Expands `rule` to level `n` with the default cap.
pub fn expand_addresses(rule: &ReproductionRule, n: usize) -> Result<AddressSequence> {
    expand_addresses_with_cap(rule, n, DEFAULT_CAP)
}

/// Expands `rule` from the level-1 block `0, 1, ..., d` to level `n`.
pub fn expand_addresses_with_cap(
    rule: &ReproductionRule,
    n: usize,
    cap: u128,
) -> Result<AddressSequence> {
    let d = rule.dimension();
    if n == 0 {
        return Err(Error::Level(n));
    }
    check_cap(d, n, cap)?;
    let width = d + 1;
    let mut digits: Vec<u8> = (0..=d as u8).collect();
    for level in 1..n {
        let mut next = Vec::with_capacity(digits.len() * width * (level + 1) / level);
        for block in digits.chunks_exact(width * level) {
            reproduce_raw(rule, block, level, &mut next);
        }
        digits = next;
    }
    Ok(AddressSequence {
        dimension: d,
        level: n,
        digits,
    })
}

/// A contracted simplex point `address(vertex)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurvePointRef {
    pub address: Address,
    pub vertex: usize,
}

impl CurvePointRef {
    pub fn to_text(&self, d: usize) -> String {
        format!("{}({})", self.address.to_text(d), self.vertex)
    }
}

impl fmt::Display for CurvePointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.address, self.vertex)
    }
}

/// Vertex index at which the curve enters each simplex (0-based `k`).
///
/// The first address of a block contracts its own last entry; every other
/// address contracts the last entry of its predecessor.
pub fn entry_vertices(seq: &AddressSequence) -> Vec<usize> {
    let width = seq.dimension + 1;
    (0..seq.len())
        .map(|k| {
            if k % width == 0 {
                seq.last(k)
            } else {
                seq.last(k - 1)
            }
        })
        .collect()
}

/// The `(d+1)^n + 1` point references of the curve, the last one repeating
/// the final address with its own last entry.
pub fn curve_point_refs(seq: &AddressSequence) -> Vec<CurvePointRef> {
    let mut refs: Vec<CurvePointRef> = entry_vertices(seq)
        .into_iter()
        .enumerate()
        .map(|(k, vertex)| CurvePointRef {
            address: seq.address(k),
            vertex,
        })
        .collect();
    let n = seq.len();
    refs.push(CurvePointRef {
        address: seq.address(n - 1),
        vertex: seq.last(n - 1),
    });
    refs
}

/// The two vertex indices of a simplex incident to the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Activity {
    pub enter: usize,
    pub exit: usize,
}

impl Activity {
    pub fn contains(&self, v: usize) -> bool {
        self.enter == v || self.exit == v
    }

    /// The pair as an unordered set `(min, max)`.
    pub fn sorted(&self) -> (usize, usize) {
        (self.enter.min(self.exit), self.enter.max(self.exit))
    }
}

/// Enter and exit vertex of every simplex, in curve order.
///
/// Inside a block the curve leaves through the vertex named by the next
/// address's last entry. At a block transition, and after the final simplex,
/// it leaves through the vertex named by the simplex's own last entry.
pub fn simplex_activity(seq: &AddressSequence) -> Vec<Activity> {
    let width = seq.dimension + 1;
    let n = seq.len();
    entry_vertices(seq)
        .into_iter()
        .enumerate()
        .map(|(k, enter)| {
            let exit = if k + 1 < n && (k + 1) % width != 0 {
                seq.last(k + 1)
            } else {
                seq.last(k)
            };
            Activity { enter, exit }
        })
        .collect()
}

/// The piecewise linear curve through the contracted points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub dimension: usize,
    pub level: usize,
    pub points: Vec<Point>,
}

impl Polyline {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite coordinates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let line: Polyline =
            serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
        for p in &line.points {
            if p.dim() != line.dimension {
                return Err(Error::DimensionMismatch {
                    expected: line.dimension,
                    found: p.dim(),
                });
            }
        }
        Ok(line)
    }

    /// One point per row, comma-separated coordinates.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            let row: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Evaluates point references on the simplex.
pub fn curve_points(
    geom: &SimplexGeometry,
    level: usize,
    refs: &[CurvePointRef],
) -> Result<Polyline> {
    let points = refs
        .iter()
        .map(|r| geom.apply_address(&r.address, r.vertex))
        .collect::<Result<Vec<_>>>()?;
    Ok(Polyline {
        dimension: geom.dimension(),
        level,
        points,
    })
}

/// The polyline of an address sequence.
pub fn polyline(geom: &SimplexGeometry, seq: &AddressSequence) -> Result<Polyline> {
    if geom.dimension() != seq.dimension {
        return Err(Error::DimensionMismatch {
            expected: geom.dimension(),
            found: seq.dimension,
        });
    }
    let n = seq.len();
    let mut points: Vec<Point> = entry_vertices(seq)
        .into_iter()
        .enumerate()
        .map(|(k, v)| geom.apply_digits(seq.digits(k), v))
        .collect();
    points.push(geom.apply_digits(seq.digits(n - 1), seq.last(n - 1)));
    Ok(Polyline {
        dimension: seq.dimension,
        level: seq.level,
        points,
    })
}

/// What went wrong at one simplex.
#[derive(Debug, Clone, PartialEq)]
pub enum FailureKind {
    /// A segment endpoint is not a vertex of the simplex (`end` is 0 for the
    /// entry point, 1 for the exit point).
    OffVertex { end: usize },
    /// An endpoint lies near two vertices; the tolerance is too coarse.
    Ambiguous { end: usize },
    /// The geometrically matched vertices differ from the expected pair.
    ActivityMismatch { expected: Activity, found: Activity },
    /// Segment length differs from `sqrt(2) / 2^n`.
    SegmentLength { expected: f64, found: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexFailure {
    /// 0-based position of the simplex in curve order.
    pub index: usize,
    pub address: Address,
    pub kind: FailureKind,
}

/// Result of checking a curve against the geometry of its simplices.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub dimension: usize,
    pub level: usize,
    pub simplices_checked: usize,
    pub failures: Vec<SimplexFailure>,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that every curve segment is an edge of its simplex, that the
/// matched vertices equal [`simplex_activity`], and that each segment has
/// length `sqrt(2) / 2^n`.
pub fn verify_curve(
    geom: &SimplexGeometry,
    seq: &AddressSequence,
    tol: f64,
) -> Result<VerificationReport> {
    verify_activity(geom, seq, &simplex_activity(seq), tol)
}

/// [`verify_curve`] against a caller-supplied activity list.
pub fn verify_activity(
    geom: &SimplexGeometry,
    seq: &AddressSequence,
    activity: &[Activity],
    tol: f64,
) -> Result<VerificationReport> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Tolerance);
    }
    if activity.len() != seq.len() {
        return Err(Error::Input(format!(
            "{} activity pairs for {} simplices",
            activity.len(),
            seq.len()
        )));
    }
    let line = polyline(geom, seq)?;
    let expected_len = geom.edge_length(seq.level);
    let mut failures = Vec::new();
    for (k, digits) in seq.iter().enumerate() {
        let vertices = geom.simplex_vertices_raw(digits);
        let mut fail = |kind| {
            failures.push(SimplexFailure {
                index: k,
                address: Address::from_raw(digits.to_vec()),
                kind,
            })
        };
        let (a, b) = (&line.points[k], &line.points[k + 1]);
        let mut matched = [0usize; 2];
        let mut ok = true;
        for (end, q) in [a, b].into_iter().enumerate() {
            match vertex_match(&vertices, q, tol) {
                Ok(Some(v)) => matched[end] = v,
                Ok(None) => {
                    fail(FailureKind::OffVertex { end });
                    ok = false;
                }
                Err(_) => {
                    fail(FailureKind::Ambiguous { end });
                    ok = false;
                }
            }
        }
        if ok {
            let found = Activity {
                enter: matched[0],
                exit: matched[1],
            };
            if found != activity[k] {
                fail(FailureKind::ActivityMismatch {
                    expected: activity[k],
                    found,
                });
            }
        }
        let length = a.distance(b);
        if (length - expected_len).abs() > tol {
            fail(FailureKind::SegmentLength {
                expected: expected_len,
                found: length,
            });
        }
    }
    Ok(VerificationReport {
        dimension: seq.dimension,
        level: seq.level,
        simplices_checked: seq.len(),
        failures,
    })
}

/// [`verify_curve`] with tolerance [`level_tolerance`] of the sequence level
/// and a floor at `1e-12`.
pub fn verify_curve_default(
    geom: &SimplexGeometry,
    seq: &AddressSequence,
) -> Result<VerificationReport> {
    verify_curve(geom, seq, level_tolerance(seq.level).max(1e-12))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{canonical_rule, r1, r2};

    fn texts(seq: &AddressSequence) -> Vec<String> {
        seq.to_text().lines().map(str::to_string).collect()
    }

    fn addrs(list: &[&str], d: usize) -> Vec<Address> {
        list.iter().map(|s| Address::parse(s, d).unwrap()).collect()
    }

    fn last_entries_of(blocks: &[Vec<Address>]) -> Vec<Vec<usize>> {
        blocks
            .iter()
            .map(|b| b.iter().map(|a| a.last().unwrap()).collect())
            .collect()
    }

    #[test]
    fn reproduce_block_r1_identity() {
        let blocks = reproduce_block(&r1(), &addrs(&["0", "1", "2", "3"], 3)).unwrap();
        assert_eq!(
            last_entries_of(&blocks),
            [[0, 3, 2, 1], [0, 1, 3, 2], [1, 0, 2, 3], [2, 1, 0, 3]]
        );
        assert_eq!(blocks[2][0].to_text(3), "21");
    }

    #[test]
    fn reproduce_block_r1_relabelled() {
        let blocks = reproduce_block(&r1(), &addrs(&["00", "03", "02", "01"], 3)).unwrap();
        assert_eq!(last_entries_of(&blocks)[0], [0, 1, 2, 3]);
        assert_eq!(blocks[1][0].to_text(3), "030");
    }

    #[test]
    fn reproduce_block_2d() {
        let blocks = reproduce_block(&canonical_rule(2).unwrap(), &addrs(&["0", "1", "2"], 2))
            .unwrap();
        let text: Vec<Vec<String>> = blocks
            .iter()
            .map(|b| b.iter().map(|a| a.to_text(2)).collect())
            .collect();
        assert_eq!(
            text,
            [["00", "02", "01"], ["10", "11", "12"], ["21", "20", "22"]]
        );
    }

    #[test]
    fn reproduce_block_rejects_malformed() {
        let rule = canonical_rule(2).unwrap();
        assert!(reproduce_block(&rule, &addrs(&["0", "1"], 2)).is_err());
        assert!(reproduce_block(&rule, &addrs(&["00", "11", "02"], 2)).is_err());
        assert!(reproduce_block(&rule, &addrs(&["00", "00", "02"], 2)).is_err());
        assert!(reproduce_block(&rule, &addrs(&["00", "0", "02"], 2)).is_err());
        assert!(reproduce_block(&rule, &[Address::empty(), Address::empty(), Address::empty()])
            .is_err());
    }

    #[test]
    fn expand_2d_level_3() {
        let seq = expand_addresses(&canonical_rule(2).unwrap(), 3).unwrap();
        let expected = "000 001 002 020 022 021 012 010 011 \
                        100 102 101 110 111 112 121 120 122 \
                        211 212 210 201 200 202 220 221 222";
        assert_eq!(texts(&seq), expected.split_whitespace().collect::<Vec<_>>());
    }

    #[test]
    fn expand_level_1_and_errors() {
        let seq = expand_addresses(&r2(), 1).unwrap();
        assert_eq!(seq.last_entries(), [0, 1, 2, 3]);
        assert_eq!(expand_addresses(&r2(), 0), Err(Error::Level(0)));
        assert!(matches!(
            expand_addresses_with_cap(&r2(), 3, 63),
            Err(Error::CapExceeded { requested: 64, cap: 63 })
        ));
        assert!(expand_addresses_with_cap(&r2(), 3, 64).is_ok());
    }

    #[test]
    fn expand_r1_level_3_last_entries() {
        let expected = [
            0, 1, 2, 3, 0, 3, 1, 2, 3, 0, 2, 1, 2, 3, 0, 1, //
            0, 2, 3, 1, 0, 1, 2, 3, 1, 0, 3, 2, 3, 1, 0, 2, //
            1, 3, 2, 0, 1, 0, 3, 2, 0, 1, 2, 3, 2, 0, 1, 3, //
            2, 3, 0, 1, 2, 1, 3, 0, 1, 2, 0, 3, 0, 1, 2, 3,
        ];
        let seq = expand_addresses(&r1(), 3).unwrap();
        assert_eq!(seq.last_entries(), expected);
    }

    fn ref_texts(seq: &AddressSequence) -> String {
        curve_point_refs(seq)
            .iter()
            .map(|r| r.to_text(seq.dimension()))
            .collect::<Vec<_>>()
            .join(", ")
    }

    #[test]
    fn point_refs_2d() {
        let rule = canonical_rule(2).unwrap();
        assert_eq!(
            ref_texts(&expand_addresses(&rule, 1).unwrap()),
            "0(0), 1(0), 2(1), 2(2)"
        );
        assert_eq!(
            ref_texts(&expand_addresses(&rule, 2).unwrap()),
            "00(0), 02(0), 01(2), 10(0), 11(0), 12(1), 21(1), 20(1), 22(0), 22(2)"
        );
    }

    #[test]
    fn point_refs_r1_level_2() {
        assert_eq!(
            ref_texts(&expand_addresses(&r1(), 2).unwrap()),
            "00(0), 03(0), 02(3), 01(2), 10(0), 11(0), 13(1), 12(3), \
             21(1), 20(1), 22(0), 23(2), 32(2), 31(2), 30(1), 33(0), 33(3)"
        );
    }

    #[test]
    fn activity_2d() {
        let rule = canonical_rule(2).unwrap();
        let act = simplex_activity(&expand_addresses(&rule, 1).unwrap());
        let sets: Vec<_> = act.iter().map(Activity::sorted).collect();
        assert_eq!(sets, [(0, 1), (0, 2), (1, 2)]);

        let seq = expand_addresses(&rule, 2).unwrap();
        let act = simplex_activity(&seq);
        let k = seq.iter().position(|a| a == [2, 0]).unwrap();
        assert_eq!(act[k].sorted(), (1, 2));
        assert_eq!(act[0], Activity { enter: seq.last(0), exit: seq.last(1) });
    }

    #[test]
    fn polyline_2d() {
        let geom = SimplexGeometry::new(2).unwrap();
        let rule = canonical_rule(2).unwrap();
        let line = polyline(&geom, &expand_addresses(&rule, 1).unwrap()).unwrap();
        assert_eq!(line.points.first(), Some(&geom.vertices()[0]));
        assert_eq!(line.points.last(), Some(&geom.vertices()[2]));

        let seq = expand_addresses(&rule, 2).unwrap();
        let line = polyline(&geom, &seq).unwrap();
        assert_eq!(line.len(), 10);
        assert!(line.points[3].distance(&Point::new(vec![0.5, 0.5]).unwrap()) < 1e-12);
        let via_refs = curve_points(&geom, 2, &curve_point_refs(&seq)).unwrap();
        assert_eq!(via_refs, line);
        for w in line.points.windows(2) {
            assert!((w[0].distance(&w[1]) - 2f64.sqrt() / 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn polyline_dimension_mismatch() {
        let geom = SimplexGeometry::new(2).unwrap();
        let seq = expand_addresses(&r1(), 1).unwrap();
        assert!(matches!(polyline(&geom, &seq), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn verify_known_rules() {
        let g2 = SimplexGeometry::new(2).unwrap();
        for n in 1..=4 {
            let seq = expand_addresses(&canonical_rule(2).unwrap(), n).unwrap();
            let report = verify_curve(&g2, &seq, 1e-9).unwrap();
            assert!(report.is_valid(), "{:?}", report.failures);
            assert_eq!(report.simplices_checked, 3usize.pow(n as u32));
        }
        let g3 = SimplexGeometry::new(3).unwrap();
        for rule in [r1(), r2()] {
            for n in 1..=3 {
                let seq = expand_addresses(&rule, n).unwrap();
                assert!(verify_curve_default(&g3, &seq).unwrap().is_valid());
            }
        }
    }

    #[test]
    fn verify_flags_corrupted_activity() {
        let geom = SimplexGeometry::new(3).unwrap();
        let seq = expand_addresses(&r1(), 2).unwrap();
        let mut act = simplex_activity(&seq);
        act[5] = Activity {
            enter: act[5].exit,
            exit: act[5].enter,
        };
        let report = verify_activity(&geom, &seq, &act, 1e-9).unwrap();
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].index, 5);
        assert!(matches!(
            report.failures[0].kind,
            FailureKind::ActivityMismatch { .. }
        ));
    }

    #[test]
    fn polyline_json_round_trip() {
        let geom = SimplexGeometry::new(3).unwrap();
        let line = polyline(&geom, &expand_addresses(&r1(), 2).unwrap()).unwrap();
        let json = line.to_json();
        assert!(json.starts_with("{\"dimension\":3,\"level\":2,\"points\":[[1.0,0.0,0.0]"));
        assert_eq!(Polyline::from_json(&json).unwrap(), line);
        assert_eq!(line.to_csv().lines().count(), 17);
        assert_eq!(line.to_csv().lines().next(), Some("1,0,0"));
    }
}
