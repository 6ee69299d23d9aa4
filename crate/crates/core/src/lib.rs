//! Sierpinski arrowhead curves in arbitrary dimension.
//!
//! A curve is driven by a [`ReproductionRule`](rules::ReproductionRule):
//! starting from the addresses `0, 1, ..., d`, every block of `d+1`
//! addresses reproduces `(d+1)^2` longer ones. Evaluating the addresses as
//! compositions of the halving contractions of the regular d-simplex yields
//! the Sierpinski d-simplex, and picking one vertex per address yields the
//! curve that visits every contracted simplex along one of its edges.
//!
//! - [`geometry`]: the simplex, contractions and address evaluation
//! - [`rules`]: rule validation, enumeration, presets and the rule file format
//! - [`curve`]: address expansion, curve points, activity and verification
//! - [`analysis`]: binary sequences, symmetry, self-similarity, classification
//! - [`render`]: SVG charts, curve drawings, knitting charts and OBJ export

pub mod analysis;
pub mod curve;
pub mod error;
pub mod geometry;
pub mod render;
pub mod rules;

pub use analysis::{binary_sequence, BinarySequence, IndexIsomorphism, RuleReport};
pub use curve::{expand_addresses, AddressSequence, CurvePointRef, Polyline};
pub use error::{Error, Result, RuleViolation};
pub use geometry::{Address, Point, SimplexGeometry};
pub use rules::ReproductionRule;
