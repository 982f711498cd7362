//! Tools for studying generalized matchings on small graphs.
//!
//! A `k`-matching assigns an integer weight in `{0..k}` to every edge so
//! that each vertex carries total incident weight at most `k`. Around that
//! notion the crate provides:
//!
//! * [`graph`]: a compact bitset graph type (at most 64 vertices) with the
//!   constructions used throughout (joins, disjoint unions, complements)
//!   and graph6 I/O.
//! * [`deficiency`]: the set-function oracle. It scans all vertex subsets
//!   and evaluates the deficiency formula, yielding barriers and verdicts
//!   for factor-critical-style properties.
//! * [`kmatching`]: the constructive oracle. An edge-by-edge dynamic
//!   program computes maximum k-matchings and k-matchings with prescribed
//!   per-vertex loads, independently of the subset scan.
//! * [`spectral`]: adjacency spectral radii by power iteration, equitable
//!   quotient matrices, and the exact characteristic polynomials of the
//!   quotients arising from the extremal families.
//! * [`extremal`]: the two-parameter family `K_s v (K_{n-2s} + sK_1)`,
//!   its edge counts, and size/spectral comparisons across the family.
//! * [`harness`]: corpus-driven suites that sweep the theorems' hypotheses
//!   over enumerated, ingested, or sampled graph corpora and report
//!   exceptions as isomorphism classes.

pub mod deficiency;
pub mod enumerate;
pub mod extremal;
pub mod graph;
pub mod graph6;
pub mod harness;
pub mod iso;
pub mod kmatching;
pub mod spectral;

pub use graph::{ComponentStats, Graph, GraphError, MAX_VERTICES};
pub use graph6::{parse_graph6, write_graph6, Graph6Error};
