//! Verification suites: run a family of claims over a corpus of graphs
//! and report exceptions as isomorphism classes.
//!
//! A suite takes a [`SuiteSpec`] (target claim, parameters, corpus) and
//! produces a [`SuiteReport`]. Suites pass only when the set of
//! hypothesis-satisfying graphs that fail the claimed conclusion equals
//! the expected exceptional family, compared as isomorphism classes.
//! Graphs below the stated edge/radius threshold never contribute to a
//! verdict. Reports are deterministic for a fixed spec (and seed),
//! except for the wall-time field.

pub mod corpus;
mod lemmas;
mod oracle;
mod sharpness;
mod size;
mod spectral_suite;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::deficiency::{classify_gfc_gbc, is_kd_critical_deficiency, CheckError, PropertyKind};
use crate::enumerate::EnumerateError;
use crate::extremal::ExtremalError;
use crate::graph::{Graph, GraphError};
use crate::graph6::{write_graph6, Graph6Error};
use crate::iso::{canonical_graph, canonical_key, is_isomorphic};
use crate::kmatching::MatchingError;
use crate::spectral::SpectralError;

pub use corpus::{CorpusError, CorpusNotes};
pub use lemmas::lemma_sweep_rows;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteId {
    Theorem1,
    Theorem2,
    Theorem3,
    Theorem4,
    Theorem5,
    Theorem6,
    Corollary1,
    Corollary2,
    Corollary3,
    Corollary4,
    Sharpness,
    OracleEquivalence,
    LemmaSweep,
}

impl SuiteId {
    pub fn as_str(self) -> &'static str {
        match self {
            SuiteId::Theorem1 => "theorem1",
            SuiteId::Theorem2 => "theorem2",
            SuiteId::Theorem3 => "theorem3",
            SuiteId::Theorem4 => "theorem4",
            SuiteId::Theorem5 => "theorem5",
            SuiteId::Theorem6 => "theorem6",
            SuiteId::Corollary1 => "corollary1",
            SuiteId::Corollary2 => "corollary2",
            SuiteId::Corollary3 => "corollary3",
            SuiteId::Corollary4 => "corollary4",
            SuiteId::Sharpness => "sharpness",
            SuiteId::OracleEquivalence => "oracle-equivalence",
            SuiteId::LemmaSweep => "lemma-sweep",
        }
    }
}

/// Where the suite's graphs come from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CorpusSpec {
    /// Every connected graph of the requested order (orders up to 8).
    InternalEnumeration,
    /// A file with one graph6 string per line; `>`-prefixed lines are
    /// skipped.
    Graph6File { path: String },
    /// Seeded uniform samples over edge subsets, conditioned on
    /// connectivity and the minimum-degree bound.
    RandomSample { count: u64, seed: u64 },
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec::InternalEnumeration
    }
}

fn default_delta_min() -> i64 {
    1
}
fn default_delta_max() -> i64 {
    2
}
fn default_k_set() -> Vec<u32> {
    vec![2, 3]
}
fn default_max_total() -> i64 {
    10
}
fn default_instances() -> u64 {
    50
}
fn default_seed() -> u64 {
    1
}
fn default_witness_max_n() -> usize {
    10
}
fn default_margin_tol() -> f64 {
    1e-9
}

/// Parameter grid for the sharpness suite and the lemma sweeps. Unset
/// bounds fall back to per-sweep defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", default)]
pub struct GridSpec {
    pub delta_min: i64,
    pub delta_max: i64,
    pub n_min: Option<i64>,
    pub n_max: Option<i64>,
    pub k_set: Vec<u32>,
    /// Cap on the total order of generated clique-join configurations.
    pub max_total: i64,
    /// Number of random instances for the randomized sweeps.
    pub instances: u64,
    pub seed: u64,
    /// Largest order on which the matching-witness oracle is consulted.
    pub witness_max_n: usize,
    /// Strictness band for floating-point margins.
    pub margin_tol: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            delta_min: default_delta_min(),
            delta_max: default_delta_max(),
            n_min: None,
            n_max: None,
            k_set: default_k_set(),
            max_total: default_max_total(),
            instances: default_instances(),
            seed: default_seed(),
            witness_max_n: default_witness_max_n(),
            margin_tol: default_margin_tol(),
        }
    }
}

/// A suite request: which claim to verify, at which parameters, over
/// which corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    pub suite: SuiteId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma: Option<u32>,
    #[serde(default)]
    pub corpus: CorpusSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
}

impl SuiteSpec {
    pub fn new(suite: SuiteId) -> Self {
        SuiteSpec {
            suite,
            n: None,
            delta: None,
            k: None,
            d: None,
            lemma: None,
            corpus: CorpusSpec::default(),
            grid: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Outcome of one suite run. Exceptions are graph6 strings (canonical
/// labelings for orders up to 8).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: SuiteSpec,
    pub graphs_examined: u64,
    pub hypothesis_satisfying: u64,
    pub conclusion_holds: u64,
    pub exceptions_found: Vec<String>,
    pub expected_exceptions: Vec<String>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
    pub wall_time_ms: u64,
}

impl SuiteReport {
    fn new(spec: &SuiteSpec) -> Self {
        SuiteReport {
            schema_version: 1,
            suite: spec.clone(),
            graphs_examined: 0,
            hypothesis_satisfying: 0,
            conclusion_holds: 0,
            exceptions_found: Vec::new(),
            expected_exceptions: Vec::new(),
            verdict: Verdict::Fail,
            notes: Vec::new(),
            wall_time_ms: 0,
        }
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("suite {suite} requires parameter '{what}'")]
    MissingParameter { suite: &'static str, what: &'static str },
    #[error("bad parameter: {reason}")]
    BadParameter { reason: String },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Extremal(#[from] ExtremalError),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    Graph6(#[from] Graph6Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Runs any suite and stamps the wall time.
pub fn run_suite(spec: &SuiteSpec) -> Result<SuiteReport, HarnessError> {
    let start = Instant::now();
    let mut report = match spec.suite {
        SuiteId::Theorem1
        | SuiteId::Theorem3
        | SuiteId::Theorem4
        | SuiteId::Corollary1
        | SuiteId::Corollary2 => size::run(spec)?,
        SuiteId::Theorem2
        | SuiteId::Theorem5
        | SuiteId::Theorem6
        | SuiteId::Corollary3
        | SuiteId::Corollary4 => spectral_suite::run(spec)?,
        SuiteId::Sharpness => sharpness::run(spec)?,
        SuiteId::OracleEquivalence => oracle::run(spec)?,
        SuiteId::LemmaSweep => lemmas::run(spec)?,
    };
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Size-condition suites: theorem1, theorem3, theorem4, corollary1,
/// corollary2.
pub fn run_size_theorem_suite(spec: &SuiteSpec) -> Result<SuiteReport, HarnessError> {
    expect_family(
        spec,
        &[
            SuiteId::Theorem1,
            SuiteId::Theorem3,
            SuiteId::Theorem4,
            SuiteId::Corollary1,
            SuiteId::Corollary2,
        ],
    )?;
    run_suite(spec)
}

/// Radius-condition suites: theorem2, theorem5, theorem6, corollary3,
/// corollary4.
pub fn run_spectral_theorem_suite(spec: &SuiteSpec) -> Result<SuiteReport, HarnessError> {
    expect_family(
        spec,
        &[
            SuiteId::Theorem2,
            SuiteId::Theorem5,
            SuiteId::Theorem6,
            SuiteId::Corollary3,
            SuiteId::Corollary4,
        ],
    )?;
    run_suite(spec)
}

pub fn run_sharpness_suite(spec: &SuiteSpec) -> Result<SuiteReport, HarnessError> {
    expect_family(spec, &[SuiteId::Sharpness])?;
    run_suite(spec)
}

pub fn run_oracle_equivalence(spec: &SuiteSpec) -> Result<SuiteReport, HarnessError> {
    expect_family(spec, &[SuiteId::OracleEquivalence])?;
    run_suite(spec)
}

pub fn run_lemma_sweep(spec: &SuiteSpec) -> Result<SuiteReport, HarnessError> {
    expect_family(spec, &[SuiteId::LemmaSweep])?;
    run_suite(spec)
}

fn expect_family(spec: &SuiteSpec, allowed: &[SuiteId]) -> Result<(), HarnessError> {
    if allowed.contains(&spec.suite) {
        Ok(())
    } else {
        Err(HarnessError::BadParameter {
            reason: format!("suite '{}' does not belong to this runner", spec.suite.as_str()),
        })
    }
}

/// The conclusion a suite checks on each hypothesis-satisfying graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PropertySpec {
    Critical { k: u32, d: u32 },
    FactorCritical { k: u32 },
    Bicritical { k: u32 },
}

impl PropertySpec {
    pub(crate) fn describe(self) -> String {
        match self {
            PropertySpec::Critical { k, d } => format!("{k}-{d}-criticality"),
            PropertySpec::FactorCritical { k } => format!("GFC_{k}"),
            PropertySpec::Bicritical { k } => format!("GBC_{k}"),
        }
    }

    /// Whether the property holds, via the deficiency oracle.
    pub(crate) fn holds(self, g: &Graph) -> Result<bool, HarnessError> {
        Ok(self.verdict(g)?.holds)
    }

    /// Full verdict (including the violating set on failure).
    pub(crate) fn verdict(
        self,
        g: &Graph,
    ) -> Result<crate::deficiency::CriticalityVerdict, HarnessError> {
        match self {
            PropertySpec::Critical { k, d } => Ok(is_kd_critical_deficiency(g, k, d)?),
            PropertySpec::FactorCritical { k } => {
                let v = classify_gfc_gbc(g, k)?;
                if v.property != PropertyKind::GeneralizedFactorCritical {
                    return Err(HarnessError::BadParameter {
                        reason: format!("GFC check needs odd order, graph has {}", g.order()),
                    });
                }
                Ok(v)
            }
            PropertySpec::Bicritical { k } => {
                let v = classify_gfc_gbc(g, k)?;
                if v.property != PropertyKind::GeneralizedBicritical {
                    return Err(HarnessError::BadParameter {
                        reason: format!("GBC check needs even order, graph has {}", g.order()),
                    });
                }
                Ok(v)
            }
        }
    }
}

/// Stable one-line identifier for a graph in a report: the canonical
/// graph6 string for small orders, the as-is encoding otherwise.
pub(crate) fn graph_label(g: &Graph) -> String {
    if g.order() <= crate::enumerate::MAX_ENUM_VERTICES {
        write_graph6(&canonical_graph(g))
    } else {
        write_graph6(g)
    }
}

/// One representative per isomorphism class, keeping first-seen order.
pub(crate) fn class_reps(graphs: &[Graph]) -> Vec<Graph> {
    let mut reps: Vec<Graph> = Vec::new();
    let small = graphs
        .iter()
        .all(|g| g.order() <= crate::enumerate::MAX_ENUM_VERTICES);
    if small {
        let mut seen = std::collections::HashSet::new();
        for g in graphs {
            if seen.insert(canonical_key(g)) {
                reps.push(canonical_graph(g));
            }
        }
    } else {
        for g in graphs {
            if !reps.iter().any(|r| is_isomorphic(r, g).is_some()) {
                reps.push(g.clone());
            }
        }
    }
    reps
}

/// Set equality of isomorphism classes. `expected` must already be
/// class representatives (pairwise non-isomorphic).
pub(crate) fn classes_equal(found_reps: &[Graph], expected_reps: &[Graph]) -> bool {
    if found_reps.len() != expected_reps.len() {
        return false;
    }
    let mut used = vec![false; expected_reps.len()];
    for f in found_reps {
        let hit = expected_reps
            .iter()
            .enumerate()
            .find(|(i, e)| !used[*i] && is_isomorphic(f, e).is_some());
        match hit {
            Some((i, _)) => used[i] = true,
            None => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_json_round_trip() {
        let text = r#"{
            "suite": "theorem1",
            "n": 7,
            "delta": 1,
            "k": 3,
            "d": 1,
            "corpus": {"type": "internal-enumeration"}
        }"#;
        let spec: SuiteSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec.suite, SuiteId::Theorem1);
        assert_eq!(spec.corpus, CorpusSpec::InternalEnumeration);
        let echoed = serde_json::to_string(&spec).unwrap();
        let back: SuiteSpec = serde_json::from_str(&echoed).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn corpus_spec_tags() {
        let spec: CorpusSpec =
            serde_json::from_str(r#"{"type": "random-sample", "count": 100, "seed": 1}"#).unwrap();
        assert_eq!(spec, CorpusSpec::RandomSample { count: 100, seed: 1 });
        let spec: CorpusSpec =
            serde_json::from_str(r#"{"type": "graph6-file", "path": "corpus.g6"}"#).unwrap();
        assert_eq!(
            spec,
            CorpusSpec::Graph6File { path: "corpus.g6".into() }
        );
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"suite": "theorem1", "order": 7}"#;
        assert!(serde_json::from_str::<SuiteSpec>(text).is_err());
    }

    #[test]
    fn suite_ids_use_kebab_case() {
        assert_eq!(
            serde_json::to_string(&SuiteId::OracleEquivalence).unwrap(),
            "\"oracle-equivalence\""
        );
        assert_eq!(serde_json::to_string(&SuiteId::LemmaSweep).unwrap(), "\"lemma-sweep\"");
        assert_eq!(serde_json::to_string(&SuiteId::Theorem4).unwrap(), "\"theorem4\"");
        let id: SuiteId = serde_json::from_str("\"corollary3\"").unwrap();
        assert_eq!(id, SuiteId::Corollary3);
    }

    #[test]
    fn class_comparison_is_by_isomorphism() {
        let c5a = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let c5b = Graph::from_edges(5, &[(0, 2), (2, 4), (4, 1), (1, 3), (3, 0)]).unwrap();
        let p5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let reps = class_reps(&[c5a.clone(), c5b.clone(), p5.clone()]);
        assert_eq!(reps.len(), 2);
        assert!(classes_equal(&reps, &class_reps(&[p5.clone(), c5a.clone()])));
        assert!(!classes_equal(&reps, &class_reps(&[p5])));
    }

    #[test]
    fn runner_family_guards() {
        let spec = SuiteSpec::new(SuiteId::Sharpness);
        assert!(matches!(
            run_size_theorem_suite(&spec),
            Err(HarnessError::BadParameter { .. })
        ));
    }
}
