//! Edge-count suites: a minimum-degree and edge-count hypothesis is
//! checked against a criticality conclusion on every corpus graph, and
//! the graphs that defeat the conclusion must be exactly the expected
//! extremal family.

use rayon::prelude::*;

use super::corpus::load_corpus;
use super::{
    class_reps, classes_equal, graph_label, CorpusSpec, HarnessError, PropertySpec, SuiteId,
    SuiteReport, SuiteSpec, Verdict,
};
use crate::extremal::{build_split_join, half_join, split_join_size};
use crate::graph::Graph;
use crate::iso::is_isomorphic;

/// Largest order the subset-scan deficiency oracle accepts.
const ORACLE_MAX_N: i64 = 24;

pub(super) fn need<T>(
    v: Option<T>,
    suite: SuiteId,
    what: &'static str,
) -> Result<T, HarnessError> {
    v.ok_or(HarnessError::MissingParameter {
        suite: suite.as_str(),
        what,
    })
}

pub(super) fn bad(reason: String) -> HarnessError {
    HarnessError::BadParameter { reason }
}

/// The extremal families that can appear in an "unless" clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum Family {
    /// K_delta joined to (K_{n-2 delta} + an independent set of size delta).
    SplitJoin,
    /// K_{floor(n/2)} joined to an independent set of the remaining vertices.
    HalfJoin,
}

impl Family {
    pub(super) fn build(self, n: i64, delta: i64) -> Result<Graph, HarnessError> {
        Ok(match self {
            Family::SplitJoin => build_split_join(n, delta)?,
            Family::HalfJoin => half_join(n)?,
        })
    }

    pub(super) fn describe(self, n: i64, delta: i64) -> String {
        match self {
            Family::SplitJoin => format!("clique join at split {delta} of order {n}"),
            Family::HalfJoin => format!("half join of order {n}"),
        }
    }

    /// The vertex set predicted to defeat the property, in the
    /// constructor's labeling: the joined clique.
    pub(super) fn predicted_violating_set(self, n: i64, delta: i64) -> Vec<usize> {
        let size = match self {
            Family::SplitJoin => delta,
            Family::HalfJoin => n / 2,
        };
        (0..size as usize).collect()
    }
}

pub(super) struct Clause {
    pub label: &'static str,
    /// Edge threshold comes from the half join (else from split delta).
    pub threshold_at_half: bool,
    pub expected: Vec<Family>,
}

/// Selects the clause governing order `n` at minimum degree `delta`.
pub(super) fn size_clause(id: SuiteId, n: i64, delta: i64) -> Result<Clause, HarnessError> {
    let clause = match id {
        SuiteId::Theorem1 => {
            if n > 6 * delta + 2 || n == 6 * delta + 1 {
                Clause { label: "i", threshold_at_half: false, expected: vec![Family::SplitJoin] }
            } else if n == 6 * delta + 2 || n == 6 * delta - 1 {
                Clause {
                    label: "ii",
                    threshold_at_half: false,
                    expected: vec![Family::SplitJoin, Family::HalfJoin],
                }
            } else if n < 6 * delta - 1 || n == 6 * delta {
                Clause { label: "iii", threshold_at_half: true, expected: vec![Family::HalfJoin] }
            } else {
                return Err(bad(format!("no clause covers n = {n} at delta = {delta}")));
            }
        }
        SuiteId::Theorem3 | SuiteId::Corollary1 => {
            if n > 6 * delta - 1 {
                Clause { label: "i", threshold_at_half: false, expected: vec![Family::SplitJoin] }
            } else if n == 6 * delta - 1 {
                Clause {
                    label: "ii",
                    threshold_at_half: false,
                    expected: vec![Family::SplitJoin, Family::HalfJoin],
                }
            } else {
                Clause { label: "iii", threshold_at_half: true, expected: vec![Family::HalfJoin] }
            }
        }
        SuiteId::Theorem4 | SuiteId::Corollary2 => {
            if n > 6 * delta + 2 {
                Clause { label: "i", threshold_at_half: false, expected: vec![Family::SplitJoin] }
            } else if n == 6 * delta + 2 {
                Clause {
                    label: "ii",
                    threshold_at_half: false,
                    expected: vec![Family::SplitJoin, Family::HalfJoin],
                }
            } else {
                Clause { label: "iii", threshold_at_half: true, expected: vec![Family::HalfJoin] }
            }
        }
        other => {
            return Err(bad(format!(
                "suite '{}' has no size clause table",
                other.as_str()
            )))
        }
    };
    Ok(clause)
}

/// Validates parameters for a size suite and names the property checked.
pub(super) fn size_property(
    id: SuiteId,
    n: i64,
    k: u32,
    d: Option<u32>,
) -> Result<PropertySpec, HarnessError> {
    match id {
        SuiteId::Theorem1 => {
            if k < 3 || k % 2 == 0 {
                return Err(bad(format!("this suite needs odd k >= 3, got k = {k}")));
            }
            let d = d.ok_or(HarnessError::MissingParameter { suite: id.as_str(), what: "d" })?;
            if d < 1 || d >= k {
                return Err(bad(format!("this suite needs 1 <= d < k, got d = {d}, k = {k}")));
            }
            if (n - d as i64) % 2 != 0 {
                return Err(bad(format!("n and d must share parity, got n = {n}, d = {d}")));
            }
            Ok(PropertySpec::Critical { k, d })
        }
        SuiteId::Theorem3 | SuiteId::Corollary1 => {
            check_no_d(id, d)?;
            check_k_parity(id, k)?;
            if n % 2 == 0 {
                return Err(bad(format!("factor-critical suites need odd order, got n = {n}")));
            }
            Ok(PropertySpec::FactorCritical { k })
        }
        SuiteId::Theorem4 | SuiteId::Corollary2 => {
            check_no_d(id, d)?;
            check_k_parity(id, k)?;
            if n % 2 != 0 || n < 4 {
                return Err(bad(format!("bicritical suites need even order >= 4, got n = {n}")));
            }
            Ok(PropertySpec::Bicritical { k })
        }
        other => Err(bad(format!("suite '{}' is not a size suite", other.as_str()))),
    }
}

fn check_no_d(id: SuiteId, d: Option<u32>) -> Result<(), HarnessError> {
    if d.is_some() {
        return Err(bad(format!("suite '{}' does not take a d parameter", id.as_str())));
    }
    Ok(())
}

fn check_k_parity(id: SuiteId, k: u32) -> Result<(), HarnessError> {
    match id {
        SuiteId::Theorem3 | SuiteId::Theorem4 => {
            if k < 2 || k % 2 != 0 {
                return Err(bad(format!("this suite needs even k >= 2, got k = {k}")));
            }
        }
        SuiteId::Corollary1 | SuiteId::Corollary2 => {
            if k < 3 || k % 2 == 0 {
                return Err(bad(format!("this suite needs odd k >= 3, got k = {k}")));
            }
        }
        _ => {}
    }
    Ok(())
}

pub(super) fn common_range_checks(n: i64, delta: i64) -> Result<(), HarnessError> {
    if n < 3 {
        return Err(bad(format!("suites need n >= 3, got n = {n}")));
    }
    if n > ORACLE_MAX_N {
        return Err(bad(format!(
            "order {n} exceeds the subset-scan oracle cap of {ORACLE_MAX_N}"
        )));
    }
    if delta < 1 {
        return Err(bad(format!("delta must be at least 1, got {delta}")));
    }
    if 2 * delta > n {
        return Err(bad(format!(
            "delta = {delta} is impossible at order {n}: the extremal family needs 2*delta <= n"
        )));
    }
    Ok(())
}

pub(super) fn run(spec: &SuiteSpec) -> Result<SuiteReport, HarnessError> {
    let id = spec.suite;
    let n = need(spec.n, id, "n")?;
    let delta = need(spec.delta, id, "delta")?;
    let k = need(spec.k, id, "k")?;
    common_range_checks(n, delta)?;
    let property = size_property(id, n, k, spec.d)?;
    let clause = size_clause(id, n, delta)?;

    let threshold_s = if clause.threshold_at_half { n / 2 } else { delta };
    let threshold = split_join_size(n, threshold_s);
    let expected: Vec<Graph> = clause
        .expected
        .iter()
        .map(|f| f.build(n, delta))
        .collect::<Result<_, _>>()?;
    let expected_reps = class_reps(&expected);
    // The clause table promises that every expected exception sits
    // exactly at the threshold; a violation here would mean the table
    // and the size formula disagree.
    for g in &expected_reps {
        if (g.edge_count() as i64) < threshold {
            return Err(bad(format!(
                "internal clause table error: expected exception {} falls below threshold {threshold}",
                graph_label(g)
            )));
        }
    }

    let (mut graphs, corpus_notes) = load_corpus(&spec.corpus, n as usize, delta as usize)?;
    let mut notes = vec![
        format!(
            "clause ({}): threshold e(G) >= {threshold}, property {}",
            clause.label,
            property.describe()
        ),
        corpus_notes.summary(),
    ];
    match &spec.corpus {
        CorpusSpec::RandomSample { .. } => {
            for g in &expected_reps {
                graphs.push(g.clone());
            }
            notes.push(format!(
                "injected {} expected extremal representative(s) into the sampled corpus",
                expected_reps.len()
            ));
        }
        CorpusSpec::Graph6File { .. } => {
            for e in &expected_reps {
                if !graphs.iter().any(|g| is_isomorphic(g, e).is_some()) {
                    return Err(HarnessError::Corpus(super::corpus::CorpusError::Refused {
                        reason: format!(
                            "corpus file lacks the extremal graph {} expected as an exception at \
                             these parameters; regenerate it from a full generator run for order {n}",
                            graph_label(e)
                        ),
                    }));
                }
            }
            notes.push("verified every expected exception appears in the corpus file".into());
        }
        CorpusSpec::InternalEnumeration => {}
    }

    let outcomes: Vec<Option<bool>> = graphs
        .par_iter()
        .map(|g| {
            if (g.edge_count() as i64) < threshold {
                Ok(None)
            } else {
                property.holds(g).map(Some)
            }
        })
        .collect::<Result<_, HarnessError>>()?;

    let mut report = SuiteReport::new(spec);
    report.graphs_examined = graphs.len() as u64;
    let mut failing: Vec<Graph> = Vec::new();
    for (g, outcome) in graphs.iter().zip(&outcomes) {
        match outcome {
            None => {}
            Some(true) => {
                report.hypothesis_satisfying += 1;
                report.conclusion_holds += 1;
            }
            Some(false) => {
                report.hypothesis_satisfying += 1;
                failing.push(g.clone());
            }
        }
    }
    let failing_reps = class_reps(&failing);
    report.verdict = if classes_equal(&failing_reps, &expected_reps) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    report.exceptions_found = failing_reps.iter().map(graph_label).collect();
    report.expected_exceptions = expected_reps.iter().map(graph_label).collect();
    report.notes = notes;
    Ok(report)
}
