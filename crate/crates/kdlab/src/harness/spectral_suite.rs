//! Spectral-radius suites: the hypothesis compares the adjacency
//! spectral radius against the radius of the reference clique join, so
//! thresholding happens in floating point with an explicit guard band.
//! Graphs inside the band are resolved by isomorphism to the reference
//! when possible and otherwise excluded, downgrading the verdict to
//! inconclusive.

use rayon::prelude::*;

use super::corpus::load_corpus;
use super::size::{bad, common_range_checks, need, size_property};
use super::{
    class_reps, classes_equal, graph_label, HarnessError, SuiteId, SuiteReport, SuiteSpec, Verdict,
};
use crate::extremal::{build_split_join, ExtremalError};
use crate::graph::Graph;
use crate::iso::is_isomorphic;
use crate::spectral::{largest_root, spectral_radius, split_join_poly, DEFAULT_TOL};

/// Half-width of the indeterminate band around the radius threshold.
const BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Gated,
    Holds,
    Fails,
    BandUnresolved,
}

pub(super) fn run(spec: &SuiteSpec) -> Result<SuiteReport, HarnessError> {
    let id = spec.suite;
    let n = need(spec.n, id, "n")?;
    let delta = need(spec.delta, id, "delta")?;
    let k = need(spec.k, id, "k")?;
    common_range_checks(n, delta)?;
    if n < 8 * delta + 4 {
        return Err(bad(format!(
            "radius suites need n >= 8*delta + 4, got n = {n}, delta = {delta}"
        )));
    }
    let size_twin = match id {
        SuiteId::Theorem2 => SuiteId::Theorem1,
        SuiteId::Theorem5 => SuiteId::Theorem3,
        SuiteId::Theorem6 => SuiteId::Theorem4,
        SuiteId::Corollary3 => SuiteId::Corollary1,
        SuiteId::Corollary4 => SuiteId::Corollary2,
        other => return Err(bad(format!("suite '{}' is not a radius suite", other.as_str()))),
    };
    let property = size_property(size_twin, n, k, spec.d)?;

    let reference = build_split_join(n, delta)?;
    let poly = split_join_poly(n, delta);
    let threshold = largest_root(&poly.map(|c| c as f64))?;
    let iterated = spectral_radius(&reference, DEFAULT_TOL)?.value;
    if (threshold - iterated).abs() > BAND {
        return Err(HarnessError::Extremal(ExtremalError::CrossCheck {
            s: delta,
            root: threshold,
            iterated,
        }));
    }

    let (mut graphs, corpus_notes) = load_corpus(&spec.corpus, n as usize, delta as usize)?;
    let mut notes = vec![
        format!(
            "radius threshold rho >= {threshold:.12} for {}; iteration cross-check residual {:.3e}",
            property.describe(),
            (threshold - iterated).abs()
        ),
        corpus_notes.summary(),
    ];
    let half = n / 2;
    for s in delta..=half {
        graphs.push(build_split_join(n, s)?);
    }
    notes.push(format!(
        "injected the clique-join family at splits {delta}..={half}"
    ));

    let outcomes: Vec<Outcome> = graphs
        .par_iter()
        .map(|g| {
            let rho = spectral_radius(g, DEFAULT_TOL)?.value;
            if rho < threshold - BAND {
                Ok(Outcome::Gated)
            } else if rho <= threshold + BAND {
                if is_isomorphic(g, &reference).is_some() {
                    Ok(if property.holds(g)? { Outcome::Holds } else { Outcome::Fails })
                } else {
                    Ok(Outcome::BandUnresolved)
                }
            } else {
                Ok(if property.holds(g)? { Outcome::Holds } else { Outcome::Fails })
            }
        })
        .collect::<Result<_, HarnessError>>()?;

    let mut report = SuiteReport::new(spec);
    report.graphs_examined = graphs.len() as u64;
    let mut failing: Vec<Graph> = Vec::new();
    let mut unresolved: Vec<&Graph> = Vec::new();
    for (g, outcome) in graphs.iter().zip(&outcomes) {
        match outcome {
            Outcome::Gated => {}
            Outcome::Holds => {
                report.hypothesis_satisfying += 1;
                report.conclusion_holds += 1;
            }
            Outcome::Fails => {
                report.hypothesis_satisfying += 1;
                failing.push(g.clone());
            }
            Outcome::BandUnresolved => unresolved.push(g),
        }
    }
    let failing_reps = class_reps(&failing);
    let expected_reps = class_reps(std::slice::from_ref(&reference));
    report.exceptions_found = failing_reps.iter().map(graph_label).collect();
    report.expected_exceptions = expected_reps.iter().map(graph_label).collect();
    report.verdict = if !unresolved.is_empty() {
        let shown: Vec<String> = unresolved.iter().take(5).map(|g| graph_label(g)).collect();
        notes.push(format!(
            "{} graph(s) within {BAND:.0e} of the threshold could not be resolved by \
             isomorphism and were excluded: {}",
            unresolved.len(),
            shown.join(" ")
        ));
        Verdict::Inconclusive
    } else if classes_equal(&failing_reps, &expected_reps) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    report.notes = notes;
    Ok(report)
}
