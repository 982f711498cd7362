//! Oracle-equivalence suite: the subset-scan deficiency oracle and the
//! matching-witness oracle must agree on criticality for every
//! connected graph in range, for every admissible d. The
//! deficiency/matching duality (def = k*n - 2*mu) is checked on every
//! graph as a by-product.

use rayon::prelude::*;

use super::size::bad;
use super::{graph_label, CorpusSpec, HarnessError, SuiteReport, SuiteSpec, Verdict};
use crate::deficiency::{deficiency_k, is_kd_critical_deficiency};
use crate::enumerate::{all_graphs, MAX_ENUM_VERTICES};
use crate::graph::Graph;
use crate::kmatching::{is_kd_critical_witness, mu_k, verify_matching, STATE_BUDGET};

struct PerGraph {
    pairs: u64,
    agreements: u64,
    problems: Vec<String>,
}

pub(super) fn run(spec: &SuiteSpec) -> Result<SuiteReport, HarnessError> {
    let n_max = spec.n.unwrap_or(7);
    let k = spec.k.unwrap_or(3);
    if spec.d.is_some() || spec.delta.is_some() {
        return Err(bad(
            "oracle equivalence takes only n (as the largest order) and k; d and delta are \
             swept internally"
                .into(),
        ));
    }
    if spec.corpus != CorpusSpec::InternalEnumeration {
        return Err(bad("oracle equivalence runs on the internal enumeration only".into()));
    }
    if k < 3 || k % 2 == 0 {
        return Err(bad(format!("criticality needs odd k >= 3, got k = {k}")));
    }
    if !(3..=MAX_ENUM_VERTICES as i64).contains(&n_max) {
        return Err(bad(format!(
            "oracle equivalence needs 3 <= n <= {MAX_ENUM_VERTICES}, got n = {n_max}"
        )));
    }
    let states = (k as u64 + 1).checked_pow(n_max as u32);
    if states.map_or(true, |s| s > STATE_BUDGET) {
        return Err(bad(format!(
            "the witness oracle state space (k+1)^n exceeds its budget at k = {k}, n = {n_max}"
        )));
    }

    let mut graphs: Vec<&Graph> = Vec::new();
    for n in 3..=(n_max as usize) {
        graphs.extend(all_graphs(n)?.iter().filter(|g| g.is_connected()));
    }

    let results: Vec<PerGraph> = graphs
        .par_iter()
        .map(|g| {
            let n = g.order();
            let mut out = PerGraph { pairs: 0, agreements: 0, problems: Vec::new() };
            let report = deficiency_k(g, k)?;
            let (mu, witness) = mu_k(g, k)?;
            if !verify_matching(g, &witness) || witness.total_weight() != mu {
                out.problems.push(format!(
                    "optimal witness does not replay: weight {} against mu = {mu}",
                    witness.total_weight()
                ));
            }
            let duality = k as i64 * n as i64 - 2 * mu as i64;
            if report.value != duality {
                out.problems.push(format!(
                    "duality break: deficiency {} but k*n - 2*mu = {duality}",
                    report.value
                ));
            }
            for d in 1..=k {
                if (n as i64 - d as i64) % 2 != 0 {
                    continue;
                }
                out.pairs += 1;
                let a = is_kd_critical_deficiency(g, k, d)?;
                let b = is_kd_critical_witness(g, k, d)?;
                if a.holds == b.holds {
                    out.agreements += 1;
                } else {
                    out.problems.push(format!(
                        "d = {d}: deficiency oracle says {}, witness oracle says {}",
                        a.holds, b.holds
                    ));
                }
            }
            Ok(out)
        })
        .collect::<Result<_, HarnessError>>()?;

    let mut report = SuiteReport::new(spec);
    report.graphs_examined = graphs.len() as u64;
    let mut detail = Vec::new();
    for (g, r) in graphs.iter().zip(&results) {
        report.hypothesis_satisfying += r.pairs;
        report.conclusion_holds += r.agreements;
        if !r.problems.is_empty() {
            report.exceptions_found.push(graph_label(g));
            if detail.len() < 20 {
                for p in &r.problems {
                    detail.push(format!("{}: {p}", graph_label(g)));
                }
            }
        }
    }
    report.notes.push(format!(
        "orders 3..={n_max}, k = {k}: both criticality oracles compared on every connected \
         graph for every admissible d; matching duality def = k*n - 2*mu verified per graph"
    ));
    report.notes.extend(detail);
    report.verdict = if report.exceptions_found.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(report)
}
