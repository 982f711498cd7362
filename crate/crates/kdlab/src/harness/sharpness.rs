//! Sharpness suite: the extremal graphs named by the size and radius
//! claims really are exceptions. Every named graph, instantiated at the
//! clause's own parameters, must fail the property, and the first
//! violating set must be the joined clique. Where the state budget
//! allows, the matching-witness oracle is consulted as a second opinion
//! on the failure.

use super::size::{bad, size_clause, size_property};
use super::{graph_label, HarnessError, PropertySpec, SuiteId, SuiteReport, SuiteSpec, Verdict};
use crate::kmatching::{is_kd_critical_witness, MatchingError, STATE_BUDGET};

pub(super) fn run(spec: &SuiteSpec) -> Result<SuiteReport, HarnessError> {
    let grid = spec.grid.clone().unwrap_or_default();
    if grid.delta_min < 1 || grid.delta_min > grid.delta_max {
        return Err(bad(format!(
            "sharpness grid needs 1 <= delta-min <= delta-max, got {}..{}",
            grid.delta_min, grid.delta_max
        )));
    }
    if grid.k_set.is_empty() || grid.k_set.iter().any(|&k| k < 2) {
        return Err(bad("sharpness grid needs a k-set of values >= 2".into()));
    }
    let n_lo = grid.n_min.unwrap_or(3).max(3);
    let n_hi = grid.n_max.unwrap_or(14);
    if n_lo > n_hi || n_hi > 24 {
        return Err(bad(format!(
            "sharpness grid needs 3 <= n-min <= n-max <= 24, got {n_lo}..{n_hi}"
        )));
    }

    let mut report = SuiteReport::new(spec);
    let mut witness_confirms = 0u64;
    let mut witness_skipped = 0u64;
    let mut detail_notes: Vec<String> = Vec::new();

    for delta in grid.delta_min..=grid.delta_max {
        for n in n_lo..=n_hi {
            if 2 * delta > n {
                continue;
            }
            for &k in &grid.k_set {
                let mut instances: Vec<(SuiteId, PropertySpec)> = Vec::new();
                if k % 2 == 1 && k >= 3 {
                    let d = if n % 2 == 1 { 1 } else { 2 };
                    instances.push((SuiteId::Theorem1, PropertySpec::Critical { k, d }));
                    if n % 2 == 1 {
                        instances.push((SuiteId::Corollary1, PropertySpec::FactorCritical { k }));
                    } else if n >= 4 {
                        instances.push((SuiteId::Corollary2, PropertySpec::Bicritical { k }));
                    }
                } else if k % 2 == 0 {
                    if n % 2 == 1 {
                        instances.push((SuiteId::Theorem3, PropertySpec::FactorCritical { k }));
                    } else if n >= 4 {
                        instances.push((SuiteId::Theorem4, PropertySpec::Bicritical { k }));
                    }
                }
                for (table, property) in instances {
                    // Re-derive the validated parameters; a grid point
                    // that fails validation is a bug in this loop.
                    let d = match property {
                        PropertySpec::Critical { d, .. } => Some(d),
                        _ => None,
                    };
                    size_property(table, n, k, d)?;
                    let clause = size_clause(table, n, delta)?;
                    for family in clause.expected {
                        report.graphs_examined += 1;
                        report.hypothesis_satisfying += 1;
                        let g = family.build(n, delta)?;
                        let predicted = family.predicted_violating_set(n, delta);
                        let verdict = property.verdict(&g)?;
                        let mut ok = true;
                        let mut why = String::new();
                        if verdict.holds {
                            ok = false;
                            why = format!("{} unexpectedly holds", property.describe());
                        } else if verdict.violating_set.as_deref() != Some(&predicted[..]) {
                            ok = false;
                            why = format!(
                                "violating set {:?} is not the joined clique {:?}",
                                verdict.violating_set, predicted
                            );
                        }
                        if ok {
                            if let PropertySpec::Critical { k, d } = property {
                                let in_budget = (k as u64 + 1)
                                    .checked_pow(n as u32)
                                    .map_or(false, |s| s <= STATE_BUDGET);
                                if n as usize <= grid.witness_max_n && in_budget {
                                    match is_kd_critical_witness(&g, k, d) {
                                        Ok(w) if w.holds => {
                                            ok = false;
                                            why = "matching-witness oracle disagrees: it finds \
                                                   every required matching"
                                                .into();
                                        }
                                        Ok(_) => witness_confirms += 1,
                                        Err(MatchingError::Budget { .. }) => witness_skipped += 1,
                                        Err(e) => return Err(e.into()),
                                    }
                                } else {
                                    witness_skipped += 1;
                                }
                            }
                        }
                        if ok {
                            report.conclusion_holds += 1;
                        } else {
                            report.exceptions_found.push(graph_label(&g));
                            if detail_notes.len() < 20 {
                                detail_notes.push(format!(
                                    "{} at n = {n}, delta = {delta}, k = {k}: {} ({}): {why}",
                                    table.as_str(),
                                    family.describe(n, delta),
                                    property.describe(),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }

    report.notes.push(format!(
        "checked {} named extremal instance(s); matching-witness oracle confirmed {} \
         criticality failure(s), skipped {} over budget",
        report.graphs_examined, witness_confirms, witness_skipped
    ));
    report.notes.extend(detail_notes);
    report.verdict = if report.exceptions_found.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(report)
}
