//! The subset-scan oracle for k-matching deficiency.
//!
//! For a vertex subset `S`, write `i(G - S)` for the number of isolated
//! vertices and `odd(G - S)` for the number of odd components of order at
//! least 3. The deficiency of `G` with respect to `k` is the maximum over
//! all `S` of
//!
//! * `k * i(G - S) - k * |S|` for even `k`,
//! * `odd(G - S) + k * i(G - S) - k * |S|` for odd `k`,
//!
//! and a barrier is any maximizing `S`. The criticality checks in this
//! module are pure subset scans over the same quantities, which makes them
//! an oracle independent of any matching construction.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{low_mask, Graph};

/// Cap on the order for exhaustive subset scans (2^24 subsets).
pub const MAX_SCAN_VERTICES: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("subset scan supports at most {max} vertices; got {n}")]
    OrderTooLarge { n: usize, max: usize },
    #[error("k must be at least {min}; got {k}")]
    KTooSmall { k: u32, min: u32 },
    #[error("k must be odd and at least 3; got {k}")]
    KNotOdd { k: u32 },
    #[error("d must satisfy 1 <= d <= k; got d = {d} with k = {k}")]
    DOutOfRange { d: u32, k: u32 },
    #[error("order {n} and d = {d} must have equal parity")]
    ParityMismatch { n: usize, d: u32 },
    #[error("graph must be connected")]
    Disconnected,
    #[error("graph must have order at least 3; got {n}")]
    OrderTooSmall { n: usize },
}

/// Which branch of the deficiency formula applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityBranch {
    EvenK,
    OddK,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeficiencyReport {
    pub k: u32,
    pub value: i64,
    pub parity_branch: ParityBranch,
    /// All maximizing subsets, ordered by cardinality then index sequence.
    pub barriers: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PropertyKind {
    #[serde(rename = "GFC_k")]
    GeneralizedFactorCritical,
    #[serde(rename = "GBC_k")]
    GeneralizedBicritical,
    #[serde(rename = "k-d-critical")]
    KdCritical,
}

/// Outcome of a property check, with the first witness subset on failure.
///
/// Subsets are visited in ascending cardinality and lexicographic index
/// order, so `violating_set` is deterministic. When it is present it
/// violates the property's defining inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalityVerdict {
    pub property: PropertyKind,
    pub k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violating_set: Option<Vec<usize>>,
}

/// Isolated-vertex and nontrivial-odd-component counts of `G - S`,
/// where `within` is the complement bitmask of `S`.
fn census(g: &Graph, within: u64) -> (i64, i64) {
    let mut odd = 0i64;
    let mut isolated = 0i64;
    let mut rest = within;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        let comp = g.component_of(v, within);
        let size = comp.count_ones();
        if size == 1 {
            isolated += 1;
        } else if size >= 3 && size % 2 == 1 {
            odd += 1;
        }
        rest &= !comp;
    }
    (odd, isolated)
}

fn deficiency_term(g: &Graph, smask: u64, k: u32) -> i64 {
    let n = g.order();
    let within = low_mask(n) & !smask;
    let (odd, isolated) = census(g, within);
    let k = i64::from(k);
    let s = i64::from(smask.count_ones());
    if k % 2 == 0 {
        k * isolated - k * s
    } else {
        odd + k * isolated - k * s
    }
}

fn check_order(g: &Graph) -> Result<(), CheckError> {
    let n = g.order();
    if n > MAX_SCAN_VERTICES {
        return Err(CheckError::OrderTooLarge {
            n,
            max: MAX_SCAN_VERTICES,
        });
    }
    Ok(())
}

/// Exhaustive deficiency: scans all `2^n` subsets and returns the maximum
/// together with every maximizing subset.
pub fn deficiency_k(g: &Graph, k: u32) -> Result<DeficiencyReport, CheckError> {
    if k < 1 {
        return Err(CheckError::KTooSmall { k, min: 1 });
    }
    check_order(g)?;
    let n = g.order();
    let mut best = i64::MIN;
    let mut masks: Vec<u64> = Vec::new();
    let subsets: u64 = 1 << n;
    for smask in 0..subsets {
        let value = deficiency_term(g, smask, k);
        if value > best {
            best = value;
            masks.clear();
            masks.push(smask);
        } else if value == best {
            masks.push(smask);
        }
    }
    let mut barriers: Vec<Vec<usize>> = masks
        .into_iter()
        .map(|m| (0..n).filter(|&v| m & (1 << v) != 0).collect())
        .collect();
    barriers.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(DeficiencyReport {
        k,
        value: best,
        parity_branch: if k % 2 == 0 {
            ParityBranch::EvenK
        } else {
            ParityBranch::OddK
        },
        barriers,
    })
}

/// All maximizing subsets of the deficiency formula.
pub fn k_barriers(g: &Graph, k: u32) -> Result<Vec<Vec<usize>>, CheckError> {
    Ok(deficiency_k(g, k)?.barriers)
}

/// Advances `idx` to the next c-combination of `0..n` in lexicographic
/// order; returns false once exhausted.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let c = idx.len();
    let mut i = c;
    while i > 0 {
        i -= 1;
        if idx[i] < n - c + i {
            idx[i] += 1;
            for j in i + 1..c {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Visits every nonempty subset of `0..n` in ascending cardinality and
/// lexicographic index order until `f` returns true; returns that subset.
fn first_violation(n: usize, mut f: impl FnMut(u64, usize) -> bool) -> Option<Vec<usize>> {
    let mut idx = Vec::with_capacity(n);
    for c in 1..=n {
        idx.clear();
        idx.extend(0..c);
        loop {
            let mask = idx.iter().fold(0u64, |m, &v| m | (1u64 << v));
            if f(mask, c) {
                return Some(idx.clone());
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    None
}

/// Tests the factor-critical-style property matching the graph's order
/// parity: odd order against the all-vertex variant, even order against
/// the all-but-one variant. The defining inequalities depend on the
/// parity of `k`:
///
/// * even `k`: `i(G - S) <= |S| - 1` for every nonempty `S`;
/// * odd `k`, odd order: `odd(G - S) + k*i(G - S) <= k|S| - 1`;
/// * odd `k`, even order: `odd(G - S) + k*i(G - S) <= k|S| - 2`.
pub fn classify_gfc_gbc(g: &Graph, k: u32) -> Result<CriticalityVerdict, CheckError> {
    if k < 2 {
        return Err(CheckError::KTooSmall { k, min: 2 });
    }
    check_order(g)?;
    let n = g.order();
    if n < 3 {
        return Err(CheckError::OrderTooSmall { n });
    }
    if !g.is_connected() {
        return Err(CheckError::Disconnected);
    }
    let property = if n % 2 == 1 {
        PropertyKind::GeneralizedFactorCritical
    } else {
        PropertyKind::GeneralizedBicritical
    };
    let slack = match (k % 2 == 0, n % 2 == 1) {
        (true, _) => 0,
        (false, true) => 1,
        (false, false) => 2,
    };
    let all = low_mask(n);
    let ki = i64::from(k);
    let violation = first_violation(n, |smask, card| {
        let (odd, isolated) = census(g, all & !smask);
        let card = card as i64;
        if k % 2 == 0 {
            isolated >= card
        } else {
            odd + ki * isolated > ki * card - slack
        }
    });
    Ok(CriticalityVerdict {
        property,
        k,
        d: None,
        holds: violation.is_none(),
        violating_set: violation,
    })
}

/// Subset-scan test for the load-defect criticality property: holds iff
/// `odd(G - S) + k*i(G - S) <= k|S| - d` for every nonempty `S`.
pub fn is_kd_critical_deficiency(g: &Graph, k: u32, d: u32) -> Result<CriticalityVerdict, CheckError> {
    validate_kd(g, k, d)?;
    check_order(g)?;
    let n = g.order();
    let all = low_mask(n);
    let ki = i64::from(k);
    let di = i64::from(d);
    let violation = first_violation(n, |smask, card| {
        let (odd, isolated) = census(g, all & !smask);
        odd + ki * isolated > ki * (card as i64) - di
    });
    Ok(CriticalityVerdict {
        property: PropertyKind::KdCritical,
        k,
        d: Some(d),
        holds: violation.is_none(),
        violating_set: violation,
    })
}

/// Shared parameter validation for the load-defect criticality checks.
pub(crate) fn validate_kd(g: &Graph, k: u32, d: u32) -> Result<(), CheckError> {
    if k < 3 || k % 2 == 0 {
        return Err(CheckError::KNotOdd { k });
    }
    if d < 1 || d > k {
        return Err(CheckError::DOutOfRange { d, k });
    }
    let n = g.order();
    if n < 3 {
        return Err(CheckError::OrderTooSmall { n });
    }
    if n % 2 != (d % 2) as usize {
        return Err(CheckError::ParityMismatch { n, d });
    }
    if !g.is_connected() {
        return Err(CheckError::Disconnected);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> Graph {
        Graph::empty(1)
            .unwrap()
            .join(&Graph::empty(leaves).unwrap())
            .unwrap()
    }

    #[test]
    fn star_center_removal_dominates() {
        // Removing the center of K_{1,3} leaves three isolated vertices:
        // 0 + 3*3 - 3*1 = 6, the unique maximum.
        let report = deficiency_k(&star(3), 3).unwrap();
        assert_eq!(report.value, 6);
        assert_eq!(report.parity_branch, ParityBranch::OddK);
        assert_eq!(report.barriers, vec![vec![0]]);
    }

    #[test]
    fn complete_graph_has_empty_barrier() {
        let report = deficiency_k(&Graph::complete(4).unwrap(), 3).unwrap();
        assert_eq!(report.value, 0);
        assert_eq!(report.barriers, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn single_vertex_even_k() {
        let report = deficiency_k(&Graph::empty(1).unwrap(), 2).unwrap();
        assert_eq!(report.value, 2);
        assert_eq!(report.parity_branch, ParityBranch::EvenK);
        assert_eq!(report.barriers, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn triangle_barriers() {
        // K_3 with k = 3: the whole graph is one nontrivial odd component,
        // value 1 at the empty set; every nonempty subset scores lower.
        assert_eq!(k_barriers(&Graph::complete(3).unwrap(), 3).unwrap(), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn single_edge_barriers_tie() {
        // K_2 with k = 3: the empty set scores 0, and so does deleting
        // either endpoint (one isolated vertex, 3*1 - 3*1). Three barriers.
        let barriers = k_barriers(&Graph::complete(2).unwrap(), 3).unwrap();
        assert_eq!(barriers, vec![vec![], vec![0], vec![1]]);
    }

    #[test]
    fn gfc_gbc_small_cases() {
        let v = classify_gfc_gbc(&Graph::complete(3).unwrap(), 2).unwrap();
        assert_eq!(v.property, PropertyKind::GeneralizedFactorCritical);
        assert!(v.holds);

        let v = classify_gfc_gbc(&star(3), 2).unwrap();
        assert_eq!(v.property, PropertyKind::GeneralizedBicritical);
        assert!(!v.holds);
        assert_eq!(v.violating_set, Some(vec![0]));
    }

    #[test]
    fn join_family_violating_set_is_join_vertex() {
        // K_1 v (K_7 + K_1bar) on 9 vertices: deleting the join vertex
        // leaves K_7 (odd, nontrivial) plus one isolated vertex.
        let g = crate::extremal::build_split_join(9, 1).unwrap();
        let v = classify_gfc_gbc(&g, 3).unwrap();
        assert_eq!(v.property, PropertyKind::GeneralizedFactorCritical);
        assert!(!v.holds);
        assert_eq!(v.violating_set, Some(vec![0]));

        let v = is_kd_critical_deficiency(&g, 3, 1).unwrap();
        assert!(!v.holds);
        assert_eq!(v.violating_set, Some(vec![0]));
    }

    #[test]
    fn small_critical_cases() {
        assert!(is_kd_critical_deficiency(&Graph::complete(4).unwrap(), 3, 2)
            .unwrap()
            .holds);
        assert!(is_kd_critical_deficiency(&Graph::complete(3).unwrap(), 3, 1)
            .unwrap()
            .holds);
        assert!(is_kd_critical_deficiency(&Graph::complete(3).unwrap(), 3, 3)
            .unwrap()
            .holds);
    }

    #[test]
    fn precondition_errors() {
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(
            is_kd_critical_deficiency(&k4, 4, 2).unwrap_err(),
            CheckError::KNotOdd { k: 4 }
        );
        assert_eq!(
            is_kd_critical_deficiency(&k4, 3, 5).unwrap_err(),
            CheckError::DOutOfRange { d: 5, k: 3 }
        );
        assert_eq!(
            is_kd_critical_deficiency(&k4, 3, 1).unwrap_err(),
            CheckError::ParityMismatch { n: 4, d: 1 }
        );
        let two_triangles = Graph::complete(3)
            .unwrap()
            .disjoint_union(&Graph::complete(3).unwrap())
            .unwrap();
        assert_eq!(
            is_kd_critical_deficiency(&two_triangles, 3, 2).unwrap_err(),
            CheckError::Disconnected
        );
        assert_eq!(
            classify_gfc_gbc(&Graph::complete(2).unwrap(), 3).unwrap_err(),
            CheckError::OrderTooSmall { n: 2 }
        );
        assert_eq!(
            deficiency_k(&k4, 0).unwrap_err(),
            CheckError::KTooSmall { k: 0, min: 1 }
        );
    }

    #[test]
    fn subset_order_is_cardinality_then_lex() {
        let mut seen = Vec::new();
        first_violation(3, |_, _| {
            seen.push(());
            false
        });
        assert_eq!(seen.len(), 7);
        // Deterministic first violation: a graph violating at {0,2} but not
        // at {0,1} must report {0,2} before {1,2}.
        let order: Vec<Vec<usize>> = {
            let mut all = Vec::new();
            first_violation(3, |mask, _| {
                all.push((0..3).filter(|&v| mask & (1 << v) != 0).collect::<Vec<_>>());
                false
            });
            all
        };
        assert_eq!(
            order,
            vec![
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 1, 2]
            ]
        );
    }

    #[test]
    fn order_cap_enforced() {
        let g = Graph::empty(25).unwrap();
        assert_eq!(
            deficiency_k(&g, 2).unwrap_err(),
            CheckError::OrderTooLarge { n: 25, max: 24 }
        );
    }
}
