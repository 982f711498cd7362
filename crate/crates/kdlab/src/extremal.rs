//! The extremal families and the exact/numeric comparisons between them.
//!
//! The recurring family is the "split join": a clique of size `s` joined
//! to the disjoint union of a clique on `n - 2s` vertices and an
//! independent set of size `s`. Its balanced special case `s = n/2` is
//! the half join, a clique joined to an independent set of equal size.
//! Comparisons between members are exact (edge counts in integers) or
//! certified numerics (spectral radii via characteristic polynomials of
//! equitable quotients, cross-checked by power iteration).

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::spectral::{
    half_join_poly, largest_root, spectral_radius, split_join_poly, SpectralError,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtremalError {
    #[error("split parameter must satisfy 1 <= s <= n/2, got n = {n}, s = {s}")]
    BadSplit { n: i64, s: i64 },
    #[error("order {n} cannot be materialized as a graph (cap 64)")]
    OrderTooLarge { n: i64 },
    #[error("hypothesis not met: {reason}")]
    Hypothesis { reason: String },
    #[error("radius cross-check failed at s = {s}: polynomial root {root} vs iterated {iterated}")]
    CrossCheck { s: i64, root: f64, iterated: f64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

fn check_split(n: i64, s: i64) -> Result<(), ExtremalError> {
    if s < 1 || 2 * s > n {
        return Err(ExtremalError::BadSplit { n, s });
    }
    Ok(())
}

/// `K_s v (K_{n-2s} + empty_s)`, laid out as the clique `0..s`, the
/// middle clique `s..n-s`, then the independent set `n-s..n`.
pub fn build_split_join(n: i64, s: i64) -> Result<Graph, ExtremalError> {
    check_split(n, s)?;
    let (n_us, s_us) = (n as usize, s as usize);
    if n_us > crate::graph::MAX_VERTICES {
        return Err(ExtremalError::OrderTooLarge { n });
    }
    let middle = Graph::complete(n_us - 2 * s_us)?;
    let rest = middle.disjoint_union(&Graph::empty(s_us)?)?;
    Ok(Graph::complete(s_us)?.join(&rest)?)
}

/// The balanced half join `K_{floor(n/2)} v empty_{ceil(n/2)}`. This is
/// exactly the split join at `s = floor(n/2)`: for odd `n` the size-one
/// middle clique merges into the independent side.
pub fn half_join(n: i64) -> Result<Graph, ExtremalError> {
    if n < 2 {
        return Err(ExtremalError::BadSplit { n, s: n / 2 });
    }
    if n as usize > crate::graph::MAX_VERTICES {
        return Err(ExtremalError::OrderTooLarge { n });
    }
    let half = (n / 2) as usize;
    Ok(Graph::complete(half)?.join(&Graph::empty(n as usize - half)?)?)
}

/// Edge count of the split join, in closed form.
pub fn split_join_size(n: i64, s: i64) -> i64 {
    (3 * s * s + s - 2 * n * s + n * n - n) / 2
}

/// `K_s v (K_{p_1} + ... + K_{p_t})` with the clique first and the parts
/// laid out in the order given.
pub fn build_clique_join(s: i64, parts: &[i64]) -> Result<Graph, ExtremalError> {
    let n = s + parts.iter().sum::<i64>();
    if s < 0 || parts.iter().any(|&p| p < 1) || n < 1 {
        return Err(ExtremalError::Hypothesis {
            reason: format!("clique join needs s >= 0 and all parts >= 1, got s = {s}, parts = {parts:?}"),
        });
    }
    if n as usize > crate::graph::MAX_VERTICES {
        return Err(ExtremalError::OrderTooLarge { n });
    }
    let mut rest = Graph::empty(0)?;
    for &p in parts {
        rest = rest.disjoint_union(&Graph::complete(p as usize)?)?;
    }
    Ok(Graph::complete(s as usize)?.join(&rest)?)
}

/// Edge count of `K_s v (K_{p_1} + ... + K_{p_t})`, in closed form.
pub fn clique_join_size(s: i64, parts: &[i64]) -> i64 {
    let rest: i64 = parts.iter().sum();
    s * (s - 1) / 2 + s * rest + parts.iter().map(|&p| p * (p - 1) / 2).sum::<i64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComparisonOutcome {
    Holds,
    Fails,
    Inconclusive,
}

/// Result of one extremal comparison. `margin` is the smallest slack
/// over all compared pairs (exact for edge counts, floating for radii);
/// it is `None` when the comparison is vacuous.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonVerdict {
    pub case: String,
    pub outcome: ComparisonOutcome,
    pub margin: Option<f64>,
    pub detail: String,
}

fn verdict(case: &str, outcome: ComparisonOutcome, margin: Option<f64>, detail: String) -> ComparisonVerdict {
    ComparisonVerdict {
        case: case.to_string(),
        outcome,
        margin,
        detail,
    }
}

/// Exact edge-count comparison across the split-join family: which of
/// `s = delta` and `s = floor(n/2)` dominates, by the position of `n`
/// relative to `6*delta`. All inequalities are checked in integers over
/// every admissible `s`.
pub fn size_family_compare(n: i64, delta: i64) -> Result<ComparisonVerdict, ExtremalError> {
    check_split(n, delta)?;
    let half = n / 2;
    let e = |s: i64| split_join_size(n, s);

    let (case, lo, hi, reference): (&str, i64, i64, i64) = if n > 6 * delta + 2 || n == 6 * delta + 1 {
        // The small-clique end strictly dominates everything above it.
        ("i", delta + 1, half, delta)
    } else if n == 6 * delta + 2 || n == 6 * delta - 1 {
        // Both ends tie and strictly dominate the interior.
        ("ii", delta + 1, half - 1, delta)
    } else {
        // The balanced end strictly dominates everything below it.
        ("iii", delta, half - 1, half)
    };

    if case == "ii" && e(delta) != e(half) {
        return Ok(verdict(
            case,
            ComparisonOutcome::Fails,
            Some((e(delta) - e(half)) as f64),
            format!("expected equal edge counts at s = {delta} and s = {half}: {} vs {}", e(delta), e(half)),
        ));
    }

    let mut margin: Option<i64> = None;
    for s in lo..=hi {
        if s == reference {
            continue;
        }
        let gap = e(reference) - e(s);
        if gap <= 0 {
            return Ok(verdict(
                case,
                ComparisonOutcome::Fails,
                Some(gap as f64),
                format!("edge count at s = {s} ({}) is not below s = {reference} ({})", e(s), e(reference)),
            ));
        }
        margin = Some(margin.map_or(gap, |m: i64| m.min(gap)));
    }

    let detail = match margin {
        Some(m) => format!("reference s = {reference} dominates; smallest gap {m}"),
        None => format!("no admissible s besides the reference (n = {n}, delta = {delta})"),
    };
    Ok(verdict(case, ComparisonOutcome::Holds, margin.map(|m| m as f64), detail))
}

/// Spectral-radius comparison across the split-join family for
/// `n >= 8*delta + 4`: the radius at `s = delta` should strictly exceed
/// the radius at every `delta < s <= floor(n/2)`. Radii come from the
/// quotient polynomials; when the graphs fit in 64 vertices, each root
/// is cross-checked against power iteration to within `xcheck_tol`.
pub fn radius_family_compare(
    n: i64,
    delta: i64,
    margin_tol: f64,
    xcheck_tol: f64,
) -> Result<ComparisonVerdict, ExtremalError> {
    check_split(n, delta)?;
    if n < 8 * delta + 4 {
        return Err(ExtremalError::Hypothesis {
            reason: format!("radius comparison needs n >= 8*delta + 4, got n = {n}, delta = {delta}"),
        });
    }
    let half = n / 2;

    let radius_of = |s: i64| -> Result<f64, ExtremalError> {
        let root = if 2 * s == n {
            largest_root(&half_join_poly(n)?.map(|c| c as f64))?
        } else {
            largest_root(&split_join_poly(n, s).map(|c| c as f64))?
        };
        if n as usize <= crate::graph::MAX_VERTICES {
            let g = build_split_join(n, s)?;
            let iter = spectral_radius(&g, crate::spectral::DEFAULT_TOL)?.value;
            if (iter - root).abs() > xcheck_tol {
                return Err(ExtremalError::CrossCheck {
                    s,
                    root,
                    iterated: iter,
                });
            }
        }
        Ok(root)
    };

    let base = radius_of(delta)?;
    let mut margin = f64::INFINITY;
    let mut worst = delta;
    for s in (delta + 1)..=half {
        let gap = base - radius_of(s)?;
        if gap < margin {
            margin = gap;
            worst = s;
        }
    }
    if margin == f64::INFINITY {
        return Ok(verdict(
            "radius",
            ComparisonOutcome::Holds,
            None,
            format!("no admissible s above delta (n = {n}, delta = {delta})"),
        ));
    }
    let outcome = if margin > margin_tol {
        ComparisonOutcome::Holds
    } else if margin < -margin_tol {
        ComparisonOutcome::Fails
    } else {
        ComparisonOutcome::Inconclusive
    };
    Ok(verdict(
        "radius",
        outcome,
        Some(margin),
        format!("smallest radius gap {margin:.3e} attained at s = {worst}"),
    ))
}

fn check_parts_sorted(parts: &[i64], min: i64) -> Result<(), ExtremalError> {
    if parts.is_empty() || parts.windows(2).any(|w| w[0] < w[1]) || *parts.last().unwrap() < min {
        return Err(ExtremalError::Hypothesis {
            reason: format!("parts must be sorted nonincreasing with every part >= {min}, got {parts:?}"),
        });
    }
    Ok(())
}

/// Exact size comparison against the consolidated clique join: with
/// `n = s + sum(parts)`, parts nonincreasing, every part at least `p`,
/// and `parts[0] < n - s - p*(t-1)`, the consolidated layout
/// `K_s v (K_{n-s-p(t-1)} + (t-1) K_p)` must have strictly more edges.
pub fn clique_join_size_compare(
    s: i64,
    parts: &[i64],
    p: i64,
) -> Result<ComparisonVerdict, ExtremalError> {
    if p < 1 {
        return Err(ExtremalError::Hypothesis {
            reason: format!("p must be at least 1, got {p}"),
        });
    }
    check_parts_sorted(parts, p)?;
    let t = parts.len() as i64;
    let n = s + parts.iter().sum::<i64>();
    let big = n - s - p * (t - 1);
    if parts[0] >= big {
        return Err(ExtremalError::Hypothesis {
            reason: format!("largest part {} must be below {big}", parts[0]),
        });
    }
    let mut consolidated = vec![big];
    consolidated.extend(std::iter::repeat(p).take((t - 1) as usize));
    let lhs = clique_join_size(s, parts);
    let rhs = clique_join_size(s, &consolidated);
    let gap = rhs - lhs;
    let outcome = if gap > 0 {
        ComparisonOutcome::Holds
    } else {
        ComparisonOutcome::Fails
    };
    Ok(verdict(
        "size-consolidation",
        outcome,
        Some(gap as f64),
        format!("{lhs} edges vs {rhs} after consolidating to {consolidated:?}"),
    ))
}

/// Spectral analogue of the size consolidation, for `p = 1`: with
/// `parts[0] < n - s - t + 1`, the consolidated join
/// `K_s v (K_{n-s-t+1} + (t-1) K_1)` must have strictly larger radius.
pub fn clique_join_radius_compare(
    s: i64,
    parts: &[i64],
    margin_tol: f64,
) -> Result<ComparisonVerdict, ExtremalError> {
    check_parts_sorted(parts, 1)?;
    let t = parts.len() as i64;
    let n = s + parts.iter().sum::<i64>();
    let big = n - s - t + 1;
    if parts[0] >= big {
        return Err(ExtremalError::Hypothesis {
            reason: format!("largest part {} must be below {big}", parts[0]),
        });
    }
    if s < 1 {
        // Without the joined clique the graphs are disconnected.
        return Err(ExtremalError::Hypothesis {
            reason: format!("radius comparison needs s >= 1, got {s}"),
        });
    }
    let mut consolidated = vec![big];
    consolidated.extend(std::iter::repeat(1).take((t - 1) as usize));
    let tol = crate::spectral::DEFAULT_TOL;
    let lhs = spectral_radius(&build_clique_join(s, parts)?, tol)?.value;
    let rhs = spectral_radius(&build_clique_join(s, &consolidated)?, tol)?.value;
    let gap = rhs - lhs;
    let outcome = if gap > margin_tol {
        ComparisonOutcome::Holds
    } else if gap < -margin_tol {
        ComparisonOutcome::Fails
    } else {
        ComparisonOutcome::Inconclusive
    };
    Ok(verdict(
        "radius-consolidation",
        outcome,
        Some(gap),
        format!("{lhs:.12} vs {rhs:.12} after consolidating to {consolidated:?}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_join_sizes_match_built_graphs() {
        for n in 4i64..=12 {
            for s in 1..=(n / 2) {
                let g = build_split_join(n, s).unwrap();
                assert_eq!(g.order(), n as usize);
                assert_eq!(g.edge_count() as i64, split_join_size(n, s), "n={n} s={s}");
            }
        }
    }

    #[test]
    fn frozen_split_join_sizes() {
        assert_eq!((1..=3).map(|s| split_join_size(7, s)).collect::<Vec<_>>(), vec![16, 14, 15]);
        assert_eq!((1..=4).map(|s| split_join_size(8, s)).collect::<Vec<_>>(), vec![22, 19, 19, 22]);
        assert_eq!((1..=2).map(|s| split_join_size(5, s)).collect::<Vec<_>>(), vec![7, 7]);
        assert_eq!(split_join_size(10, 5), 35);
    }

    #[test]
    fn split_join_layout() {
        let g = build_split_join(9, 2).unwrap();
        // Clique side: full degree.
        assert_eq!(g.degree(0), 8);
        assert_eq!(g.degree(1), 8);
        // Middle clique vertices miss only the independent side.
        for v in 2..7 {
            assert_eq!(g.degree(v), 6);
        }
        // Independent side sees only the clique.
        for v in 7..9 {
            assert_eq!(g.degree(v), 2);
            assert!(!g.has_edge(7, 8));
        }
        assert_eq!(g.min_degree(), Some(2));
        assert!(g.is_connected());
    }

    #[test]
    fn half_join_is_the_balanced_split_join() {
        for n in 4i64..=13 {
            assert_eq!(half_join(n).unwrap(), build_split_join(n, n / 2).unwrap(), "n={n}");
        }
    }

    #[test]
    fn bad_split_parameters() {
        assert!(matches!(build_split_join(9, 0), Err(ExtremalError::BadSplit { .. })));
        assert!(matches!(build_split_join(9, 5), Err(ExtremalError::BadSplit { .. })));
        assert!(matches!(build_split_join(200, 3), Err(ExtremalError::OrderTooLarge { .. })));
    }

    #[test]
    fn size_comparison_cases() {
        // n = 6*delta + 1 and beyond: the small end dominates.
        let v = size_family_compare(7, 1).unwrap();
        assert_eq!((v.case.as_str(), v.outcome), ("i", ComparisonOutcome::Holds));
        assert_eq!(v.margin, Some(1.0));
        let v = size_family_compare(40, 1).unwrap();
        assert_eq!((v.case.as_str(), v.outcome), ("i", ComparisonOutcome::Holds));

        // n = 6*delta + 2: both ends tie at 22 edges.
        let v = size_family_compare(8, 1).unwrap();
        assert_eq!((v.case.as_str(), v.outcome), ("ii", ComparisonOutcome::Holds));
        assert_eq!(v.margin, Some(3.0));

        // n = 6*delta - 1 with an empty interior: vacuous tie case.
        let v = size_family_compare(5, 1).unwrap();
        assert_eq!((v.case.as_str(), v.outcome), ("ii", ComparisonOutcome::Holds));
        assert_eq!(v.margin, None);

        // n = 6*delta and below: the balanced end dominates.
        let v = size_family_compare(12, 2).unwrap();
        assert_eq!((v.case.as_str(), v.outcome), ("iii", ComparisonOutcome::Holds));
        assert_eq!(v.margin, Some(2.0));
        let v = size_family_compare(9, 2).unwrap();
        assert_eq!((v.case.as_str(), v.outcome), ("iii", ComparisonOutcome::Holds));
        assert_eq!(v.margin, Some(1.0));
    }

    #[test]
    fn radius_comparison_at_the_threshold() {
        let v = radius_family_compare(12, 1, 1e-9, 1e-9).unwrap();
        assert_eq!(v.outcome, ComparisonOutcome::Holds);
        assert!(v.margin.unwrap() > 1e-6, "margin {:?}", v.margin);

        assert!(matches!(
            radius_family_compare(11, 1, 1e-9, 1e-9),
            Err(ExtremalError::Hypothesis { .. })
        ));
    }

    #[test]
    fn clique_join_sizes_match_built_graphs() {
        for (s, parts) in [(1i64, vec![2i64, 2, 1]), (2, vec![3, 1]), (0, vec![4]), (3, vec![2, 2, 2])] {
            let g = build_clique_join(s, &parts).unwrap();
            assert_eq!(g.edge_count() as i64, clique_join_size(s, &parts));
        }
    }

    #[test]
    fn size_consolidation_example() {
        let v = clique_join_size_compare(1, &[2, 2, 1], 1).unwrap();
        assert_eq!(v.outcome, ComparisonOutcome::Holds);
        assert_eq!(v.margin, Some(1.0));
        assert!(v.detail.contains("7 edges vs 8"));

        // Largest part already at the consolidated size: hypothesis fails.
        assert!(matches!(
            clique_join_size_compare(1, &[3, 1, 1], 1),
            Err(ExtremalError::Hypothesis { .. })
        ));
        // Unsorted parts are rejected.
        assert!(matches!(
            clique_join_size_compare(1, &[1, 2, 2], 1),
            Err(ExtremalError::Hypothesis { .. })
        ));
    }

    #[test]
    fn radius_consolidation_example() {
        let v = clique_join_radius_compare(1, &[2, 2, 1], 1e-9).unwrap();
        assert_eq!(v.outcome, ComparisonOutcome::Holds);
        assert!(v.margin.unwrap() > 1e-3);
    }
}
