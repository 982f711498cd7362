//! The constructive oracle: exact k-matching computations by dynamic
//! programming over edges.
//!
//! A k-matching assigns each edge an integer weight in `{0..k}` so that
//! every vertex's incident weight sum (its load) stays at most `k`. The
//! DP walks the edge list in sorted order; a state is the vector of
//! remaining per-vertex budgets, packed in base `k+1` into a `u64`. The
//! a-priori state space `(k+1)^n` is capped, and only reachable states
//! are ever materialized.

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::deficiency::{validate_kd, CheckError, CriticalityVerdict, PropertyKind};
use crate::graph::Graph;

/// Cap on `(k+1)^n` and on the total number of stored DP states.
pub const STATE_BUDGET: u64 = 1 << 26;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatchingError {
    #[error("dynamic program would need {states} states, over the budget of {budget}")]
    Budget { states: u128, budget: u64 },
    #[error("target load {load} at vertex {v} exceeds k = {k}")]
    TargetOutOfRange { v: usize, load: u32, k: u32 },
    #[error("expected {need} target loads, got {got}")]
    TargetLengthMismatch { got: usize, need: usize },
    #[error(transparent)]
    Precondition(#[from] CheckError),
}

/// A k-matching given by its positive edge weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KMatching {
    pub k: u32,
    #[serde(skip)]
    pub n: usize,
    /// Entries `(u, v, w)` with `u < v`, ascending by edge, `1 <= w <= k`.
    pub weights: Vec<(usize, usize, u32)>,
}

impl KMatching {
    /// Per-vertex incident weight sums.
    pub fn loads(&self) -> Vec<u32> {
        let mut loads = vec![0u32; self.n];
        for &(u, v, w) in &self.weights {
            loads[u] += w;
            loads[v] += w;
        }
        loads
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().map(|&(_, _, w)| u64::from(w)).sum()
    }
}

/// Checks that a matching is well-formed for `g`: weights sit on edges of
/// `g`, each weight lies in `{1..k}`, entries are sorted with `u < v`, and
/// every load is at most `k`.
pub fn verify_matching(g: &Graph, m: &KMatching) -> bool {
    if m.n != g.order() {
        return false;
    }
    let mut prev: Option<(usize, usize)> = None;
    for &(u, v, w) in &m.weights {
        if u >= v || v >= g.order() || !g.has_edge(u, v) {
            return false;
        }
        if w == 0 || w > m.k {
            return false;
        }
        if let Some(p) = prev {
            if (u, v) <= p {
                return false;
            }
        }
        prev = Some((u, v));
    }
    m.loads().iter().all(|&l| l <= m.k)
}

struct Dp {
    pow: Vec<u64>,
    base: u64,
}

impl Dp {
    fn new(n: usize, k: u32) -> Result<Self, MatchingError> {
        let base = u64::from(k) + 1;
        let mut states: u128 = 1;
        for _ in 0..n {
            states *= u128::from(base);
            if states > u128::from(STATE_BUDGET) {
                return Err(MatchingError::Budget {
                    states,
                    budget: STATE_BUDGET,
                });
            }
        }
        let mut pow = Vec::with_capacity(n + 1);
        let mut p = 1u64;
        for _ in 0..=n {
            pow.push(p);
            p = p.saturating_mul(base);
        }
        Ok(Dp { pow, base })
    }

    #[inline]
    fn digit(&self, state: u64, v: usize) -> u64 {
        state / self.pow[v] % self.base
    }
}

/// Remaining-incident-edge counts per vertex for each suffix of the edge
/// list: `rem[i][v]` counts edges with index >= i touching `v`.
fn suffix_incidence(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<u32>> {
    let mut rem = vec![vec![0u32; n]; edges.len() + 1];
    for i in (0..edges.len()).rev() {
        rem[i] = rem[i + 1].clone();
        rem[i][edges[i].0] += 1;
        rem[i][edges[i].1] += 1;
    }
    rem
}

/// Maximum total weight of a k-matching, with one maximizing matching.
/// Ties are broken toward the lexicographically smallest weight vector in
/// edge order.
pub fn mu_k(g: &Graph, k: u32) -> Result<(u64, KMatching), MatchingError> {
    if k < 1 {
        return Err(CheckError::KTooSmall { k, min: 1 }.into());
    }
    let n = g.order();
    let dp = Dp::new(n, k)?;
    let edges = g.edges();
    let m = edges.len();
    let init: u64 = (0..n).map(|v| u64::from(k) * dp.pow[v]).sum();

    // Forward reachability, layer by layer.
    let mut layers: Vec<HashSet<u64>> = Vec::with_capacity(m + 1);
    layers.push(HashSet::from([init]));
    let mut stored: u64 = 1;
    for &(u, v) in &edges {
        let mut next = HashSet::with_capacity(layers.last().unwrap().len() * 2);
        for &st in layers.last().unwrap() {
            let cap = dp.digit(st, u).min(dp.digit(st, v));
            for w in 0..=cap {
                next.insert(st - w * (dp.pow[u] + dp.pow[v]));
            }
        }
        stored += next.len() as u64;
        if stored > STATE_BUDGET {
            return Err(MatchingError::Budget {
                states: u128::from(stored),
                budget: STATE_BUDGET,
            });
        }
        layers.push(next);
    }

    // Backward pass: best achievable weight from each reachable state.
    let mut value: Vec<HashMap<u64, u64>> = vec![HashMap::new(); m + 1];
    value[m] = layers[m].iter().map(|&st| (st, 0u64)).collect();
    for i in (0..m).rev() {
        let (u, v) = edges[i];
        let mut map = HashMap::with_capacity(layers[i].len());
        for &st in &layers[i] {
            let cap = dp.digit(st, u).min(dp.digit(st, v));
            let best = (0..=cap)
                .map(|w| w + value[i + 1][&(st - w * (dp.pow[u] + dp.pow[v]))])
                .max()
                .expect("w = 0 always available");
            map.insert(st, best);
        }
        value[i] = map;
    }

    let total = value[0][&init];
    let mut weights = Vec::new();
    let mut st = init;
    for (i, &(u, v)) in edges.iter().enumerate() {
        let cap = dp.digit(st, u).min(dp.digit(st, v));
        let need = value[i][&st];
        for w in 0..=cap {
            let nxt = st - w * (dp.pow[u] + dp.pow[v]);
            if w + value[i + 1][&nxt] == need {
                if w > 0 {
                    weights.push((u, v, w as u32));
                }
                st = nxt;
                break;
            }
        }
    }
    let witness = KMatching { k, n, weights };
    debug_assert_eq!(witness.total_weight(), total);
    debug_assert!(verify_matching(g, &witness));
    Ok((total, witness))
}

/// Finds a k-matching whose load at every vertex equals `targets[v]`
/// exactly, or `None` when impossible. The witness is the
/// lexicographically smallest weight vector in edge order.
pub fn constrained_matching(
    g: &Graph,
    k: u32,
    targets: &[u32],
) -> Result<Option<KMatching>, MatchingError> {
    let n = g.order();
    if targets.len() != n {
        return Err(MatchingError::TargetLengthMismatch {
            got: targets.len(),
            need: n,
        });
    }
    for (v, &load) in targets.iter().enumerate() {
        if load > k {
            return Err(MatchingError::TargetOutOfRange { v, load, k });
        }
    }
    // Handshake parity: total load is twice the total weight.
    if targets.iter().map(|&t| u64::from(t)).sum::<u64>() % 2 == 1 {
        return Ok(None);
    }
    let dp = Dp::new(n, k)?;
    let edges = g.edges();
    let m = edges.len();
    let rem = suffix_incidence(n, &edges);
    if (0..n).any(|v| u64::from(targets[v]) > u64::from(k) * u64::from(rem[0][v])) {
        return Ok(None);
    }
    let init: u64 = (0..n).map(|v| u64::from(targets[v]) * dp.pow[v]).sum();

    // Forward pass over remaining-demand states. A state survives layer i
    // only while each endpoint's demand is coverable by its unprocessed
    // incident edges; untouched vertices stay valid by induction.
    let mut layers: Vec<HashSet<u64>> = Vec::with_capacity(m + 1);
    layers.push(HashSet::from([init]));
    let mut stored: u64 = 1;
    for (i, &(u, v)) in edges.iter().enumerate() {
        let mut next = HashSet::new();
        let cap_u = u64::from(k) * u64::from(rem[i + 1][u]);
        let cap_v = u64::from(k) * u64::from(rem[i + 1][v]);
        for &st in &layers[i] {
            let cap = dp.digit(st, u).min(dp.digit(st, v));
            for w in 0..=cap {
                let nxt = st - w * (dp.pow[u] + dp.pow[v]);
                if dp.digit(nxt, u) <= cap_u && dp.digit(nxt, v) <= cap_v {
                    next.insert(nxt);
                }
            }
        }
        stored += next.len() as u64;
        if stored > STATE_BUDGET {
            return Err(MatchingError::Budget {
                states: u128::from(stored),
                budget: STATE_BUDGET,
            });
        }
        layers.push(next);
    }
    if !layers[m].contains(&0) {
        return Ok(None);
    }

    // Backward co-reachability toward the fully drained state, then a
    // forward walk taking the smallest feasible weight at each edge.
    let mut co: Vec<HashSet<u64>> = vec![HashSet::new(); m + 1];
    co[m].insert(0);
    for i in (0..m).rev() {
        let (u, v) = edges[i];
        let mut set = HashSet::new();
        for &st in &layers[i] {
            let cap = dp.digit(st, u).min(dp.digit(st, v));
            if (0..=cap).any(|w| co[i + 1].contains(&(st - w * (dp.pow[u] + dp.pow[v])))) {
                set.insert(st);
            }
        }
        co[i] = set;
    }
    debug_assert!(co[0].contains(&init));

    let mut weights = Vec::new();
    let mut st = init;
    for (i, &(u, v)) in edges.iter().enumerate() {
        let cap = dp.digit(st, u).min(dp.digit(st, v));
        for w in 0..=cap {
            let nxt = st - w * (dp.pow[u] + dp.pow[v]);
            if co[i + 1].contains(&nxt) {
                if w > 0 {
                    weights.push((u, v, w as u32));
                }
                st = nxt;
                break;
            }
        }
    }
    debug_assert_eq!(st, 0);
    let witness = KMatching { k, n, weights };
    debug_assert_eq!(&witness.loads()[..], targets);
    debug_assert!(verify_matching(g, &witness));
    Ok(Some(witness))
}

/// The witness-based criticality check: for every vertex `v` there must
/// exist a k-matching with load exactly `k - d` at `v` and exactly `k`
/// everywhere else. On failure, `violating_set` holds the first vertex
/// (by index) with no such matching.
pub fn is_kd_critical_witness(g: &Graph, k: u32, d: u32) -> Result<CriticalityVerdict, MatchingError> {
    validate_kd(g, k, d)?;
    let n = g.order();
    for v in 0..n {
        let mut targets = vec![k; n];
        targets[v] = k - d;
        if constrained_matching(g, k, &targets)?.is_none() {
            return Ok(CriticalityVerdict {
                property: PropertyKind::KdCritical,
                k,
                d: Some(d),
                holds: false,
                violating_set: Some(vec![v]),
            });
        }
    }
    Ok(CriticalityVerdict {
        property: PropertyKind::KdCritical,
        k,
        d: Some(d),
        holds: true,
        violating_set: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force reference: tries every weight vector in (k+1)^{|E|}.
    fn naive_mu(g: &Graph, k: u32) -> u64 {
        let edges = g.edges();
        let mut best = 0u64;
        let mut weights = vec![0u32; edges.len()];
        loop {
            let mut loads = vec![0u64; g.order()];
            for (i, &(u, v)) in edges.iter().enumerate() {
                loads[u] += u64::from(weights[i]);
                loads[v] += u64::from(weights[i]);
            }
            if loads.iter().all(|&l| l <= u64::from(k)) {
                best = best.max(weights.iter().map(|&w| u64::from(w)).sum());
            }
            let mut i = 0;
            loop {
                if i == weights.len() {
                    return best;
                }
                if weights[i] < k {
                    weights[i] += 1;
                    break;
                }
                weights[i] = 0;
                i += 1;
            }
        }
    }

    fn naive_constrained(g: &Graph, k: u32, targets: &[u32]) -> bool {
        let edges = g.edges();
        let mut weights = vec![0u32; edges.len()];
        loop {
            let mut loads = vec![0u32; g.order()];
            for (i, &(u, v)) in edges.iter().enumerate() {
                loads[u] += weights[i];
                loads[v] += weights[i];
            }
            if loads == targets {
                return true;
            }
            let mut i = 0;
            loop {
                if i == weights.len() {
                    return false;
                }
                if weights[i] < k {
                    weights[i] += 1;
                    break;
                }
                weights[i] = 0;
                i += 1;
            }
        }
    }

    fn star(leaves: usize) -> Graph {
        Graph::empty(1)
            .unwrap()
            .join(&Graph::empty(leaves).unwrap())
            .unwrap()
    }

    #[test]
    fn single_edge_carries_k() {
        let (value, m) = mu_k(&Graph::complete(2).unwrap(), 5).unwrap();
        assert_eq!(value, 5);
        assert_eq!(m.weights, vec![(0, 1, 5)]);
    }

    #[test]
    fn triangle_maximum_and_tiebreak() {
        // Loads sum to at most 3*3, so the total weight is at most 4. The
        // smallest weight vector achieving it is (1, 1, 2) in edge order.
        let (value, m) = mu_k(&Graph::complete(3).unwrap(), 3).unwrap();
        assert_eq!(value, 4);
        assert_eq!(m.weights, vec![(0, 1, 1), (0, 2, 1), (1, 2, 2)]);
        assert_eq!(m.loads(), vec![2, 3, 3]);
    }

    #[test]
    fn star_is_center_bound() {
        let (value, _) = mu_k(&star(3), 3).unwrap();
        assert_eq!(value, 3);
    }

    #[test]
    fn constrained_examples() {
        // K_4 with loads (1, 3, 3, 3): realizable.
        let m = constrained_matching(&Graph::complete(4).unwrap(), 3, &[1, 3, 3, 3])
            .unwrap()
            .expect("realizable");
        assert_eq!(m.loads(), vec![1, 3, 3, 3]);
        assert!(verify_matching(&Graph::complete(4).unwrap(), &m));

        // Odd total load fails the handshake parity immediately.
        assert!(constrained_matching(&Graph::complete(4).unwrap(), 3, &[1, 3, 3, 2])
            .unwrap()
            .is_none());

        // An isolated vertex cannot carry a positive load.
        let lonely = Graph::complete(2)
            .unwrap()
            .disjoint_union(&Graph::empty(1).unwrap())
            .unwrap();
        assert!(constrained_matching(&lonely, 3, &[1, 1, 2])
            .unwrap()
            .is_none());
        assert!(constrained_matching(&lonely, 3, &[2, 2, 0])
            .unwrap()
            .is_some());
    }

    #[test]
    fn witness_criticality_examples() {
        assert!(is_kd_critical_witness(&Graph::complete(3).unwrap(), 3, 3)
            .unwrap()
            .holds);
        assert!(is_kd_critical_witness(&Graph::complete(4).unwrap(), 3, 2)
            .unwrap()
            .holds);
        let v = is_kd_critical_witness(&star(2), 3, 1).unwrap();
        assert!(!v.holds);
        assert_eq!(v.violating_set, Some(vec![0]));
    }

    #[test]
    fn dp_matches_naive_on_small_graphs() {
        // Every labeled graph on 4 vertices, all k in {1, 2, 3}; both the
        // maximum and a panel of exact-load targets.
        for mask in 0u32..64 {
            let mut g = Graph::empty(4).unwrap();
            let mut bit = 0;
            for u in 0..4 {
                for v in (u + 1)..4 {
                    if mask & (1 << bit) != 0 {
                        g.add_edge(u, v);
                    }
                    bit += 1;
                }
            }
            for k in 1..=3u32 {
                let (value, witness) = mu_k(&g, k).unwrap();
                assert_eq!(value, naive_mu(&g, k), "mu mismatch mask={mask} k={k}");
                assert!(verify_matching(&g, &witness));
                assert_eq!(witness.total_weight(), value);

                for targets in [
                    vec![k; 4],
                    vec![k - 1, k, k, k],
                    vec![0, k, k, 0],
                    vec![k, k.saturating_sub(2), k, k],
                ] {
                    let got = constrained_matching(&g, k, &targets).unwrap();
                    let want = naive_constrained(&g, k, &targets);
                    assert_eq!(got.is_some(), want, "targets={targets:?} mask={mask} k={k}");
                    if let Some(m) = got {
                        assert_eq!(m.loads(), targets);
                        assert!(verify_matching(&g, &m));
                    }
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = Graph::empty(30).unwrap();
        assert!(matches!(
            mu_k(&g, 3),
            Err(MatchingError::Budget { .. })
        ));
    }

    #[test]
    fn verify_rejects_malformed() {
        let g = Graph::complete(3).unwrap();
        let ok = KMatching { k: 3, n: 3, weights: vec![(0, 1, 2)] };
        assert!(verify_matching(&g, &ok));
        // Zero weight entries are not representable.
        let zero = KMatching { k: 3, n: 3, weights: vec![(0, 1, 0)] };
        assert!(!verify_matching(&g, &zero));
        // Weight beyond k.
        let heavy = KMatching { k: 3, n: 3, weights: vec![(0, 1, 4)] };
        assert!(!verify_matching(&g, &heavy));
        // Non-edge.
        let h = star(2);
        let stray = KMatching { k: 3, n: 3, weights: vec![(1, 2, 1)] };
        assert!(!verify_matching(&h, &stray));
        // Load over k at the shared vertex.
        let overload = KMatching { k: 3, n: 3, weights: vec![(0, 1, 2), (0, 2, 2)] };
        assert!(!verify_matching(&g, &overload));
        // Unsorted edges.
        let unsorted = KMatching { k: 3, n: 3, weights: vec![(0, 2, 1), (0, 1, 1)] };
        assert!(!verify_matching(&g, &unsorted));
    }

    #[test]
    fn serialization_shape() {
        let m = KMatching { k: 3, n: 3, weights: vec![(0, 1, 1), (1, 2, 2)] };
        let json = serde_json::to_value(&m).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"k": 3, "weights": [[0, 1, 1], [1, 2, 2]]})
        );
    }
}
