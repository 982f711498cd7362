//! Isomorph-free enumeration of all small graphs.
//!
//! Level `n` is built from level `n-1` by attaching one new vertex with
//! every possible neighborhood and keeping one representative per
//! canonical key. Every graph on `n` vertices restricted away from its
//! last vertex is a graph on `n-1` vertices, so the augmentation sweep
//! reaches every isomorphism class. Levels are cached per process and
//! emitted in canonical-key order, which makes downstream sweeps
//! deterministic.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use thiserror::Error;

use crate::graph::Graph;
use crate::iso::canonical_key;

/// Largest order the in-process enumerator will expand.
pub const MAX_ENUM_VERTICES: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    #[error(
        "enumeration is capped at {max} vertices (got {n}); larger orders \
         need an explicit graph6 corpus file"
    )]
    OrderTooLarge { n: usize, max: usize },
}

const LEVEL: OnceLock<Vec<Graph>> = OnceLock::new();
static LEVELS: [OnceLock<Vec<Graph>>; MAX_ENUM_VERTICES + 1] = [LEVEL; MAX_ENUM_VERTICES + 1];

fn level(n: usize) -> &'static [Graph] {
    LEVELS[n].get_or_init(|| {
        if n == 0 {
            return vec![Graph::empty(0).expect("order 0 fits")];
        }
        let mut keys = BTreeSet::new();
        for g in level(n - 1) {
            let base = g
                .disjoint_union(&Graph::empty(1).expect("order 1 fits"))
                .expect("stays within the order cap");
            for mask in 0u64..(1 << (n - 1)) {
                let mut h = base.clone();
                for v in 0..(n - 1) {
                    if mask & (1 << v) != 0 {
                        h.add_edge(v, n - 1);
                    }
                }
                keys.insert(canonical_key(&h));
            }
        }
        keys.into_iter().map(|k| k.to_graph()).collect()
    })
}

/// All graphs on `n` vertices, one per isomorphism class, in canonical
/// order.
pub fn all_graphs(n: usize) -> Result<&'static [Graph], EnumerateError> {
    if n > MAX_ENUM_VERTICES {
        return Err(EnumerateError::OrderTooLarge {
            n,
            max: MAX_ENUM_VERTICES,
        });
    }
    Ok(level(n))
}

/// Feeds every connected graph on `n` vertices with at least `min_edges`
/// edges and minimum degree at least `min_deg` to `sink`, in canonical
/// order. Returns how many graphs were emitted.
pub fn enumerate_connected(
    n: usize,
    min_edges: usize,
    min_deg: usize,
    mut sink: impl FnMut(&Graph),
) -> Result<usize, EnumerateError> {
    let mut count = 0;
    for g in all_graphs(n)? {
        if !g.is_connected() || g.edge_count() < min_edges {
            continue;
        }
        if !g.min_degree().map_or(min_deg == 0, |d| d >= min_deg) {
            continue;
        }
        count += 1;
        sink(g);
    }
    Ok(count)
}
