//! Undirected simple graphs on at most 64 vertices.
//!
//! Each vertex stores its neighborhood as one `u64` bitset, which keeps
//! subset-heavy algorithms (component scans over `G - S`, induced
//! subgraphs, joins) down to a handful of word operations.

use std::fmt;

use thiserror::Error;

/// Hard cap on the number of vertices, set by the bitset width.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph order {n} exceeds the supported maximum of {MAX_VERTICES} vertices")]
    TooManyVertices { n: usize },
    #[error("vertex index {v} out of range for a graph of order {n}")]
    VertexOutOfRange { v: usize, n: usize },
}

/// An undirected simple graph with vertices `0..order`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

#[inline]
fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Bitmask with the low `n` bits set; valid for `n <= 64`.
#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Graph {
    /// The graph on `n` vertices with no edges. `n = 0` is the null graph,
    /// which acts as the neutral element for `disjoint_union`.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices { n });
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        let all = low_mask(n);
        for v in 0..n {
            g.adj[v] = all & !bit(v);
        }
        Ok(g)
    }

    /// The complete bipartite graph `K_{a,b}`, with the `a`-side first.
    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self, GraphError> {
        let g = Graph::empty(a)?.join(&Graph::empty(b)?)?;
        Ok(g)
    }

    /// Builds a graph from an explicit edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { v: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { v, n });
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    /// Neighborhood of `v` as a bitset.
    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        debug_assert!(v < self.n);
        self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        self.adj[u] & bit(v) != 0
    }

    /// Inserts the edge `{u, v}`. Loops are rejected by debug assertion;
    /// inserting an existing edge is a no-op.
    #[inline]
    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u < self.n && v < self.n && u != v);
        self.adj[u] |= bit(v);
        self.adj[v] |= bit(u);
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        let total: u32 = self.adj.iter().map(|a| a.count_ones()).sum();
        (total / 2) as usize
    }

    /// Edges as `(u, v)` pairs with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            let mut t = self.adj[u] & !low_mask(u + 1);
            while t != 0 {
                let v = t.trailing_zeros() as usize;
                out.push((u, v));
                t &= t - 1;
            }
        }
        out
    }

    /// Minimum degree, or `None` for the null graph.
    pub fn min_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| self.degree(v)).min()
    }

    /// The complement graph on the same vertex set.
    pub fn complement(&self) -> Graph {
        let all = low_mask(self.n);
        let adj = (0..self.n)
            .map(|v| all & !self.adj[v] & !bit(v))
            .collect();
        Graph { n: self.n, adj }
    }

    /// Disjoint union, with `other`'s vertices relabeled after `self`'s.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let n = self.n + other.n;
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices { n });
        }
        let mut adj = Vec::with_capacity(n);
        adj.extend_from_slice(&self.adj);
        adj.extend(other.adj.iter().map(|a| a << self.n));
        Ok(Graph { n, adj })
    }

    /// Join: disjoint union plus every edge between the two sides.
    pub fn join(&self, other: &Graph) -> Result<Graph, GraphError> {
        let mut g = self.disjoint_union(other)?;
        let left = low_mask(self.n);
        let right = low_mask(g.n) & !left;
        for v in 0..self.n {
            g.adj[v] |= right;
        }
        for v in self.n..g.n {
            g.adj[v] |= left;
        }
        Ok(g)
    }

    /// Deletes the vertices of `s`, relabeling the survivors in ascending
    /// original order.
    pub fn induced_delete(&self, s: &[usize]) -> Result<Graph, GraphError> {
        let mut mask = 0u64;
        for &v in s {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange { v, n: self.n });
            }
            mask |= bit(v);
        }
        Ok(self.delete_mask(mask))
    }

    /// `induced_delete` with the doomed set given as a bitmask.
    pub(crate) fn delete_mask(&self, mask: u64) -> Graph {
        let keep = low_mask(self.n) & !mask;
        let map: Vec<usize> = (0..self.n).filter(|&v| keep & bit(v) != 0).collect();
        let mut g = Graph {
            n: map.len(),
            adj: vec![0; map.len()],
        };
        for (new_u, &old_u) in map.iter().enumerate() {
            let mut t = self.adj[old_u] & keep;
            while t != 0 {
                let old_v = t.trailing_zeros() as usize;
                // Survivors keep their relative order, so the new index is
                // the rank of old_v within keep.
                let new_v = (keep & low_mask(old_v)).count_ones() as usize;
                g.adj[new_u] |= bit(new_v);
                t &= t - 1;
            }
        }
        g
    }

    /// Bitset of the component containing `start`, restricted to `within`.
    pub(crate) fn component_of(&self, start: usize, within: u64) -> u64 {
        debug_assert!(within & bit(start) != 0);
        let mut comp = bit(start);
        let mut frontier = comp;
        while frontier != 0 {
            let mut grow = 0u64;
            let mut t = frontier;
            while t != 0 {
                let v = t.trailing_zeros() as usize;
                grow |= self.adj[v] & within;
                t &= t - 1;
            }
            frontier = grow & !comp;
            comp |= grow;
        }
        comp
    }

    /// Component structure of the induced subgraph on `within`.
    pub(crate) fn component_stats_within(&self, within: u64) -> ComponentStats {
        let mut sizes = Vec::new();
        let mut seen = 0u64;
        let mut rest = within;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            let comp = self.component_of(v, within);
            sizes.push(comp.count_ones() as usize);
            seen |= comp;
            rest = within & !seen;
        }
        sizes.sort_unstable();
        let isolated = sizes.iter().filter(|&&s| s == 1).count();
        let odd_nontrivial = sizes.iter().filter(|&&s| s >= 3 && s % 2 == 1).count();
        ComponentStats {
            component_sizes: sizes,
            odd_nontrivial,
            isolated,
        }
    }

    /// Component sizes plus the two counts the deficiency formula needs:
    /// isolated vertices, and odd components of order at least 3.
    pub fn component_stats(&self) -> ComponentStats {
        self.component_stats_within(low_mask(self.n))
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let all = low_mask(self.n);
        self.component_of(0, all) == all
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Component census of a graph (or of `G - S`).
///
/// `isolated` counts order-1 components; `odd_nontrivial` counts odd
/// components of order at least 3. The two never overlap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentStats {
    /// Sorted multiset of component orders.
    pub component_sizes: Vec<usize>,
    pub odd_nontrivial: usize,
    pub isolated: usize,
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
    fn complete_graph_degrees() {
        let g = Graph::complete(5).unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(g.edge_count(), 10);
        assert_eq!(g.min_degree(), Some(4));
        assert!(g.is_connected());
    }

    #[test]
    fn null_graph_is_neutral_for_disjoint_union() {
        let e3 = Graph::empty(3).unwrap();
        let k0 = Graph::complete(0).unwrap();
        let u = k0.disjoint_union(&e3).unwrap();
        assert_eq!(u, e3);
        assert_eq!(e3.min_degree(), Some(0));
        assert_eq!(k0.min_degree(), None);
    }

    #[test]
    fn join_of_stars_and_cliques() {
        let s = star(2);
        assert_eq!(s.edges(), vec![(0, 1), (0, 2)]);
        let k4 = Graph::complete(2)
            .unwrap()
            .join(&Graph::complete(2).unwrap())
            .unwrap();
        assert_eq!(k4, Graph::complete(4).unwrap());
    }

    #[test]
    fn join_edge_count_formula() {
        // e(G1 v G2) = e(G1) + e(G2) + n1*n2 across a small deterministic sweep.
        for n1 in 0..5usize {
            for n2 in 0..5usize {
                let g1 = Graph::complete(n1).unwrap();
                let g2 = Graph::empty(n2).unwrap();
                let j = g1.join(&g2).unwrap();
                assert_eq!(j.edge_count(), g1.edge_count() + g2.edge_count() + n1 * n2);
            }
        }
    }

    #[test]
    fn join_order_overflow() {
        let a = Graph::empty(40).unwrap();
        let b = Graph::empty(30).unwrap();
        assert_eq!(
            a.join(&b).unwrap_err(),
            GraphError::TooManyVertices { n: 70 }
        );
    }

    #[test]
    fn complement_of_star_is_clique_plus_isolated() {
        let g = star(3).complement();
        let stats = g.component_stats();
        assert_eq!(stats.component_sizes, vec![1, 3]);
        assert_eq!(stats.isolated, 1);
        assert_eq!(stats.odd_nontrivial, 1);
        // Leaves became a triangle; the old center is the isolated vertex.
        assert!(g.has_edge(1, 2) && g.has_edge(1, 3) && g.has_edge(2, 3));
        assert_eq!(g.degree(0), 0);
    }

    #[test]
    fn complement_is_involutive() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (4, 5), (0, 5)]).unwrap();
        assert_eq!(g.complement().complement(), g);
    }

    #[test]
    fn component_census_examples() {
        let k5_plus_k1 = Graph::complete(5)
            .unwrap()
            .disjoint_union(&Graph::empty(1).unwrap())
            .unwrap();
        let stats = k5_plus_k1.component_stats();
        assert_eq!(stats.component_sizes, vec![1, 5]);
        assert_eq!(stats.odd_nontrivial, 1);
        assert_eq!(stats.isolated, 1);

        let mixed = Graph::complete(3)
            .unwrap()
            .disjoint_union(&Graph::complete(2).unwrap())
            .unwrap()
            .disjoint_union(&Graph::empty(1).unwrap())
            .unwrap();
        let stats = mixed.component_stats();
        assert_eq!(stats.component_sizes, vec![1, 2, 3]);
        assert_eq!(stats.odd_nontrivial, 1);
        assert_eq!(stats.isolated, 1);

        let k1 = Graph::empty(1).unwrap();
        let stats = k1.component_stats();
        assert_eq!(stats.isolated, 1);
        assert_eq!(stats.odd_nontrivial, 0);
    }

    #[test]
    fn induced_delete_remaps_ascending() {
        // Path 0-1-2-3-4; deleting {1, 3} leaves three isolated vertices
        // relabeled 0, 1, 2 from the original 0, 2, 4.
        let p5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let g = p5.induced_delete(&[1, 3]).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.edge_count(), 0);

        // Deleting the star center isolates the leaves.
        let g = star(3).induced_delete(&[0]).unwrap();
        assert_eq!(g.component_stats().isolated, 3);

        assert_eq!(
            star(3).induced_delete(&[7]).unwrap_err(),
            GraphError::VertexOutOfRange { v: 7, n: 4 }
        );
    }

    #[test]
    fn induced_delete_preserves_adjacency_among_survivors() {
        let g = Graph::from_edges(6, &[(0, 2), (0, 5), (2, 5), (1, 3), (3, 4)]).unwrap();
        let h = g.induced_delete(&[1, 3]).unwrap();
        // Survivors 0,2,4,5 -> 0,1,2,3; the triangle {0,2,5} survives as {0,1,3}.
        assert_eq!(h.edges(), vec![(0, 1), (0, 3), (1, 3)]);
    }

    #[test]
    fn connectivity_checks() {
        assert!(Graph::empty(1).unwrap().is_connected());
        assert!(Graph::empty(0).unwrap().is_connected());
        assert!(!Graph::empty(2).unwrap().is_connected());
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(p3.is_connected());
    }

    #[test]
    fn order_cap_is_enforced() {
        assert!(Graph::empty(64).is_ok());
        assert_eq!(
            Graph::empty(65).unwrap_err(),
            GraphError::TooManyVertices { n: 65 }
        );
    }

    #[test]
    fn handshake_sum_matches_edge_count() {
        let g = Graph::from_edges(7, &[(0, 1), (0, 2), (1, 2), (3, 4), (5, 6), (2, 5)]).unwrap();
        let degree_sum: usize = (0..g.order()).map(|v| g.degree(v)).sum();
        assert_eq!(degree_sum, 2 * g.edge_count());
    }
}
