//! Isomorphism machinery: a canonical form for de-duplicating small
//! graphs, and a certified isomorphism search for pairs of larger ones.
//!
//! The canonical form is the lexicographically smallest upper-triangle
//! bitstring (column-major pair order, as in graph6 bodies) over all
//! vertex relabelings, found by depth-first placement with prefix
//! pruning. Cost grows with the automorphism group, so callers keep it
//! to small orders; `is_isomorphic` avoids full canonicalization and
//! scales further.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::graph::Graph;

/// Canonical upper-triangle bitstring of a graph, packed MSB-first into
/// 64-bit words. Two graphs are isomorphic iff their keys are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    n: usize,
    words: Vec<u64>,
}

impl CanonicalKey {
    pub fn order(&self) -> usize {
        self.n
    }

    /// Rebuilds the representative graph from the key.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::empty(self.n).expect("key order within bounds");
        let mut idx = 0;
        for v in 1..self.n {
            for u in 0..v {
                if self.words[idx >> 6] & (1u64 << (63 - (idx & 63))) != 0 {
                    g.add_edge(u, v);
                }
                idx += 1;
            }
        }
        g
    }
}

fn word_count(n: usize) -> usize {
    let bits = n * (n - 1) / 2;
    bits.div_ceil(64)
}

/// Writes the low `nbits` of `val` at bit offsets `start..start+nbits`,
/// most significant first. `nbits == 0` writes nothing.
fn write_bits(words: &mut [u64], start: usize, nbits: usize, val: u64) {
    for i in 0..nbits {
        if val & (1u64 << (nbits - 1 - i)) != 0 {
            let idx = start + i;
            words[idx >> 6] |= 1u64 << (63 - (idx & 63));
        }
    }
}

fn clear_bits(words: &mut [u64], start: usize, nbits: usize) {
    for i in 0..nbits {
        let idx = start + i;
        words[idx >> 6] &= !(1u64 << (63 - (idx & 63)));
    }
}

/// Compares the first `bits` logical bits. `cur` must be zero beyond the
/// prefix; `best` is masked explicitly.
fn cmp_prefix(cur: &[u64], best: &[u64], bits: usize) -> Ordering {
    let full = bits >> 6;
    for w in 0..full {
        match cur[w].cmp(&best[w]) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    let rem = bits & 63;
    if rem > 0 {
        let mask = !(u64::MAX >> rem);
        return cur[full].cmp(&(best[full] & mask));
    }
    Ordering::Equal
}

struct CanonSearch<'a> {
    g: &'a Graph,
    n: usize,
    chosen: Vec<usize>,
    used: u64,
    cur: Vec<u64>,
    best: Vec<u64>,
}

impl CanonSearch<'_> {
    /// Column bits a candidate would contribute at the next position:
    /// adjacency to the already-placed vertices, earliest most
    /// significant. Smaller values are lexicographically preferable.
    fn column_value(&self, x: usize) -> u64 {
        let j = self.chosen.len();
        let mut val = 0u64;
        for (i, &c) in self.chosen.iter().enumerate() {
            if self.g.has_edge(c, x) {
                val |= 1u64 << (j - 1 - i);
            }
        }
        val
    }

    fn descend(&mut self) {
        let j = self.chosen.len();
        let mut cands: Vec<(u64, usize)> = (0..self.n)
            .filter(|&x| self.used & (1u64 << x) == 0)
            .map(|x| (self.column_value(x), x))
            .collect();
        cands.sort_unstable();
        let start = j * (j.saturating_sub(1)) / 2;
        for (val, x) in cands {
            write_bits(&mut self.cur, start, j, val);
            let ord = cmp_prefix(&self.cur, &self.best, start + j);
            if ord != Ordering::Greater {
                self.chosen.push(x);
                self.used |= 1u64 << x;
                if self.chosen.len() == self.n {
                    if ord == Ordering::Less {
                        self.best.copy_from_slice(&self.cur);
                    }
                } else {
                    self.descend();
                }
                self.used &= !(1u64 << x);
                self.chosen.pop();
            }
            clear_bits(&mut self.cur, start, j);
        }
    }
}

/// Lexicographically minimal relabeling of `g`, as a packed bitstring.
pub fn canonical_key(g: &Graph) -> CanonicalKey {
    let n = g.order();
    let mut best = vec![0u64; word_count(n)];
    if n < 2 {
        return CanonicalKey { n, words: best };
    }
    // Seed with the identity labeling so pruning bites from the start.
    let mut idx = 0;
    for v in 1..n {
        for u in 0..v {
            if g.has_edge(u, v) {
                best[idx >> 6] |= 1u64 << (63 - (idx & 63));
            }
            idx += 1;
        }
    }
    let mut search = CanonSearch {
        g,
        n,
        chosen: Vec::with_capacity(n),
        used: 0,
        cur: vec![0u64; word_count(n)],
        best,
    };
    search.descend();
    CanonicalKey { n, words: search.best }
}

/// Canonical representative of the isomorphism class of `g`.
pub fn canonical_graph(g: &Graph) -> Graph {
    canonical_key(g).to_graph()
}

/// Iterated neighborhood refinement: vertices end up in the same class
/// only if no round of (own class, multiset of neighbor classes) tells
/// them apart. Classes are numbered consistently across both graphs when
/// called with the concatenation trick below.
fn refine_colors(graphs: [&Graph; 2]) -> [Vec<u64>; 2] {
    let mut colors: [Vec<u64>; 2] =
        [0, 1].map(|s| (0..graphs[s].order()).map(|v| graphs[s].degree(v) as u64).collect());
    let rounds = graphs[0].order().max(graphs[1].order());
    for _ in 0..rounds {
        let mut table: BTreeMap<(u64, Vec<u64>), u64> = BTreeMap::new();
        let mut sigs: [Vec<(u64, Vec<u64>)>; 2] = [Vec::new(), Vec::new()];
        for s in 0..2 {
            for v in 0..graphs[s].order() {
                let mut nb: Vec<u64> = (0..graphs[s].order())
                    .filter(|&u| graphs[s].has_edge(u, v))
                    .map(|u| colors[s][u])
                    .collect();
                nb.sort_unstable();
                sigs[s].push((colors[s][v], nb));
            }
        }
        for s in 0..2 {
            for sig in &sigs[s] {
                let next = table.len() as u64;
                table.entry(sig.clone()).or_insert(next);
            }
        }
        let new: [Vec<u64>; 2] =
            [0, 1].map(|s| sigs[s].iter().map(|sig| table[sig]).collect());
        if new == colors {
            break;
        }
        colors = new;
    }
    colors
}

fn extend_mapping(
    a: &Graph,
    b: &Graph,
    order: &[usize],
    colors: &[Vec<u64>; 2],
    map: &mut Vec<Option<usize>>,
    used: &mut u64,
) -> bool {
    let depth = order.iter().filter(|&&v| map[v].is_some()).count();
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..b.order() {
        if *used & (1u64 << w) != 0 || colors[0][v] != colors[1][w] {
            continue;
        }
        let consistent = (0..a.order()).all(|u| match map[u] {
            Some(mu) => a.has_edge(u, v) == b.has_edge(mu, w),
            None => true,
        });
        if consistent {
            map[v] = Some(w);
            *used |= 1u64 << w;
            if extend_mapping(a, b, order, colors, map, used) {
                return true;
            }
            *used &= !(1u64 << w);
            map[v] = None;
        }
    }
    false
}

/// Searches for an isomorphism from `a` to `b`. Returns a verified
/// vertex mapping (`result[v]` is the image of `v`) or `None`.
pub fn is_isomorphic(a: &Graph, b: &Graph) -> Option<Vec<usize>> {
    if a.order() != b.order() || a.edge_count() != b.edge_count() {
        return None;
    }
    let n = a.order();
    if n == 0 {
        return Some(Vec::new());
    }
    let colors = refine_colors([a, b]);
    let mut hist: [Vec<u64>; 2] = [colors[0].clone(), colors[1].clone()];
    hist[0].sort_unstable();
    hist[1].sort_unstable();
    if hist[0] != hist[1] {
        return None;
    }

    // Map rare color classes first; they branch least.
    let mut class_size: BTreeMap<u64, usize> = BTreeMap::new();
    for &c in &colors[0] {
        *class_size.entry(c).or_insert(0) += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (class_size[&colors[0][v]], colors[0][v], v));

    let mut map = vec![None; n];
    let mut used = 0u64;
    if !extend_mapping(a, b, &order, &colors, &mut map, &mut used) {
        return None;
    }
    let mapping: Vec<usize> = map.into_iter().map(|m| m.expect("complete")).collect();
    // Certify before handing out.
    for u in 0..n {
        for v in (u + 1)..n {
            if a.has_edge(u, v) != b.has_edge(mapping[u], mapping[v]) {
                return None;
            }
        }
    }
    Some(mapping)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((0, n - 1));
        Graph::from_edges(n, &edges).unwrap()
    }

    fn permuted(g: &Graph, perm: &[usize]) -> Graph {
        let mut h = Graph::empty(g.order()).unwrap();
        for (u, v) in g.edges() {
            h.add_edge(perm[u], perm[v]);
        }
        h
    }

    fn xorshift(state: &mut u64) -> u64 {
        *state ^= *state << 13;
        *state ^= *state >> 7;
        *state ^= *state << 17;
        *state
    }

    fn random_perm(n: usize, state: &mut u64) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = (xorshift(state) % (i as u64 + 1)) as usize;
            p.swap(i, j);
        }
        p
    }

    #[test]
    fn key_is_relabeling_invariant() {
        let mut state = 0x3141_5926_5358_9793u64;
        for g in [
            path(6),
            cycle(7),
            Graph::complete_bipartite(3, 4).unwrap(),
            Graph::complete(5).unwrap().join(&Graph::empty(3).unwrap()).unwrap(),
        ] {
            let key = canonical_key(&g);
            for _ in 0..20 {
                let p = random_perm(g.order(), &mut state);
                assert_eq!(canonical_key(&permuted(&g, &p)), key);
            }
        }
    }

    #[test]
    fn canonical_graph_is_isomorphic_to_input() {
        for g in [path(5), cycle(6), Graph::complete_bipartite(2, 3).unwrap()] {
            let c = canonical_graph(&g);
            assert_eq!(c.order(), g.order());
            assert_eq!(c.edge_count(), g.edge_count());
            assert!(is_isomorphic(&g, &c).is_some());
        }
    }

    #[test]
    fn distinct_classes_on_four_vertices() {
        // All 64 labeled graphs on 4 vertices collapse to 11 classes.
        let mut keys = std::collections::HashSet::new();
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
            keys.insert(canonical_key(&g));
        }
        assert_eq!(keys.len(), 11);
    }

    #[test]
    fn mapping_is_a_genuine_isomorphism() {
        let mut state = 0xdead_beef_cafe_f00du64;
        let g = Graph::complete(3)
            .unwrap()
            .join(&Graph::empty(2).unwrap())
            .unwrap()
            .disjoint_union(&path(3))
            .unwrap();
        for _ in 0..10 {
            let p = random_perm(g.order(), &mut state);
            let h = permuted(&g, &p);
            let m = is_isomorphic(&g, &h).expect("isomorphic by construction");
            for u in 0..g.order() {
                for v in (u + 1)..g.order() {
                    assert_eq!(g.has_edge(u, v), h.has_edge(m[u], m[v]));
                }
            }
        }
    }

    #[test]
    fn regular_impostors_are_rejected() {
        // Two 2-regular graphs on 6 vertices that refinement alone cannot
        // separate: the hexagon versus two triangles.
        let two_triangles = Graph::complete(3)
            .unwrap()
            .disjoint_union(&Graph::complete(3).unwrap())
            .unwrap();
        assert!(is_isomorphic(&cycle(6), &two_triangles).is_none());
        assert_ne!(canonical_key(&cycle(6)), canonical_key(&two_triangles));

        // Two 3-regular graphs on 6 vertices: K_{3,3} versus the prism.
        let prism = Graph::from_edges(
            6,
            &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap();
        assert!(is_isomorphic(&Graph::complete_bipartite(3, 3).unwrap(), &prism).is_none());
    }

    #[test]
    fn cheap_rejections() {
        assert!(is_isomorphic(&path(4), &path(5)).is_none());
        assert!(is_isomorphic(&path(4), &cycle(4)).is_none());
        let empty = Graph::empty(0).unwrap();
        assert_eq!(is_isomorphic(&empty, &empty), Some(Vec::new()));
    }

    #[test]
    fn key_roundtrip_through_graph() {
        for g in [cycle(5), path(7), Graph::complete(4).unwrap()] {
            let key = canonical_key(&g);
            assert_eq!(canonical_key(&key.to_graph()), key);
        }
    }
}
