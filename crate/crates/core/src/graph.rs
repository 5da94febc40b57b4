//! Simple undirected graphs on `0..n` with bitset adjacency rows, plus the
//! generators used throughout the crate.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// A labeled simple graph. Equality compares labeled graphs; isomorphism is
/// never implied.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    edges: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
            edges: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert(u, v);
            }
        }
        g
    }

    /// Builds a graph from an edge list, rejecting loops, duplicate edges and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.try_insert(u, v)?;
        }
        Ok(g)
    }

    pub(crate) fn try_insert(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidGraph(format!(
                "edge {{{u},{v}}} has an endpoint outside 0..{}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
        }
        if self.has_edge(u, v) {
            return Err(Error::InvalidGraph(format!("duplicate edge {{{u},{v}}}")));
        }
        self.insert(u, v);
        Ok(())
    }

    fn insert(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && !self.has_edge(u, v));
        self.rows[u * self.words + v / WORD] |= 1 << (v % WORD);
        self.rows[v * self.words + u / WORD] |= 1 << (u % WORD);
        self.edges += 1;
    }

    pub(crate) fn remove(&mut self, u: usize, v: usize) {
        debug_assert!(self.has_edge(u, v));
        self.rows[u * self.words + v / WORD] &= !(1 << (v % WORD));
        self.rows[v * self.words + u / WORD] &= !(1 << (u % WORD));
        self.edges -= 1;
    }

    /// Number of vertices, v(G).
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of edges, e(G).
    pub fn size(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / WORD] >> (v % WORD) & 1 == 1
    }

    /// Bitset row of `u`; bit `v` is set iff `{u,v}` is an edge.
    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.row(u))
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// The graph `H` with `H(perm[u], perm[v]) = G(u, v)`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        check_permutation(perm, self.n)?;
        let mut h = Graph::empty(self.n);
        for (u, v) in self.edges() {
            h.insert(perm[u], perm[v]);
        }
        Ok(h)
    }

    pub fn complement(&self) -> Graph {
        let mut h = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    h.insert(u, v);
                }
            }
        }
        h
    }

    /// Disjoint union; vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let mut g = Graph::empty(self.n + other.n);
        for (u, v) in self.edges() {
            g.insert(u, v);
        }
        for (u, v) in other.edges() {
            g.insert(u + shift, v + shift);
        }
        g
    }

    /// Edge density ρ(G) = 2e(G)/v(G)², as an exact fraction `(2e, n²)`.
    pub fn edge_density_parts(&self) -> (u64, u64) {
        (2 * self.edges as u64, (self.n * self.n) as u64)
    }

    /// Whether some `k` vertices are pairwise adjacent. Exhaustive.
    pub fn contains_clique(&self, k: usize) -> bool {
        fn grow(g: &Graph, candidates: Vec<u64>, need: usize) -> bool {
            if need == 0 {
                return true;
            }
            for v in bits(&candidates).collect::<Vec<_>>() {
                let mut next = candidates.clone();
                for (c, r) in next.iter_mut().zip(g.row(v)) {
                    *c &= r;
                }
                // Only extend with later vertices so each clique is visited once.
                for (idx, c) in next.iter_mut().enumerate() {
                    let lo = idx * WORD;
                    if v + 1 > lo {
                        let cut = (v + 1 - lo).min(WORD);
                        *c &= if cut == WORD { 0 } else { !0u64 << cut };
                    }
                }
                if grow(g, next, need - 1) {
                    return true;
                }
            }
            false
        }
        if k == 0 {
            return true;
        }
        let mut all = vec![0u64; self.words];
        for v in 0..self.n {
            all[v / WORD] |= 1 << (v % WORD);
        }
        grow(self, all, k)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

/// Iterates the set bits of a bitset.
pub(crate) fn bits(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * WORD + b)
            }
        })
    })
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidArgument(format!(
            "permutation has length {}, expected {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidArgument(format!(
                "{perm:?} is not a permutation of 0..{n}"
            )));
        }
    }
    Ok(())
}

/// Turán graph T_r(n): complete r-partite, part sizes ⌊n/r⌋ or ⌈n/r⌉.
/// Vertex `v` lies in part `v % r`.
pub fn turan_graph(r: usize, n: usize) -> Result<Graph> {
    if r == 0 {
        return Err(Error::InvalidArgument("Turán graph needs r >= 1".into()));
    }
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if u % r != v % r {
                g.insert(u, v);
            }
        }
    }
    Ok(g)
}

/// k-fold blow-up G[k]. Copy `c` of vertex `x` is vertex `x*k + c`; copies of
/// adjacent vertices are adjacent, copies of one vertex are not.
pub fn blow_up(g: &Graph, k: usize) -> Result<Graph> {
    if k == 0 {
        return Err(Error::InvalidArgument("blow-up factor must be >= 1".into()));
    }
    let mut b = Graph::empty(g.order() * k);
    for (x, y) in g.edges() {
        for c in 0..k {
            for d in 0..k {
                b.insert(x * k + c, y * k + d);
            }
        }
    }
    Ok(b)
}

/// Uniform random graph G(n, p), deterministic in `seed`. Pairs are visited
/// in lexicographic order, one uniform draw each.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("edge probability {p} outside [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                g.insert(u, v);
            }
        }
    }
    Ok(g)
}

/// Vertex layout of the pair built by [`example_4_1_pair`].
///
/// Indices are laid out as `N_1, ..., N_5` (n vertices each), then
/// `M_1, ..., M_4` (4 each), then `x_1, ..., x_4`. All block indices here are
/// 0-based. The second partition `L` of `M` puts the first two vertices of
/// `M_i` into `L_i` and the last two into `L_{i+1}` (cyclically), so that
/// `|L_i ∩ M_i| = |L_{i+1} ∩ M_i| = 2`.
#[derive(Debug, Clone, Copy)]
pub struct Example41Layout {
    pub n: usize,
}

impl Example41Layout {
    pub fn order(&self) -> usize {
        5 * self.n + 20
    }

    pub fn n_block(&self, j: usize) -> std::ops::Range<usize> {
        j * self.n..(j + 1) * self.n
    }

    pub fn m_block(&self, i: usize) -> std::ops::Range<usize> {
        let base = 5 * self.n + 4 * i;
        base..base + 4
    }

    pub fn l_block(&self, i: usize) -> [usize; 4] {
        let own = self.m_block(i).start;
        let prev = self.m_block((i + 3) % 4).start;
        [own, own + 1, prev + 2, prev + 3]
    }

    pub fn x(&self, i: usize) -> usize {
        5 * self.n + 16 + i
    }
}

/// The separating pair (G, H): equal-order graphs whose edit distance is 22
/// adjacencies but whose fractional overlay distance is smaller by a factor
/// of at least 11/10. Requires `n >= 24`; see [`Example41Layout`] for the
/// vertex ordering. Under the identity bijection the pair differs in exactly
/// 22 adjacencies, which is optimal.
pub fn example_4_1_pair(n: usize) -> Result<(Graph, Graph)> {
    if n < 24 {
        return Err(Error::InvalidArgument(format!("construction needs n >= 24, got {n}")));
    }
    let lay = Example41Layout { n };
    let mut base = Graph::empty(lay.order());
    for u in 0..5 * n {
        for v in u + 1..5 * n {
            base.insert(u, v);
        }
    }
    for i in 0..4 {
        for y in lay.m_block(i) {
            for j in 0..=i {
                for v in lay.n_block(j) {
                    base.insert(y, v);
                }
            }
        }
    }
    let mut g = base.clone();
    let mut h = base;
    for i in 0..4 {
        for j in i + 1..4 {
            if (j - i) % 2 == 0 {
                g.insert(lay.x(i), lay.x(j));
            } else {
                h.insert(lay.x(i), lay.x(j));
            }
        }
        for y in lay.m_block(i) {
            g.insert(lay.x(i), y);
        }
        for y in lay.l_block(i) {
            h.insert(lay.x(i), y);
        }
    }
    Ok((g, h))
}

/// The bijection between the 2-fold blow-ups of the pair from
/// [`example_4_1_pair`] that is the identity on `(M ∪ N)[2]`, fixes every
/// first copy `x_i'` and sends the second copy `x_i''` to `x_{i+1}''`.
/// It mismatches exactly 80 adjacencies.
pub fn example_4_1_blowup_bijection(n: usize) -> Result<Vec<usize>> {
    if n < 24 {
        return Err(Error::InvalidArgument(format!("construction needs n >= 24, got {n}")));
    }
    let lay = Example41Layout { n };
    let mut sigma: Vec<usize> = (0..2 * lay.order()).collect();
    for i in 0..4 {
        sigma[2 * lay.x(i) + 1] = 2 * lay.x((i + 1) % 4) + 1;
    }
    Ok(sigma)
}

/// All labeled graphs on `n` vertices (2^(n choose 2) of them), `n <= 6`.
pub fn all_labeled_graphs(n: usize) -> Result<Vec<Graph>> {
    crate::error::cap("vertices for labeled enumeration", n, 6)?;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Ok((0u64..1 << pairs.len())
        .map(|mask| {
            let mut g = Graph::empty(n);
            for (bit, &(u, v)) in pairs.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    g.insert(u, v);
                }
            }
            g
        })
        .collect())
}

/// Smallest upper-triangle code over all relabelings. Brute force, `n <= 8`.
pub fn canonical_code(g: &Graph) -> Result<u64> {
    let n = g.order();
    crate::error::cap("vertices for canonical form", n, 8)?;
    let mut best = u64::MAX;
    for_each_permutation(n, |perm| {
        let mut code = 0u64;
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if g.has_edge(perm[u], perm[v]) {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        best = best.min(code);
    });
    Ok(best)
}

/// One representative per isomorphism class of graphs on `n <= 5` vertices.
pub fn nonisomorphic_graphs(n: usize) -> Result<Vec<Graph>> {
    crate::error::cap("vertices for isomorphism classes", n, 5)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for g in all_labeled_graphs(n)? {
        if seen.insert(canonical_code(&g)?) {
            out.push(g);
        }
    }
    Ok(out)
}

/// Calls `f` on every permutation of `0..n` (Heap's algorithm; identity first).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        Graph::complete(n)
    }

    #[test]
    fn turan_small_cases() {
        let c4 = turan_graph(2, 4).unwrap();
        assert_eq!(c4.size(), 4);
        assert!(c4.has_edge(0, 1) && !c4.has_edge(0, 2));
        assert_eq!(turan_graph(1, 5).unwrap().size(), 0);
        assert_eq!(turan_graph(3, 6).unwrap().size(), 12);
        assert!(turan_graph(0, 3).is_err());
    }

    #[test]
    fn turan_is_clique_free_and_balanced() {
        for r in 1..=4 {
            for n in 0..=12 {
                let t = turan_graph(r, n).unwrap();
                assert!(!t.contains_clique(r + 1), "T_{r}({n}) has K_{}", r + 1);
                if n >= r {
                    assert!(t.contains_clique(r));
                }
                let sizes: Vec<usize> = (0..r).map(|p| (0..n).filter(|v| v % r == p).count()).collect();
                assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
            }
        }
    }

    #[test]
    fn blow_up_counts() {
        let b = blow_up(&k(2), 2).unwrap();
        assert_eq!((b.order(), b.size()), (4, 4));
        assert_eq!(b, turan_graph(2, 4).unwrap().permuted(&[0, 2, 1, 3]).unwrap());
        let g = erdos_renyi(7, 0.5, 3).unwrap();
        assert_eq!(blow_up(&g, 1).unwrap(), g);
        let b3 = blow_up(&k(3), 2).unwrap();
        assert_eq!(b3.size(), 12);
        assert!(!b3.contains_clique(4));
        assert!(blow_up(&g, 0).is_err());
    }

    #[test]
    fn nested_blow_up_matches_product() {
        let g = erdos_renyi(5, 0.5, 11).unwrap();
        for a in 1..=3 {
            for b in 1..=3 {
                let nested = blow_up(&blow_up(&g, a).unwrap(), b).unwrap();
                let direct = blow_up(&g, a * b).unwrap();
                // nested index (x*a + c)*b + d corresponds to direct x*(a*b) + (c*b + d)
                assert_eq!(nested, direct);
            }
        }
    }

    #[test]
    fn erdos_renyi_extremes_and_determinism() {
        assert_eq!(erdos_renyi(5, 0.0, 1).unwrap().size(), 0);
        assert_eq!(erdos_renyi(5, 1.0, 1).unwrap(), k(5));
        assert_eq!(erdos_renyi(100, 0.5, 9).unwrap(), erdos_renyi(100, 0.5, 9).unwrap());
        assert_ne!(erdos_renyi(100, 0.5, 9).unwrap(), erdos_renyi(100, 0.5, 10).unwrap());
        assert!(erdos_renyi(3, 1.5, 0).is_err());
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(2, [(0, 0)]).is_err());
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn example_pair_basic_shape() {
        let (g, h) = example_4_1_pair(24).unwrap();
        assert_eq!(g.order(), 140);
        assert_eq!(h.order(), 140);
        let diff = (0..140)
            .flat_map(|u| (u + 1..140).map(move |v| (u, v)))
            .filter(|&(u, v)| g.has_edge(u, v) != h.has_edge(u, v))
            .count();
        assert_eq!(diff, 22);
        assert!(example_4_1_pair(23).is_err());
    }

    #[test]
    fn example_pair_degree_separation() {
        for n in [24, 30] {
            let lay = Example41Layout { n };
            let (g, h) = example_4_1_pair(n).unwrap();
            for graph in [&g, &h] {
                for v in 0..5 * n {
                    assert!(graph.degree(v) >= 5 * n - 1);
                }
                for v in 5 * n..lay.order() {
                    assert!(graph.degree(v) <= 4 * n + 1);
                }
            }
        }
    }

    #[test]
    fn l_partition_is_valid() {
        let lay = Example41Layout { n: 24 };
        let mut all: Vec<usize> = (0..4).flat_map(|i| lay.l_block(i)).collect();
        all.sort();
        let m: Vec<usize> = (0..4).flat_map(|i| lay.m_block(i)).collect();
        assert_eq!(all, m);
        for i in 0..4 {
            let mi: Vec<usize> = lay.m_block(i).collect();
            let meet = |l: [usize; 4]| l.iter().filter(|y| mi.contains(y)).count();
            assert_eq!(meet(lay.l_block(i)), 2);
            assert_eq!(meet(lay.l_block((i + 1) % 4)), 2);
        }
    }

    #[test]
    fn isomorphism_class_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| nonisomorphic_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34]);
    }

    #[test]
    fn permutations_are_all_visited() {
        let mut seen = BTreeSet::new();
        for_each_permutation(4, |p| {
            seen.insert(p.to_vec());
        });
        assert_eq!(seen.len(), 24);
        let mut count = 0;
        for_each_permutation(0, |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn permuted_and_complement() {
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let q = p3.permuted(&[2, 0, 1]).unwrap();
        assert!(q.has_edge(2, 0) && q.has_edge(0, 1) && !q.has_edge(2, 1));
        assert_eq!(p3.complement().size(), 1);
        assert!(p3.permuted(&[0, 0, 1]).is_err());
    }
}
