//! Edit distance δ̂₁ between graphs of equal order:
//! `min_σ 2·|E(G) △ σ(E(H))| / n²` over bijections `σ: V(G) → V(H)`.
//!
//! All values use the `2/n²` normalization. Counts relative to `C(n,2)`
//! pairs differ by the factor `n/(n−1)`; see [`EditResult::pair_fraction`].

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{cap, Error, Result};
use crate::graph::{check_permutation, Graph};
use crate::lap;
use crate::scalar::Rational;

pub const DEFAULT_EXACT_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EditResult {
    /// δ̂₁ value, `2·mismatches/n²`.
    pub value: f64,
    pub mismatches: u64,
    /// `bijection[u]` is the vertex of H that vertex `u` of G is mapped to.
    pub bijection: Vec<usize>,
    /// Whether `value` is certified optimal.
    pub exact: bool,
}

impl EditResult {
    fn new(n: usize, mismatches: u64, bijection: Vec<usize>, exact: bool) -> Self {
        EditResult {
            value: normalized(mismatches, n),
            mismatches,
            bijection,
            exact,
        }
    }

    pub fn order(&self) -> usize {
        self.bijection.len()
    }

    pub fn exact_value(&self) -> Rational {
        normalized_exact(self.mismatches, self.order())
    }

    /// Mismatches as a fraction of the `C(n,2)` vertex pairs
    /// (`value · n/(n−1)`).
    pub fn pair_fraction(&self) -> f64 {
        let n = self.order() as f64;
        if n < 2.0 {
            0.0
        } else {
            self.mismatches as f64 / (n * (n - 1.0) / 2.0)
        }
    }
}

pub fn normalized(mismatches: u64, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        2.0 * mismatches as f64 / (n as f64 * n as f64)
    }
}

pub fn normalized_exact(mismatches: u64, n: usize) -> Rational {
    if n == 0 {
        return Rational::from_integer(0.into());
    }
    Rational::new(BigInt::from(2 * mismatches), BigInt::from(n * n))
}

fn same_order(g: &Graph, h: &Graph) -> Result<usize> {
    if g.order() != h.order() {
        return Err(Error::OrderMismatch(g.order(), h.order()));
    }
    Ok(g.order())
}

/// `|{ {u,v} : G(u,v) ≠ H(σu,σv) }|`.
pub fn mismatches(g: &Graph, h: &Graph, sigma: &[usize]) -> Result<u64> {
    let n = same_order(g, h)?;
    check_permutation(sigma, n)?;
    let mut count = 0;
    for u in 0..n {
        for v in u + 1..n {
            if g.has_edge(u, v) != h.has_edge(sigma[u], sigma[v]) {
                count += 1;
            }
        }
    }
    Ok(count)
}

#[derive(Debug, Clone)]
pub struct ExactOptions {
    pub max_order: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            max_order: DEFAULT_EXACT_CAP,
        }
    }
}

#[derive(Debug, Clone)]
pub struct HeuristicOptions {
    /// Total number of starts, including the identity and degree-sorted starts.
    pub restarts: usize,
    pub seed: u64,
    /// Extra start bijections tried before the built-in ones.
    pub initial: Vec<Vec<usize>>,
}

impl Default for HeuristicOptions {
    fn default() -> Self {
        HeuristicOptions {
            restarts: 32,
            seed: 0,
            initial: Vec::new(),
        }
    }
}

impl HeuristicOptions {
    pub fn new(restarts: usize, seed: u64) -> Self {
        HeuristicOptions {
            restarts,
            seed,
            initial: Vec::new(),
        }
    }

    pub fn with_initial(mut self, sigma: Vec<usize>) -> Self {
        self.initial.push(sigma);
        self
    }
}

/// Exact δ̂₁ by branch-and-bound.
pub fn edit_distance_exact(g: &Graph, h: &Graph) -> Result<EditResult> {
    edit_distance_exact_with(g, h, &ExactOptions::default())
}

pub fn edit_distance_exact_with(g: &Graph, h: &Graph, opts: &ExactOptions) -> Result<EditResult> {
    let n = same_order(g, h)?;
    cap("order for exact edit distance", n, opts.max_order.min(64))?;
    let warm = edit_distance_heuristic(g, h, &HeuristicOptions::new(8, 0))?;
    let mut search = Search::new(g, h, warm.mismatches, warm.bijection);
    if search.best > 0 {
        search.dfs(0, 0);
    }
    Ok(EditResult::new(n, search.best, search.best_sigma, true))
}

/// Vertex order for branching: descending degree in G, ties by index.
fn branching_order(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.order()).collect();
    order.sort_by_key(|&u| (std::cmp::Reverse(g.degree(u)), u));
    order
}

/// Admissible bound from degree multisets alone: half the ℓ₁ distance between
/// the sorted degree sequences. Each unit of degree discrepancy needs at least
/// half an edge change, since one changed pair fixes two endpoints.
pub fn degree_sequence_bound(g_degrees: &[usize], h_degrees: &[usize]) -> u64 {
    sorted_l1(g_degrees, h_degrees).div_ceil(2) as u64
}

fn sorted_l1(a: &[usize], b: &[usize]) -> usize {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a.iter().zip(&b).map(|(x, y)| x.abs_diff(*y)).sum()
}

struct Search<'a> {
    g: &'a Graph,
    h: &'a Graph,
    n: usize,
    order: Vec<usize>,
    /// twin[v*n + w]: swapping v and w is an automorphism of H
    twin: Vec<bool>,
    sigma: Vec<usize>,
    used: Vec<bool>,
    /// cross[u*n + v]: mismatches between u ↦ v and the already-placed vertices
    cross: Vec<u32>,
    best: u64,
    best_sigma: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, h: &'a Graph, best: u64, best_sigma: Vec<usize>) -> Self {
        let n = g.order();
        let mut twin = vec![false; n * n];
        for v in 0..n {
            for w in 0..n {
                twin[v * n + w] = v != w
                    && (0..n)
                        .filter(|&x| x != v && x != w)
                        .all(|x| h.has_edge(v, x) == h.has_edge(w, x));
            }
        }
        Search {
            g,
            h,
            n,
            order: branching_order(g),
            twin,
            sigma: vec![usize::MAX; n],
            used: vec![false; n],
            cross: vec![0; n * n],
            best,
            best_sigma,
        }
    }

    /// Lower bound (in mismatches) on completing the current partial map,
    /// not counting the cost already incurred.
    fn completion_bound(&self, depth: usize) -> u64 {
        let free_g: Vec<usize> = self.order[depth..].to_vec();
        let free_h: Vec<usize> = (0..self.n).filter(|&v| !self.used[v]).collect();
        let r = free_g.len();
        if r <= 1 {
            // a single remaining vertex has no free partner; only cross terms remain
            return free_g
                .iter()
                .zip(&free_h)
                .map(|(&u, &v)| self.cross[u * self.n + v] as u64)
                .sum();
        }
        let deg_g: Vec<usize> = free_g
            .iter()
            .map(|&u| free_g.iter().filter(|&&x| self.g.has_edge(u, x)).count())
            .collect();
        let deg_h: Vec<usize> = free_h
            .iter()
            .map(|&v| free_h.iter().filter(|&&y| self.h.has_edge(v, y)).count())
            .collect();
        // doubled costs keep everything integral
        let cost: Vec<f64> = (0..r * r)
            .map(|c| {
                let (a, b) = (c / r, c % r);
                (2 * self.cross[free_g[a] * self.n + free_h[b]] as usize + deg_g[a].abs_diff(deg_h[b])) as f64
            })
            .collect();
        let row_min: f64 = cost
            .chunks(r)
            .map(|row| row.iter().cloned().fold(f64::INFINITY, f64::min))
            .sum();
        let col_min: f64 = (0..r)
            .map(|b| (0..r).map(|a| cost[a * r + b]).fold(f64::INFINITY, f64::min))
            .sum();
        let degrees_only = sorted_l1(&deg_g, &deg_h) as f64;
        let cheap = row_min.max(col_min).max(degrees_only);
        let cheap = (cheap as u64).div_ceil(2);
        if cheap == 0 || depth + 1 >= self.n {
            return cheap;
        }
        let (total, _) = lap::solve(&cost, r);
        (total.round() as u64).div_ceil(2).max(cheap)
    }

    fn place(&mut self, u: usize, v: usize, sign: i32) {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                if self.g.has_edge(u, x) != self.h.has_edge(v, y) {
                    let c = &mut self.cross[x * n + y];
                    *c = (*c as i32 + sign) as u32;
                }
            }
        }
    }

    fn dfs(&mut self, depth: usize, cost: u64) {
        if depth == self.n {
            if cost < self.best {
                self.best = cost;
                self.best_sigma = self.sigma.clone();
            }
            return;
        }
        let n = self.n;
        let u = self.order[depth];
        let mut candidates: Vec<(u32, usize)> = Vec::new();
        for v in 0..n {
            if self.used[v] {
                continue;
            }
            if candidates.iter().any(|&(_, w)| self.twin[w * n + v]) {
                continue;
            }
            candidates.push((self.cross[u * n + v], v));
        }
        candidates.sort();
        for (inc, v) in candidates {
            let next = cost + inc as u64;
            if next >= self.best {
                break;
            }
            self.sigma[u] = v;
            self.used[v] = true;
            self.place(u, v, 1);
            if next + self.completion_bound(depth + 1) < self.best {
                self.dfs(depth + 1, next);
            }
            self.place(u, v, -1);
            self.used[v] = false;
            self.sigma[u] = usize::MAX;
            if self.best == 0 {
                return;
            }
        }
    }
}

/// Bitset view of H relabelled through σ: row `i` holds `H(σi, σj)` at bit `j`.
struct Relabelled {
    words: usize,
    rows: Vec<u64>,
}

impl Relabelled {
    fn new(h: &Graph, sigma: &[usize]) -> Self {
        let n = h.order();
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; n * words];
        for i in 0..n {
            for j in 0..n {
                if h.has_edge(sigma[i], sigma[j]) {
                    rows[i * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        Relabelled { words, rows }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    fn swap(&mut self, a: usize, b: usize) {
        let w = self.words;
        for k in 0..w {
            self.rows.swap(a * w + k, b * w + k);
        }
        let (wa, ba) = (a / 64, a % 64);
        let (wb, bb) = (b / 64, b % 64);
        for r in self.rows.chunks_mut(w) {
            let x = r[wa] >> ba & 1;
            let y = r[wb] >> bb & 1;
            if x != y {
                r[wa] ^= 1 << ba;
                r[wb] ^= 1 << bb;
            }
        }
    }
}

fn masked_xor_count(a: &[u64], b: &[u64], skip: (usize, usize)) -> i64 {
    let mut total = 0i64;
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        let mut d = x ^ y;
        for s in [skip.0, skip.1] {
            if s / 64 == k {
                d &= !(1 << (s % 64));
            }
        }
        total += d.count_ones() as i64;
    }
    total
}

/// 2-swap hill climbing from `sigma`; returns the local optimum's mismatch count.
fn climb(g: &Graph, h: &Graph, sigma: &mut [usize]) -> u64 {
    let n = g.order();
    let mut k = Relabelled::new(h, sigma);
    let mut current = mismatches(g, h, sigma).expect("validated");
    loop {
        let mut improved = false;
        for a in 0..n {
            for b in a + 1..n {
                let (ga, gb) = (g.row(a), g.row(b));
                let delta = masked_xor_count(ga, k.row(b), (a, b)) + masked_xor_count(gb, k.row(a), (a, b))
                    - masked_xor_count(ga, k.row(a), (a, b))
                    - masked_xor_count(gb, k.row(b), (a, b));
                if delta < 0 {
                    sigma.swap(a, b);
                    k.swap(a, b);
                    current = (current as i64 + delta) as u64;
                    improved = true;
                }
            }
        }
        if !improved {
            return current;
        }
    }
}

fn degree_sorted_start(g: &Graph, h: &Graph) -> Vec<usize> {
    let by_degree = |x: &Graph| {
        let mut vs: Vec<usize> = (0..x.order()).collect();
        vs.sort_by_key(|&v| (std::cmp::Reverse(x.degree(v)), v));
        vs
    };
    let (gs, hs) = (by_degree(g), by_degree(h));
    let mut sigma = vec![0; g.order()];
    for (u, v) in gs.into_iter().zip(hs) {
        sigma[u] = v;
    }
    sigma
}

/// Start bijections in the order they are tried: user-supplied, identity,
/// degree-sorted, then uniformly random ones (start `i` draws from ChaCha
/// stream `i` of the master seed).
fn starts(g: &Graph, opts: &HeuristicOptions) -> Result<Vec<Vec<usize>>> {
    let n = g.order();
    for s in &opts.initial {
        check_permutation(s, n)?;
    }
    let total = opts.restarts.max(1) + opts.initial.len();
    Ok((0..total)
        .map(|i| {
            if i < opts.initial.len() {
                return opts.initial[i].clone();
            }
            match i - opts.initial.len() {
                0 => (0..n).collect(),
                1 => Vec::new(), // degree-sorted, filled in by the caller
                _ => {
                    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                    rng.set_stream(i as u64);
                    let mut p: Vec<usize> = (0..n).collect();
                    p.shuffle(&mut rng);
                    p
                }
            }
        })
        .collect())
}

/// Every start's local optimum as `(mismatches, bijection)`, in start order.
pub fn local_optima(g: &Graph, h: &Graph, opts: &HeuristicOptions) -> Result<Vec<(u64, Vec<usize>)>> {
    same_order(g, h)?;
    let degree_start = degree_sorted_start(g, h);
    let starts: Vec<Vec<usize>> = starts(g, opts)?
        .into_iter()
        .map(|s| {
            if s.is_empty() && g.order() > 0 {
                degree_start.clone()
            } else {
                s
            }
        })
        .collect();
    Ok(starts
        .into_par_iter()
        .map(|mut sigma| {
            let cost = climb(g, h, &mut sigma);
            (cost, sigma)
        })
        .collect())
}

/// Upper bound on δ̂₁ from multi-start 2-swap local search.
pub fn edit_distance_heuristic(g: &Graph, h: &Graph, opts: &HeuristicOptions) -> Result<EditResult> {
    let n = same_order(g, h)?;
    let optima = local_optima(g, h, opts)?;
    let (cost, sigma) = optima.into_iter().min_by_key(|(c, _)| *c).expect("at least one start");
    Ok(EditResult::new(n, cost, sigma, false))
}
