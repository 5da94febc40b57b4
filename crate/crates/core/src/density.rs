//! Homomorphism densities t(F, G), t(F, W) and edge density.
//!
//! Both routes enumerate maps `V(F) → V(G)` (resp. parts of `W`) exhaustively,
//! vertex by vertex, pruning partial maps that already break an edge of `F`.
//! Isolated vertices of `F` contribute a factor of 1.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{cap, Error, Result};
use crate::graph::{bits, Graph};
use crate::scalar::{Rational, Scalar};
use crate::stepgraphon::StepGraphon;

pub const DEFAULT_MOTIF_CAP: usize = 5;

#[derive(Debug, Clone, Copy)]
pub struct DensityOptions {
    /// Largest motif order accepted; enumeration cost is `v(G)^v(F)`.
    pub max_motif_order: usize,
}

impl Default for DensityOptions {
    fn default() -> Self {
        DensityOptions {
            max_motif_order: DEFAULT_MOTIF_CAP,
        }
    }
}

/// Visiting order for the motif: each step picks the vertex with the most
/// already-placed neighbours. Returns `(order, earlier_neighbours[pos])`.
fn motif_plan(f: &Graph) -> (Vec<usize>, Vec<Vec<usize>>) {
    let k = f.order();
    let mut placed = vec![false; k];
    let mut order = Vec::with_capacity(k);
    for _ in 0..k {
        let next = (0..k)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let back = f.neighbors(v).filter(|&u| placed[u]).count();
                (back, f.degree(v), std::cmp::Reverse(v))
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    let pos: Vec<usize> = {
        let mut pos = vec![0; k];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    };
    let back = order
        .iter()
        .enumerate()
        .map(|(i, &v)| f.neighbors(v).map(|u| pos[u]).filter(|&p| p < i).collect())
        .collect();
    (order, back)
}

fn check_motif(f: &Graph, opts: &DensityOptions) -> Result<()> {
    if f.order() == 0 {
        return Err(Error::InvalidArgument("motif must have at least one vertex".into()));
    }
    cap("motif order", f.order(), opts.max_motif_order)
}

/// Number of homomorphisms F → G.
pub fn hom_count(f: &Graph, g: &Graph, opts: &DensityOptions) -> Result<u128> {
    check_motif(f, opts)?;
    let (_, back) = motif_plan(f);
    let n = g.order();
    let words = g.words();
    let mut full = vec![0u64; words];
    for v in 0..n {
        full[v / 64] |= 1 << (v % 64);
    }

    fn go(g: &Graph, back: &[Vec<usize>], full: &[u64], image: &mut Vec<usize>, depth: usize) -> u128 {
        let mut cand = full.to_vec();
        for &p in &back[depth] {
            for (c, r) in cand.iter_mut().zip(g.row(image[p])) {
                *c &= r;
            }
        }
        if depth + 1 == back.len() {
            return cand.iter().map(|w| w.count_ones() as u128).sum();
        }
        let mut total = 0;
        for v in bits(&cand) {
            image.push(v);
            total += go(g, back, full, image, depth + 1);
            image.pop();
        }
        total
    }

    if n == 0 {
        return Ok(0);
    }
    Ok(go(g, &back, &full, &mut Vec::with_capacity(f.order()), 0))
}

/// t(F, G) = hom(F, G) / v(G)^v(F), exactly.
pub fn density_graph(f: &Graph, g: &Graph) -> Result<Rational> {
    density_graph_with(f, g, &DensityOptions::default())
}

pub fn density_graph_with(f: &Graph, g: &Graph, opts: &DensityOptions) -> Result<Rational> {
    if g.order() == 0 {
        return Err(Error::InvalidArgument(
            "host graph must have at least one vertex".into(),
        ));
    }
    let count = hom_count(f, g, opts)?;
    let denom = num_traits::pow(BigInt::from(g.order()), f.order());
    Ok(Rational::new(BigInt::from(count), denom))
}

/// t(F, W) = Σ over maps c: V(F) → parts of Π λ_{c(v)} · Π_{uv ∈ E(F)} W(c(u), c(v)).
pub fn density_graphon<S: Scalar>(f: &Graph, w: &StepGraphon<S>) -> Result<S> {
    density_graphon_with(f, w, &DensityOptions::default())
}

pub fn density_graphon_with<S: Scalar>(f: &Graph, w: &StepGraphon<S>, opts: &DensityOptions) -> Result<S> {
    check_motif(f, opts)?;
    let (_, back) = motif_plan(f);

    fn go<S: Scalar>(w: &StepGraphon<S>, back: &[Vec<usize>], parts: &mut Vec<usize>, depth: usize, acc: &S) -> S {
        if depth == back.len() {
            return acc.clone();
        }
        let mut total = S::zero();
        for c in 0..w.parts() {
            let mut term = acc.clone() * w.weights()[c].clone();
            for &p in &back[depth] {
                term = term * w.value(parts[p], c).clone();
            }
            if term.is_zero() {
                continue;
            }
            parts.push(c);
            total = total + go(w, back, parts, depth + 1, &term);
            parts.pop();
        }
        total
    }

    Ok(go(w, &back, &mut Vec::with_capacity(f.order()), 0, &S::one()))
}

/// Edge density ρ: 2e/n² for graphs, Σ λ_i λ_j W_ij for step graphons.
pub trait EdgeDensity {
    type Output;
    fn edge_density(&self) -> Self::Output;
}

impl EdgeDensity for Graph {
    type Output = Rational;
    fn edge_density(&self) -> Rational {
        let (num, den) = self.edge_density_parts();
        if den == 0 {
            return Rational::zero();
        }
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
}

impl<S: Scalar> EdgeDensity for StepGraphon<S> {
    type Output = S;
    fn edge_density(&self) -> S {
        StepGraphon::edge_density(self)
    }
}
