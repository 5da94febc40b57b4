//! Fractional overlay distance δ₁.
//!
//! For graphs G (order m) and H (order n), an overlay is a non-negative
//! `m×n` matrix `A` with row sums `1/m` and column sums `1/n`, and
//!
//! ```text
//! δ₁(G, H, A) = Σ_{i,j ∈ V(G), g,h ∈ V(H)} A_ig · A_jh · [G_ij ≠ H_gh]
//! ```
//!
//! Quadruples with `i = j` or `g = h` are included (loops are non-edges).
//! δ₁(G, H) is the minimum over overlays. Minimizing is QAP-hard, so this
//! module only certifies upper bounds (conditional gradient from several
//! starts, blow-up bijections) and the density lower bound `|ρ(G) − ρ(H)|`.

mod birkhoff;
mod transport;

pub use birkhoff::{birkhoff_approximate, birkhoff_bound, perfect_matching, sinkhorn_scale, PermutationDecomposition};

use num_integer::Integer;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::EdgeDensity;
use crate::editdist::{self, EditResult, HeuristicOptions};
use crate::error::{Error, Result};
use crate::graph::{blow_up, check_permutation, Graph};
use crate::scalar::Rational;

const SUM_TOLERANCE: f64 = 1e-12;

/// Row-major overlay matrix with row sums `1/m` and column sums `1/n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlayMatrix {
    rows: usize,
    cols: usize,
    alpha: Vec<f64>,
}

impl OverlayMatrix {
    pub fn new(rows: usize, cols: usize, alpha: Vec<f64>) -> Result<Self> {
        let a = OverlayMatrix { rows, cols, alpha };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        let (m, n) = (self.rows, self.cols);
        if m == 0 || n == 0 || self.alpha.len() != m * n {
            return Err(Error::InvalidOverlay(format!(
                "{} entries for a {m}x{n} overlay",
                self.alpha.len()
            )));
        }
        if let Some(x) = self.alpha.iter().find(|x| x.is_nan() || **x < 0.0) {
            return Err(Error::InvalidOverlay(format!("negative or NaN entry {x}")));
        }
        for i in 0..m {
            let s: f64 = self.row(i).iter().sum();
            if (s - 1.0 / m as f64).abs() > SUM_TOLERANCE {
                return Err(Error::InvalidOverlay(format!("row {i} sums to {s}, not 1/{m}")));
            }
        }
        for j in 0..n {
            let s: f64 = (0..m).map(|i| self.get(i, j)).sum();
            if (s - 1.0 / n as f64).abs() > SUM_TOLERANCE {
                return Err(Error::InvalidOverlay(format!("column {j} sums to {s}, not 1/{n}")));
            }
        }
        Ok(())
    }

    /// The product overlay, every entry `1/(mn)`.
    pub fn uniform(rows: usize, cols: usize) -> Self {
        OverlayMatrix {
            rows,
            cols,
            alpha: vec![1.0 / (rows * cols) as f64; rows * cols],
        }
    }

    /// `(1/n)·P_σ`: vertex `u` sent wholly to `sigma[u]`.
    pub fn from_bijection(sigma: &[usize]) -> Result<Self> {
        let n = sigma.len();
        check_permutation(sigma, n)?;
        let mut alpha = vec![0.0; n * n];
        for (u, &v) in sigma.iter().enumerate() {
            alpha[u * n + v] = 1.0 / n as f64;
        }
        OverlayMatrix::new(n, n, alpha)
    }

    /// Contracts a bijection between blow-ups `G[a]` and `H[b]` (both of order
    /// `L = m·a = n·b`) to an overlay of `G` and `H`: entry `(x, y)` is the
    /// fraction `1/L` times the number of copies of `x` sent to copies of `y`.
    pub fn from_blowup_bijection(m: usize, n: usize, sigma: &[usize]) -> Result<Self> {
        let order = sigma.len();
        if m == 0 || n == 0 || !order.is_multiple_of(m) || !order.is_multiple_of(n) {
            return Err(Error::InvalidOverlay(format!(
                "a bijection on {order} vertices is not between blow-ups of orders {m} and {n}"
            )));
        }
        check_permutation(sigma, order)?;
        let (a, b) = (order / m, order / n);
        let mut alpha = vec![0.0; m * n];
        for (u, &v) in sigma.iter().enumerate() {
            alpha[(u / a) * n + v / b] += 1.0 / order as f64;
        }
        OverlayMatrix::new(m, n, alpha)
    }

    /// Scales a doubly stochastic `n×n` matrix by `1/n`.
    pub fn from_doubly_stochastic(matrix: &[f64], n: usize) -> Result<Self> {
        OverlayMatrix::new(n, n, matrix.iter().map(|x| x / n as f64).collect())
    }

    /// Splits every entry into a `k×k` block of `α/k²`: the overlay of
    /// `G[k]` and `H[k]` induced by `self`.
    pub fn block_expand(&self, k: usize) -> Self {
        let (m, n) = (self.rows * k, self.cols * k);
        let kk = (k * k) as f64;
        let alpha = (0..m * n).map(|c| self.get(c / n / k, (c % n) / k) / kk).collect();
        OverlayMatrix {
            rows: m,
            cols: n,
            alpha,
        }
    }

    pub fn transpose(&self) -> Self {
        let alpha = (0..self.rows * self.cols)
            .map(|c| self.get(c % self.rows, c / self.rows))
            .collect();
        OverlayMatrix {
            rows: self.cols,
            cols: self.rows,
            alpha,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.alpha[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.alpha[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[f64] {
        &self.alpha
    }

    /// Nested-array form, one inner array per row.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.alpha.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }
}

/// `K·D` for the quadratic kernel `K[(i,g),(j,h)] = [G_ij ≠ H_gh]`, for any
/// `m×n` matrix `D` (not necessarily an overlay). Uses
/// `[a ≠ b] = a(1−b) + (1−a)b`, so
/// `(K·D)_ig = Σ_{j~i} r_j + Σ_{h~g} c_h − 2 (G·D·H)_ig`
/// with `r`, `c` the row and column sums of `D`. Cost `O(m²n + mn²)`.
fn apply_kernel(g: &Graph, h: &Graph, d: &[f64]) -> Vec<f64> {
    let (m, n) = (g.order(), h.order());
    let row_sum: Vec<f64> = d.chunks(n).map(|r| r.iter().sum()).collect();
    let col_sum: Vec<f64> = (0..n).map(|j| (0..m).map(|i| d[i * n + j]).sum()).collect();
    let a: Vec<f64> = (0..m).map(|i| g.neighbors(i).map(|j| row_sum[j]).sum()).collect();
    let b: Vec<f64> = (0..n).map(|y| h.neighbors(y).map(|z| col_sum[z]).sum()).collect();
    // DH[j][y] = Σ_{z ~ y} D[j][z]
    let mut dh = vec![0.0; m * n];
    for y in 0..n {
        for z in h.neighbors(y) {
            for j in 0..m {
                dh[j * n + y] += d[j * n + z];
            }
        }
    }
    let mut out = vec![0.0; m * n];
    for i in 0..m {
        let row = &mut out[i * n..(i + 1) * n];
        for j in g.neighbors(i) {
            for (o, x) in row.iter_mut().zip(&dh[j * n..(j + 1) * n]) {
                *o += x;
            }
        }
        for (y, o) in row.iter_mut().enumerate() {
            *o = a[i] + b[y] - 2.0 * *o;
        }
    }
    out
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn check_conformal(g: &Graph, h: &Graph, a: &OverlayMatrix) -> Result<()> {
    if a.rows() != g.order() || a.cols() != h.order() {
        return Err(Error::InvalidOverlay(format!(
            "overlay is {}x{}, graphs have orders {} and {}",
            a.rows(),
            a.cols(),
            g.order(),
            h.order()
        )));
    }
    Ok(())
}

/// δ₁(G, H, A).
pub fn delta1_objective(g: &Graph, h: &Graph, a: &OverlayMatrix) -> Result<f64> {
    check_conformal(g, h, a)?;
    a.validate()?;
    Ok(dot(a.entries(), &apply_kernel(g, h, a.entries())))
}

/// Lower bound `|ρ(G) − ρ(H)|` on δ₁(G, H), exactly.
pub fn delta1_lower_exact(g: &Graph, h: &Graph) -> Rational {
    (g.edge_density() - h.edge_density()).abs()
}

pub fn delta1_lower(g: &Graph, h: &Graph) -> f64 {
    crate::scalar::Scalar::to_f64(&delta1_lower_exact(g, h))
}

#[derive(Debug, Clone)]
pub struct Delta1Config {
    /// Random transportation-vertex starts (in addition to the structured ones).
    pub starts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    /// Stop once an iteration improves the objective by less than this fraction.
    pub rel_tol: f64,
    /// Named starting overlays tried alongside the built-in ones.
    pub extra_starts: Vec<(String, OverlayMatrix)>,
    /// Bijection for the edit-distance start when `m = n`. Computed when absent.
    pub edit_bijection: Option<Vec<usize>>,
    /// Also start from a bijection between blow-ups to the common order
    /// `lcm(m, n)` when that order is at most this.
    pub blowup_start_cap: usize,
}

impl Default for Delta1Config {
    fn default() -> Self {
        Delta1Config {
            starts: 8,
            seed: 0,
            max_iterations: 500,
            rel_tol: 1e-9,
            extra_starts: Vec::new(),
            edit_bijection: None,
            blowup_start_cap: 60,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Delta1Upper {
    pub value: f64,
    pub overlay: OverlayMatrix,
    /// Label of the start that produced the best value.
    pub start: String,
    pub iterations: usize,
}

/// One conditional-gradient run. Returns `(value, overlay, iterations)`.
/// The objective is checked to be non-increasing at every step.
pub fn conditional_gradient(
    g: &Graph,
    h: &Graph,
    start: &OverlayMatrix,
    max_iterations: usize,
    rel_tol: f64,
) -> Result<(f64, OverlayMatrix, usize)> {
    check_conformal(g, h, start)?;
    let (m, n) = (g.order(), h.order());
    let mut x = start.entries().to_vec();
    let mut kx = apply_kernel(g, h, &x);
    let mut value = dot(&x, &kx);
    let mut iterations = 0;
    while iterations < max_iterations && value > 0.0 {
        iterations += 1;
        let grad: Vec<f64> = kx.iter().map(|v| 2.0 * v).collect();
        let vertex = transport::minimize(&grad, m, n);
        let dir: Vec<f64> = vertex.iter().zip(&x).map(|(s, a)| s - a).collect();
        let kd = apply_kernel(g, h, &dir);
        // f(x + t·d) = f(x) + t·lin + t²·quad on t ∈ [0, 1]
        let lin = dot(&grad, &dir);
        let quad = dot(&dir, &kd);
        let model = |t: f64| t * lin + t * t * quad;
        let mut step = if model(1.0) < 0.0 { 1.0 } else { 0.0 };
        if quad > 0.0 {
            let t = (-lin / (2.0 * quad)).clamp(0.0, 1.0);
            if model(t) < model(step) {
                step = t;
            }
        }
        if step == 0.0 {
            break;
        }
        let next: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| (a + step * d).max(0.0)).collect();
        let k_next: Vec<f64> = kx.iter().zip(&kd).map(|(a, d)| a + step * d).collect();
        let next_value = dot(&next, &apply_kernel(g, h, &next));
        if next_value > value + 1e-12 * value.abs().max(1.0) {
            return Err(Error::Invariant(format!(
                "conditional gradient increased the objective from {value} to {next_value}"
            )));
        }
        let improvement = value - next_value;
        if next_value < value {
            x = next;
            kx = k_next;
            value = next_value;
        }
        if improvement <= rel_tol * value.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    // recompute from scratch to shed accumulated drift in kx
    let overlay = OverlayMatrix {
        rows: m,
        cols: n,
        alpha: x,
    };
    let value = dot(overlay.entries(), &apply_kernel(g, h, overlay.entries())).max(0.0);
    Ok((value, overlay, iterations))
}

/// Bijection between `G[L/m]` and `H[L/n]` for `L = lcm(m, n)`, found by the
/// edit-distance heuristic and contracted to an overlay of G and H.
fn blowup_start(g: &Graph, h: &Graph, seed: u64) -> Result<OverlayMatrix> {
    let (m, n) = (g.order(), h.order());
    let l = m.lcm(&n);
    let gb = blow_up(g, l / m)?;
    let hb = blow_up(h, l / n)?;
    let r = editdist::edit_distance_heuristic(&gb, &hb, &HeuristicOptions::new(16, seed))?;
    OverlayMatrix::from_blowup_bijection(m, n, &r.bijection)
}

/// Best δ₁ upper bound found by conditional gradient over several starts:
/// the product overlay, the edit-distance bijection (square case), a
/// blow-up bijection (small common order), caller-supplied starts, and
/// random transportation vertices.
pub fn delta1_upper(g: &Graph, h: &Graph, cfg: &Delta1Config) -> Result<Delta1Upper> {
    let (m, n) = (g.order(), h.order());
    if m == 0 || n == 0 {
        return Err(Error::InvalidGraph("δ₁ needs graphs with at least one vertex".into()));
    }
    let mut starts: Vec<(String, OverlayMatrix)> = vec![("uniform".into(), OverlayMatrix::uniform(m, n))];
    if m == n {
        let sigma = match &cfg.edit_bijection {
            Some(s) => s.clone(),
            None if n <= 8 => editdist::edit_distance_exact(g, h)?.bijection,
            None => editdist::edit_distance_heuristic(g, h, &HeuristicOptions::new(16, cfg.seed))?.bijection,
        };
        starts.push(("edit-bijection".into(), OverlayMatrix::from_bijection(&sigma)?));
    } else if m.lcm(&n) <= cfg.blowup_start_cap {
        starts.push(("blow-up".into(), blowup_start(g, h, cfg.seed)?));
    }
    for (label, a) in &cfg.extra_starts {
        check_conformal(g, h, a)?;
        starts.push((label.clone(), a.clone()));
    }
    for s in 0..cfg.starts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(s as u64 + 1);
        let cost: Vec<f64> = (0..m * n).map(|_| rng.gen::<f64>()).collect();
        starts.push((
            format!("random-{s}"),
            OverlayMatrix {
                rows: m,
                cols: n,
                alpha: transport::minimize(&cost, m, n),
            },
        ));
    }
    let runs: Vec<Result<Delta1Upper>> = starts
        .into_par_iter()
        .map(|(label, a)| {
            let (value, overlay, iterations) = conditional_gradient(g, h, &a, cfg.max_iterations, cfg.rel_tol)?;
            Ok(Delta1Upper {
                value,
                overlay,
                start: label,
                iterations,
            })
        })
        .collect();
    let mut best: Option<Delta1Upper> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.value < b.value) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least the uniform start"))
}

/// How the edit distance of blow-ups is computed.
#[derive(Debug, Clone)]
pub enum EditMode {
    Exact {
        max_order: usize,
    },
    Heuristic(HeuristicOptions),
    /// Exact when the order is within the default exact cap, heuristic otherwise.
    Auto(HeuristicOptions),
}

#[derive(Debug, Clone, Serialize)]
pub struct BlowupBound {
    /// Upper bound on δ₁(G, H).
    pub value: f64,
    /// Blow-up factors applied to G and H.
    pub factors: (usize, usize),
    pub edit: EditResult,
}

/// δ₁(G, H) ≤ δ̂₁(G[a], H[b]) with `a = kL/m`, `b = kL/n`, `L = lcm(m, n)`,
/// so both blow-ups have order `kL`.
pub fn delta1_blowup_upper(g: &Graph, h: &Graph, k: usize, mode: &EditMode) -> Result<BlowupBound> {
    let (m, n) = (g.order(), h.order());
    if m == 0 || n == 0 || k == 0 {
        return Err(Error::InvalidArgument(
            "blow-up bound needs non-empty graphs and k >= 1".into(),
        ));
    }
    let l = m.lcm(&n);
    let (a, b) = (k * l / m, k * l / n);
    let gb = blow_up(g, a)?;
    let hb = blow_up(h, b)?;
    let edit = match mode {
        EditMode::Exact { max_order } => {
            editdist::edit_distance_exact_with(&gb, &hb, &editdist::ExactOptions { max_order: *max_order })?
        }
        EditMode::Heuristic(opts) => editdist::edit_distance_heuristic(&gb, &hb, opts)?,
        EditMode::Auto(opts) => {
            if k * l <= editdist::DEFAULT_EXACT_CAP {
                editdist::edit_distance_exact(&gb, &hb)?
            } else {
                editdist::edit_distance_heuristic(&gb, &hb, opts)?
            }
        }
    };
    Ok(BlowupBound {
        value: edit.value,
        factors: (a, b),
        edit,
    })
}

#[derive(Debug, Clone)]
pub struct Factor3Options {
    pub edit: EditMode,
    pub delta1: Delta1Config,
}

impl Default for Factor3Options {
    fn default() -> Self {
        Factor3Options {
            edit: EditMode::Exact {
                max_order: editdist::DEFAULT_EXACT_CAP,
            },
            delta1: Delta1Config::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Factor3Report {
    pub edit: EditResult,
    pub delta1_upper: f64,
    pub delta1_lower: f64,
    /// `δ̂₁ / delta1_upper`; `None` when both are zero.
    pub ratio: Option<f64>,
}

impl Factor3Report {
    pub fn ratio_text(&self) -> String {
        match self.ratio {
            Some(r) => format!("{r}"),
            None => "both zero".into(),
        }
    }
}

/// Computes δ̂₁ and a δ₁ upper bound and checks `δ̂₁ ≤ 3·upper + 1e−9`, the
/// factor-3 relation between the two distances (valid for any upper bound on
/// δ₁). Also checks the sandwich `lower ≤ upper ≤ δ̂₁`; the right inequality
/// holds because the edit bijection seeds the optimizer.
pub fn factor3_check(g: &Graph, h: &Graph, opts: &Factor3Options) -> Result<Factor3Report> {
    if g.order() != h.order() {
        return Err(Error::OrderMismatch(g.order(), h.order()));
    }
    let edit = match &opts.edit {
        EditMode::Exact { max_order } => {
            editdist::edit_distance_exact_with(g, h, &editdist::ExactOptions { max_order: *max_order })?
        }
        EditMode::Heuristic(o) => editdist::edit_distance_heuristic(g, h, o)?,
        EditMode::Auto(o) => {
            if g.order() <= editdist::DEFAULT_EXACT_CAP {
                editdist::edit_distance_exact(g, h)?
            } else {
                editdist::edit_distance_heuristic(g, h, o)?
            }
        }
    };
    let mut cfg = opts.delta1.clone();
    cfg.edit_bijection = Some(edit.bijection.clone());
    let upper = delta1_upper(g, h, &cfg)?.value;
    let lower = delta1_lower(g, h);
    if edit.value > 3.0 * upper + 1e-9 {
        return Err(Error::Invariant(format!(
            "edit distance {} exceeds three times the overlay bound {upper}",
            edit.value
        )));
    }
    if lower > upper + 1e-12 || upper > edit.value + 1e-12 {
        return Err(Error::Invariant(format!(
            "sandwich violated: lower {lower}, upper {upper}, edit {}",
            edit.value
        )));
    }
    let ratio = if edit.value == 0.0 && upper <= 1e-15 {
        None
    } else {
        Some(edit.value / upper)
    };
    Ok(Factor3Report {
        edit,
        delta1_upper: upper,
        delta1_lower: lower,
        ratio,
    })
}
