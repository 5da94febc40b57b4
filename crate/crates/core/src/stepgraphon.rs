//! Graphons represented as step functions on weighted parts.
//!
//! A [`StepGraphon`] stores part measures `λ_1..λ_k` (positive, summing to 1)
//! and a symmetric `k×k` value matrix with entries in `[0,1]`. Parts are
//! indexed, not positioned: part `i` stands for the `i`-th consecutive interval
//! of `[0,1]`, which is the only positional information refinement needs.

use crate::error::{Error, Result};
use crate::graph::{check_permutation, Graph};
use crate::scalar::{sum, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct StepGraphon<S = f64> {
    weights: Vec<S>,
    values: Vec<S>,
}

impl<S: Scalar> StepGraphon<S> {
    /// Validates and builds a step graphon. Zero-weight parts are dropped;
    /// negative weights, asymmetric or out-of-range values are rejected.
    pub fn new(weights: Vec<S>, values: Vec<Vec<S>>) -> Result<Self> {
        let k = weights.len();
        if k == 0 {
            return Err(Error::InvalidGraphon("no parts".into()));
        }
        if values.len() != k || values.iter().any(|row| row.len() != k) {
            return Err(Error::InvalidGraphon(format!("value matrix must be {k}x{k}")));
        }
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::InvalidGraphon(format!("negative part weight {w}")));
        }
        check_unit_sum(&weights)?;
        for i in 0..k {
            for j in 0..k {
                let v = &values[i][j];
                if v.is_negative() || *v > S::one() {
                    return Err(Error::InvalidGraphon(format!("value {v} at ({i},{j}) outside [0,1]")));
                }
                if values[j][i] != *v {
                    return Err(Error::InvalidGraphon(format!("values not symmetric at ({i},{j})")));
                }
            }
        }
        let keep: Vec<usize> = (0..k).filter(|&i| !weights[i].is_zero()).collect();
        let weights = keep.iter().map(|&i| weights[i].clone()).collect();
        let values = keep
            .iter()
            .flat_map(|&i| keep.iter().map(move |&j| (i, j)))
            .map(|(i, j)| values[i][j].clone())
            .collect();
        Ok(StepGraphon { weights, values })
    }

    pub(crate) fn from_raw(weights: Vec<S>, values: Vec<S>) -> Self {
        debug_assert_eq!(values.len(), weights.len() * weights.len());
        StepGraphon { weights, values }
    }

    /// W_G: `n` parts of measure `1/n`, value 1 on edges and 0 elsewhere.
    pub fn embed_graph(g: &Graph) -> Result<Self> {
        let n = g.order();
        if n == 0 {
            return Err(Error::InvalidGraph("cannot embed the graph with no vertices".into()));
        }
        let weights = vec![S::from_ratio(1, n as i64); n];
        let values = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .map(|(u, v)| if g.has_edge(u, v) { S::one() } else { S::zero() })
            .collect();
        Ok(StepGraphon { weights, values })
    }

    /// Const(α).
    pub fn constant(alpha: S) -> Result<Self> {
        if alpha.is_negative() || alpha > S::one() {
            return Err(Error::InvalidGraphon(format!("constant {alpha} outside [0,1]")));
        }
        Ok(StepGraphon {
            weights: vec![S::one()],
            values: vec![alpha],
        })
    }

    /// Complete multipartite graphon K_{A_1..A_r} with class measures `weights`.
    pub fn complete_multipartite(weights: Vec<S>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidGraphon("no classes".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::InvalidGraphon(format!("class weight {w} is not positive")));
        }
        check_unit_sum(&weights)?;
        let k = weights.len();
        let values = (0..k * k)
            .map(|c| if c / k == c % k { S::zero() } else { S::one() })
            .collect();
        Ok(StepGraphon { weights, values })
    }

    /// Complete r-partite graphon with equal classes, W_{K_r}.
    pub fn balanced_multipartite(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidGraphon("no classes".into()));
        }
        Self::complete_multipartite(vec![S::from_ratio(1, r as i64); r])
    }

    pub fn parts(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> &S {
        &self.values[i * self.weights.len() + j]
    }

    pub(crate) fn raw_values(&self) -> &[S] {
        &self.values
    }

    pub fn values(&self) -> Vec<Vec<S>> {
        self.values.chunks(self.parts()).map(<[S]>::to_vec).collect()
    }

    /// W^σ: part `i` of the result is part `sigma[i]` of `self`.
    pub fn permute_parts(&self, sigma: &[usize]) -> Result<Self> {
        let k = self.parts();
        check_permutation(sigma, k)?;
        let weights = sigma.iter().map(|&s| self.weights[s].clone()).collect();
        let values = (0..k * k)
            .map(|c| self.value(sigma[c / k], sigma[c % k]).clone())
            .collect();
        Ok(StepGraphon { weights, values })
    }

    /// Replaces part `i` by consecutive sub-parts with the given measures,
    /// each inheriting part `i`'s row and column.
    pub fn split_part(&self, i: usize, measures: &[S]) -> Result<Self> {
        let k = self.parts();
        if i >= k {
            return Err(Error::InvalidArgument(format!("part {i} out of range 0..{k}")));
        }
        if measures.is_empty() || measures.iter().any(|m| !m.is_positive()) {
            return Err(Error::InvalidArgument("split measures must be positive".into()));
        }
        let total = sum(measures.iter().cloned());
        if (total - self.weights[i].clone()).abs() > S::sum_tolerance() {
            return Err(Error::InvalidArgument(format!(
                "split measures do not add up to the weight {} of part {i}",
                self.weights[i]
            )));
        }
        // origin[p] = index of the original part that new part p came from
        let origin: Vec<usize> = (0..i)
            .chain(std::iter::repeat_n(i, measures.len()))
            .chain(i + 1..k)
            .collect();
        let mut weights: Vec<S> = self.weights[..i].to_vec();
        weights.extend(measures.iter().cloned());
        weights.extend(self.weights[i + 1..].iter().cloned());
        let kk = origin.len();
        let values = (0..kk * kk)
            .map(|c| self.value(origin[c / kk], origin[c % kk]).clone())
            .collect();
        Ok(StepGraphon { weights, values })
    }

    /// Degree function W_*: entry `i` is `Σ_j λ_j W_ij`.
    pub fn degree_function(&self) -> Vec<S> {
        (0..self.parts())
            .map(|i| sum((0..self.parts()).map(|j| self.weights[j].clone() * self.value(i, j).clone())))
            .collect()
    }

    /// ρ(W) = Σ λ_i λ_j W_ij.
    pub fn edge_density(&self) -> S {
        let k = self.parts();
        sum((0..k * k).map(|c| self.weights[c / k].clone() * self.weights[c % k].clone() * self.values[c].clone()))
    }

    /// True when every value is 0 or 1.
    pub fn is_zero_one(&self) -> bool {
        self.values.iter().all(|v| v.is_zero() || v.is_one())
    }

    /// Support graph on the parts of a 0/1-valued graphon: parts `i != j`
    /// adjacent iff `W_ij = 1`. Diagonal values are ignored.
    pub fn support_graph(&self) -> Graph {
        let k = self.parts();
        let mut g = Graph::empty(k);
        for i in 0..k {
            for j in i + 1..k {
                if !self.value(i, j).is_zero() {
                    g.try_insert(i, j).expect("fresh pair");
                }
            }
        }
        g
    }

    pub fn to_f64(&self) -> StepGraphon<f64> {
        StepGraphon {
            weights: self.weights.iter().map(Scalar::to_f64).collect(),
            values: self.values.iter().map(Scalar::to_f64).collect(),
        }
    }
}

pub(crate) fn check_unit_sum<S: Scalar>(weights: &[S]) -> Result<()> {
    let total = sum(weights.iter().cloned());
    if (total.clone() - S::one()).abs() > S::sum_tolerance() {
        return Err(Error::InvalidGraphon(format!("part weights sum to {total}, not 1")));
    }
    Ok(())
}

/// One cell of a common refinement: its measure and the part it lies in on
/// each side.
#[derive(Clone, Debug, PartialEq)]
pub struct RefinedPart<S> {
    pub measure: S,
    pub left: usize,
    pub right: usize,
}

/// Overlays the interval partitions of two weight vectors. Produces at most
/// `k_left + k_right - 1` cells.
pub fn overlay_partitions<S: Scalar>(left: &[S], right: &[S]) -> Vec<RefinedPart<S>> {
    let mut out = Vec::with_capacity(left.len() + right.len());
    let (mut i, mut j) = (0, 0);
    let mut rest_l = left.first().cloned().unwrap_or_else(S::zero);
    let mut rest_r = right.first().cloned().unwrap_or_else(S::zero);
    while i < left.len() && j < right.len() {
        let piece = if rest_l < rest_r {
            rest_l.clone()
        } else {
            rest_r.clone()
        };
        if !piece.is_negligible() {
            out.push(RefinedPart {
                measure: piece.clone(),
                left: i,
                right: j,
            });
        }
        rest_l = rest_l - piece.clone();
        rest_r = rest_r - piece;
        if rest_l.is_negligible() {
            i += 1;
            if i < left.len() {
                rest_l = rest_l + left[i].clone();
            }
        }
        if rest_r.is_negligible() {
            j += 1;
            if j < right.len() {
                rest_r = rest_r + right[j].clone();
            }
        }
    }
    out
}

/// Re-expresses `u` and `w` on one shared partition. Each output equals its
/// input as a function on `[0,1]²`.
pub fn common_refinement<S: Scalar>(u: &StepGraphon<S>, w: &StepGraphon<S>) -> (StepGraphon<S>, StepGraphon<S>) {
    let cells = overlay_partitions(u.weights(), w.weights());
    let k = cells.len();
    let weights: Vec<S> = cells.iter().map(|c| c.measure.clone()).collect();
    let pick = |side: &dyn Fn(&RefinedPart<S>) -> usize, g: &StepGraphon<S>| -> Vec<S> {
        (0..k * k)
            .map(|c| g.value(side(&cells[c / k]), side(&cells[c % k])).clone())
            .collect()
    };
    let uv = pick(&|c| c.left, u);
    let wv = pick(&|c| c.right, w);
    (
        StepGraphon::from_raw(weights.clone(), uv),
        StepGraphon::from_raw(weights, wv),
    )
}

/// ‖u − w‖₁ = Σ λ_i λ_j |u_ij − w_ij| on the common refinement. This is the
/// distance under the identity rearrangement, an upper bound on δ₁(u, w).
pub fn l1_distance<S: Scalar>(u: &StepGraphon<S>, w: &StepGraphon<S>) -> S {
    let (a, b) = common_refinement(u, w);
    let k = a.parts();
    let lam = a.weights();
    sum((0..k * k).map(|c| {
        lam[c / k].clone() * lam[c % k].clone() * (a.raw_values()[c].clone() - b.raw_values()[c].clone()).abs()
    }))
}
