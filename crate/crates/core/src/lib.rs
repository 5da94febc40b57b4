//! Finite graphs, step graphons and the distances between them.
//!
//! - [`graph`], [`stepgraphon`], [`io`]: the objects, and plain-text formats for them.
//! - [`density`]: homomorphism densities `t(F, G)` and `t(F, W)`.
//! - [`cutnorm`]: exact and heuristic cut norms of step kernels.
//! - [`editdist`]: normalized edit distance between graphs of equal order.
//! - [`fracdist`]: fractional overlays, bounds on δ₁, Birkhoff approximation.
//! - [`extremal`]: clique-template optimization and multipartite fits.
//! - [`sampler`]: W-random graphs and density convergence gaps.
//! - [`harness`]: the stability sweep and the separating pair.
//!
//! Arithmetic is generic over [`scalar::Scalar`], implemented for `f64` and
//! exact rationals. See `examples/` for runnable walkthroughs.

#![allow(clippy::needless_range_loop)]

pub mod cutnorm;
pub mod density;
pub mod editdist;
pub mod error;
pub mod extremal;
pub mod fracdist;
pub mod graph;
pub mod harness;
pub mod io;
mod lap;
pub mod sampler;
pub mod scalar;
pub mod stepgraphon;
