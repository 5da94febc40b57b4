//! Linear minimization over the transportation polytope
//! `{A ≥ 0 : row sums 1/m, column sums 1/n}`.
//!
//! Square instances reduce to an assignment problem. Otherwise the supplies
//! are scaled to integers (`n/g` per row, `m/g` per column, `g = gcd(m,n)`)
//! and solved by successive shortest paths with Dijkstra on reduced costs.

use num_integer::Integer;

use crate::lap;

/// Returns an optimal `m×n` row-major matrix of the transportation polytope
/// for the linear objective `Σ cost_ij A_ij`.
pub fn minimize(cost: &[f64], m: usize, n: usize) -> Vec<f64> {
    debug_assert_eq!(cost.len(), m * n);
    let mut out = vec![0.0; m * n];
    if m == 0 || n == 0 {
        return out;
    }
    if m == n {
        let (_, assign) = lap::solve(cost, n);
        for (i, j) in assign.into_iter().enumerate() {
            out[i * n + j] = 1.0 / n as f64;
        }
        return out;
    }
    let g = m.gcd(&n);
    let flows = min_cost_flow(cost, m, n, (n / g) as i64, (m / g) as i64);
    let unit = g as f64 / (m as f64 * n as f64);
    for (c, f) in flows.into_iter().enumerate() {
        out[c] = f as f64 * unit;
    }
    out
}

struct Edge {
    to: usize,
    cap: i64,
    cost: f64,
}

/// Min-cost flow on the complete bipartite network source → rows → columns →
/// sink, every row supplying `supply` units and every column absorbing
/// `demand`. Returns the row→column flows, row-major.
fn min_cost_flow(cost: &[f64], m: usize, n: usize, supply: i64, demand: i64) -> Vec<i64> {
    let shift = cost.iter().cloned().fold(f64::INFINITY, f64::min);
    let source = m + n;
    let sink = m + n + 1;
    let nodes = m + n + 2;
    let mut edges: Vec<Edge> = Vec::with_capacity(2 * (m * n + m + n));
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    let add = |edges: &mut Vec<Edge>, adj: &mut Vec<Vec<usize>>, from: usize, to: usize, cap: i64, cost: f64| {
        adj[from].push(edges.len());
        edges.push(Edge { to, cap, cost });
        adj[to].push(edges.len());
        edges.push(Edge {
            to: from,
            cap: 0,
            cost: -cost,
        });
    };
    for i in 0..m {
        add(&mut edges, &mut adj, source, i, supply, 0.0);
    }
    let first_arc = edges.len();
    for i in 0..m {
        for j in 0..n {
            add(
                &mut edges,
                &mut adj,
                i,
                m + j,
                supply.min(demand),
                cost[i * n + j] - shift,
            );
        }
    }
    for j in 0..n {
        add(&mut edges, &mut adj, m + j, sink, demand, 0.0);
    }

    let total = supply * m as i64;
    let mut dual = vec![0.0f64; nodes];
    let mut flow = 0;
    while flow < total {
        let mut dist = vec![f64::INFINITY; nodes];
        let mut prev_edge = vec![usize::MAX; nodes];
        let mut done = vec![false; nodes];
        dist[source] = 0.0;
        loop {
            let mut v = usize::MAX;
            for x in 0..nodes {
                if !done[x] && dist[x].is_finite() && (v == usize::MAX || dist[x] < dist[v]) {
                    v = x;
                }
            }
            if v == usize::MAX {
                break;
            }
            done[v] = true;
            if v == sink {
                break;
            }
            for &e in &adj[v] {
                let edge = &edges[e];
                if edge.cap == 0 || done[edge.to] {
                    continue;
                }
                let reduced = (edge.cost - dual[edge.to] + dual[v]).max(0.0);
                if dist[v] + reduced < dist[edge.to] {
                    dist[edge.to] = dist[v] + reduced;
                    prev_edge[edge.to] = e;
                }
            }
        }
        if !done[sink] {
            break;
        }
        for v in 0..nodes {
            if done[v] {
                dual[v] -= dist[sink] - dist[v];
            }
        }
        let mut push = total - flow;
        let mut v = sink;
        while v != source {
            let e = prev_edge[v];
            push = push.min(edges[e].cap);
            v = edges[e ^ 1].to;
        }
        let mut v = sink;
        while v != source {
            let e = prev_edge[v];
            edges[e].cap -= push;
            edges[e ^ 1].cap += push;
            v = edges[e ^ 1].to;
        }
        flow += push;
    }

    (0..m * n).map(|c| edges[first_arc + 2 * c + 1].cap).collect()
}
