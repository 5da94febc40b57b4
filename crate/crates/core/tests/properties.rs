#![allow(clippy::needless_range_loop)]

use num_traits::Signed;
use proptest::prelude::*;

use graphlim::cutnorm::{cut_norm_exact, cut_norm_heuristic, StepKernel};
use graphlim::density::{density_graphon, EdgeDensity};
use graphlim::editdist::{edit_distance_exact, edit_distance_heuristic, HeuristicOptions};
use graphlim::fracdist::{
    birkhoff_approximate, delta1_lower, delta1_objective, delta1_upper, sinkhorn_scale, Delta1Config, OverlayMatrix,
};
use graphlim::graph::{blow_up, nonisomorphic_graphs, Graph};
use graphlim::io;
use graphlim::sampler::sample_w_random;
use graphlim::scalar::{rational, Rational};
use graphlim::stepgraphon::{l1_distance, StepGraphon};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(p, _)| p)).unwrap()
        })
    })
}

fn graph_pair(max_n: usize) -> impl Strategy<Value = (Graph, Graph)> {
    (1..=max_n).prop_flat_map(|n| {
        let m = n * (n - 1) / 2;
        (
            proptest::collection::vec(any::<bool>(), m),
            proptest::collection::vec(any::<bool>(), m),
        )
            .prop_map(move |(a, b)| {
                let build = |bits: Vec<bool>| {
                    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
                    Graph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(p, _)| p)).unwrap()
                };
                (build(a), build(b))
            })
    })
}

/// Step graphon with rational weights `w_i / Σw` and values in eighths.
fn graphon(max_k: usize) -> impl Strategy<Value = StepGraphon<Rational>> {
    (1..=max_k).prop_flat_map(|k| {
        (
            proptest::collection::vec(1i64..6, k),
            proptest::collection::vec(0i64..=8, k * (k + 1) / 2),
        )
            .prop_map(move |(w, upper)| {
                let total: i64 = w.iter().sum();
                let mut values = vec![vec![rational(0, 1); k]; k];
                let mut it = upper.into_iter();
                for i in 0..k {
                    for j in i..k {
                        let v = rational(it.next().unwrap(), 8);
                        values[i][j] = v.clone();
                        values[j][i] = v;
                    }
                }
                StepGraphon::new(w.iter().map(|&x| rational(x, total)).collect(), values).unwrap()
            })
    })
}

fn kernel(max_k: usize) -> impl Strategy<Value = StepKernel<Rational>> {
    (1..=max_k).prop_flat_map(|k| {
        (
            proptest::collection::vec(1i64..6, k),
            proptest::collection::vec(-8i64..=8, k * (k + 1) / 2),
        )
            .prop_map(move |(w, upper)| {
                let total: i64 = w.iter().sum();
                let mut values = vec![vec![rational(0, 1); k]; k];
                let mut it = upper.into_iter();
                for i in 0..k {
                    for j in i..k {
                        let v = rational(it.next().unwrap(), 4);
                        values[i][j] = v.clone();
                        values[j][i] = v;
                    }
                }
                StepKernel::new(w.iter().map(|&x| rational(x, total)).collect(), values).unwrap()
            })
    })
}

fn small_motifs() -> Vec<Graph> {
    (1..=4).flat_map(|n| nonisomorphic_graphs(n).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn density_survives_part_permutation_and_splitting(w in graphon(4), seed in 0usize..24) {
        let k = w.parts();
        let mut sigma: Vec<usize> = (0..k).collect();
        sigma.rotate_left(seed % k);
        let permuted = w.permute_parts(&sigma).unwrap();
        let half = w.weights()[seed % k].clone() / rational(2, 1);
        let split = w.split_part(seed % k, &[half.clone(), half]).unwrap();
        for f in small_motifs() {
            let t = density_graphon(&f, &w).unwrap();
            prop_assert_eq!(&density_graphon(&f, &permuted).unwrap(), &t);
            prop_assert_eq!(&density_graphon(&f, &split).unwrap(), &t);
        }
    }

    #[test]
    fn degrees_average_to_edge_density(w in graphon(5)) {
        let avg = w
            .degree_function()
            .into_iter()
            .zip(w.weights())
            .fold(rational(0, 1), |acc, (d, l)| acc + d * l.clone());
        prop_assert_eq!(avg, w.edge_density());
    }

    #[test]
    fn l1_distance_is_a_metric(a in graphon(3), b in graphon(3), c in graphon(3)) {
        let ab = l1_distance(&a, &b);
        prop_assert_eq!(&ab, &l1_distance(&b, &a));
        prop_assert!(ab <= l1_distance(&a, &c) + l1_distance(&c, &b));
        prop_assert_eq!(l1_distance(&a, &a), rational(0, 1));
    }

    #[test]
    fn density_is_monotone_in_values(w in graphon(3), bump in 0usize..9) {
        let k = w.parts();
        let (i, j) = (bump % k, (bump / 3) % k);
        let mut values = w.values();
        let raised = (values[i][j].clone() + rational(1, 8)).min(rational(1, 1));
        values[i][j] = raised.clone();
        values[j][i] = raised;
        let bigger = StepGraphon::new(w.weights().to_vec(), values).unwrap();
        for f in small_motifs() {
            prop_assert!(density_graphon(&f, &w).unwrap() <= density_graphon(&f, &bigger).unwrap());
        }
    }

    #[test]
    fn cut_norm_bounds(d in kernel(7), picks in proptest::collection::vec((any::<u16>(), any::<u16>()), 40)) {
        let exact = cut_norm_exact(&d).unwrap();
        prop_assert!(exact.value <= d.l1_norm());
        prop_assert_eq!(&cut_norm_exact(&d.neg()).unwrap().value, &exact.value);
        let k = d.parts();
        for (s, t) in picks {
            let s: Vec<usize> = (0..k).filter(|i| s >> i & 1 == 1).collect();
            let t: Vec<usize> = (0..k).filter(|i| t >> i & 1 == 1).collect();
            let v = d.rectangle_sum(&s, &t);
            prop_assert!(v.clone() <= exact.value && -v <= exact.value);
        }
        prop_assert!(cut_norm_heuristic(&d, 4, 0).value <= exact.value);
    }

    #[test]
    fn edit_distance_sandwich((g, h) in graph_pair(7)) {
        let exact = edit_distance_exact(&g, &h).unwrap();
        let back = edit_distance_exact(&h, &g).unwrap();
        prop_assert_eq!(exact.mismatches, back.mismatches);
        let rho = (g.edge_density() - h.edge_density()).abs();
        prop_assert!(rho <= exact.exact_value());
        let heur = edit_distance_heuristic(&g, &h, &HeuristicOptions::new(4, 1)).unwrap();
        prop_assert!(heur.mismatches >= exact.mismatches);
        let cfg = Delta1Config { edit_bijection: Some(exact.bijection.clone()), starts: 2, ..Delta1Config::default() };
        let upper = delta1_upper(&g, &h, &cfg).unwrap().value;
        prop_assert!(upper <= exact.value + 1e-12);
        prop_assert!(delta1_lower(&g, &h) <= upper + 1e-12);
    }

    #[test]
    fn relabelled_copies_are_at_distance_zero(g in graph(8), shift in 0usize..8) {
        let n = g.order();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let h = g.permuted(&perm).unwrap();
        prop_assert_eq!(edit_distance_exact(&g, &h).unwrap().mismatches, 0);
    }

    #[test]
    fn overlay_objective_symmetries((g, h) in graph_pair(4), k in 1usize..=3) {
        let n = g.order();
        let a = OverlayMatrix::uniform(n, n);
        let v = delta1_objective(&g, &h, &a).unwrap();
        prop_assert!((v - delta1_objective(&h, &g, &a.transpose()).unwrap()).abs() < 1e-12);
        let big = delta1_objective(&blow_up(&g, k).unwrap(), &blow_up(&h, k).unwrap(), &a.block_expand(k)).unwrap();
        prop_assert!((v - big).abs() < 1e-12);
    }

    #[test]
    fn birkhoff_stays_within_bound(n in 2usize..10, m in 1usize..200, raw in proptest::collection::vec(0.01f64..1.0, 100)) {
        let ds = sinkhorn_scale(&raw[..n * n], n, 1e-15, 100_000).unwrap();
        let d = birkhoff_approximate(&OverlayMatrix::from_doubly_stochastic(&ds, n).unwrap(), m).unwrap();
        prop_assert!(d.residual_inf_norm <= d.bound);
        prop_assert_eq!(d.perms.len(), m);
    }

    #[test]
    fn graph_text_round_trip(g in graph(12)) {
        prop_assert_eq!(io::parse_graph(&io::format_graph(&g)).unwrap(), g);
    }

    #[test]
    fn graphon_json_round_trip(w in graphon(4)) {
        let text = io::format_graphon(&w);
        prop_assert_eq!(io::parse_graphon::<Rational>(&text).unwrap(), w);
    }

    #[test]
    fn sampling_is_deterministic_and_respects_support(w in graphon(3), n in 1usize..40, seed in any::<u64>()) {
        let a = sample_w_random(&w, n, seed).unwrap();
        prop_assert_eq!(&a, &sample_w_random(&w, n, seed).unwrap());
        for (u, v) in a.edges() {
            prop_assert!(u < v);
        }
    }
}
