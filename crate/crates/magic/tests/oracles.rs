//! Oracle-backed checks: cached computations against naive enumeration,
//! analytic gradients against finite differences, and the sampler against
//! the likelihood it implies.

mod common;

use common::*;
use magic::graph::{build_network, DirectedEdge, Directedness, NodeRecord};
use magic::matrix::Matrix;
use magic::model::{
    affiliation_gradient, edge_probability, interaction_gradient, log_likelihood, sample_network,
    Mode, PrefixCache, DEFAULT_EPSILON_FLOOR,
};

const FLOOR: f64 = DEFAULT_EPSILON_FLOOR;

#[test]
fn likelihood_matches_naive_enumeration() {
    for seed in 0..5 {
        let net = random_natural_network(40, 0.15, seed);
        let (f, eta) = random_parameters(net.node_count(), 3, seed + 100);
        let fast = log_likelihood(&net, &f, &eta, Mode::Net, FLOOR).unwrap();
        let naive = naive_log_likelihood(&net, &f, &eta, Mode::Net, FLOOR);
        assert!(
            relative_error(fast, naive) < 1e-12,
            "seed {seed}: {fast} vs {naive}"
        );
    }
    for seed in 0..3 {
        let net = random_undirected_network(30, 0.2, seed);
        let (f, eta) = random_parameters(net.node_count(), 2, seed + 300);
        let eta = symmetrized(eta);
        let fast = log_likelihood(&net, &f, &eta, Mode::Raw, FLOOR).unwrap();
        let naive = naive_log_likelihood(&net, &f, &eta, Mode::Raw, FLOOR);
        assert!(relative_error(fast, naive) < 1e-12);
    }
}

#[test]
fn chain_gradient_matches_naive_summation() {
    // the three-node chain a@1 -> b@2 -> c@3 with random parameters
    let nodes = vec![
        NodeRecord::document("a", 1, Vec::new()),
        NodeRecord::document("b", 2, Vec::new()),
        NodeRecord::document("c", 3, Vec::new()),
    ];
    let edges = vec![DirectedEdge::new("a", "b"), DirectedEdge::new("b", "c")];
    let net = build_network(nodes, &edges, Directedness::Directed).unwrap();
    let (f, eta) = random_parameters(3, 2, 7);
    let cache = PrefixCache::build(&net, &f, &eta, Mode::Net).unwrap();
    for node in 0..3 {
        let cached = affiliation_gradient(&net, &f, &eta, node, Mode::Net, FLOOR, &cache).unwrap();
        let naive = naive_affiliation_gradient(&net, &f, &eta, node, Mode::Net, FLOOR);
        for (c, n) in cached.iter().zip(&naive) {
            assert!(relative_error(*c, *n) < 1e-12, "node {node}: {c} vs {n}");
        }
    }
}

#[test]
fn cached_gradients_match_naive_on_random_networks() {
    for seed in 0..4 {
        let net = random_natural_network(60, 0.1, seed + 40);
        let (f, eta) = random_parameters(net.node_count(), 3, seed + 41);
        let cache = PrefixCache::build(&net, &f, &eta, Mode::Net).unwrap();
        for node in (0..net.node_count()).step_by(7) {
            let cached =
                affiliation_gradient(&net, &f, &eta, node, Mode::Net, FLOOR, &cache).unwrap();
            let naive = naive_affiliation_gradient(&net, &f, &eta, node, Mode::Net, FLOOR);
            for (c, n) in cached.iter().zip(&naive) {
                assert!(relative_error(*c, *n) < 1e-10);
            }
        }
        let cached = interaction_gradient(&net, &f, &eta, Mode::Net, FLOOR).unwrap();
        let naive = naive_interaction_gradient(&net, &f, &eta, Mode::Net, FLOOR);
        for (c, n) in cached.as_slice().iter().zip(naive.as_slice()) {
            assert!(relative_error(*c, *n) < 1e-10);
        }
    }
}

#[test]
fn raw_mode_gradients_match_naive() {
    for seed in 0..3 {
        let net = random_undirected_network(40, 0.15, seed + 90);
        let (f, eta) = random_parameters(net.node_count(), 3, seed + 91);
        let eta = symmetrized(eta);
        let cache = PrefixCache::build(&net, &f, &eta, Mode::Raw).unwrap();
        for node in (0..net.node_count()).step_by(5) {
            let cached =
                affiliation_gradient(&net, &f, &eta, node, Mode::Raw, FLOOR, &cache).unwrap();
            let naive = naive_affiliation_gradient(&net, &f, &eta, node, Mode::Raw, FLOOR);
            for (c, n) in cached.iter().zip(&naive) {
                assert!(relative_error(*c, *n) < 1e-10);
            }
        }
        let cached = interaction_gradient(&net, &f, &eta, Mode::Raw, FLOOR).unwrap();
        let naive = naive_interaction_gradient(&net, &f, &eta, Mode::Raw, FLOOR);
        for (c, n) in cached.as_slice().iter().zip(naive.as_slice()) {
            assert!(relative_error(*c, *n) < 1e-10);
        }
    }
}

#[test]
fn affiliation_gradient_matches_finite_differences() {
    let net = random_natural_network(20, 0.2, 123);
    let (f, eta) = random_parameters(net.node_count(), 3, 124);
    let cache = PrefixCache::build(&net, &f, &eta, Mode::Net).unwrap();
    let h = 1e-5;
    for node in [0, 7, 13, 19] {
        let analytic =
            affiliation_gradient(&net, &f, &eta, node, Mode::Net, FLOOR, &cache).unwrap();
        for coordinate in 0..3 {
            let mut minus = f.clone();
            minus.set(node, coordinate, f.get(node, coordinate) - h);
            let mut plus = f.clone();
            plus.set(node, coordinate, f.get(node, coordinate) + h);
            let fd = (log_likelihood(&net, &plus, &eta, Mode::Net, FLOOR).unwrap()
                - log_likelihood(&net, &minus, &eta, Mode::Net, FLOOR).unwrap())
                / (2.0 * h);
            assert!(
                relative_error(analytic[coordinate], fd) < 1e-5,
                "node {node} coord {coordinate}: {} vs {fd}",
                analytic[coordinate]
            );
        }
    }
}

#[test]
fn interaction_gradient_matches_finite_differences() {
    let net = random_natural_network(20, 0.2, 321);
    let (f, eta) = random_parameters(net.node_count(), 2, 322);
    let analytic = interaction_gradient(&net, &f, &eta, Mode::Net, FLOOR).unwrap();
    let h = 1e-5;
    for i in 0..2 {
        for j in 0..2 {
            let mut minus = eta.clone();
            minus.set(i, j, eta.get(i, j) - h);
            let mut plus = eta.clone();
            plus.set(i, j, eta.get(i, j) + h);
            let fd = (log_likelihood(&net, &f, &plus, Mode::Net, FLOOR).unwrap()
                - log_likelihood(&net, &f, &minus, Mode::Net, FLOOR).unwrap())
                / (2.0 * h);
            assert!(relative_error(analytic.get(i, j), fd) < 1e-5);
        }
    }
}

#[test]
fn raw_interaction_gradient_matches_symmetric_finite_differences() {
    // raw mode keeps the matrix symmetric, so perturb (i, j) and (j, i)
    // together and compare against the summed analytic entries
    let net = random_undirected_network(25, 0.2, 55);
    let (f, eta) = random_parameters(net.node_count(), 3, 56);
    let eta = symmetrized(eta);
    let analytic = interaction_gradient(&net, &f, &eta, Mode::Raw, FLOOR).unwrap();
    let h = 1e-5;
    for i in 0..3 {
        for j in i..3 {
            let mut minus = eta.clone();
            let mut plus = eta.clone();
            minus.set(i, j, eta.get(i, j) - h);
            plus.set(i, j, eta.get(i, j) + h);
            if i != j {
                minus.set(j, i, eta.get(j, i) - h);
                plus.set(j, i, eta.get(j, i) + h);
            }
            let fd = (log_likelihood(&net, &f, &plus, Mode::Raw, FLOOR).unwrap()
                - log_likelihood(&net, &f, &minus, Mode::Raw, FLOOR).unwrap())
                / (2.0 * h);
            let directional = if i == j {
                analytic.get(i, i)
            } else {
                analytic.get(i, j) + analytic.get(j, i)
            };
            assert!(relative_error(directional, fd) < 1e-5);
        }
    }
}

#[test]
fn sampled_graph_log_probability_equals_the_likelihood() {
    // enumerate every pair of a sampled graph: edges contribute log p,
    // gated non-edges log(1 - p); the total must equal the likelihood
    for seed in 0..5 {
        let (f, eta) = random_parameters(9, 2, seed + 500);
        let timestamps: Vec<i64> = vec![1, 2, 2, 3, 4, 5, 5, 6, 7];
        let net = sample_network(&f, &eta, &timestamps, Mode::Net, seed).unwrap();
        let mut pairwise = 0.0;
        for u in 0..9 {
            for v in 0..9 {
                if u == v || net.timestamp(u) >= net.timestamp(v) {
                    continue;
                }
                let p = edge_probability(f.row(u), &eta, f.row(v), true);
                if net.has_edge(u, v) {
                    pairwise += p.ln();
                } else {
                    pairwise += (1.0 - p).ln();
                }
            }
        }
        let ll = log_likelihood(&net, &f, &eta, Mode::Net, FLOOR).unwrap();
        assert!(
            relative_error(pairwise, ll) < 1e-10,
            "seed {seed}: {pairwise} vs {ll}"
        );
    }
}

#[test]
fn raw_mode_edge_probability_is_symmetric() {
    let (f, eta) = random_parameters(12, 4, 777);
    let eta = symmetrized(eta);
    for u in 0..12 {
        for v in (u + 1)..12 {
            let forward = edge_probability(f.row(u), &eta, f.row(v), true);
            let backward = edge_probability(f.row(v), &eta, f.row(u), true);
            assert!(relative_error(forward, backward) < 1e-12);
        }
    }
}

#[test]
fn impossible_pairs_carry_no_information() {
    // all-tied network: every pair fails the gate no matter the parameters
    let nodes: Vec<NodeRecord> = (0..6)
        .map(|i| NodeRecord::document(padded_id(i, 6), 5, Vec::new()))
        .collect();
    let net = build_network(nodes, &[], Directedness::Directed).unwrap();
    let (f, eta) = random_parameters(6, 3, 88);
    assert_eq!(
        log_likelihood(&net, &f, &eta, Mode::Net, FLOOR).unwrap(),
        0.0
    );
    let grad = interaction_gradient(&net, &f, &eta, Mode::Net, FLOOR).unwrap();
    assert!(grad.as_slice().iter().all(|&g| g == 0.0));
    let cache = PrefixCache::build(&net, &f, &eta, Mode::Net).unwrap();
    for node in 0..6 {
        let g = affiliation_gradient(&net, &f, &eta, node, Mode::Net, FLOOR, &cache).unwrap();
        assert!(g.iter().all(|&v| v == 0.0));
    }
}

#[test]
fn zero_affinity_augmentation_is_bit_identical() {
    // append a time-reversed non-adjacent node pair with zero affiliations:
    // likelihood and every original gradient keep their exact bits
    let base = random_natural_network(25, 0.2, 9000);
    let n = base.node_count();
    let (f, eta) = random_parameters(n, 3, 9001);

    let mut nodes: Vec<NodeRecord> = base.nodes().to_vec();
    nodes.push(NodeRecord::document("zz_late", 101, Vec::new()));
    nodes.push(NodeRecord::document("zz_later", 100, Vec::new()));
    let edges: Vec<DirectedEdge> = base
        .edges()
        .map(|(u, v)| DirectedEdge::new(base.node(u).id.clone(), base.node(v).id.clone()))
        .collect();
    let augmented = build_network(nodes, &edges, Directedness::Directed).unwrap();

    let mut f_augmented = Matrix::zeros(n + 2, 3);
    for u in 0..n {
        // ids sort before the zz pair, so original indices are unchanged
        f_augmented.row_mut(u).copy_from_slice(f.row(u));
    }

    let base_ll = log_likelihood(&base, &f, &eta, Mode::Net, FLOOR).unwrap();
    let augmented_ll = log_likelihood(&augmented, &f_augmented, &eta, Mode::Net, FLOOR).unwrap();
    assert_eq!(base_ll.to_bits(), augmented_ll.to_bits());

    let base_cache = PrefixCache::build(&base, &f, &eta, Mode::Net).unwrap();
    let augmented_cache = PrefixCache::build(&augmented, &f_augmented, &eta, Mode::Net).unwrap();
    for node in 0..n {
        let a = affiliation_gradient(&base, &f, &eta, node, Mode::Net, FLOOR, &base_cache).unwrap();
        let b = affiliation_gradient(
            &augmented,
            &f_augmented,
            &eta,
            node,
            Mode::Net,
            FLOOR,
            &augmented_cache,
        )
        .unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
    let ga = interaction_gradient(&base, &f, &eta, Mode::Net, FLOOR).unwrap();
    let gb = interaction_gradient(&augmented, &f_augmented, &eta, Mode::Net, FLOOR).unwrap();
    for (x, y) in ga.as_slice().iter().zip(gb.as_slice()) {
        assert_eq!(x.to_bits(), y.to_bits());
    }
}
