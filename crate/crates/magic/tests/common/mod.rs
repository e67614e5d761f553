//! Shared helpers for integration tests: network generators and naive
//! reference implementations of the likelihood and gradients.
//!
//! The naive oracles enumerate node pairs directly with explicit loops and
//! stay deliberately independent of the library's cached computation paths.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use magic::cover::CommunityCover;
use magic::graph::{
    build_network, DirectedEdge, Directedness, NodeRecord, TemporalTextNetwork,
};
use magic::matrix::Matrix;
use magic::model::{sample_network, Mode};
use magic::seed::derive_seed;

pub fn padded_id(index: usize, total: usize) -> String {
    let width = total.saturating_sub(1).to_string().len().max(1);
    format!("n{index:0width$}")
}

/// Random directed network with shuffled timestamps (including ties) and
/// each forward-in-time pair linked independently.
pub fn random_natural_network(
    n: usize,
    edge_probability: f64,
    seed: u64,
) -> TemporalTextNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // draw from a range smaller than n so tie groups actually occur
    let ceiling = (n as i64 / 2).max(2);
    let timestamps: Vec<i64> = (0..n).map(|_| rng.random_range(1..=ceiling)).collect();
    let nodes: Vec<NodeRecord> = (0..n)
        .map(|i| NodeRecord::document(padded_id(i, n), timestamps[i], Vec::new()))
        .collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if timestamps[u] < timestamps[v] && rng.random::<f64>() < edge_probability {
                edges.push(DirectedEdge::new(padded_id(u, n), padded_id(v, n)));
            }
        }
    }
    build_network(nodes, &edges, Directedness::Directed).unwrap()
}

/// Random undirected network for raw-mode tests.
pub fn random_undirected_network(
    n: usize,
    edge_probability: f64,
    seed: u64,
) -> TemporalTextNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes: Vec<NodeRecord> = (0..n)
        .map(|i| NodeRecord::document(padded_id(i, n), 0, Vec::new()))
        .collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < edge_probability {
                edges.push(DirectedEdge::new(padded_id(u, n), padded_id(v, n)));
            }
        }
    }
    build_network(nodes, &edges, Directedness::Undirected).unwrap()
}

/// Positive random parameters, bounded away from zero so observed-edge
/// affinities stay clear of the epsilon floor.
pub fn random_parameters(n: usize, k: usize, seed: u64) -> (Matrix, Matrix) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut affiliations = Matrix::zeros(n, k);
    for r in 0..n {
        for c in 0..k {
            affiliations.set(r, c, rng.random_range(0.05..0.7));
        }
    }
    let mut interactions = Matrix::zeros(k, k);
    for r in 0..k {
        for c in 0..k {
            interactions.set(r, c, rng.random_range(0.1..0.9));
        }
    }
    (affiliations, interactions)
}

pub fn symmetrized(mut interactions: Matrix) -> Matrix {
    interactions.symmetrize();
    interactions
}

/// Disjoint planted blocks sampled through the generative model: indicator
/// affiliations, diagonal-dominant interactions, shuffled timestamps.
pub struct Planted {
    pub network: TemporalTextNetwork,
    pub cover: CommunityCover,
    pub affiliations: Matrix,
    pub interactions: Matrix,
}

pub fn planted_network(
    n: usize,
    k: usize,
    within: f64,
    across: f64,
    seed: u64,
) -> Planted {
    let mut affiliations = Matrix::zeros(n, k);
    let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    for node in 0..n {
        let block = node * k / n;
        affiliations.set(node, block, 1.0);
        sets[block].insert(node);
    }
    let mut interactions = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            interactions.set(i, j, if i == j { within } else { across });
        }
    }
    let mut timestamps: Vec<i64> = (1..=n as i64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "planted-timestamps"));
    for i in (1..timestamps.len()).rev() {
        let j = rng.random_range(0..=i);
        timestamps.swap(i, j);
    }
    let network = sample_network(
        &affiliations,
        &interactions,
        &timestamps,
        Mode::Net,
        derive_seed(seed, "planted-sample"),
    )
    .unwrap();
    let cover = CommunityCover::new(n, sets).unwrap();
    Planted {
        network,
        cover,
        affiliations,
        interactions,
    }
}

/// Rebuilds a network with synthetic tokens: each block draws from its own
/// vocabulary plus a handful of shared filler words.
pub fn with_private_vocabulary(
    planted: &Planted,
    words_per_document: usize,
    vocabulary_per_block: usize,
    seed: u64,
) -> TemporalTextNetwork {
    let net = &planted.network;
    let memberships = planted.cover.node_communities();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "vocabulary"));
    let nodes: Vec<NodeRecord> = (0..net.node_count())
        .map(|u| {
            let block = memberships[u].first().copied().unwrap_or(0);
            let mut tokens = Vec::with_capacity(words_per_document + 1);
            for _ in 0..words_per_document {
                let w = rng.random_range(0..vocabulary_per_block);
                tokens.push(format!("block{block}word{w}"));
            }
            tokens.push(format!("shared{}", rng.random_range(0..3)));
            let record = net.node(u);
            NodeRecord::document(record.id.clone(), record.timestamp, tokens)
        })
        .collect();
    let edges: Vec<DirectedEdge> = net
        .edges()
        .map(|(u, v)| DirectedEdge::new(net.node(u).id.clone(), net.node(v).id.clone()))
        .collect();
    build_network(nodes, &edges, Directedness::Directed).unwrap()
}

// ------------------------------------------------------------- naive oracles

/// Bilinear affinity written as the fully explicit double sum.
pub fn naive_affinity(fu: &[f64], interactions: &Matrix, fv: &[f64]) -> f64 {
    let k = fu.len();
    let mut acc = 0.0;
    for i in 0..k {
        for j in 0..k {
            acc += fu[i] * interactions.get(i, j) * fv[j];
        }
    }
    acc
}

fn naive_log_term(x: f64, floor: f64) -> f64 {
    (1.0 - (-x.max(floor)).exp()).ln()
}

fn naive_weight(x: f64, floor: f64) -> f64 {
    let xc = x.max(floor);
    (-xc).exp() / (1.0 - (-xc).exp())
}

/// Direct enumeration of every gated pair.
pub fn naive_log_likelihood(
    net: &TemporalTextNetwork,
    affiliations: &Matrix,
    interactions: &Matrix,
    mode: Mode,
    floor: f64,
) -> f64 {
    let n = net.node_count();
    let mut total = 0.0;
    match mode {
        Mode::All | Mode::Net => {
            for u in 0..n {
                for v in 0..n {
                    if u == v || net.timestamp(u) >= net.timestamp(v) {
                        continue;
                    }
                    let x = naive_affinity(affiliations.row(u), interactions, affiliations.row(v));
                    if net.has_edge(u, v) {
                        total += naive_log_term(x, floor);
                    } else {
                        total -= x;
                    }
                }
            }
        }
        Mode::Raw => {
            for u in 0..n {
                for v in (u + 1)..n {
                    let x = naive_affinity(affiliations.row(u), interactions, affiliations.row(v));
                    if net.has_edge(u, v) {
                        total += naive_log_term(x, floor);
                    } else {
                        total -= x;
                    }
                }
            }
        }
    }
    total
}

/// Per-node gradient by direct enumeration of all other nodes.
pub fn naive_affiliation_gradient(
    net: &TemporalTextNetwork,
    affiliations: &Matrix,
    interactions: &Matrix,
    node: usize,
    mode: Mode,
    floor: f64,
) -> Vec<f64> {
    let n = net.node_count();
    let k = affiliations.cols();
    let mut grad = vec![0.0; k];
    for v in 0..n {
        if v == node {
            continue;
        }
        let fv = affiliations.row(v);
        match mode {
            Mode::All | Mode::Net => {
                if net.timestamp(v) < net.timestamp(node) {
                    let x = naive_affinity(fv, interactions, affiliations.row(node));
                    let coefficient = if net.has_edge(v, node) {
                        naive_weight(x, floor)
                    } else {
                        -1.0
                    };
                    for a in 0..k {
                        for b in 0..k {
                            grad[b] += coefficient * fv[a] * interactions.get(a, b);
                        }
                    }
                }
                if net.timestamp(node) < net.timestamp(v) {
                    let x = naive_affinity(affiliations.row(node), interactions, fv);
                    let coefficient = if net.has_edge(node, v) {
                        naive_weight(x, floor)
                    } else {
                        -1.0
                    };
                    for a in 0..k {
                        for b in 0..k {
                            grad[a] += coefficient * interactions.get(a, b) * fv[b];
                        }
                    }
                }
            }
            Mode::Raw => {
                let x = naive_affinity(affiliations.row(node), interactions, fv);
                let coefficient = if net.has_edge(node, v) {
                    naive_weight(x, floor)
                } else {
                    -1.0
                };
                for a in 0..k {
                    for b in 0..k {
                        grad[a] += coefficient * interactions.get(a, b) * fv[b];
                    }
                }
            }
        }
    }
    grad
}

/// Interaction-matrix gradient by direct enumeration of gated pairs.
pub fn naive_interaction_gradient(
    net: &TemporalTextNetwork,
    affiliations: &Matrix,
    interactions: &Matrix,
    mode: Mode,
    floor: f64,
) -> Matrix {
    let n = net.node_count();
    let k = affiliations.cols();
    let mut grad = Matrix::zeros(k, k);
    match mode {
        Mode::All | Mode::Net => {
            for u in 0..n {
                for v in 0..n {
                    if u == v || net.timestamp(u) >= net.timestamp(v) {
                        continue;
                    }
                    let fu = affiliations.row(u);
                    let fv = affiliations.row(v);
                    let x = naive_affinity(fu, interactions, fv);
                    let coefficient = if net.has_edge(u, v) {
                        naive_weight(x, floor)
                    } else {
                        -1.0
                    };
                    for i in 0..k {
                        for j in 0..k {
                            grad.set(i, j, grad.get(i, j) + coefficient * fu[i] * fv[j]);
                        }
                    }
                }
            }
        }
        Mode::Raw => {
            for u in 0..n {
                for v in (u + 1)..n {
                    let fu = affiliations.row(u);
                    let fv = affiliations.row(v);
                    let x = naive_affinity(fu, interactions, fv);
                    let coefficient = if net.has_edge(u, v) {
                        naive_weight(x, floor)
                    } else {
                        -1.0
                    };
                    for i in 0..k {
                        for j in 0..k {
                            let symmetric = 0.5 * (fu[i] * fv[j] + fv[i] * fu[j]);
                            grad.set(i, j, grad.get(i, j) + coefficient * symmetric);
                        }
                    }
                }
            }
        }
    }
    grad
}

/// Relative difference with an absolute guard for values near zero.
pub fn relative_error(actual: f64, expected: f64) -> f64 {
    let scale = expected.abs().max(actual.abs());
    if scale < 1e-9 {
        (actual - expected).abs()
    } else {
        (actual - expected).abs() / scale
    }
}
