//! Parameter initialization.
//!
//! Affiliations start from locally minimal neighborhoods: the in-neighbor
//! set of a node seeds a community when its conductance beats the in-
//! neighbor sets of all the node's out-neighbors. The interaction matrix
//! starts diagonally dominant (0.9 on the diagonal, 0.1 elsewhere).

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::TemporalTextNetwork;
use crate::matrix::Matrix;
use crate::model::{Mode, ModelError};
use crate::seed::derive_seed;

/// Conductance of a node set: cut edges over the smaller of the two degree
/// volumes. Requires a nonempty proper subset of the vertices.
pub fn conductance(
    net: &TemporalTextNetwork,
    set: &HashSet<usize>,
) -> Result<f64, ModelError> {
    if set.is_empty() || set.len() >= net.node_count() {
        return Err(ModelError::EmptyOrFullSet);
    }
    Ok(conductance_or_worst(net, set))
}

/// Total definition used during initialization: degenerate sets (zero
/// volume on either side, or the full vertex set) score the worst value 1.
fn conductance_or_worst(net: &TemporalTextNetwork, set: &HashSet<usize>) -> f64 {
    let mut cut = 0usize;
    let mut volume = 0usize;
    for &u in set {
        volume += net.degree(u);
        for &v in net.out_neighbors(u) {
            if !set.contains(&v) {
                cut += 1;
            }
        }
        for &v in net.in_neighbors(u) {
            if !set.contains(&v) {
                cut += 1;
            }
        }
    }
    let total = 2 * net.edge_count();
    let denominator = volume.min(total - volume);
    if denominator == 0 {
        return 1.0;
    }
    cut as f64 / denominator as f64
}

/// Seed neighborhood of a node: its in-neighbors plus itself (full
/// neighborhood in raw mode).
fn seed_set(net: &TemporalTextNetwork, node: usize, mode: Mode) -> HashSet<usize> {
    let mut set: HashSet<usize> = match mode {
        Mode::All | Mode::Net => net.in_neighbors(node).iter().copied().collect(),
        Mode::Raw => net.undirected_neighbors(node).into_iter().collect(),
    };
    set.insert(node);
    set
}

/// Binary seed affiliations from locally minimal neighborhoods, ranked by
/// conductance. If fewer than K neighborhoods qualify, the remaining
/// communities are filled with ceil(N/K) uniformly sampled nodes each.
pub fn init_affiliations(
    net: &TemporalTextNetwork,
    communities: usize,
    mode: Mode,
    seed: u64,
) -> Matrix {
    let n = net.node_count();
    let scores: Vec<f64> = (0..n)
        .map(|u| conductance_or_worst(net, &seed_set(net, u, mode)))
        .collect();

    let mut minimal: Vec<usize> = (0..n)
        .filter(|&u| {
            let rivals: Vec<usize> = match mode {
                Mode::All | Mode::Net => net.out_neighbors(u).to_vec(),
                Mode::Raw => net.undirected_neighbors(u),
            };
            rivals.iter().all(|&v| scores[u] < scores[v])
        })
        .collect();
    minimal.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));

    let mut affiliations = Matrix::zeros(n, communities);
    let seeded = minimal.len().min(communities);
    for (community, &node) in minimal.iter().take(seeded).enumerate() {
        for &member in seed_set(net, node, mode).iter() {
            affiliations.set(member, community, 1.0);
        }
    }

    if seeded < communities && n > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "init-fill"));
        let fill = n.div_ceil(communities).min(n);
        for community in seeded..communities {
            for member in rand::seq::index::sample(&mut rng, n, fill) {
                affiliations.set(member, community, 1.0);
            }
        }
    }

    // a node left with an all-zero row could never move: every observed
    // edge at zero affinity carries an exploding weight the Armijo rule
    // rejects, and the rest of its gradient is nonpositive. give such
    // nodes one random membership so ascent can reach them.
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "init-orphans"));
    for node in 0..n {
        if affiliations.row(node).iter().all(|&v| v == 0.0) {
            affiliations.set(node, rng.random_range(0..communities), 1.0);
        }
    }
    affiliations
}

/// Diagonally dominant starting interactions: 0.9 within a community, 0.1
/// across.
pub fn init_interactions(communities: usize) -> Matrix {
    let mut m = Matrix::zeros(communities, communities);
    for i in 0..communities {
        for j in 0..communities {
            m.set(i, j, if i == j { 0.9 } else { 0.1 });
        }
    }
    m
}
