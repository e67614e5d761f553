//! Evaluation of detected covers against ground truth: coverage ratio,
//! best-match F1, overlapping modularity, the omega index, and the
//! per-network composite score.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::cover::CommunityCover;
use crate::graph::TemporalTextNetwork;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("cover has no communities")]
    EmptyCover,
}

/// Fraction of the universe assigned to at least one community.
pub fn coverage_ratio(cover: &CommunityCover) -> f64 {
    if cover.universe() == 0 {
        return 0.0;
    }
    cover.covered_nodes() as f64 / cover.universe() as f64
}

/// Set F1 of two communities: `2|A∩B| / (|A| + |B|)`. Two empty sets count
/// as a perfect match so identity covers always score 1.
fn pairwise_f1(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let intersection = a.intersection(b).count();
    2.0 * intersection as f64 / (a.len() + b.len()) as f64
}

/// Best-match score of every community in `from` against `against`,
/// averaged. Candidate matches are found through a shared-member index;
/// disjoint pairs score zero, so the result is exact.
fn best_match_mean(from: &CommunityCover, against: &CommunityCover) -> f64 {
    let mut member_index: HashMap<usize, Vec<usize>> = HashMap::new();
    for (c, community) in against.communities().iter().enumerate() {
        for &u in community {
            member_index.entry(u).or_default().push(c);
        }
    }
    let empty_against: Vec<usize> = against
        .communities()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_empty())
        .map(|(i, _)| i)
        .collect();

    let mut total = 0.0;
    for community in from.communities() {
        let mut candidates: BTreeSet<usize> = community
            .iter()
            .filter_map(|u| member_index.get(u))
            .flatten()
            .copied()
            .collect();
        // empty-vs-empty pairs are the only zero-overlap pairs with a
        // nonzero score
        if community.is_empty() {
            candidates.extend(&empty_against);
        }
        let best = candidates
            .iter()
            .map(|&c| pairwise_f1(community, &against.communities()[c]))
            .fold(0.0, f64::max);
        total += best;
    }
    total / from.community_count() as f64
}

/// Symmetric best-match F1 between two covers.
pub fn f1_score(
    detected: &CommunityCover,
    truth: &CommunityCover,
) -> Result<f64, MetricsError> {
    if detected.community_count() == 0 || truth.community_count() == 0 {
        return Err(MetricsError::EmptyCover);
    }
    Ok(0.5 * (best_match_mean(detected, truth) + best_match_mean(truth, detected)))
}

/// Overlapping modularity of a cover on a network.
///
/// Each community scores the mean over its members of
/// `(inside_edges - outside_edges) / (degree * memberships)`, scaled by its
/// edge density `intra_edges / C(|c|, 2)`; the overall value averages the
/// community scores. Singleton and empty communities contribute zero, as do
/// isolated members.
pub fn overlapping_modularity(net: &TemporalTextNetwork, cover: &CommunityCover) -> f64 {
    let k = cover.community_count();
    if k == 0 {
        return 0.0;
    }
    let memberships: Vec<usize> = cover
        .node_communities()
        .iter()
        .map(|communities| communities.len())
        .collect();

    let mut total = 0.0;
    for community in cover.communities() {
        let size = community.len();
        if size < 2 {
            continue;
        }
        let mut member_mean = 0.0;
        for &u in community {
            let degree = net.degree(u);
            if degree == 0 {
                continue;
            }
            let inside = net
                .out_neighbors(u)
                .iter()
                .chain(net.in_neighbors(u))
                .filter(|v| community.contains(v))
                .count();
            let outside = degree - inside;
            member_mean +=
                (inside as f64 - outside as f64) / (degree as f64 * memberships[u] as f64);
        }
        member_mean /= size as f64;

        let intra_edges = net
            .edges()
            .filter(|(u, v)| community.contains(u) && community.contains(v))
            .count();
        let possible_pairs = (size * (size - 1)) as f64 / 2.0;
        total += member_mean * intra_edges as f64 / possible_pairs;
    }
    total / k as f64
}

/// Number of communities containing both nodes of each pair, for every pair
/// that shares at least one community.
fn shared_counts(cover: &CommunityCover) -> HashMap<(usize, usize), u64> {
    let mut counts = HashMap::new();
    for community in cover.communities() {
        let members: Vec<usize> = community.iter().copied().collect();
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                *counts.entry((members[i], members[j])).or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Chance-adjusted omega index: agreement between two covers on how many
/// communities each node pair shares, discounted by the agreement their
/// shared-count distributions would produce independently.
pub fn omega_index(a: &CommunityCover, b: &CommunityCover) -> f64 {
    assert_eq!(
        a.universe(),
        b.universe(),
        "omega index requires covers over the same universe"
    );
    let n = a.universe();
    let total_pairs = n * n.saturating_sub(1) / 2;
    if total_pairs == 0 {
        return 1.0;
    }

    let counts_a = shared_counts(a);
    let counts_b = shared_counts(b);

    let mut agreeing = 0usize;
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    seen.extend(counts_a.keys());
    seen.extend(counts_b.keys());
    for pair in &seen {
        let ca = counts_a.get(pair).copied().unwrap_or(0);
        let cb = counts_b.get(pair).copied().unwrap_or(0);
        if ca == cb {
            agreeing += 1;
        }
    }
    // pairs absent from both maps agree at zero shared communities
    agreeing += total_pairs - seen.len();
    let observed = agreeing as f64 / total_pairs as f64;

    let histogram = |counts: &HashMap<(usize, usize), u64>| {
        let mut h: HashMap<u64, usize> = HashMap::new();
        for &c in counts.values() {
            *h.entry(c).or_insert(0) += 1;
        }
        h.insert(0, total_pairs - counts.len());
        h
    };
    let ha = histogram(&counts_a);
    let hb = histogram(&counts_b);
    let mut expected = 0.0;
    for (count, &na) in &ha {
        if let Some(&nb) = hb.get(count) {
            expected +=
                (na as f64 / total_pairs as f64) * (nb as f64 / total_pairs as f64);
        }
    }

    if (1.0 - expected).abs() < 1e-15 {
        return 1.0;
    }
    (observed - expected) / (1.0 - expected)
}

/// Per-method composite score over a metric table: each column is scaled so
/// that the best method gets 1, then the four normalized values are summed.
/// A column without a positive maximum contributes zero for every method.
pub fn composite_scores(table: &[[f64; 4]]) -> Vec<f64> {
    let mut maxima = [0.0f64; 4];
    for row in table {
        for (m, &v) in maxima.iter_mut().zip(row) {
            *m = m.max(v);
        }
    }
    table
        .iter()
        .map(|row| {
            row.iter()
                .zip(&maxima)
                .map(|(&v, &m)| if m > 0.0 { v / m } else { 0.0 })
                .sum()
        })
        .collect()
}

/// All four metrics for one detected cover, with the counts they used.
#[derive(Debug, Clone)]
pub struct MetricReport {
    pub coverage: f64,
    pub f1: f64,
    pub modularity: f64,
    pub omega: f64,
    pub universe: usize,
    pub covered_nodes: usize,
    pub detected_communities: usize,
    pub truth_communities: usize,
}

pub fn evaluate(
    net: &TemporalTextNetwork,
    detected: &CommunityCover,
    truth: &CommunityCover,
) -> Result<MetricReport, MetricsError> {
    Ok(MetricReport {
        coverage: coverage_ratio(detected),
        f1: f1_score(detected, truth)?,
        modularity: overlapping_modularity(net, detected),
        omega: omega_index(detected, truth),
        universe: detected.universe(),
        covered_nodes: detected.covered_nodes(),
        detected_communities: detected.community_count(),
        truth_communities: truth.community_count(),
    })
}
