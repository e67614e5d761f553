//! Empirical observables over a network with ground-truth communities:
//! how much linking happens across communities rather than inside them, and
//! how textually similar community members are compared to random nodes.
//!
//! Edge direction is irrelevant here; every edge is treated as an unordered
//! incidence.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::CommunityCover;
use crate::graph::{NodeKind, TemporalTextNetwork};
use crate::seed::derive_seed;

/// Internal/external connectivity mass of one community.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityInteraction {
    pub community: usize,
    pub internal: f64,
    pub external: f64,
}

impl CommunityInteraction {
    /// Share of this community's edge mass that crosses community lines;
    /// undefined (None) for communities no edge ever touched.
    pub fn interaction_ratio(&self) -> Option<f64> {
        let total = self.internal + self.external;
        if total > 0.0 {
            Some(self.external / total)
        } else {
            None
        }
    }
}

/// IC/EC bookkeeping for a whole cover.
#[derive(Debug, Clone)]
pub struct InteractionScores {
    pub per_community: Vec<CommunityInteraction>,
    /// Edges whose endpoints both carry no community at all.
    pub skipped_edges: usize,
    /// Edges with at least one labeled endpoint.
    pub labeled_edges: usize,
}

/// Fraction of edges whose endpoints share no community.
pub fn interaction_edge_ratio(net: &TemporalTextNetwork, truth: &CommunityCover) -> f64 {
    assert_eq!(net.node_count(), truth.universe(), "cover universe mismatch");
    if net.edge_count() == 0 {
        return 0.0;
    }
    let memberships = truth.node_communities();
    let interaction = net
        .edges()
        .filter(|&(u, v)| intersection_size(&memberships[u], &memberships[v]) == 0)
        .count();
    interaction as f64 / net.edge_count() as f64
}

fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    // membership lists are sorted by construction
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// One pass over the edges distributing unit mass per edge: an edge whose
/// endpoints share communities adds `1/|shared|` of internal mass to each
/// shared community; otherwise each endpoint spreads half the edge across
/// its own communities as external mass.
pub fn ic_ec_scores(net: &TemporalTextNetwork, truth: &CommunityCover) -> InteractionScores {
    assert_eq!(net.node_count(), truth.universe(), "cover universe mismatch");
    let memberships = truth.node_communities();
    let mut per_community: Vec<CommunityInteraction> = (0..truth.community_count())
        .map(|community| CommunityInteraction {
            community,
            internal: 0.0,
            external: 0.0,
        })
        .collect();
    let mut skipped = 0usize;
    let mut labeled = 0usize;

    for (u, v) in net.edges() {
        let cu = &memberships[u];
        let cv = &memberships[v];
        if cu.is_empty() && cv.is_empty() {
            skipped += 1;
            continue;
        }
        labeled += 1;
        let shared: Vec<usize> = cu
            .iter()
            .filter(|c| cv.binary_search(c).is_ok())
            .copied()
            .collect();
        if !shared.is_empty() {
            let mass = 1.0 / shared.len() as f64;
            for &c in &shared {
                per_community[c].internal += mass;
            }
        } else {
            if !cu.is_empty() {
                let mass = 1.0 / (2.0 * cu.len() as f64);
                for &c in cu {
                    per_community[c].external += mass;
                }
            }
            if !cv.is_empty() {
                let mass = 1.0 / (2.0 * cv.len() as f64);
                for &c in cv {
                    per_community[c].external += mass;
                }
            }
        }
    }

    InteractionScores {
        per_community,
        skipped_edges: skipped,
        labeled_edges: labeled,
    }
}

/// Jaccard similarity of two sets; two empty sets count as identical.
pub fn jaccard_similarity<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let intersection = a.intersection(b).count();
    let union = a.len() + b.len() - intersection;
    intersection as f64 / union as f64
}

/// Textual cohesion of one community versus a size-matched random baseline.
#[derive(Debug, Clone)]
pub struct JaccardStudyRow {
    pub community: usize,
    pub size: usize,
    /// Mean pairwise Jaccard over members; None below two members.
    pub community_mean: Option<f64>,
    /// Same computation over a random node set of equal size.
    pub baseline_mean: Option<f64>,
    /// Whether pair sampling kicked in (pair count above the cap).
    pub sampled: bool,
}

/// Mean pairwise Jaccard similarity of token sets per community, compared
/// against a seeded random node set of the same size. Communities whose
/// pair count exceeds `max_pairs` are estimated from a uniform pair sample.
pub fn community_jaccard_study(
    net: &TemporalTextNetwork,
    truth: &CommunityCover,
    max_pairs: u64,
    seed: u64,
) -> Vec<JaccardStudyRow> {
    assert_eq!(net.node_count(), truth.universe(), "cover universe mismatch");
    let token_sets: Vec<BTreeSet<&str>> = net
        .nodes()
        .iter()
        .map(|node| node.tokens.iter().map(String::as_str).collect())
        .collect();
    let documents: Vec<usize> = (0..net.node_count())
        .filter(|&u| net.node(u).kind == NodeKind::Document)
        .collect();

    truth
        .communities()
        .iter()
        .enumerate()
        .map(|(community, members)| {
            let members: Vec<usize> = members.iter().copied().collect();
            let size = members.len();
            let mut rng =
                ChaCha8Rng::seed_from_u64(derive_seed(seed, &format!("jaccard:{community}")));
            let community_mean = mean_pairwise(&members, &token_sets, max_pairs, &mut rng);

            let mut baseline_rng = ChaCha8Rng::seed_from_u64(derive_seed(
                seed,
                &format!("jaccard-baseline:{community}"),
            ));
            let baseline: Vec<usize> = if size <= documents.len() {
                rand::seq::index::sample(&mut baseline_rng, documents.len(), size)
                    .into_iter()
                    .map(|i| documents[i])
                    .collect()
            } else {
                documents.clone()
            };
            let baseline_mean = mean_pairwise(&baseline, &token_sets, max_pairs, &mut baseline_rng);

            JaccardStudyRow {
                community,
                size,
                community_mean,
                baseline_mean,
                sampled: pair_count(size) > max_pairs,
            }
        })
        .collect()
}

fn pair_count(size: usize) -> u64 {
    let n = size as u64;
    n * n.saturating_sub(1) / 2
}

fn mean_pairwise(
    members: &[usize],
    token_sets: &[BTreeSet<&str>],
    max_pairs: u64,
    rng: &mut ChaCha8Rng,
) -> Option<f64> {
    let m = members.len();
    if m < 2 {
        return None;
    }
    let total_pairs = pair_count(m);
    if total_pairs <= max_pairs {
        let mut sum = 0.0;
        for i in 0..m {
            for j in (i + 1)..m {
                sum += jaccard_similarity(&token_sets[members[i]], &token_sets[members[j]]);
            }
        }
        Some(sum / total_pairs as f64)
    } else {
        let mut sum = 0.0;
        for _ in 0..max_pairs {
            let i = rng.random_range(0..m);
            let mut j = rng.random_range(0..m - 1);
            if j >= i {
                j += 1;
            }
            sum += jaccard_similarity(&token_sets[members[i]], &token_sets[members[j]]);
        }
        Some(sum / max_pairs as f64)
    }
}
