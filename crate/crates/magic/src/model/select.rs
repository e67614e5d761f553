//! Choosing the number of communities by link-prediction holdout.
//!
//! For each candidate K a uniform sample of the gated edges is reserved,
//! the model is fitted on the rest, and the candidate is scored by how well
//! the fitted edge probabilities rank the held-out edges against an
//! equal-size sample of gated non-edges (AUC with ties counted half).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{build_network, DirectedEdge, TemporalTextNetwork};
use crate::model::likelihood::PairStructure;
use crate::model::{edge_probability, fit, FitConfig, Mode, ModelError};
use crate::seed::derive_seed;

/// Scores per candidate plus the winner (ties break toward smaller K).
#[derive(Debug, Clone)]
pub struct SelectionOutcome {
    pub chosen: usize,
    pub scores: Vec<(usize, f64)>,
}

/// Area under the ROC curve for positive vs negative scores, with tied
/// scores counted as half. A perfect separator scores 1.
pub fn auc(positives: &[f64], negatives: &[f64]) -> f64 {
    if positives.is_empty() || negatives.is_empty() {
        return 0.5;
    }
    let mut all: Vec<(f64, bool)> = positives
        .iter()
        .map(|&s| (s, true))
        .chain(negatives.iter().map(|&s| (s, false)))
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));

    // average ranks across tied scores, then the Mann-Whitney statistic
    let mut positive_rank_sum = 0.0;
    let mut i = 0;
    while i < all.len() {
        let mut j = i;
        while j < all.len() && all[j].0 == all[i].0 {
            j += 1;
        }
        let average_rank = (i + 1 + j) as f64 / 2.0;
        for item in &all[i..j] {
            if item.1 {
                positive_rank_sum += average_rank;
            }
        }
        i = j;
    }
    let np = positives.len() as f64;
    let nn = negatives.len() as f64;
    (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn)
}

/// Evaluates each candidate community count on a seeded link holdout and
/// returns the best one.
pub fn choose_communities(
    net: &TemporalTextNetwork,
    candidates: &[usize],
    holdout_fraction: f64,
    base: &FitConfig,
) -> Result<SelectionOutcome, ModelError> {
    if candidates.is_empty() {
        return Err(ModelError::InvalidConfig(
            "candidate list must not be empty".into(),
        ));
    }
    if !(holdout_fraction > 0.0 && holdout_fraction < 1.0) {
        return Err(ModelError::InvalidConfig(
            "holdout fraction must lie in (0, 1)".into(),
        ));
    }
    let pairs = PairStructure::build(net, base.mode)?;
    let gated_edges = &pairs.edges;
    let holdout_count = ((gated_edges.len() as f64 * holdout_fraction).round() as usize).max(1);
    if holdout_count >= gated_edges.len() {
        return Err(ModelError::TooFewEdges(format!(
            "holding out {holdout_count} of {} edges would empty the training set",
            gated_edges.len()
        )));
    }

    // one reserved validation set shared by every candidate, so the AUC
    // comparison is paired rather than re-randomized per candidate
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(base.seed, "choose-k-holdout"));
    let held: Vec<usize> =
        rand::seq::index::sample(&mut rng, gated_edges.len(), holdout_count).into_vec();
    let negatives = sample_gated_non_edges(net, holdout_count, base.mode, &mut rng)?;

    let mut scores = Vec::with_capacity(candidates.len());
    for &candidate in candidates.iter() {
        let score = holdout_score(net, &pairs, &held, &negatives, candidate, base)?;
        scores.push((candidate, score));
    }

    let chosen = scores
        .iter()
        .fold(None::<(usize, f64)>, |best, &(k, s)| match best {
            None => Some((k, s)),
            Some((bk, bs)) if s > bs || (s == bs && k < bk) => Some((k, s)),
            keep => keep,
        })
        .expect("candidate list is nonempty")
        .0;
    Ok(SelectionOutcome { chosen, scores })
}

fn holdout_score(
    net: &TemporalTextNetwork,
    pairs: &PairStructure,
    held: &[usize],
    negatives: &[(usize, usize)],
    communities: usize,
    base: &FitConfig,
) -> Result<f64, ModelError> {
    let gated_edges = &pairs.edges;
    let mut is_held = vec![false; gated_edges.len()];
    for &e in held {
        is_held[e] = true;
    }

    let training_edges: Vec<DirectedEdge> = gated_edges
        .iter()
        .enumerate()
        .filter(|&(e, _)| !is_held[e])
        .map(|(_, &(u, v))| {
            DirectedEdge::new(net.node(u).id.clone(), net.node(v).id.clone())
        })
        .collect();
    let training_net = build_network(net.nodes().to_vec(), &training_edges, net.directedness())
        .expect("training edges reuse declared nodes");

    let cfg = FitConfig {
        communities,
        ..base.clone()
    };
    let model = fit(&training_net, &cfg)?;

    let score_pair = |&(u, v): &(usize, usize)| {
        edge_probability(
            model.affiliations.row(u),
            &model.interactions,
            model.affiliations.row(v),
            true,
        )
    };
    let positive_scores: Vec<f64> = held.iter().map(|&e| score_pair(&gated_edges[e])).collect();
    let negative_scores: Vec<f64> = negatives.iter().map(score_pair).collect();
    Ok(auc(&positive_scores, &negative_scores))
}

fn sample_gated_non_edges(
    net: &TemporalTextNetwork,
    count: usize,
    mode: Mode,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(usize, usize)>, ModelError> {
    let n = net.node_count();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    let budget = count.saturating_mul(200).max(1000);
    while out.len() < count && attempts < budget {
        attempts += 1;
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b {
            continue;
        }
        let (src, dst) = match mode {
            Mode::All | Mode::Net => {
                let (ta, tb) = (net.timestamp(a), net.timestamp(b));
                if ta == tb {
                    continue;
                }
                if ta < tb {
                    (a, b)
                } else {
                    (b, a)
                }
            }
            Mode::Raw => (a.min(b), a.max(b)),
        };
        if net.has_edge(src, dst) {
            continue;
        }
        out.push((src, dst));
    }
    if out.is_empty() {
        return Err(ModelError::TooFewEdges(
            "could not sample any gated non-edges; the network is too dense or too small".into(),
        ));
    }
    Ok(out)
}
