//! Hard community membership from fitted affiliations.
//!
//! A node joins community k once its affiliation reaches the point where the
//! within-community link probability to a peer exceeds 1/N, which gives the
//! per-community cutoff `sqrt(-log(1 - 1/N) / interaction_kk)`.

use std::collections::BTreeSet;

use crate::cover::CommunityCover;
use crate::matrix::Matrix;
use crate::model::ModelError;

/// Diagonal entries this small are treated as dead communities and floored
/// before the division.
const DIAGONAL_FLOOR: f64 = 1e-6;

/// Per-community membership cutoffs for a universe of `nodes` nodes.
pub fn community_thresholds(
    interactions: &Matrix,
    nodes: usize,
) -> Result<Vec<f64>, ModelError> {
    if nodes < 2 {
        return Err(ModelError::TooFewNodes(nodes));
    }
    let n = nodes as f64;
    let numerator = -(1.0 - 1.0 / n).ln();
    Ok((0..interactions.rows())
        .map(|k| (numerator / interactions.get(k, k).max(DIAGONAL_FLOOR)).sqrt())
        .collect())
}

/// Community k collects every node whose affiliation meets its threshold.
pub fn extract_cover(affiliations: &Matrix, thresholds: &[f64]) -> CommunityCover {
    assert_eq!(
        thresholds.len(),
        affiliations.cols(),
        "one threshold per community"
    );
    let communities: Vec<BTreeSet<usize>> = (0..affiliations.cols())
        .map(|k| {
            (0..affiliations.rows())
                .filter(|&u| affiliations.get(u, k) >= thresholds[k])
                .collect()
        })
        .collect();
    CommunityCover::new(affiliations.rows(), communities)
        .expect("members come straight from row indices")
}
