//! The model log-likelihood.
//!
//! Observed edges contribute `log(1 - exp(-affinity))`; absent pairs that
//! pass the time gate contribute `-affinity`; pairs that fail the gate
//! contribute nothing at all. The non-edge total is never enumerated
//! directly: it is the affinity sum over all gated pairs (one time-ordered
//! prefix pass) minus the affinity sum over observed edges.

use log::warn;

use crate::graph::{Directedness, TemporalTextNetwork, TimeOrderedIndex};
use crate::matrix::{add_assign, bilinear, Matrix};
use crate::model::{log1mexp_floored, Mode, ModelError};

/// The pair bookkeeping every likelihood/gradient pass shares: the edge list
/// and adjacency restricted to pairs that pass the time gate, plus the time
/// ordering in the directed modes.
pub(crate) struct PairStructure {
    pub mode: Mode,
    /// Directed modes: time-respecting in-neighbors. Raw: merged neighbors.
    pub in_adj: Vec<Vec<usize>>,
    /// Directed modes: time-respecting out-neighbors. Raw: unused.
    pub out_adj: Vec<Vec<usize>>,
    /// Edges that pass the gate, in canonical order.
    pub edges: Vec<(usize, usize)>,
    pub dropped_edges: usize,
    pub time_index: Option<TimeOrderedIndex>,
}

impl PairStructure {
    pub fn build(net: &TemporalTextNetwork, mode: Mode) -> Result<Self, ModelError> {
        match (mode, net.directedness()) {
            (Mode::All | Mode::Net, Directedness::Undirected)
            | (Mode::Raw, Directedness::Directed) => {
                return Err(ModelError::ModeMismatch { mode });
            }
            _ => {}
        }

        let n = net.node_count();
        match mode {
            Mode::All | Mode::Net => {
                let mut in_adj = vec![Vec::new(); n];
                let mut out_adj = vec![Vec::new(); n];
                let mut edges = Vec::with_capacity(net.edge_count());
                let mut dropped = 0usize;
                for (src, dst) in net.edges() {
                    if net.timestamp(src) < net.timestamp(dst) {
                        out_adj[src].push(dst);
                        in_adj[dst].push(src);
                        edges.push((src, dst));
                    } else {
                        dropped += 1;
                    }
                }
                if dropped > 0 {
                    warn!(
                        "dropping {dropped} edges that violate the strict time order; \
                         they cannot be generated under this model"
                    );
                }
                Ok(PairStructure {
                    mode,
                    in_adj,
                    out_adj,
                    edges,
                    dropped_edges: dropped,
                    time_index: Some(net.time_ordered_view()),
                })
            }
            Mode::Raw => {
                let in_adj = (0..n).map(|u| net.undirected_neighbors(u)).collect();
                Ok(PairStructure {
                    mode,
                    in_adj,
                    out_adj: vec![Vec::new(); n],
                    edges: net.edges().collect(),
                    dropped_edges: 0,
                    time_index: None,
                })
            }
        }
    }

    /// Affinity sum over every pair that passes the gate, each counted once.
    pub fn gated_affinity_total(&self, affiliations: &Matrix, interactions: &Matrix) -> f64 {
        match self.mode {
            Mode::All | Mode::Net => {
                let index = self.time_index.as_ref().expect("directed modes keep one");
                let k = affiliations.cols();
                let mut earlier = vec![0.0; k];
                let mut total = 0.0;
                for group in index.groups() {
                    for &v in group {
                        total += bilinear(&earlier, interactions, affiliations.row(v));
                    }
                    for &v in group {
                        add_assign(&mut earlier, affiliations.row(v));
                    }
                }
                total
            }
            Mode::Raw => {
                // sum over unordered pairs: (S^T eta S - sum_u f_u^T eta f_u) / 2
                let sums = affiliations.column_sums();
                let gross = bilinear(&sums, interactions, &sums);
                let diag: f64 = (0..affiliations.rows())
                    .map(|u| {
                        bilinear(affiliations.row(u), interactions, affiliations.row(u))
                    })
                    .sum();
                0.5 * (gross - diag)
            }
        }
    }

    /// Outer-product total over every gated pair: the cached first term of
    /// the non-edge part of the interaction gradient. Symmetrized in raw
    /// mode so the gradient stays on the symmetric manifold.
    pub fn gated_outer_total(&self, affiliations: &Matrix) -> Matrix {
        let k = affiliations.cols();
        let mut total = Matrix::zeros(k, k);
        match self.mode {
            Mode::All | Mode::Net => {
                let index = self.time_index.as_ref().expect("directed modes keep one");
                let mut earlier = vec![0.0; k];
                for group in index.groups() {
                    for &v in group {
                        total.add_outer(1.0, &earlier, affiliations.row(v));
                    }
                    for &v in group {
                        add_assign(&mut earlier, affiliations.row(v));
                    }
                }
            }
            Mode::Raw => {
                let sums = affiliations.column_sums();
                total.add_outer(0.5, &sums, &sums);
                for u in 0..affiliations.rows() {
                    total.add_outer(-0.5, affiliations.row(u), affiliations.row(u));
                }
                total.symmetrize();
            }
        }
        total
    }

    /// The log-likelihood under this pair structure.
    pub fn log_likelihood(
        &self,
        affiliations: &Matrix,
        interactions: &Matrix,
        floor: f64,
    ) -> f64 {
        let mut observed = 0.0;
        let mut observed_affinity = 0.0;
        for &(u, v) in &self.edges {
            let x = bilinear(affiliations.row(u), interactions, affiliations.row(v));
            observed += log1mexp_floored(x, floor);
            observed_affinity += x;
        }
        let gated_total = self.gated_affinity_total(affiliations, interactions);
        observed - (gated_total - observed_affinity)
    }
}

pub(crate) fn check_shapes(
    net: &TemporalTextNetwork,
    affiliations: &Matrix,
    interactions: &Matrix,
) -> Result<(), ModelError> {
    if affiliations.rows() != net.node_count() {
        return Err(ModelError::ShapeMismatch(format!(
            "affiliation matrix has {} rows for a network of {} nodes",
            affiliations.rows(),
            net.node_count()
        )));
    }
    check_shapes_free(affiliations, interactions)
}

/// Shape agreement between the two parameter matrices alone.
pub(crate) fn check_shapes_free(
    affiliations: &Matrix,
    interactions: &Matrix,
) -> Result<(), ModelError> {
    if interactions.rows() != affiliations.cols() || interactions.cols() != affiliations.cols() {
        return Err(ModelError::ShapeMismatch(format!(
            "interaction matrix is {}x{} but affiliations have {} communities",
            interactions.rows(),
            interactions.cols(),
            affiliations.cols()
        )));
    }
    Ok(())
}

/// Log-likelihood of a network under the given parameters.
///
/// In the directed modes, observed edges that violate the strict time order
/// are excluded from the observed-edge sum (they have probability zero under
/// the model); a warning is logged when that happens.
pub fn log_likelihood(
    net: &TemporalTextNetwork,
    affiliations: &Matrix,
    interactions: &Matrix,
    mode: Mode,
    floor: f64,
) -> Result<f64, ModelError> {
    check_shapes(net, affiliations, interactions)?;
    let pairs = PairStructure::build(net, mode)?;
    Ok(pairs.log_likelihood(affiliations, interactions, floor))
}
