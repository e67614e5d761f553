//! Forward sampling: draw a network from given parameters by flipping an
//! independent coin for every pair that passes the time gate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{build_network, DirectedEdge, Directedness, NodeRecord, TemporalTextNetwork};
use crate::matrix::Matrix;
use crate::model::likelihood::check_shapes_free;
use crate::model::{edge_probability, link_allowed, Mode, ModelError};

/// Samples a network with one node per affiliation row.
///
/// Node ids are zero-padded row indices, so the returned network's node
/// order matches the affiliation rows. In the directed modes each ordered
/// pair passing the strict time gate is drawn independently; in raw mode
/// each unordered pair is drawn once and the network is undirected.
pub fn sample_network(
    affiliations: &Matrix,
    interactions: &Matrix,
    timestamps: &[i64],
    mode: Mode,
    seed: u64,
) -> Result<TemporalTextNetwork, ModelError> {
    check_shapes_free(affiliations, interactions)?;
    if timestamps.len() != affiliations.rows() {
        return Err(ModelError::ShapeMismatch(format!(
            "{} timestamps for {} affiliation rows",
            timestamps.len(),
            affiliations.rows()
        )));
    }

    let n = affiliations.rows();
    let width = n.saturating_sub(1).to_string().len().max(1);
    let ids: Vec<String> = (0..n).map(|i| format!("n{i:0width$}")).collect();
    let nodes: Vec<NodeRecord> = ids
        .iter()
        .zip(timestamps)
        .map(|(id, &ts)| NodeRecord::document(id.clone(), ts, Vec::new()))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    match mode {
        Mode::All | Mode::Net => {
            for u in 0..n {
                for v in 0..n {
                    if u == v || !link_allowed(timestamps[u], timestamps[v], mode) {
                        continue;
                    }
                    let p = edge_probability(
                        affiliations.row(u),
                        interactions,
                        affiliations.row(v),
                        true,
                    );
                    if p > 0.0 && rng.random::<f64>() < p {
                        edges.push(DirectedEdge::new(ids[u].clone(), ids[v].clone()));
                    }
                }
            }
            Ok(build_network(nodes, &edges, Directedness::Directed)
                .expect("sampled endpoints are declared nodes"))
        }
        Mode::Raw => {
            for u in 0..n {
                for v in (u + 1)..n {
                    let p = edge_probability(
                        affiliations.row(u),
                        interactions,
                        affiliations.row(v),
                        true,
                    );
                    if p > 0.0 && rng.random::<f64>() < p {
                        edges.push(DirectedEdge::new(ids[u].clone(), ids[v].clone()));
                    }
                }
            }
            Ok(build_network(nodes, &edges, Directedness::Undirected)
                .expect("sampled endpoints are declared nodes"))
        }
    }
}
