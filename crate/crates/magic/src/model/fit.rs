//! Block coordinate projected gradient ascent.
//!
//! One sweep walks the nodes in time order, updating each affiliation row
//! against prefix sums of already-updated earlier rows and suffix sums of
//! not-yet-updated later rows, then takes one projected step on the
//! interaction matrix. Every step is accepted through the Armijo condition,
//! so the likelihood trace never decreases.

use crate::graph::TemporalTextNetwork;
use crate::matrix::{add_assign, axpy, bilinear_flat, dot, sub_assign, Matrix};
use crate::model::gradient::interaction_gradient_with_total;
use crate::model::likelihood::PairStructure;
use crate::model::linesearch::backtracking_step;
use crate::model::{
    edge_weight, init_affiliations, init_interactions, log1mexp_floored, FitConfig,
    LineSearchParams, Mode, ModelError,
};

/// A fitted model: the two parameter matrices plus the per-sweep likelihood
/// trace (first entry is the likelihood at initialization).
#[derive(Debug, Clone)]
pub struct FittedModel {
    pub affiliations: Matrix,
    pub interactions: Matrix,
    pub log_likelihood: f64,
    pub sweeps: usize,
    pub trace: Vec<f64>,
    pub mode: Mode,
}

impl FittedModel {
    pub fn node_count(&self) -> usize {
        self.affiliations.rows()
    }

    pub fn community_count(&self) -> usize {
        self.affiliations.cols()
    }
}

/// Fits the model to a network.
///
/// Directed modes require a directed network; edges violating the strict
/// time order are dropped with a warning unless `strict_temporality` is set,
/// in which case the fit is rejected. Non-convergence within `max_sweeps` is
/// not an error; the trace tells the story.
pub fn fit(net: &TemporalTextNetwork, cfg: &FitConfig) -> Result<FittedModel, ModelError> {
    cfg.validate()?;
    let pairs = PairStructure::build(net, cfg.mode)?;
    if cfg.strict_temporality && pairs.dropped_edges > 0 {
        return Err(ModelError::NotNatural {
            violations: pairs.dropped_edges,
        });
    }

    let mut affiliations = init_affiliations(net, cfg.communities, cfg.mode, cfg.seed);
    let mut interactions = init_interactions(cfg.communities);
    let floor = cfg.epsilon_floor;

    let mut trace = vec![pairs.log_likelihood(&affiliations, &interactions, floor)];
    let mut sweeps = 0;
    for _ in 0..cfg.max_sweeps {
        match cfg.mode {
            Mode::All | Mode::Net => sweep_directed(
                &pairs,
                &mut affiliations,
                &interactions,
                floor,
                &cfg.line_search,
            ),
            Mode::Raw => sweep_raw(
                &pairs,
                &mut affiliations,
                &interactions,
                floor,
                &cfg.line_search,
            ),
        }
        update_interactions(&pairs, &affiliations, &mut interactions, floor, &cfg.line_search);
        let value = pairs.log_likelihood(&affiliations, &interactions, floor);
        trace.push(value);
        sweeps += 1;
        let previous = trace[trace.len() - 2];
        if value - previous < cfg.tolerance * previous.abs().max(1e-12) {
            break;
        }
    }

    Ok(FittedModel {
        log_likelihood: *trace.last().expect("trace holds the initial value"),
        sweeps,
        trace,
        mode: cfg.mode,
        affiliations,
        interactions,
    })
}

/// Line-search parameters with the initial step rescaled so the first
/// candidate changes entries by at most about one unit. Gradient norms here
/// grow with the non-neighbor mass (order N for a row, N^2 for the
/// interaction matrix), and a fixed initial step would push every candidate
/// past the useful region faster than the backtracking budget can recover.
fn scaled_params(params: &LineSearchParams, direction: &[f64]) -> LineSearchParams {
    let magnitude = direction.iter().fold(0.0f64, |m, &d| m.max(d.abs()));
    LineSearchParams {
        initial_step: params.initial_step / (1.0 + magnitude),
        ..*params
    }
}

/// One pass over all affiliation rows in time order.
fn sweep_directed(
    pairs: &PairStructure,
    affiliations: &mut Matrix,
    interactions: &Matrix,
    floor: f64,
    params: &LineSearchParams,
) {
    let index = pairs.time_index.as_ref().expect("directed modes keep one");
    let k = affiliations.cols();
    let groups = index.group_count();

    // suffix[g] = row sum over groups >= g, taken before any update this
    // sweep; nodes after the cursor still hold exactly these values
    let mut suffix = Matrix::zeros(groups + 1, k);
    for g in (0..groups).rev() {
        let (head, tail) = suffix.as_mut_slice().split_at_mut((g + 1) * k);
        head[g * k..].copy_from_slice(&tail[..k]);
        for &node in index.group(g) {
            add_assign(&mut suffix.row_mut(g), affiliations.row(node));
        }
    }

    let mut earlier = vec![0.0; k];
    for g in 0..groups {
        for &node in index.group(g) {
            let later = suffix.row(g + 1);
            update_affiliation_row(
                pairs,
                affiliations,
                interactions,
                node,
                floor,
                &earlier,
                later,
                params,
            );
        }
        for &node in index.group(g) {
            add_assign(&mut earlier, affiliations.row(node));
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn update_affiliation_row(
    pairs: &PairStructure,
    affiliations: &mut Matrix,
    interactions: &Matrix,
    node: usize,
    floor: f64,
    earlier: &[f64],
    later: &[f64],
    params: &LineSearchParams,
) {
    let k = affiliations.cols();
    let current = affiliations.row(node).to_vec();

    let in_rows: Vec<Vec<f64>> = pairs.in_adj[node]
        .iter()
        .map(|&v| interactions.tr_mul_vec(affiliations.row(v)))
        .collect();
    let out_rows: Vec<Vec<f64>> = pairs.out_adj[node]
        .iter()
        .map(|&v| interactions.mul_vec(affiliations.row(v)))
        .collect();

    // non-neighbor linear coefficient via the cached sums minus neighbors
    let mut earlier_others = earlier.to_vec();
    for &v in &pairs.in_adj[node] {
        sub_assign(&mut earlier_others, affiliations.row(v));
    }
    let mut later_others = later.to_vec();
    for &v in &pairs.out_adj[node] {
        sub_assign(&mut later_others, affiliations.row(v));
    }
    let mut linear = interactions.tr_mul_vec(&earlier_others);
    add_assign(&mut linear, &interactions.mul_vec(&later_others));

    let mut direction = vec![0.0; k];
    for row in in_rows.iter().chain(&out_rows) {
        let w = edge_weight(dot(row, &current), floor);
        axpy(&mut direction, w, row);
    }
    sub_assign(&mut direction, &linear);
    // drop components that point into the boundary; the projection would
    // discard them anyway and they only poison the Armijo threshold
    for (d, &x) in direction.iter_mut().zip(&current) {
        if x <= 0.0 && *d < 0.0 {
            *d = 0.0;
        }
    }
    if direction.iter().all(|&d| d == 0.0) {
        return;
    }

    let objective = |candidate: &[f64]| {
        let mut value = -dot(&linear, candidate);
        for row in in_rows.iter().chain(&out_rows) {
            value += log1mexp_floored(dot(row, candidate), floor);
        }
        value
    };
    let step = backtracking_step(objective, &current, &direction, &scaled_params(params, &direction));
    if step > 0.0 {
        for (slot, (&x, &d)) in affiliations
            .row_mut(node)
            .iter_mut()
            .zip(current.iter().zip(&direction))
        {
            *slot = (x + step * d).max(0.0);
        }
    }
}

/// Raw-mode pass: every other node is a gated partner, so the cache is just
/// the running total of all rows.
fn sweep_raw(
    pairs: &PairStructure,
    affiliations: &mut Matrix,
    interactions: &Matrix,
    floor: f64,
    params: &LineSearchParams,
) {
    let mut total = affiliations.column_sums();
    for node in 0..affiliations.rows() {
        let current = affiliations.row(node).to_vec();
        let neighbor_rows: Vec<Vec<f64>> = pairs.in_adj[node]
            .iter()
            .map(|&v| interactions.mul_vec(affiliations.row(v)))
            .collect();

        let mut others = total.clone();
        sub_assign(&mut others, &current);
        for &v in &pairs.in_adj[node] {
            sub_assign(&mut others, affiliations.row(v));
        }
        let linear = interactions.mul_vec(&others);

        let mut direction = vec![0.0; affiliations.cols()];
        for row in &neighbor_rows {
            let w = edge_weight(dot(row, &current), floor);
            axpy(&mut direction, w, row);
        }
        sub_assign(&mut direction, &linear);
        for (d, &x) in direction.iter_mut().zip(&current) {
            if x <= 0.0 && *d < 0.0 {
                *d = 0.0;
            }
        }
        if direction.iter().all(|&d| d == 0.0) {
            continue;
        }

        let objective = |candidate: &[f64]| {
            let mut value = -dot(&linear, candidate);
            for row in &neighbor_rows {
                value += log1mexp_floored(dot(row, candidate), floor);
            }
            value
        };
        let step =
            backtracking_step(objective, &current, &direction, &scaled_params(params, &direction));
        if step > 0.0 {
            let row = affiliations.row_mut(node);
            for i in 0..row.len() {
                row[i] = (current[i] + step * direction[i]).max(0.0);
                total[i] += row[i] - current[i];
            }
        }
    }
}

/// One projected ascent step on the interaction matrix, holding
/// affiliations fixed. The objective is the exact likelihood as a function
/// of the candidate matrix, evaluated against the cached gated outer total.
fn update_interactions(
    pairs: &PairStructure,
    affiliations: &Matrix,
    interactions: &mut Matrix,
    floor: f64,
    params: &LineSearchParams,
) {
    let k = interactions.rows();
    let gated_total = pairs.gated_outer_total(affiliations);
    let gradient =
        interaction_gradient_with_total(pairs, affiliations, interactions, floor, &gated_total);

    let current = interactions.as_slice().to_vec();
    let mut direction = gradient.as_slice().to_vec();
    for (d, &x) in direction.iter_mut().zip(&current) {
        if x <= 0.0 && *d < 0.0 {
            *d = 0.0;
        }
    }
    if direction.iter().all(|&d| d == 0.0) {
        return;
    }

    let objective = |candidate: &[f64]| {
        let mut value = -dot(candidate, gated_total.as_slice());
        for &(u, v) in &pairs.edges {
            let x = bilinear_flat(affiliations.row(u), candidate, k, affiliations.row(v));
            value += log1mexp_floored(x, floor) + x;
        }
        value
    };
    let step = backtracking_step(objective, &current, &direction, &scaled_params(params, &direction));
    if step > 0.0 {
        for (slot, (&x, &d)) in interactions
            .as_mut_slice()
            .iter_mut()
            .zip(current.iter().zip(&direction))
        {
            *slot = (x + step * d).max(0.0);
        }
        if pairs.mode == Mode::Raw {
            interactions.symmetrize();
        }
    }
}
