//! The generative affiliation model with an explicit community-interaction
//! matrix, and everything needed to fit it: likelihood, gradients with
//! prefix-sum caching, block coordinate projected gradient ascent with
//! backtracking line search, conductance-based initialization, membership
//! thresholding, community-count selection, and forward sampling.
//!
//! A node `u` carries a nonnegative affiliation vector (row `u` of an
//! `N x K` matrix) and communities interact through a nonnegative `K x K`
//! matrix. A link `u -> v` appears with probability
//! `1 - exp(-affinity(u, v))` where the affinity is the bilinear form of the
//! two affiliation vectors through the interaction matrix, gated by the
//! strict time order in the directed modes.

mod fit;
mod gradient;
mod init;
mod likelihood;
mod linesearch;
mod sample;
mod select;
mod threshold;

pub use fit::{fit, FittedModel};
pub use gradient::{affiliation_gradient, interaction_gradient, PrefixCache};
pub use init::{conductance, init_affiliations, init_interactions};
pub use likelihood::log_likelihood;
pub use linesearch::{backtracking_step, LineSearchParams};
pub use sample::sample_network;
pub use select::{auc, choose_communities, SelectionOutcome};
pub use threshold::{community_thresholds, extract_cover};

use thiserror::Error;

use crate::matrix::{bilinear, Matrix};

/// Guard applied inside `log(1 - exp(-x))` so observed edges with zero
/// affinity keep the objective finite.
pub const DEFAULT_EPSILON_FLOOR: f64 = 1e-10;
pub const DEFAULT_MAX_SWEEPS: usize = 500;
pub const DEFAULT_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("network is not natural: {violations} edges violate the strict time order")]
    NotNatural { violations: usize },
    #[error("mode {mode:?} does not apply to this network's directedness")]
    ModeMismatch { mode: Mode },
    #[error("cached prefix sums are stale for this network/matrix state")]
    StaleCache,
    #[error("node set must be a nonempty proper subset of the vertices")]
    EmptyOrFullSet,
    #[error("too few edges: {0}")]
    TooFewEdges(String),
    #[error("thresholds need at least two nodes, got {0}")]
    TooFewNodes(usize),
}

/// Which information the model uses.
///
/// `All` and `Net` run on directed networks with the strict time gate (the
/// former is conventionally applied to word-augmented networks, the latter to
/// plain document networks). `Raw` ignores direction and time entirely and
/// runs on undirected networks with a symmetric interaction matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    All,
    Net,
    Raw,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::All => "all",
            Mode::Net => "net",
            Mode::Raw => "raw",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(Mode::All),
            "net" => Ok(Mode::Net),
            "raw" => Ok(Mode::Raw),
            other => Err(format!("unknown mode {other:?}; expected all|net|raw")),
        }
    }
}

/// The time gate on an ordered pair: in the directed modes a link may only
/// run strictly forward in time, in raw mode every pair is fair game.
pub fn link_allowed(t_src: i64, t_dst: i64, mode: Mode) -> bool {
    match mode {
        Mode::All | Mode::Net => t_src < t_dst,
        Mode::Raw => true,
    }
}

/// The nonnegative affinity `f_u^T interactions f_v` driving link generation.
pub fn pair_affinity(f_u: &[f64], interactions: &Matrix, f_v: &[f64]) -> f64 {
    bilinear(f_u, interactions, f_v)
}

/// Probability of a link between two nodes: `1 - exp(-affinity)` when the
/// pair passes the time gate, zero otherwise.
pub fn edge_probability(f_u: &[f64], interactions: &Matrix, f_v: &[f64], allowed: bool) -> f64 {
    if !allowed {
        return 0.0;
    }
    -(-pair_affinity(f_u, interactions, f_v)).exp_m1()
}

/// Hyperparameters of a fit.
#[derive(Debug, Clone)]
pub struct FitConfig {
    /// Number of communities (K).
    pub communities: usize,
    pub mode: Mode,
    pub max_sweeps: usize,
    /// Stop once the relative log-likelihood improvement of a full sweep
    /// drops below this.
    pub tolerance: f64,
    pub line_search: LineSearchParams,
    pub epsilon_floor: f64,
    /// With `strict_temporality`, directed fits reject complex networks;
    /// otherwise violating edges are dropped with a warning.
    pub strict_temporality: bool,
    pub seed: u64,
}

impl FitConfig {
    pub fn new(communities: usize, mode: Mode, seed: u64) -> Self {
        FitConfig {
            communities,
            mode,
            max_sweeps: DEFAULT_MAX_SWEEPS,
            tolerance: DEFAULT_TOLERANCE,
            line_search: LineSearchParams::default(),
            epsilon_floor: DEFAULT_EPSILON_FLOOR,
            strict_temporality: false,
            seed,
        }
    }

    pub(crate) fn validate(&self) -> Result<(), ModelError> {
        if self.communities == 0 {
            return Err(ModelError::InvalidConfig(
                "community count must be at least 1".into(),
            ));
        }
        if !(self.tolerance > 0.0) {
            return Err(ModelError::InvalidConfig(
                "tolerance must be positive".into(),
            ));
        }
        if !(self.line_search.shrink > 0.0 && self.line_search.shrink < 1.0) {
            return Err(ModelError::InvalidConfig(
                "line-search shrink factor must lie in (0, 1)".into(),
            ));
        }
        if !(self.epsilon_floor > 0.0 && self.epsilon_floor <= 1e-6) {
            return Err(ModelError::InvalidConfig(
                "epsilon floor must lie in (0, 1e-6]".into(),
            ));
        }
        Ok(())
    }
}

/// `log(1 - exp(-x))` with the argument floored to keep the value finite.
pub(crate) fn log1mexp_floored(x: f64, floor: f64) -> f64 {
    let x = x.max(floor);
    (-(-x).exp_m1()).ln()
}

/// Derivative weight of an observed-edge term: `exp(-x) / (1 - exp(-x))`,
/// evaluated with the same floor as the objective.
pub(crate) fn edge_weight(x: f64, floor: f64) -> f64 {
    1.0 / x.max(floor).exp_m1()
}
