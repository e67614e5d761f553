//! Overlapping community detection in temporal text networks.
//!
//! Nodes affiliate with latent communities and links arise from those
//! affiliations through an explicit community-interaction matrix, gated by
//! each node's timestamp: a link can only run strictly forward in time.
//! Word nodes can be materialized from document text so that one model
//! covers link structure and textual content uniformly.
//!
//! The crate provides:
//!
//! - [`graph`]: validated directed temporal networks with time-ordered views
//! - [`projection`]: word-node augmentation of document networks
//! - [`model`]: the generative model, its likelihood and gradients, block
//!   coordinate projected gradient ascent, initialization, membership
//!   thresholding, community-count selection, and forward sampling
//! - [`metrics`]: cover evaluation (coverage, F1, overlapping modularity,
//!   omega index, composite scores)
//! - [`analytics`]: community-interaction and text-similarity observables
//! - [`io`]: tab-separated file formats and full-precision model files

pub mod analytics;
pub mod cover;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod metrics;
pub mod model;
pub mod projection;
pub mod seed;

pub use cover::CommunityCover;
pub use graph::{
    build_network, DirectedEdge, Directedness, GraphError, NodeKind, NodeRecord,
    TemporalTextNetwork, Temporality, TimeOrderedIndex,
};
pub use matrix::Matrix;
pub use model::{fit, FitConfig, FittedModel, Mode, ModelError};
pub use projection::{project, ProjectedNetwork, ProjectionConfig, ProjectionError};
