//! Projection of a document network into its word-augmented form: one node
//! per surviving vocabulary term at timestamp zero, plus a word -> document
//! edge for every (term, containing document) incidence.
//!
//! Word nodes sit strictly before every document in time, so projecting a
//! natural network yields a natural network.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::cover::CommunityCover;
use crate::graph::{
    build_network, DirectedEdge, Directedness, GraphError, NodeKind, NodeRecord,
    TemporalTextNetwork,
};

/// Prefix used to mint word-node ids; keeps them out of the document id space.
pub const WORD_ID_PREFIX: &str = "word:";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProjectionError {
    #[error("document {0} has non-positive timestamp; word nodes at time 0 must come first")]
    NonPositiveDocumentTimestamp(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Tokenization and vocabulary-filter settings.
#[derive(Debug, Clone)]
pub struct ProjectionConfig {
    pub lowercase: bool,
    pub stopwords: BTreeSet<String>,
    /// Keep a term only if it occurs in at least this many documents.
    pub min_document_frequency: usize,
    /// Keep a term only if it occurs in at most this fraction of documents.
    pub max_document_frequency_ratio: f64,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        ProjectionConfig {
            lowercase: true,
            stopwords: standard_stopwords(),
            min_document_frequency: 2,
            max_document_frequency_ratio: 0.5,
        }
    }
}

impl ProjectionConfig {
    /// A config that keeps every token as-is; handy for tests.
    pub fn keep_everything() -> Self {
        ProjectionConfig {
            lowercase: false,
            stopwords: BTreeSet::new(),
            min_document_frequency: 1,
            max_document_frequency_ratio: 1.0,
        }
    }
}

/// The classic short English stopword list.
pub fn standard_stopwords() -> BTreeSet<String> {
    [
        "a", "an", "and", "are", "as", "at", "be", "but", "by", "for", "if", "in", "into", "is",
        "it", "no", "not", "of", "on", "or", "such", "that", "the", "their", "then", "there",
        "these", "they", "this", "to", "was", "will", "with",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

/// Splits on any non-alphanumeric character, optionally case-folds, drops
/// stopwords, and returns the surviving tokens as a multiset.
pub fn tokenize(text: &str, cfg: &ProjectionConfig) -> BTreeMap<String, u32> {
    let mut counts = BTreeMap::new();
    for raw in text.split(|c: char| !c.is_alphanumeric()) {
        if raw.is_empty() {
            continue;
        }
        let token = if cfg.lowercase {
            raw.to_lowercase()
        } else {
            raw.to_string()
        };
        if cfg.stopwords.contains(&token) {
            continue;
        }
        *counts.entry(token).or_insert(0) += 1;
    }
    counts
}

/// A document network together with its materialized word nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedNetwork {
    network: TemporalTextNetwork,
    document_count: usize,
    word_count: usize,
}

impl ProjectedNetwork {
    pub fn network(&self) -> &TemporalTextNetwork {
        &self.network
    }

    pub fn document_count(&self) -> usize {
        self.document_count
    }

    pub fn word_count(&self) -> usize {
        self.word_count
    }

    pub fn is_word(&self, index: usize) -> bool {
        self.network.node(index).kind == NodeKind::Word
    }

    pub fn document_indices(&self) -> Vec<usize> {
        (0..self.network.node_count())
            .filter(|&u| !self.is_word(u))
            .collect()
    }

    pub fn word_indices(&self) -> Vec<usize> {
        (0..self.network.node_count())
            .filter(|&u| self.is_word(u))
            .collect()
    }

    /// The vocabulary term behind a word node.
    pub fn term(&self, index: usize) -> Option<&str> {
        if self.is_word(index) {
            self.network.node(index).id.strip_prefix(WORD_ID_PREFIX)
        } else {
            None
        }
    }

    /// Maps a cover over the projected node space down to the document
    /// network: word members are dropped and document members translated to
    /// their indices in `original`.
    pub fn restrict_cover_to_documents(
        &self,
        cover: &CommunityCover,
        original: &TemporalTextNetwork,
    ) -> CommunityCover {
        let sets = cover
            .communities()
            .iter()
            .map(|community| {
                community
                    .iter()
                    .filter(|&&u| !self.is_word(u))
                    .filter_map(|&u| original.index_of(&self.network.node(u).id))
                    .collect::<BTreeSet<usize>>()
            })
            .collect();
        CommunityCover::new(original.node_count(), sets)
            .expect("document indices are within the original universe")
    }
}

/// Builds the word-augmented network. Documents must have timestamps >= 1 so
/// that word nodes at time 0 are strictly earliest.
pub fn project(
    net: &TemporalTextNetwork,
    cfg: &ProjectionConfig,
) -> Result<ProjectedNetwork, ProjectionError> {
    for node in net.nodes() {
        if node.timestamp <= 0 {
            return Err(ProjectionError::NonPositiveDocumentTimestamp(
                node.id.clone(),
            ));
        }
    }

    // document frequency per normalized term
    let mut doc_terms: Vec<BTreeSet<String>> = Vec::with_capacity(net.node_count());
    let mut frequency: BTreeMap<String, usize> = BTreeMap::new();
    for node in net.nodes() {
        let terms: BTreeSet<String> = tokenize(&node.tokens.join(" "), cfg)
            .into_keys()
            .collect();
        for term in &terms {
            *frequency.entry(term.clone()).or_insert(0) += 1;
        }
        doc_terms.push(terms);
    }

    let doc_count = net.node_count();
    let max_df = (cfg.max_document_frequency_ratio * doc_count as f64).floor() as usize;
    let vocabulary: BTreeSet<String> = frequency
        .into_iter()
        .filter(|&(_, df)| df >= cfg.min_document_frequency && df <= max_df)
        .map(|(term, _)| term)
        .collect();

    let mut nodes: Vec<NodeRecord> = net.nodes().to_vec();
    for term in &vocabulary {
        nodes.push(NodeRecord::word(format!("{WORD_ID_PREFIX}{term}")));
    }

    let mut edges: Vec<DirectedEdge> = net
        .edges()
        .map(|(src, dst)| DirectedEdge::new(net.node(src).id.clone(), net.node(dst).id.clone()))
        .collect();
    for (doc, terms) in doc_terms.iter().enumerate() {
        for term in terms {
            if vocabulary.contains(term) {
                edges.push(DirectedEdge::new(
                    format!("{WORD_ID_PREFIX}{term}"),
                    net.node(doc).id.clone(),
                ));
            }
        }
    }

    let network = build_network(nodes, &edges, Directedness::Directed)?;
    Ok(ProjectedNetwork {
        word_count: network.node_count() - doc_count,
        document_count: doc_count,
        network,
    })
}
