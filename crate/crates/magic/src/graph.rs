//! In-memory directed temporal (text) networks.
//!
//! A network is immutable once built: nodes are canonically ordered by id,
//! adjacency lists are sorted, and duplicate edges are collapsed. Timestamps
//! are plain `i64` values; the model only ever compares them, so callers map
//! calendar dates to integers upstream.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

/// Errors raised while constructing or inspecting a network.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate node id: {0}")]
    DuplicateNodeId(String),
    #[error("edge endpoint does not resolve to a declared node: {0}")]
    UnknownEndpoint(String),
    #[error("self-loops are not allowed: {0}")]
    SelfLoop(String),
    #[error("operation requires a directed network")]
    UndirectedNetwork,
}

/// Whether a node carries document text or stands for a vocabulary word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Document,
    Word,
}

/// A single node: opaque string id, integer timestamp, and an optional bag
/// of tokens (empty for non-text nodes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRecord {
    pub id: String,
    pub timestamp: i64,
    pub tokens: Vec<String>,
    pub kind: NodeKind,
}

impl NodeRecord {
    pub fn document(id: impl Into<String>, timestamp: i64, tokens: Vec<String>) -> Self {
        NodeRecord {
            id: id.into(),
            timestamp,
            tokens,
            kind: NodeKind::Document,
        }
    }

    /// Word nodes always sit at timestamp zero and carry no tokens.
    pub fn word(id: impl Into<String>) -> Self {
        NodeRecord {
            id: id.into(),
            timestamp: 0,
            tokens: Vec::new(),
            kind: NodeKind::Word,
        }
    }
}

/// A directed edge given by endpoint ids, as declared by the caller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedEdge {
    pub src: String,
    pub dst: String,
}

impl DirectedEdge {
    pub fn new(src: impl Into<String>, dst: impl Into<String>) -> Self {
        DirectedEdge {
            src: src.into(),
            dst: dst.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Directedness {
    Directed,
    Undirected,
}

/// Result of checking every edge against the strict forward-in-time rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Temporality {
    Natural,
    /// Violating edges as `(src, dst)` node indices.
    Complex(Vec<(usize, usize)>),
}

/// Nodes sorted ascending by `(timestamp, id)` plus the boundaries of the
/// maximal runs of equal timestamps. Supports the prefix-sum passes the
/// optimizer makes over "strictly earlier" / "strictly later" nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeOrderedIndex {
    order: Vec<usize>,
    group_offsets: Vec<usize>,
    group_of: Vec<usize>,
}

impl TimeOrderedIndex {
    /// The node permutation, ascending by `(timestamp, id)`.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn group_count(&self) -> usize {
        self.group_offsets.len().saturating_sub(1)
    }

    /// Node indices of one tie group (all share a timestamp).
    pub fn group(&self, g: usize) -> &[usize] {
        &self.order[self.group_offsets[g]..self.group_offsets[g + 1]]
    }

    /// Which tie group a node belongs to.
    pub fn group_of(&self, node: usize) -> usize {
        self.group_of[node]
    }

    pub fn groups(&self) -> impl Iterator<Item = &[usize]> {
        (0..self.group_count()).map(move |g| self.group(g))
    }
}

/// An immutable directed (or undirected) network with per-node timestamps
/// and optional token bags. Node indices are assigned in ascending id order,
/// so two networks built from the same records in any declaration order are
/// identical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalTextNetwork {
    nodes: Vec<NodeRecord>,
    index_of: HashMap<String, usize>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    edge_count: usize,
    directedness: Directedness,
}

/// Validates and assembles a network from node records and edge declarations.
///
/// Duplicate `(src, dst)` pairs collapse to one edge; undirected edges are
/// stored once under the canonical orientation `src < dst` by id order.
pub fn build_network(
    node_records: Vec<NodeRecord>,
    edges: &[DirectedEdge],
    directedness: Directedness,
) -> Result<TemporalTextNetwork, GraphError> {
    let mut nodes = node_records;
    nodes.sort_by(|a, b| a.id.cmp(&b.id));
    let mut index_of = HashMap::with_capacity(nodes.len());
    for (i, node) in nodes.iter().enumerate() {
        if index_of.insert(node.id.clone(), i).is_some() {
            return Err(GraphError::DuplicateNodeId(node.id.clone()));
        }
    }

    let mut unique: BTreeSet<(usize, usize)> = BTreeSet::new();
    for edge in edges {
        let src = *index_of
            .get(&edge.src)
            .ok_or_else(|| GraphError::UnknownEndpoint(edge.src.clone()))?;
        let dst = *index_of
            .get(&edge.dst)
            .ok_or_else(|| GraphError::UnknownEndpoint(edge.dst.clone()))?;
        if src == dst {
            return Err(GraphError::SelfLoop(edge.src.clone()));
        }
        let pair = match directedness {
            Directedness::Directed => (src, dst),
            // id-sorted indices make index order the same as id order
            Directedness::Undirected => (src.min(dst), src.max(dst)),
        };
        unique.insert(pair);
    }

    let mut out_adj = vec![Vec::new(); nodes.len()];
    let mut in_adj = vec![Vec::new(); nodes.len()];
    for &(src, dst) in &unique {
        out_adj[src].push(dst);
        in_adj[dst].push(src);
    }
    // BTreeSet iteration already yields sorted out-lists; in-lists need it
    for list in &mut in_adj {
        list.sort_unstable();
    }

    Ok(TemporalTextNetwork {
        index_of,
        out_adj,
        in_adj,
        edge_count: unique.len(),
        directedness,
        nodes,
    })
}

impl TemporalTextNetwork {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn directedness(&self) -> Directedness {
        self.directedness
    }

    pub fn node(&self, index: usize) -> &NodeRecord {
        &self.nodes[index]
    }

    pub fn nodes(&self) -> &[NodeRecord] {
        &self.nodes
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index_of.get(id).copied()
    }

    pub fn timestamp(&self, index: usize) -> i64 {
        self.nodes[index].timestamp
    }

    pub fn out_neighbors(&self, index: usize) -> &[usize] {
        &self.out_adj[index]
    }

    pub fn in_neighbors(&self, index: usize) -> &[usize] {
        &self.in_adj[index]
    }

    /// Total incident edge count (in-degree plus out-degree).
    pub fn degree(&self, index: usize) -> usize {
        self.in_adj[index].len() + self.out_adj[index].len()
    }

    /// Stored edges in canonical order. For undirected networks each edge
    /// appears once under its canonical orientation.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(src, dsts)| dsts.iter().map(move |&dst| (src, dst)))
    }

    /// Whether the stored edge set contains the pair. For undirected
    /// networks the orientation of the query is irrelevant.
    pub fn has_edge(&self, src: usize, dst: usize) -> bool {
        let (s, d) = match self.directedness {
            Directedness::Directed => (src, dst),
            Directedness::Undirected => (src.min(dst), src.max(dst)),
        };
        self.out_adj[s].binary_search(&d).is_ok()
    }

    /// In- and out-neighbors merged into one sorted, deduplicated list.
    pub fn undirected_neighbors(&self, index: usize) -> Vec<usize> {
        let a = &self.out_adj[index];
        let b = &self.in_adj[index];
        let mut merged = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let next = match (a.get(i), b.get(j)) {
                (Some(&x), Some(&y)) if x == y => {
                    i += 1;
                    j += 1;
                    x
                }
                (Some(&x), Some(&y)) if x < y => {
                    i += 1;
                    x
                }
                (Some(_), Some(&y)) => {
                    j += 1;
                    y
                }
                (Some(&x), None) => {
                    i += 1;
                    x
                }
                (None, Some(&y)) => {
                    j += 1;
                    y
                }
                (None, None) => unreachable!(),
            };
            merged.push(next);
        }
        merged
    }

    /// Checks whether every edge runs strictly forward in time.
    pub fn classify_temporality(&self) -> Result<Temporality, GraphError> {
        if self.directedness == Directedness::Undirected {
            return Err(GraphError::UndirectedNetwork);
        }
        let violations: Vec<(usize, usize)> = self
            .edges()
            .filter(|&(src, dst)| self.timestamp(src) >= self.timestamp(dst))
            .collect();
        if violations.is_empty() {
            Ok(Temporality::Natural)
        } else {
            Ok(Temporality::Complex(violations))
        }
    }

    /// Stable sort of the node indices by `(timestamp, id)` with tie-group
    /// boundaries recorded.
    pub fn time_ordered_view(&self) -> TimeOrderedIndex {
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        // indices are id-sorted already, so sorting by timestamp alone is a
        // stable (timestamp, id) order
        order.sort_by_key(|&i| self.nodes[i].timestamp);

        let mut group_offsets = vec![0];
        for pos in 1..order.len() {
            if self.nodes[order[pos]].timestamp != self.nodes[order[pos - 1]].timestamp {
                group_offsets.push(pos);
            }
        }
        if order.is_empty() {
            // no groups at all: offsets stay [0] as the single sentinel
        } else {
            group_offsets.push(order.len());
        }

        let mut group_of = vec![0; order.len()];
        for g in 0..group_offsets.len().saturating_sub(1) {
            for &node in &order[group_offsets[g]..group_offsets[g + 1]] {
                group_of[node] = g;
            }
        }
        TimeOrderedIndex {
            order,
            group_offsets,
            group_of,
        }
    }
}
