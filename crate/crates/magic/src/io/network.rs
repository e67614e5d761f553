//! Parsing and serialization of networks and community files.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use crate::cover::CommunityCover;
use crate::graph::{
    build_network, DirectedEdge, Directedness, NodeRecord, TemporalTextNetwork,
};
use crate::io::{parse_error, write_atomic, IoError};

/// Paths of the files describing one network.
#[derive(Debug, Clone)]
pub struct NetworkFileSet {
    pub nodes: PathBuf,
    pub edges: PathBuf,
    pub communities: Option<PathBuf>,
}

/// A cover plus the community labels the file declared, in order.
#[derive(Debug, Clone)]
pub struct LabeledCover {
    pub cover: CommunityCover,
    pub labels: Vec<String>,
}

/// Reads and validates a network (and its ground-truth communities when a
/// path is given). Blank lines are ignored; anything else malformed is
/// reported with its line number.
pub fn parse_network(
    files: &NetworkFileSet,
    directedness: Directedness,
) -> Result<(TemporalTextNetwork, Option<LabeledCover>), IoError> {
    let nodes = parse_nodes(&files.nodes)?;
    let edges = parse_edges(&files.edges)?;
    let net = build_network(nodes, &edges, directedness)?;
    let truth = files
        .communities
        .as_deref()
        .map(|path| parse_communities(path, &net))
        .transpose()?;
    Ok((net, truth))
}

/// Reads just a nodes file, for callers that need ids and timestamps
/// without an edge list.
pub fn parse_nodes_file(path: &Path) -> Result<Vec<NodeRecord>, IoError> {
    parse_nodes(path)
}

fn parse_nodes(path: &Path) -> Result<Vec<NodeRecord>, IoError> {
    let contents = std::fs::read_to_string(path)?;
    let mut nodes = Vec::new();
    for (number, line) in contents.lines().enumerate() {
        let number = number + 1;
        if line.is_empty() {
            continue;
        }
        let mut fields = line.splitn(3, '\t');
        let id = fields
            .next()
            .filter(|id| !id.is_empty())
            .ok_or_else(|| parse_error(path, number, "missing node id"))?;
        let timestamp_text = fields
            .next()
            .ok_or_else(|| parse_error(path, number, "missing timestamp field"))?;
        let timestamp: i64 = timestamp_text.parse().map_err(|_| {
            parse_error(path, number, format!("invalid timestamp {timestamp_text:?}"))
        })?;
        let tokens = fields
            .next()
            .map(|text| text.split_whitespace().map(String::from).collect())
            .unwrap_or_default();
        nodes.push(NodeRecord::document(id, timestamp, tokens));
    }
    Ok(nodes)
}

fn parse_edges(path: &Path) -> Result<Vec<DirectedEdge>, IoError> {
    let contents = std::fs::read_to_string(path)?;
    let mut edges = Vec::new();
    for (number, line) in contents.lines().enumerate() {
        let number = number + 1;
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let src = fields
            .next()
            .filter(|s| !s.is_empty())
            .ok_or_else(|| parse_error(path, number, "missing source id"))?;
        let dst = fields
            .next()
            .filter(|s| !s.is_empty())
            .ok_or_else(|| parse_error(path, number, "missing destination id"))?;
        if fields.next().is_some() {
            return Err(parse_error(path, number, "expected exactly two fields"));
        }
        edges.push(DirectedEdge::new(src, dst));
    }
    Ok(edges)
}

/// Reads a communities file against an already-built network.
pub fn parse_communities(
    path: &Path,
    net: &TemporalTextNetwork,
) -> Result<LabeledCover, IoError> {
    let contents = std::fs::read_to_string(path)?;
    let mut labels = Vec::new();
    let mut sets: Vec<BTreeSet<usize>> = Vec::new();
    for (number, line) in contents.lines().enumerate() {
        let number = number + 1;
        if line.is_empty() {
            continue;
        }
        let mut fields = line.splitn(2, '\t');
        let label = fields
            .next()
            .filter(|l| !l.is_empty())
            .ok_or_else(|| parse_error(path, number, "missing community id"))?;
        if labels.iter().any(|existing| existing == label) {
            return Err(parse_error(
                path,
                number,
                format!("duplicate community id {label:?}"),
            ));
        }
        let mut members = BTreeSet::new();
        for id in fields.next().unwrap_or("").split_whitespace() {
            let index = net.index_of(id).ok_or_else(|| {
                parse_error(path, number, format!("unknown node id {id:?}"))
            })?;
            members.insert(index);
        }
        labels.push(label.to_string());
        sets.push(members);
    }
    let cover = CommunityCover::new(net.node_count(), sets)
        .expect("members resolved against the network");
    Ok(LabeledCover { cover, labels })
}

/// Writes a network back out as a nodes file and an edges file.
pub fn write_network(
    net: &TemporalTextNetwork,
    nodes_path: &Path,
    edges_path: &Path,
) -> Result<(), IoError> {
    let mut nodes_text = String::new();
    for node in net.nodes() {
        nodes_text.push_str(&node.id);
        nodes_text.push('\t');
        nodes_text.push_str(&node.timestamp.to_string());
        if !node.tokens.is_empty() {
            nodes_text.push('\t');
            nodes_text.push_str(&node.tokens.join(" "));
        }
        nodes_text.push('\n');
    }
    write_atomic(nodes_path, &nodes_text)?;

    let mut edges_text = String::new();
    for (src, dst) in net.edges() {
        edges_text.push_str(&net.node(src).id);
        edges_text.push('\t');
        edges_text.push_str(&net.node(dst).id);
        edges_text.push('\n');
    }
    write_atomic(edges_path, &edges_text)
}

/// Writes a cover with one community per line.
pub fn write_communities(
    path: &Path,
    cover: &CommunityCover,
    labels: &[String],
    net: &TemporalTextNetwork,
) -> Result<(), IoError> {
    assert_eq!(labels.len(), cover.community_count(), "one label per community");
    let mut text = String::new();
    for (label, community) in labels.iter().zip(cover.communities()) {
        text.push_str(label);
        text.push('\t');
        let ids: Vec<&str> = community
            .iter()
            .map(|&u| net.node(u).id.as_str())
            .collect();
        text.push_str(&ids.join(" "));
        text.push('\n');
    }
    write_atomic(path, &text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::TempDir;

    fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
        let path = dir.path().join(name);
        std::fs::write(&path, contents).unwrap();
        path
    }

    #[test]
    fn parses_nodes_edges_and_tokens() {
        let dir = TempDir::new().unwrap();
        let files = NetworkFileSet {
            nodes: write(&dir, "nodes.tsv", "a\t3\tinformation retrieval\nb\t5\n"),
            edges: write(&dir, "edges.tsv", "a\tb\n"),
            communities: None,
        };
        let (net, truth) = parse_network(&files, Directedness::Directed).unwrap();
        assert_eq!(net.node_count(), 2);
        assert_eq!(net.edge_count(), 1);
        let a = net.index_of("a").unwrap();
        assert_eq!(net.node(a).tokens, vec!["information", "retrieval"]);
        assert!(truth.is_none());
    }

    #[test]
    fn malformed_timestamp_reports_the_line() {
        let dir = TempDir::new().unwrap();
        let files = NetworkFileSet {
            nodes: write(&dir, "nodes.tsv", "a\tx\n"),
            edges: write(&dir, "edges.tsv", ""),
            communities: None,
        };
        let err = parse_network(&files, Directedness::Directed).unwrap_err();
        match err {
            IoError::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn parses_communities_against_the_network() {
        let dir = TempDir::new().unwrap();
        let files = NetworkFileSet {
            nodes: write(&dir, "nodes.tsv", "a\t1\nb\t2\nc\t3\n"),
            edges: write(&dir, "edges.tsv", "a\tb\n"),
            communities: Some(write(&dir, "comms.tsv", "c1\ta b\nc2\tc\n")),
        };
        let (net, truth) = parse_network(&files, Directedness::Directed).unwrap();
        let truth = truth.unwrap();
        assert_eq!(truth.labels, vec!["c1", "c2"]);
        let a = net.index_of("a").unwrap();
        assert!(truth.cover.communities()[0].contains(&a));
        assert_eq!(truth.cover.communities()[1].len(), 1);
    }

    #[test]
    fn unknown_member_is_a_parse_error() {
        let dir = TempDir::new().unwrap();
        let files = NetworkFileSet {
            nodes: write(&dir, "nodes.tsv", "a\t1\n"),
            edges: write(&dir, "edges.tsv", ""),
            communities: Some(write(&dir, "comms.tsv", "c1\ta z\n")),
        };
        assert!(matches!(
            parse_network(&files, Directedness::Directed).unwrap_err(),
            IoError::Parse { line: 1, .. }
        ));
    }

    #[test]
    fn network_round_trip_is_identity() {
        let dir = TempDir::new().unwrap();
        let files = NetworkFileSet {
            // declared out of id order on purpose
            nodes: write(&dir, "nodes.tsv", "b\t5\tbeta\na\t3\talpha beta\n"),
            edges: write(&dir, "edges.tsv", "a\tb\n"),
            communities: None,
        };
        let (net, _) = parse_network(&files, Directedness::Directed).unwrap();
        let nodes_out = dir.path().join("nodes_out.tsv");
        let edges_out = dir.path().join("edges_out.tsv");
        write_network(&net, &nodes_out, &edges_out).unwrap();
        let reread = parse_network(
            &NetworkFileSet {
                nodes: nodes_out,
                edges: edges_out,
                communities: None,
            },
            Directedness::Directed,
        )
        .unwrap()
        .0;
        assert_eq!(net, reread);
    }

    #[test]
    fn community_round_trip_preserves_labels_and_members() {
        let dir = TempDir::new().unwrap();
        let files = NetworkFileSet {
            nodes: write(&dir, "nodes.tsv", "a\t1\nb\t2\nc\t3\n"),
            edges: write(&dir, "edges.tsv", ""),
            communities: Some(write(&dir, "comms.tsv", "left\ta b\nright\tc\nvoid\t\n")),
        };
        let (net, truth) = parse_network(&files, Directedness::Directed).unwrap();
        let truth = truth.unwrap();
        let out = dir.path().join("out.tsv");
        write_communities(&out, &truth.cover, &truth.labels, &net).unwrap();
        let reread = parse_communities(&out, &net).unwrap();
        assert_eq!(reread.labels, truth.labels);
        assert_eq!(reread.cover, truth.cover);
    }
}
