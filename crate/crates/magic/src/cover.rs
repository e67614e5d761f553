//! Community covers: collections of possibly overlapping node sets over a
//! fixed universe. Nodes may belong to any number of communities, including
//! none.

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("community {community} contains member {member} outside universe of size {universe}")]
    MemberOutOfRange {
        community: usize,
        member: usize,
        universe: usize,
    },
}

/// A collection of node-index sets over a universe of `N` nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunityCover {
    universe: usize,
    communities: Vec<BTreeSet<usize>>,
}

impl CommunityCover {
    pub fn new(
        universe: usize,
        communities: Vec<BTreeSet<usize>>,
    ) -> Result<Self, CoverError> {
        for (c, members) in communities.iter().enumerate() {
            if let Some(&member) = members.iter().next_back() {
                if member >= universe {
                    return Err(CoverError::MemberOutOfRange {
                        community: c,
                        member,
                        universe,
                    });
                }
            }
        }
        Ok(CommunityCover {
            universe,
            communities,
        })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn communities(&self) -> &[BTreeSet<usize>] {
        &self.communities
    }

    pub fn community_count(&self) -> usize {
        self.communities.len()
    }

    /// Indices of communities with no members. Empty communities are legal
    /// but callers usually want to surface them.
    pub fn empty_communities(&self) -> Vec<usize> {
        self.communities
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_empty())
            .map(|(i, _)| i)
            .collect()
    }

    /// Number of distinct nodes assigned to at least one community.
    pub fn covered_nodes(&self) -> usize {
        let mut covered = vec![false; self.universe];
        for community in &self.communities {
            for &u in community {
                covered[u] = true;
            }
        }
        covered.iter().filter(|&&c| c).count()
    }

    /// For each node, the list of community indices it belongs to.
    pub fn node_communities(&self) -> Vec<Vec<usize>> {
        let mut memberships = vec![Vec::new(); self.universe];
        for (c, community) in self.communities.iter().enumerate() {
            for &u in community {
                memberships[u].push(c);
            }
        }
        memberships
    }
}
