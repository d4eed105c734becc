//! Undirected simple graphs and the four generators used by the deployment
//! experiments.
//!
//! A [`Graph`] is immutable once built. Cliques are stored implicitly: degree
//! and adjacency queries are answered by formula, so a 10 000-node clique costs
//! nothing to build while still behaving exactly like the materialised graph.

mod edgelist;
mod generators;

pub use edgelist::{read_edge_list, write_edge_list};
pub use generators::{make_barabasi_albert, make_binary_tree, make_clique, make_erdos_renyi};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Node identifier. Ids are dense in `[0, node_count)`.
pub type NodeId = usize;

/// Which family a graph was drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Clique,
    ErdosRenyi,
    BarabasiAlbert,
    BinaryTree,
}

impl GraphKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::Clique => "clique",
            GraphKind::ErdosRenyi => "erdos_renyi",
            GraphKind::BarabasiAlbert => "barabasi_albert",
            GraphKind::BinaryTree => "binary_tree",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "clique" => Some(GraphKind::Clique),
            "erdos_renyi" => Some(GraphKind::ErdosRenyi),
            "barabasi_albert" => Some(GraphKind::BarabasiAlbert),
            "binary_tree" => Some(GraphKind::BinaryTree),
            _ => None,
        }
    }
}

impl std::fmt::Display for GraphKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Adjacency {
    /// Every pair of distinct nodes is adjacent.
    Complete,
    /// Sorted neighbour lists.
    Lists(Vec<Vec<u32>>),
}

/// Undirected simple graph with optional per-node depth (binary trees only).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    kind: GraphKind,
    adjacency: Adjacency,
    depths: Option<Vec<u32>>,
}

impl Graph {
    pub(crate) fn implicit_clique(node_count: usize) -> Self {
        Graph { node_count, kind: GraphKind::Clique, adjacency: Adjacency::Complete, depths: None }
    }

    /// Builds a graph from an explicit edge set, checking that it is simple
    /// and, for [`GraphKind::BinaryTree`], that it is a tree whose depths are
    /// consistent with its edges.
    pub fn from_edges(
        node_count: usize,
        kind: GraphKind,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
        depths: Option<Vec<u32>>,
    ) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidParameter("graph must have at least one node".into()));
        }
        if node_count > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!("node count {node_count} exceeds u32 range")));
        }
        let mut lists = vec![Vec::new(); node_count];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= node_count {
                    return Err(Error::NodeOutOfRange { node: w, node_count });
                }
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at node {u}")));
            }
            lists[u].push(v as u32);
            lists[v].push(u as u32);
        }
        for (v, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!("duplicate edge at node {v}")));
            }
        }
        let graph = Graph { node_count, kind, adjacency: Adjacency::Lists(lists), depths };
        match (kind, &graph.depths) {
            (GraphKind::BinaryTree, Some(_)) => graph.check_tree()?,
            (GraphKind::BinaryTree, None) => {
                return Err(Error::InvalidParameter("binary tree requires per-node depths".into()))
            }
            (_, Some(_)) => {
                return Err(Error::InvalidParameter(format!("depths are only valid on binary trees, not {kind}")))
            }
            (_, None) => {}
        }
        Ok(graph)
    }

    /// Verifies the tree invariants: n - 1 edges, depths consistent with
    /// edges from a single root, at most two children per node.
    fn check_tree(&self) -> Result<()> {
        let depths = self.depths.as_deref().expect("tree has depths");
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if depths.len() != self.node_count {
            return bad(format!("{} depths for {} nodes", depths.len(), self.node_count));
        }
        if self.edge_count() != self.node_count - 1 {
            return bad(format!("tree on {} nodes has {} edges", self.node_count, self.edge_count()));
        }
        let roots = depths.iter().filter(|&&d| d == 0).count();
        if roots != 1 {
            return bad(format!("tree must have exactly one root, found {roots}"));
        }
        for v in 0..self.node_count {
            let mut parents = 0;
            let mut children = 0;
            for w in self.neighbors_unchecked(v) {
                if depths[w] + 1 == depths[v] {
                    parents += 1;
                } else if depths[w] == depths[v] + 1 {
                    children += 1;
                } else {
                    return bad(format!("edge {v}-{w} joins depths {} and {}", depths[v], depths[w]));
                }
            }
            let expected_parents = usize::from(depths[v] != 0);
            if parents != expected_parents || children > 2 {
                return bad(format!("node {v} has {parents} parents and {children} children"));
            }
        }
        // n - 1 edges with every non-root node hanging off exactly one parent
        // one level up is connected and acyclic.
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn edge_count(&self) -> usize {
        match &self.adjacency {
            Adjacency::Complete => self.node_count * (self.node_count - 1) / 2,
            Adjacency::Lists(lists) => lists.iter().map(Vec::len).sum::<usize>() / 2,
        }
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v < self.node_count {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { node: v, node_count: self.node_count })
        }
    }

    /// Number of edges incident to `v`.
    pub fn degree(&self, v: NodeId) -> Result<usize> {
        self.check_node(v)?;
        Ok(self.degree_unchecked(v))
    }

    pub(crate) fn degree_unchecked(&self, v: NodeId) -> usize {
        match &self.adjacency {
            Adjacency::Complete => self.node_count - 1,
            Adjacency::Lists(lists) => lists[v].len(),
        }
    }

    /// Neighbours of `v` in ascending id order.
    pub fn neighbors(&self, v: NodeId) -> Result<Neighbors<'_>> {
        self.check_node(v)?;
        Ok(self.neighbors_unchecked(v))
    }

    pub(crate) fn neighbors_unchecked(&self, v: NodeId) -> Neighbors<'_> {
        match &self.adjacency {
            Adjacency::Complete => Neighbors::Complete { next: 0, end: self.node_count, skip: v },
            Adjacency::Lists(lists) => Neighbors::List(lists[v].iter()),
        }
    }

    pub fn is_adjacent(&self, u: NodeId, v: NodeId) -> Result<bool> {
        self.check_node(u)?;
        self.check_node(v)?;
        Ok(match &self.adjacency {
            Adjacency::Complete => u != v,
            Adjacency::Lists(lists) => lists[u].binary_search(&(v as u32)).is_ok(),
        })
    }

    /// True when adjacency is answered by formula rather than stored lists.
    pub fn is_implicit_clique(&self) -> bool {
        matches!(self.adjacency, Adjacency::Complete)
    }

    /// Per-node depth; present only on binary trees.
    pub fn depths(&self) -> Option<&[u32]> {
        self.depths.as_deref()
    }

    pub fn depth(&self, v: NodeId) -> Result<Option<u32>> {
        self.check_node(v)?;
        Ok(self.depths.as_ref().map(|d| d[v]))
    }

    /// Every edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count)
            .flat_map(move |u| self.neighbors_unchecked(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Histogram of degrees: entry `d` is the number of nodes with degree `d`.
    pub fn degree_distribution(&self) -> Vec<usize> {
        let mut hist = Vec::new();
        for v in 0..self.node_count {
            let d = self.degree_unchecked(v);
            if hist.len() <= d {
                hist.resize(d + 1, 0);
            }
            hist[d] += 1;
        }
        hist
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count).map(|v| self.degree_unchecked(v)).max().unwrap_or(0)
    }
}

/// Iterator over the neighbours of one node.
#[derive(Clone, Debug)]
pub enum Neighbors<'a> {
    Complete { next: usize, end: usize, skip: usize },
    List(std::slice::Iter<'a, u32>),
}

impl Iterator for Neighbors<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        match self {
            Neighbors::Complete { next, end, skip } => {
                if *next == *skip {
                    *next += 1;
                }
                if *next >= *end {
                    return None;
                }
                let v = *next;
                *next += 1;
                Some(v)
            }
            Neighbors::List(iter) => iter.next().map(|&v| v as usize),
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = match self {
            Neighbors::Complete { next, end, skip } => {
                let rest = end.saturating_sub(*next);
                rest - usize::from(*skip >= *next && *skip < *end)
            }
            Neighbors::List(iter) => iter.len(),
        };
        (n, Some(n))
    }
}

impl ExactSizeIterator for Neighbors<'_> {}
