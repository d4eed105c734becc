//! Plain-text edge lists.
//!
//! ```text
//! n 7
//! # kind binary_tree
//! 0 1
//! 0 2
//! ...
//! depths
//! 0
//! 1
//! ...
//! ```
//!
//! The first line is `n <node_count>`. Edges follow as zero-based `u v`
//! pairs. A `# kind <tag>` comment names the graph family (default
//! `erdos_renyi`); other `#` lines and blank lines are ignored. Binary trees
//! end with a `depths` line followed by one depth per node in id order.

use std::io::{BufRead, Write};

use super::{Graph, GraphKind, NodeId};
use crate::error::{Error, Result};

pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "n {}", graph.node_count())?;
    writeln!(out, "# kind {}", graph.kind())?;
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}")?;
    }
    if let Some(depths) = graph.depths() {
        writeln!(out, "depths")?;
        for d in depths {
            writeln!(out, "{d}")?;
        }
    }
    Ok(())
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph> {
    let mut node_count: Option<usize> = None;
    let mut kind = GraphKind::ErdosRenyi;
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let mut depths: Option<Vec<u32>> = None;

    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let err = |msg: String| Error::Parse { line: lineno, msg };
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(comment) = text.strip_prefix('#') {
            if let Some(tag) = comment.trim().strip_prefix("kind") {
                let tag = tag.trim();
                kind = GraphKind::parse(tag).ok_or_else(|| err(format!("unknown graph kind `{tag}`")))?;
            }
            continue;
        }
        let Some(n) = node_count else {
            let rest = text.strip_prefix("n ").ok_or_else(|| err("expected header `n <node_count>`".into()))?;
            node_count = Some(rest.trim().parse().map_err(|e| err(format!("bad node count: {e}")))?);
            continue;
        };
        if let Some(ds) = depths.as_mut() {
            ds.push(text.parse().map_err(|e| err(format!("bad depth: {e}")))?);
            continue;
        }
        if text == "depths" {
            depths = Some(Vec::with_capacity(n));
            continue;
        }
        let mut fields = text.split_whitespace();
        let mut field = || -> Result<NodeId> {
            fields
                .next()
                .ok_or_else(|| err("expected `u v`".into()))?
                .parse()
                .map_err(|e| err(format!("bad node id: {e}")))
        };
        let (u, v) = (field()?, field()?);
        if fields.next().is_some() {
            return Err(err("trailing fields after `u v`".into()));
        }
        edges.push((u, v));
    }

    let n = node_count.ok_or(Error::Parse { line: 0, msg: "empty edge list".into() })?;
    Graph::from_edges(n, kind, edges, depths)
}
