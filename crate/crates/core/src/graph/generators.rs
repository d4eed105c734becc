use rand::Rng;

use super::{Graph, GraphKind, NodeId};
use crate::error::{Error, Result};

/// Complete graph on `n` nodes, stored implicitly.
pub fn make_clique(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("clique needs at least one node".into()));
    }
    Ok(Graph::implicit_clique(n))
}

/// G(n, p) random graph: each of the n(n-1)/2 pairs is an edge independently
/// with probability `edge_prob`.
///
/// Uses geometric skipping over the linearised pair index, so the cost is
/// proportional to the number of edges drawn rather than to n².
pub fn make_erdos_renyi<R: Rng + ?Sized>(n: usize, edge_prob: f64, rng: &mut R) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("random graph needs at least one node".into()));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::InvalidParameter(format!("edge probability {edge_prob} outside [0, 1]")));
    }
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    if edge_prob == 1.0 {
        edges.extend((0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))));
    } else if edge_prob > 0.0 {
        let log_q = (1.0 - edge_prob).ln();
        let mut v: usize = 1;
        let mut w: i64 = -1;
        while v < n {
            let r: f64 = rng.gen();
            let skip = ((1.0 - r).ln() / log_q).floor();
            w = w.saturating_add(1).saturating_add(skip.min(i64::MAX as f64 / 4.0) as i64);
            while v < n && w >= v as i64 {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((w as usize, v));
            }
        }
    }
    Graph::from_edges(n, GraphKind::ErdosRenyi, edges, None)
}

/// Preferential-attachment graph grown from a ring of `ring_size` nodes.
///
/// Every later node attaches to `m` distinct existing nodes, each chosen with
/// probability proportional to its current degree. Degree-proportional
/// sampling draws uniformly from a list holding each node once per incident
/// edge; a repeated target is redrawn.
pub fn make_barabasi_albert<R: Rng + ?Sized>(n: usize, ring_size: usize, m: usize, rng: &mut R) -> Result<Graph> {
    if ring_size < 3 {
        return Err(Error::InvalidParameter(format!("ring size {ring_size} must be at least 3")));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("attachment count m must be at least 1".into()));
    }
    if m > ring_size {
        return Err(Error::InvalidParameter(format!("attachment count {m} exceeds ring size {ring_size}")));
    }
    if n < ring_size {
        return Err(Error::InvalidParameter(format!("node count {n} is smaller than ring size {ring_size}")));
    }

    let edge_total = ring_size + m * (n - ring_size);
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(edge_total);
    let mut endpoints: Vec<u32> = Vec::with_capacity(2 * edge_total);
    for u in 0..ring_size {
        let v = (u + 1) % ring_size;
        edges.push((u, v));
        endpoints.push(u as u32);
        endpoints.push(v as u32);
    }

    let mut chosen: Vec<u32> = Vec::with_capacity(m);
    for v in ring_size..n {
        chosen.clear();
        while chosen.len() < m {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            edges.push((t as usize, v));
            endpoints.push(t);
            endpoints.push(v as u32);
        }
    }
    debug_assert_eq!(edges.len(), edge_total);
    Graph::from_edges(n, GraphKind::BarabasiAlbert, edges, None)
}

/// Heap-ordered complete binary tree: node k has children 2k+1 and 2k+2.
pub fn make_binary_tree(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("binary tree needs at least one node".into()));
    }
    let depths: Vec<u32> = (0..n).map(|k| (k + 1).ilog2()).collect();
    let edges = (1..n).map(|k| ((k - 1) / 2, k));
    Graph::from_edges(n, GraphKind::BinaryTree, edges, Some(depths))
}
