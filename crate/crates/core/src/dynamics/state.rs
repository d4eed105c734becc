use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Which nodes have adopted, and at which step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeploymentState {
    adopted: Vec<bool>,
    adopted_count: usize,
    step: u64,
}

impl DeploymentState {
    /// Nobody adopted, step 0.
    pub fn new(node_count: usize) -> Self {
        DeploymentState { adopted: vec![false; node_count], adopted_count: 0, step: 0 }
    }

    pub fn with_adopters(node_count: usize, adopters: impl IntoIterator<Item = NodeId>) -> Result<Self> {
        let mut state = Self::new(node_count);
        for v in adopters {
            if v >= node_count {
                return Err(Error::NodeOutOfRange { node: v, node_count });
            }
            state.mark_adopted(v);
        }
        Ok(state)
    }

    pub fn node_count(&self) -> usize {
        self.adopted.len()
    }

    pub fn adopted_count(&self) -> usize {
        self.adopted_count
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    /// Panics if `v` is out of range.
    pub fn is_adopted(&self, v: NodeId) -> bool {
        self.adopted[v]
    }

    pub fn adopted_flags(&self) -> &[bool] {
        &self.adopted
    }

    pub fn adopters(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.adopted.iter().enumerate().filter_map(|(v, &a)| a.then_some(v))
    }

    /// Marks `v` adopted; returns false if it already was.
    pub fn mark_adopted(&mut self, v: NodeId) -> bool {
        if self.adopted[v] {
            return false;
        }
        self.adopted[v] = true;
        self.adopted_count += 1;
        true
    }

    pub(crate) fn advance_step(&mut self) {
        self.step += 1;
    }

    pub(crate) fn check_graph(&self, graph: &Graph) -> Result<()> {
        if self.node_count() != graph.node_count() {
            return Err(Error::InvalidParameter(format!(
                "state covers {} nodes but the graph has {}",
                self.node_count(),
                graph.node_count()
            )));
        }
        Ok(())
    }

    pub fn snapshot(&self) -> Snapshot {
        let mut bytes = vec![0u8; self.adopted.len().div_ceil(8)];
        for v in self.adopters() {
            bytes[v / 8] |= 1 << (v % 8);
        }
        Snapshot { step: self.step, node_count: self.adopted.len(), bits: hex::encode(bytes) }
    }

    pub fn restore(snapshot: &Snapshot) -> Result<Self> {
        let bytes = hex::decode(&snapshot.bits).map_err(|e| Error::Snapshot(e.to_string()))?;
        let n = snapshot.node_count;
        if bytes.len() != n.div_ceil(8) {
            return Err(Error::Snapshot(format!("{} bytes cannot hold exactly {n} flags", bytes.len())));
        }
        let mut state = Self::new(n);
        for (i, byte) in bytes.iter().enumerate() {
            for bit in 0..8 {
                if byte & (1 << bit) != 0 {
                    let v = i * 8 + bit;
                    if v >= n {
                        return Err(Error::Snapshot(format!("padding bit {v} set")));
                    }
                    state.mark_adopted(v);
                }
            }
        }
        state.step = snapshot.step;
        Ok(state)
    }
}

/// Serialisable checkpoint: adoption flags packed little-endian into bytes,
/// node v at bit v % 8 of byte v / 8, hex-encoded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub step: u64,
    pub node_count: usize,
    pub bits: String,
}
