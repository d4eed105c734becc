use super::{GraphSpec, SeedNodeRule, SimulationConfig, DEFAULT_MAX_STEPS, DEFAULT_STOP_FRACTION};
use crate::dynamics::{CostModel, DynamicsParams};
use crate::error::{Error, Result};

pub const PRESET_NAMES: [&str; 7] =
    ["independent", "clique", "random_graph", "preferential", "tree", "tree_small_alpha", "tree_tiny_alpha"];

const NODES: usize = 10_000;
const BETA: f64 = 3.0;

/// Named experiment configurations. All use 10 000 nodes, beta = 3, a
/// uniformly random initial adopter and a 99 % stop rule; `rng_seed` is 0.
pub fn preset(name: &str) -> Result<SimulationConfig> {
    let (graph_spec, dynamics) = match name {
        // no neighbourhood effect, so the graph is irrelevant; the implicit
        // clique costs nothing to build
        "independent" => (GraphSpec::Clique, DynamicsParams::independent(0.05)),
        "clique" => (GraphSpec::Clique, DynamicsParams::networked(1.25e7, BETA, CostModel::constant(1.25e7))),
        "random_graph" => (
            GraphSpec::ErdosRenyi { edge_prob: 0.001 },
            DynamicsParams::networked(10_000.0, BETA, CostModel::degree_linear(1562.5)),
        ),
        "preferential" => (
            GraphSpec::BarabasiAlbert { ring_size: 100, m: 1 },
            DynamicsParams::networked(3333.0, BETA, CostModel::degree_linear(2500.0)),
        ),
        "tree" => tree(312.5),
        "tree_small_alpha" => tree(78.0),
        "tree_tiny_alpha" => tree(39.0),
        _ => {
            return Err(Error::UnknownPreset { name: name.to_owned(), valid: PRESET_NAMES.join(", ") });
        }
    };
    Ok(SimulationConfig {
        graph_spec,
        dynamics,
        node_count: NODES,
        seed_node_rule: SeedNodeRule::UniformRandom,
        stop_fraction: DEFAULT_STOP_FRACTION,
        max_steps: DEFAULT_MAX_STEPS,
        rng_seed: 0,
    })
}

fn tree(alpha: f64) -> (GraphSpec, DynamicsParams) {
    (GraphSpec::BinaryTree, DynamicsParams::networked(alpha, BETA, CostModel::depth_exponential(2e6)))
}
