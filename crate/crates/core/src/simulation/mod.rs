//! Full runs: build the graph, seed one adopter, step until the stop rule
//! fires, and record the growth curve.

mod ensemble;
mod presets;

pub use ensemble::{
    map_runs, run_ensemble, run_ensemble_with, run_seed, summarize, Ensemble, EnsembleOptions, EnsembleSummary,
    StepStats,
};
pub use presets::{preset, PRESET_NAMES};
pub(crate) use ensemble::quantile_sorted;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynamics::{DeploymentState, DrawStream, DynamicsParams, Stepper};
use crate::error::{Error, Result};
use crate::graph::{make_barabasi_albert, make_binary_tree, make_clique, make_erdos_renyi, Graph, NodeId};
use crate::par::Schedule;

pub const DEFAULT_STOP_FRACTION: f64 = 0.99;
pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

/// Generator and its parameters; the node count lives on the config.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    Clique,
    ErdosRenyi { edge_prob: f64 },
    BarabasiAlbert { ring_size: usize, m: usize },
    BinaryTree,
}

impl GraphSpec {
    pub fn build<R: Rng + ?Sized>(&self, node_count: usize, rng: &mut R) -> Result<Graph> {
        match *self {
            GraphSpec::Clique => make_clique(node_count),
            GraphSpec::ErdosRenyi { edge_prob } => make_erdos_renyi(node_count, edge_prob, rng),
            GraphSpec::BarabasiAlbert { ring_size, m } => make_barabasi_albert(node_count, ring_size, m, rng),
            GraphSpec::BinaryTree => make_binary_tree(node_count),
        }
    }

    /// Whether building consumes randomness (and so differs per run).
    pub fn is_random(&self) -> bool {
        matches!(self, GraphSpec::ErdosRenyi { .. } | GraphSpec::BarabasiAlbert { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedNodeRule {
    UniformRandom,
    Fixed(NodeId),
}

impl SeedNodeRule {
    fn pick<R: Rng + ?Sized>(self, node_count: usize, rng: &mut R) -> Result<NodeId> {
        match self {
            SeedNodeRule::UniformRandom => Ok(rng.gen_range(0..node_count)),
            SeedNodeRule::Fixed(v) if v < node_count => Ok(v),
            SeedNodeRule::Fixed(v) => Err(Error::NodeOutOfRange { node: v, node_count }),
        }
    }
}

fn default_stop_fraction() -> f64 {
    DEFAULT_STOP_FRACTION
}

fn default_max_steps() -> u64 {
    DEFAULT_MAX_STEPS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub graph_spec: GraphSpec,
    pub dynamics: DynamicsParams,
    pub node_count: usize,
    pub seed_node_rule: SeedNodeRule,
    #[serde(default = "default_stop_fraction")]
    pub stop_fraction: f64,
    #[serde(default = "default_max_steps")]
    pub max_steps: u64,
    #[serde(default)]
    pub rng_seed: u64,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.node_count == 0 {
            return Err(Error::InvalidParameter("node_count must be positive".into()));
        }
        if !(self.stop_fraction > 0.0 && self.stop_fraction <= 1.0) {
            return Err(Error::InvalidParameter(format!("stop_fraction {} outside (0, 1]", self.stop_fraction)));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter("max_steps must be at least 1".into()));
        }
        if let SeedNodeRule::Fixed(v) = self.seed_node_rule {
            if v >= self.node_count {
                return Err(Error::NodeOutOfRange { node: v, node_count: self.node_count });
            }
        }
        self.dynamics.validate()
    }

    /// Adopted count at which a run stops.
    pub fn stop_target(&self) -> usize {
        ceil_fraction(self.stop_fraction, self.node_count)
    }

    /// Short stable identifier of the config, seed included.
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serialises");
        hex::encode(&Sha256::digest(&json)[..8])
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: SimulationConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }
}

/// `ceil(fraction * n)`, treating products within rounding noise of an
/// integer as that integer (0.99 * 10000 is 9900, not 9901).
pub fn ceil_fraction(fraction: f64, n: usize) -> usize {
    let x = fraction * n as f64;
    let nearest = x.round();
    let target = if (x - nearest).abs() <= 1e-9 * x.abs().max(1.0) { nearest } else { x.ceil() };
    target.max(0.0) as usize
}

/// Adopted counts indexed by step; `counts[0]` is the initial state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthCurve {
    pub counts: Vec<u32>,
    pub node_count: usize,
    pub config_digest: String,
}

impl GrowthCurve {
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn last(&self) -> u32 {
        *self.counts.last().expect("curve is never empty")
    }

    /// Count at `step`, held at the final value past the end of the run.
    pub fn count_at(&self, step: usize) -> u32 {
        self.counts.get(step).copied().unwrap_or_else(|| self.last())
    }

    pub fn fraction_at(&self, step: usize) -> f64 {
        self.count_at(step) as f64 / self.node_count as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    /// The stop fraction was reached.
    Saturated,
    /// `max_steps` elapsed first.
    StepLimit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub curve: GrowthCurve,
    pub status: RunStatus,
}

impl RunOutcome {
    pub fn saturated(&self) -> bool {
        self.status == RunStatus::Saturated
    }

    /// Step at which the stop rule fired, if it did.
    pub fn saturation_step(&self) -> Option<usize> {
        self.saturated().then(|| self.curve.len() - 1)
    }
}

/// Executes one run with the default schedule.
pub fn run(config: &SimulationConfig) -> Result<RunOutcome> {
    run_with(config, Schedule::default())
}

pub fn run_with(config: &SimulationConfig, schedule: Schedule) -> Result<RunOutcome> {
    config.validate()?;
    let draws = DrawStream::new(config.rng_seed);
    let mut setup = draws.setup_rng();
    let graph = config.graph_spec.build(config.node_count, &mut setup)?;
    let seed_node = config.seed_node_rule.pick(config.node_count, &mut setup)?;
    simulate(config, &graph, seed_node, draws, schedule)
}

/// Runs on a caller-supplied graph; the initial adopter still comes from the
/// config's seed.
pub fn run_on_graph(config: &SimulationConfig, graph: &Graph, schedule: Schedule) -> Result<RunOutcome> {
    config.validate()?;
    if graph.node_count() != config.node_count {
        return Err(Error::InvalidParameter(format!(
            "graph has {} nodes but config expects {}",
            graph.node_count(),
            config.node_count
        )));
    }
    let draws = DrawStream::new(config.rng_seed);
    let seed_node = config.seed_node_rule.pick(config.node_count, &mut draws.setup_rng())?;
    simulate(config, graph, seed_node, draws, schedule)
}

fn simulate(
    config: &SimulationConfig,
    graph: &Graph,
    seed_node: NodeId,
    draws: DrawStream,
    schedule: Schedule,
) -> Result<RunOutcome> {
    let state = DeploymentState::with_adopters(config.node_count, [seed_node])?;
    let mut stepper = Stepper::new(graph, config.dynamics, state, draws)?.with_schedule(schedule);
    let target = config.stop_target();
    let mut counts = vec![1u32];
    let status = loop {
        let adopted = stepper.state().adopted_count();
        if adopted >= target {
            break RunStatus::Saturated;
        }
        if stepper.state().step() >= config.max_steps {
            break RunStatus::StepLimit;
        }
        stepper.step();
        counts.push(stepper.state().adopted_count() as u32);
    };
    let curve = GrowthCurve { counts, node_count: config.node_count, config_digest: config.digest() };
    Ok(RunOutcome { curve, status })
}
