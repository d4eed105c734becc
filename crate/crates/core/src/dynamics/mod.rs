//! Adoption dynamics: per-node cost, utility, logistic transition probability
//! and the synchronous one-step update.
//!
//! A node `v` that has not adopted yet has utility
//!
//! ```text
//! u(v, t) = (h_G(t) * h(v, t) - c(v)) / alpha
//! ```
//!
//! where `h_G` is the number of adopters in the whole graph, `h(v, t)` the
//! number of adopted neighbours and `c(v)` the node's transition cost. It
//! adopts during the step with probability `1 / (1 + exp(beta - u))`. In
//! independent mode the probability is a constant `gamma` instead.
//!
//! Every decision in a step is taken against the state at the start of the
//! step, and adopters never revert.

mod draws;
mod state;
mod stepper;

pub use draws::DrawStream;
pub use state::{DeploymentState, Snapshot};
pub use stepper::Stepper;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphKind, NodeId};

/// Shape of the per-node cost function; `gamma` scales it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostKind {
    /// `gamma`
    Constant,
    /// `gamma * (1 + degree)`
    DegreeLinear,
    /// `gamma * 2^-depth`; binary trees only
    DepthExponential,
}

impl CostKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CostKind::Constant => "constant",
            CostKind::DegreeLinear => "degree_linear",
            CostKind::DepthExponential => "depth_exponential",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    pub kind: CostKind,
    pub gamma: f64,
}

impl CostModel {
    pub fn constant(gamma: f64) -> Self {
        CostModel { kind: CostKind::Constant, gamma }
    }

    pub fn degree_linear(gamma: f64) -> Self {
        CostModel { kind: CostKind::DegreeLinear, gamma }
    }

    pub fn depth_exponential(gamma: f64) -> Self {
        CostModel { kind: CostKind::DepthExponential, gamma }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("cost scale gamma = {} must be finite and >= 0", self.gamma)));
        }
        Ok(())
    }

    /// Checks that the cost can be evaluated on `graph`.
    pub fn check_graph(&self, graph: &Graph) -> Result<()> {
        self.validate()?;
        if self.kind == CostKind::DepthExponential
            && (graph.kind() != GraphKind::BinaryTree || graph.depths().is_none())
        {
            return Err(Error::CostModelMismatch { cost: self.kind.as_str(), graph: graph.kind().as_str() });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Utility-driven logistic probability.
    Networked,
    /// Constant probability, blind to the rest of the network.
    Independent,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynamicsParams {
    pub mode: Mode,
    /// Utility scale; must be positive.
    pub alpha: f64,
    /// Logistic offset.
    pub beta: f64,
    /// Per-step adoption probability in independent mode.
    pub gamma_independent: f64,
    pub cost_model: CostModel,
}

impl DynamicsParams {
    pub fn networked(alpha: f64, beta: f64, cost_model: CostModel) -> Self {
        DynamicsParams { mode: Mode::Networked, alpha, beta, gamma_independent: 0.0, cost_model }
    }

    pub fn independent(gamma: f64) -> Self {
        DynamicsParams {
            mode: Mode::Independent,
            alpha: 1.0,
            beta: 0.0,
            gamma_independent: gamma,
            cost_model: CostModel::constant(0.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha = {} must be finite and > 0", self.alpha)));
        }
        if !self.beta.is_finite() {
            return Err(Error::InvalidParameter(format!("beta = {} must be finite", self.beta)));
        }
        if self.mode == Mode::Independent && !(0.0..=1.0).contains(&self.gamma_independent) {
            return Err(Error::InvalidParameter(format!(
                "independent adoption probability {} outside [0, 1]",
                self.gamma_independent
            )));
        }
        self.cost_model.validate()
    }

    /// Validation plus the graph-dependent cost check, which only matters in
    /// networked mode.
    pub fn check_graph(&self, graph: &Graph) -> Result<()> {
        self.validate()?;
        if self.mode == Mode::Networked {
            self.cost_model.check_graph(graph)?;
        }
        Ok(())
    }
}

/// Transition cost of node `v`.
pub fn node_cost(model: &CostModel, graph: &Graph, v: NodeId) -> Result<f64> {
    graph.check_node(v)?;
    model.check_graph(graph)?;
    Ok(cost_unchecked(model, graph, v))
}

pub(crate) fn cost_unchecked(model: &CostModel, graph: &Graph, v: NodeId) -> f64 {
    match model.kind {
        CostKind::Constant => model.gamma,
        CostKind::DegreeLinear => model.gamma * (1.0 + graph.degree_unchecked(v) as f64),
        CostKind::DepthExponential => {
            let depth = graph.depths().expect("checked depth cost on a tree")[v];
            model.gamma * 2f64.powi(-(depth as i32))
        }
    }
}

/// Number of adopted neighbours of `v`.
pub fn adopted_neighbor_count(graph: &Graph, state: &DeploymentState, v: NodeId) -> Result<usize> {
    graph.check_node(v)?;
    state.check_graph(graph)?;
    if graph.is_implicit_clique() {
        return Ok(state.adopted_count() - usize::from(state.is_adopted(v)));
    }
    Ok(graph.neighbors_unchecked(v).filter(|&w| state.is_adopted(w)).count())
}

/// Utility of a node that has not adopted yet.
pub fn utility(graph: &Graph, state: &DeploymentState, params: &DynamicsParams, v: NodeId) -> Result<f64> {
    if params.mode != Mode::Networked {
        return Err(Error::InvalidParameter("utility is only defined in networked mode".into()));
    }
    params.check_graph(graph)?;
    let local = adopted_neighbor_count(graph, state, v)?;
    if state.is_adopted(v) {
        return Err(Error::AlreadyAdopted(v));
    }
    let cost = cost_unchecked(&params.cost_model, graph, v);
    Ok(utility_value(state.adopted_count(), local, cost, params.alpha))
}

#[inline]
pub(crate) fn utility_value(global: usize, local: usize, cost: f64, alpha: f64) -> f64 {
    (global as f64 * local as f64 - cost) / alpha
}

/// Logistic adoption probability `1 / (1 + exp(beta - u))`.
///
/// Strictly inside (0, 1) while `|u - beta|` stays below roughly 36; beyond
/// that the result rounds to exactly 0 or 1 in double precision.
#[inline]
pub fn transition_probability(u: f64, beta: f64) -> f64 {
    1.0 / (1.0 + (beta - u).exp())
}

/// Adoption probability of a non-adopted node in either mode.
pub fn adoption_probability(
    graph: &Graph,
    state: &DeploymentState,
    params: &DynamicsParams,
    v: NodeId,
) -> Result<f64> {
    match params.mode {
        Mode::Independent => {
            params.validate()?;
            graph.check_node(v)?;
            if state.is_adopted(v) {
                return Err(Error::AlreadyAdopted(v));
            }
            Ok(params.gamma_independent)
        }
        Mode::Networked => Ok(transition_probability(utility(graph, state, params, v)?, params.beta)),
    }
}

/// One synchronous step, computed from scratch.
///
/// Every non-adopted node draws one uniform from the step's stream (see
/// [`DrawStream`]) in ascending id order and adopts if the draw falls below
/// its probability. This is the plain reference form; [`Stepper`] performs
/// the same update incrementally and yields identical states.
pub fn step(
    graph: &Graph,
    state: &DeploymentState,
    params: &DynamicsParams,
    draws: &DrawStream,
) -> Result<DeploymentState> {
    params.check_graph(graph)?;
    state.check_graph(graph)?;
    let mut uniforms = draws.step_uniforms(state.step());
    let mut next = state.clone();
    for v in (0..graph.node_count()).filter(|&v| !state.is_adopted(v)) {
        let p = adoption_probability(graph, state, params, v)?;
        if uniforms.next_uniform() < p {
            next.mark_adopted(v);
        }
    }
    next.advance_step();
    Ok(next)
}
