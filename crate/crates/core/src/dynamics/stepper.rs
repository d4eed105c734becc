use super::{cost_unchecked, transition_probability, utility_value, DeploymentState, DrawStream, DynamicsParams, Mode};
use crate::error::Result;
use crate::graph::Graph;
use crate::par::Schedule;

/// Below this many undecided nodes a step always runs on one thread.
const PARALLEL_MIN_PENDING: usize = 4096;
#[cfg(feature = "parallel")]
const CHUNK: usize = 1024;

/// Incremental engine for repeated steps on one graph.
///
/// Keeps the list of undecided nodes, per-node adopted-neighbour counts and
/// the cached costs, so a step costs O(undecided + edges touched by new
/// adopters) instead of a full rescan. Produces exactly the states that
/// [`super::step`] would.
pub struct Stepper<'g> {
    graph: &'g Graph,
    params: DynamicsParams,
    draws: DrawStream,
    schedule: Schedule,
    state: DeploymentState,
    costs: Vec<f64>,
    /// Empty when counts come from the clique formula or are not needed.
    adopted_neighbors: Vec<u32>,
    pending: Vec<u32>,
    /// Probabilities aligned with `pending`; valid while `probs_fresh`.
    probs: Vec<f64>,
    probs_fresh: bool,
}

impl<'g> Stepper<'g> {
    pub fn new(graph: &'g Graph, params: DynamicsParams, state: DeploymentState, draws: DrawStream) -> Result<Self> {
        params.check_graph(graph)?;
        state.check_graph(graph)?;
        let n = graph.node_count();
        let networked = params.mode == Mode::Networked;

        let costs = if networked {
            (0..n).map(|v| cost_unchecked(&params.cost_model, graph, v)).collect()
        } else {
            Vec::new()
        };
        let mut adopted_neighbors = Vec::new();
        if networked && !graph.is_implicit_clique() {
            adopted_neighbors = vec![0u32; n];
            for v in state.adopters() {
                for w in graph.neighbors_unchecked(v) {
                    adopted_neighbors[w] += 1;
                }
            }
        }
        let pending = (0..n).filter(|&v| !state.is_adopted(v)).map(|v| v as u32).collect();

        Ok(Stepper {
            graph,
            params,
            draws,
            schedule: Schedule::default(),
            state,
            costs,
            adopted_neighbors,
            pending,
            probs: Vec::new(),
            probs_fresh: false,
        })
    }

    pub fn with_schedule(mut self, schedule: Schedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn state(&self) -> &DeploymentState {
        &self.state
    }

    pub fn into_state(self) -> DeploymentState {
        self.state
    }

    pub fn undecided(&self) -> usize {
        self.pending.len()
    }

    fn probability_of(&self, v: usize) -> f64 {
        match self.params.mode {
            Mode::Independent => self.params.gamma_independent,
            Mode::Networked => {
                let global = self.state.adopted_count();
                let local = if self.adopted_neighbors.is_empty() {
                    global
                } else {
                    self.adopted_neighbors[v] as usize
                };
                let u = utility_value(global, local, self.costs[v], self.params.alpha);
                transition_probability(u, self.params.beta)
            }
        }
    }

    fn refresh_probs(&mut self) {
        if self.probs_fresh {
            return;
        }
        let mut probs = std::mem::take(&mut self.probs);
        probs.clear();
        probs.resize(self.pending.len(), 0.0);
        let parallel = self.schedule.is_parallel() && self.pending.len() >= PARALLEL_MIN_PENDING;
        #[cfg(feature = "parallel")]
        if parallel {
            use rayon::prelude::*;
            probs
                .par_chunks_mut(CHUNK)
                .zip(self.pending.par_chunks(CHUNK))
                .for_each(|(out, nodes)| {
                    for (p, &v) in out.iter_mut().zip(nodes) {
                        *p = self.probability_of(v as usize);
                    }
                });
        }
        if !parallel {
            for (p, &v) in probs.iter_mut().zip(&self.pending) {
                *p = self.probability_of(v as usize);
            }
        }
        self.probs = probs;
        self.probs_fresh = true;
    }

    /// Nodes that adopt in this step, ascending.
    fn decide(&self) -> Vec<u32> {
        let step = self.state.step();
        let decide_chunk = |offset: usize, nodes: &[u32], probs: &[f64]| -> Vec<u32> {
            let mut uniforms = self.draws.step_uniforms_from(step, offset);
            nodes
                .iter()
                .zip(probs)
                .filter_map(|(&v, &p)| (uniforms.next_uniform() < p).then_some(v))
                .collect()
        };

        #[cfg(feature = "parallel")]
        if self.schedule.is_parallel() && self.pending.len() >= PARALLEL_MIN_PENDING {
            use rayon::prelude::*;
            let parts: Vec<Vec<u32>> = self
                .pending
                .par_chunks(CHUNK)
                .zip(self.probs.par_chunks(CHUNK))
                .enumerate()
                .map(|(i, (nodes, probs))| decide_chunk(i * CHUNK, nodes, probs))
                .collect();
            return parts.concat();
        }
        decide_chunk(0, &self.pending, &self.probs)
    }

    /// Advances one step and returns how many nodes adopted in it.
    pub fn step(&mut self) -> usize {
        if self.pending.is_empty() {
            self.state.advance_step();
            return 0;
        }
        self.refresh_probs();
        let adopters = self.decide();
        for &v in &adopters {
            let v = v as usize;
            self.state.mark_adopted(v);
            if !self.adopted_neighbors.is_empty() {
                for w in self.graph.neighbors_unchecked(v) {
                    self.adopted_neighbors[w] += 1;
                }
            }
        }
        self.state.advance_step();
        if !adopters.is_empty() {
            let state = &self.state;
            self.pending.retain(|&v| !state.is_adopted(v as usize));
            if self.params.mode == Mode::Independent {
                // all entries are the same constant
                self.probs.truncate(self.pending.len());
            } else {
                self.probs_fresh = false;
            }
        }
        adopters.len()
    }
}
