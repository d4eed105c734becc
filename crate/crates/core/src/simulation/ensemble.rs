use serde::{Deserialize, Serialize};

use super::{run_on_graph, run_with, GrowthCurve, RunOutcome, SimulationConfig};
use crate::dynamics::DrawStream;
use crate::error::Result;
use crate::par::{map_indexed, Schedule};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnsembleOptions {
    /// Build one topology (from run 0's seed) and reuse it for every run.
    pub pin_graph: bool,
    /// How runs are distributed; each run itself steps sequentially.
    pub schedule: Schedule,
}

/// Seed of run `index` in the ensemble keyed by `seed_stream`.
///
/// A bijective 64-bit mix applied to a bijective mix of the stream, offset by
/// the index, so seeds within one ensemble never collide.
pub fn run_seed(seed_stream: u64, index: usize) -> u64 {
    mix64(mix64(seed_stream).wrapping_add(index as u64))
}

// splitmix64 finaliser
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Executes `num_runs` runs and hands each outcome to `f`, returning the
/// results in run order regardless of completion order. Useful when only a
/// per-run feature is needed and the curves themselves can be dropped.
pub fn map_runs<T, F>(
    config: &SimulationConfig,
    num_runs: usize,
    seed_stream: u64,
    options: EnsembleOptions,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, RunOutcome) -> T + Sync + Send,
{
    config.validate()?;
    if num_runs == 0 {
        return Err(crate::Error::InvalidParameter("an ensemble needs at least one run".into()));
    }
    let config_for = |i: usize| SimulationConfig { rng_seed: run_seed(seed_stream, i), ..config.clone() };
    let pinned = if options.pin_graph {
        let seed = run_seed(seed_stream, 0);
        Some(config.graph_spec.build(config.node_count, &mut DrawStream::new(seed).setup_rng())?)
    } else {
        None
    };
    map_indexed(options.schedule, num_runs, |i| {
        let cfg = config_for(i);
        let outcome = match &pinned {
            Some(graph) => run_on_graph(&cfg, graph, Schedule::Sequential),
            None => run_with(&cfg, Schedule::Sequential),
        }?;
        Ok(f(i, outcome))
    })
    .into_iter()
    .collect()
}

/// All runs of an ensemble plus their per-step summary.
#[derive(Clone, Debug)]
pub struct Ensemble {
    pub runs: Vec<RunOutcome>,
    pub summary: EnsembleSummary,
}

pub fn run_ensemble(config: &SimulationConfig, num_runs: usize, seed_stream: u64) -> Result<Ensemble> {
    run_ensemble_with(config, num_runs, seed_stream, EnsembleOptions::default())
}

pub fn run_ensemble_with(
    config: &SimulationConfig,
    num_runs: usize,
    seed_stream: u64,
    options: EnsembleOptions,
) -> Result<Ensemble> {
    let runs = map_runs(config, num_runs, seed_stream, options, |_, outcome| outcome)?;
    let seeds = (0..num_runs).map(|i| run_seed(seed_stream, i)).collect();
    let summary = summarize(&runs, seeds);
    Ok(Ensemble { runs, summary })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepStats {
    pub step: usize,
    pub mean: f64,
    pub min: u32,
    pub max: u32,
    pub q10: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub q90: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub node_count: usize,
    pub runs: usize,
    pub seeds: Vec<u64>,
    /// Per-step statistics; runs that stopped early hold their final count.
    pub steps: Vec<StepStats>,
    pub saturation_steps: Vec<Option<usize>>,
    /// Runs that hit `max_steps` before the stop fraction.
    pub stalled: Vec<bool>,
}

/// Linear-interpolation quantile of sorted data.
pub(crate) fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn summarize(runs: &[RunOutcome], seeds: Vec<u64>) -> EnsembleSummary {
    let node_count = runs.first().map_or(0, |r| r.curve.node_count);
    let horizon = runs.iter().map(|r| r.curve.len()).max().unwrap_or(0);
    let mut column: Vec<f64> = Vec::with_capacity(runs.len());
    let steps = (0..horizon)
        .map(|t| {
            column.clear();
            column.extend(runs.iter().map(|r| r.curve.count_at(t) as f64));
            column.sort_by(f64::total_cmp);
            StepStats {
                step: t,
                mean: column.iter().sum::<f64>() / column.len() as f64,
                min: column[0] as u32,
                max: column[column.len() - 1] as u32,
                q10: quantile_sorted(&column, 0.10),
                q25: quantile_sorted(&column, 0.25),
                median: quantile_sorted(&column, 0.50),
                q75: quantile_sorted(&column, 0.75),
                q90: quantile_sorted(&column, 0.90),
            }
        })
        .collect();
    EnsembleSummary {
        node_count,
        runs: runs.len(),
        seeds,
        steps,
        saturation_steps: runs.iter().map(RunOutcome::saturation_step).collect(),
        stalled: runs.iter().map(|r| !r.saturated()).collect(),
    }
}

impl EnsembleSummary {
    pub fn mean_at(&self, step: usize) -> f64 {
        self.steps.get(step).or(self.steps.last()).map_or(0.0, |s| s.mean)
    }

    pub fn mean_curve(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.mean).collect()
    }
}

impl Ensemble {
    pub fn curves(&self) -> impl Iterator<Item = &GrowthCurve> {
        self.runs.iter().map(|r| &r.curve)
    }
}
