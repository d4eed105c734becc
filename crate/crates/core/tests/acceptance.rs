//! Acceptance suite. Runs every criterion at full scale (10 000 nodes) and
//! prints one PASS/FAIL line per criterion; exits non-zero if any fails.
//!
//! Run alone with `cargo test -p netdeploy --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use netdeploy::analysis::{curve_features, saturation_step, CurveFeatures, DEFAULT_PROMINENCE, DEFAULT_WINDOW};
use netdeploy::dynamics::{DeploymentState, DrawStream, DynamicsParams, Stepper};
use netdeploy::graph::{make_barabasi_albert, make_binary_tree, make_clique, make_erdos_renyi, Graph, GraphKind};
use netdeploy::output::{write_curve, Format};
use netdeploy::simulation::{map_runs, preset, run, EnsembleOptions, RunOutcome, SimulationConfig, PRESET_NAMES};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BUDGET: Duration = Duration::from_secs(30 * 60);

struct Verdict {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn verdict(id: &'static str, pass: bool, detail: String) -> Verdict {
    println!("{} {id}: {detail}", if pass { "PASS" } else { "FAIL" });
    Verdict { id, pass, detail }
}

/// Per-run data kept after the curve is dropped.
#[derive(Clone, Debug)]
struct RunSummary {
    features: CurveFeatures,
    last: u32,
    s50: Option<usize>,
    s90: Option<usize>,
    s99: Option<usize>,
}

fn summarize_run(outcome: &RunOutcome, stop_fraction: f64, window: usize) -> RunSummary {
    let curve = &outcome.curve;
    RunSummary {
        features: curve_features(curve, window, DEFAULT_PROMINENCE, stop_fraction),
        last: curve.last(),
        s50: saturation_step(curve, 0.5),
        s90: saturation_step(curve, 0.9),
        s99: saturation_step(curve, 0.99),
    }
}

fn ensemble(name: &str, runs: usize, seed_stream: u64) -> Vec<RunSummary> {
    ensemble_of(&preset(name).unwrap(), runs, seed_stream, DEFAULT_WINDOW)
}

fn ensemble_of(cfg: &SimulationConfig, runs: usize, seed_stream: u64, window: usize) -> Vec<RunSummary> {
    let stop = cfg.stop_fraction;
    map_runs(cfg, runs, seed_stream, EnsembleOptions::default(), |_, o| summarize_run(&o, stop, window)).unwrap()
}

fn count(runs: &[RunSummary], pred: impl Fn(&RunSummary) -> bool) -> usize {
    runs.iter().filter(|r| pred(r)).count()
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

fn median_bursts(runs: &[RunSummary]) -> f64 {
    median(&mut runs.iter().map(|r| r.features.bursts as f64).collect::<Vec<_>>())
}

fn burst_histogram(runs: &[RunSummary]) -> String {
    let mut hist = std::collections::BTreeMap::new();
    for r in runs {
        *hist.entry(r.features.bursts).or_insert(0usize) += 1;
    }
    format!("{hist:?}")
}

fn c1_independent() -> Verdict {
    let runs = 100;
    let cfg = preset("independent").unwrap();
    let curves = map_runs(&cfg, runs, 1, EnsembleOptions::default(), |_, o| o.curve).unwrap();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for t in [1usize, 10, 20] {
        let mean = curves.iter().map(|c| c.count_at(t) as f64).sum::<f64>() / runs as f64;
        let expected = 10_000.0 - 9_999.0 * 0.95f64.powi(t as i32);
        let rel = (mean - expected).abs() / expected;
        worst = worst.max(rel);
        parts.push(format!("t={t} mean={mean:.2} expected={expected:.2} rel={rel:.2e}"));
    }
    verdict("C1 independent baseline", worst <= 0.02, format!("{runs} runs; {}", parts.join("; ")))
}

fn shape_single_burst(id: &'static str, runs: &[RunSummary]) -> Verdict {
    let n = runs.len();
    let reached = count(runs, |r| r.last >= 9_900);
    let one = count(runs, |r| r.features.bursts == 1);
    let flat = count(runs, |r| r.features.early_flattening);
    let pass = reached == n && one * 10 >= n * 9 && (n - flat) * 10 >= n * 8;
    verdict(
        id,
        pass,
        format!(
            "{n} runs; reached 9900: {reached}/{n}; exactly one burst: {one}/{n} (bursts {}); \
             no early flattening: {}/{n}",
            burst_histogram(runs),
            n - flat
        ),
    )
}

/// One-sided two-proportion z-test that `x1/n1 > x2/n2`, pooled variance.
fn two_proportion_z(x1: usize, n1: usize, x2: usize, n2: usize) -> f64 {
    let (p1, p2) = (x1 as f64 / n1 as f64, x2 as f64 / n2 as f64);
    let pooled = (x1 + x2) as f64 / (n1 + n2) as f64;
    let se = (pooled * (1.0 - pooled) * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt();
    if se == 0.0 {
        return if p1 > p2 { f64::INFINITY } else { 0.0 };
    }
    (p1 - p2) / se
}

fn c4_preferential(pref: &[RunSummary], clique: &[RunSummary]) -> Verdict {
    let (n1, n2) = (pref.len(), clique.len());
    let x1 = count(pref, |r| r.features.early_flattening);
    let x2 = count(clique, |r| r.features.early_flattening);
    let z = two_proportion_z(x1, n1, x2, n2);
    // one-sided 95 %
    let pass = x1 * 10 >= n1 * 6 && z > 1.644_853_626_951_472_2;
    verdict(
        "C4 preferential early flattening",
        pass,
        format!("flattening {x1}/{n1} vs clique {x2}/{n2}; z = {z:.2} (one-sided critical 1.645)"),
    )
}

fn c5_tree(runs: &[RunSummary], max_steps: u64) -> Verdict {
    let n = runs.len();
    let saturated = count(runs, |r| r.s99.is_some());
    let one = count(runs, |r| r.features.bursts == 1);
    // A run that never reaches 99 % contributes the censored lower bound
    // max_steps - s90 to the 90 -> 99 duration.
    let mut tail: Vec<f64> = Vec::new();
    let mut body: Vec<f64> = Vec::new();
    for r in runs {
        let (Some(s50), Some(s90)) = (r.s50, r.s90) else { continue };
        body.push((s90 - s50) as f64);
        tail.push(r.s99.map_or(max_steps as f64 - s90 as f64, |s99| (s99 - s90) as f64));
    }
    let tail_ok = !tail.is_empty() && median(&mut tail) > median(&mut body);
    let mut lasts: Vec<f64> = runs.iter().map(|r| r.last as f64).collect();
    let pass = saturated == n && one * 2 > n && tail_ok;
    verdict(
        "C5 binary tree",
        pass,
        format!(
            "{n} runs; reached 99%: {saturated}/{n} (median final count {:.0}); exactly one burst: {one}/{n} \
             (bursts {}); median steps 50->90%: {:.1}, 90->99% (censored at max_steps {max_steps}): {:.1}",
            median(&mut lasts),
            burst_histogram(runs),
            median(&mut body),
            if tail.is_empty() { f64::NAN } else { median(&mut tail) },
        ),
    )
}

fn c6_double_s(runs: &[RunSummary]) -> Verdict {
    let n = runs.len();
    let two = count(runs, |r| r.features.bursts >= 2);
    verdict(
        "C6 double-S at alpha=78",
        two * 2 >= n,
        format!("{n} runs; at least two bursts: {two}/{n} (bursts {})", burst_histogram(runs)),
    )
}

fn c7_bursts(tiny: &[RunSummary], small: &[RunSummary], tree: &[RunSummary]) -> Verdict {
    let (m39, m78, m312) = (median_bursts(tiny), median_bursts(small), median_bursts(tree));
    verdict(
        "C7 burst count grows as alpha falls",
        m39 > m78 && m78 > m312,
        format!(
            "median bursts alpha=39: {m39} ({} runs, {}), alpha=78: {m78}, alpha=312.5: {m312}",
            tiny.len(),
            burst_histogram(tiny)
        ),
    )
}

/// Pooled one-step hazard per step: (new adopters, at-risk nodes, active runs).
fn hazards(cfg: &SimulationConfig, runs: usize, seed_stream: u64) -> Vec<(f64, f64, usize)> {
    let curves = map_runs(cfg, runs, seed_stream, EnsembleOptions::default(), |_, o| o.curve).unwrap();
    let horizon = curves.iter().map(|c| c.len()).max().unwrap();
    let n = cfg.node_count as f64;
    (0..horizon - 1)
        .map(|t| {
            let mut acc = (0.0, 0.0, 0);
            for c in curves.iter().filter(|c| c.len() > t + 1) {
                acc.0 += (c.counts[t + 1] - c.counts[t]) as f64;
                acc.1 += n - c.counts[t] as f64;
                acc.2 += 1;
            }
            acc
        })
        .collect()
}

fn c8_collapse() -> Verdict {
    let runs = 100;
    let mut scaled = preset("clique").unwrap();
    scaled.dynamics.alpha *= 1e6;
    let mut indep = preset("independent").unwrap();
    indep.dynamics = DynamicsParams::independent(0.0474);
    let a = hazards(&scaled, runs, 8);
    let b = hazards(&indep, runs, 80);
    let se2 = |h: f64, at_risk: f64| h * (1.0 - h) / at_risk;
    let mut worst: (f64, usize) = (0.0, 0);
    let mut compared = 0;
    let mut totals = [(0.0, 0.0); 2];
    for (t, (x, y)) in a.iter().zip(&b).enumerate() {
        totals[0].0 += x.0;
        totals[0].1 += x.1;
        totals[1].0 += y.0;
        totals[1].1 += y.1;
        // steps where few runs remain active carry almost no information
        if x.2 < 10 || y.2 < 10 {
            continue;
        }
        let (ha, hb) = (x.0 / x.1, y.0 / y.1);
        let z = (ha - hb).abs() / (se2(ha, x.1) + se2(hb, y.1)).sqrt();
        compared += 1;
        if z > worst.0 {
            worst = (z, t);
        }
    }
    let (ha, hb) = (totals[0].0 / totals[0].1, totals[1].0 / totals[1].1);
    let pooled_z = (ha - hb).abs() / (se2(ha, totals[0].1) + se2(hb, totals[1].1)).sqrt();
    verdict(
        "C8 collapse to independent mode",
        worst.0 <= 3.0 && pooled_z <= 3.0,
        format!(
            "{runs} runs each; {compared} steps compared, largest |z| = {:.2} at step {}; \
             pooled hazard {ha:.6} vs {hb:.6} (|z| = {pooled_z:.2})",
            worst.0, worst.1
        ),
    )
}

/// Exhaustive one-step distribution of the adopted count, computed directly
/// from the model definition.
fn exact_distribution(graph: &Graph, adopted: &[bool], params: &DynamicsParams) -> Vec<f64> {
    let n = graph.node_count();
    let h_total = adopted.iter().filter(|&&a| a).count() as f64;
    let pending: Vec<usize> = (0..n).filter(|&v| !adopted[v]).collect();
    let probs: Vec<f64> = pending
        .iter()
        .map(|&v| {
            if params.mode == netdeploy::dynamics::Mode::Independent {
                return params.gamma_independent;
            }
            let h = graph.neighbors(v).unwrap().filter(|&w| adopted[w]).count() as f64;
            let gamma = params.cost_model.gamma;
            let cost = match params.cost_model.kind {
                netdeploy::dynamics::CostKind::Constant => gamma,
                netdeploy::dynamics::CostKind::DegreeLinear => gamma * (1.0 + graph.degree(v).unwrap() as f64),
                netdeploy::dynamics::CostKind::DepthExponential => {
                    let depth = ((v + 1) as f64).log2().floor() as i32;
                    gamma * 2f64.powi(-depth)
                }
            };
            let u = (h_total * h - cost) / params.alpha;
            1.0 / (1.0 + (params.beta - u).exp())
        })
        .collect();
    let base = h_total as usize;
    let mut dist = vec![0.0; n + 1];
    for mask in 0u32..(1 << pending.len()) {
        let mut p = 1.0;
        for (i, q) in probs.iter().enumerate() {
            p *= if mask >> i & 1 == 1 { *q } else { 1.0 - q };
        }
        dist[base + mask.count_ones() as usize] += p;
    }
    dist
}

fn c9_exact_oracle() -> Verdict {
    let samples: u64 = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cases: Vec<(&str, Graph, Vec<usize>, DynamicsParams)> = vec![
        (
            "clique",
            make_clique(10).unwrap(),
            vec![0, 1, 2],
            DynamicsParams::networked(4.0, 1.0, netdeploy::dynamics::CostModel::constant(6.0)),
        ),
        (
            "clique/independent",
            make_clique(12).unwrap(),
            vec![5],
            DynamicsParams::independent(0.3),
        ),
        (
            "erdos_renyi",
            make_erdos_renyi(12, 0.4, &mut rng).unwrap(),
            vec![0, 1, 2, 3],
            DynamicsParams::networked(3.0, 1.0, netdeploy::dynamics::CostModel::degree_linear(1.0)),
        ),
        (
            "barabasi_albert",
            make_barabasi_albert(12, 4, 2, &mut rng).unwrap(),
            vec![0, 5],
            DynamicsParams::networked(2.0, 0.5, netdeploy::dynamics::CostModel::degree_linear(0.5)),
        ),
        (
            "binary_tree",
            make_binary_tree(12).unwrap(),
            vec![0, 3, 7],
            DynamicsParams::networked(6.0, 0.5, netdeploy::dynamics::CostModel::depth_exponential(16.0)),
        ),
    ];
    let mut kinds = std::collections::BTreeSet::new();
    let mut worst: (f64, String) = (0.0, String::new());
    let mut pass = true;
    for (label, graph, seeds, params) in &cases {
        kinds.insert(graph.kind().as_str());
        let state = DeploymentState::with_adopters(graph.node_count(), seeds.iter().copied()).unwrap();
        let exact = exact_distribution(graph, state.adopted_flags(), params);
        let mut observed = vec![0u64; graph.node_count() + 1];
        for s in 0..samples {
            let mut stepper = Stepper::new(graph, *params, state.clone(), DrawStream::new(s)).unwrap();
            stepper.step();
            observed[stepper.state().adopted_count()] += 1;
        }
        for (k, (&p, &o)) in exact.iter().zip(&observed).enumerate() {
            let freq = o as f64 / samples as f64;
            let se = (p * (1.0 - p) / samples as f64).sqrt();
            let z = if se > 0.0 { (freq - p).abs() / se } else if o == 0 { 0.0 } else { f64::INFINITY };
            if z > 3.0 {
                pass = false;
            }
            if z > worst.0 {
                worst = (z, format!("{label} count {k}: exact {p:.5}, observed {freq:.5}"));
            }
        }
    }
    let all_kinds = [GraphKind::Clique, GraphKind::ErdosRenyi, GraphKind::BarabasiAlbert, GraphKind::BinaryTree]
        .iter()
        .all(|k| kinds.contains(k.as_str()));
    verdict(
        "C9 exact one-step oracle",
        pass && all_kinds,
        format!(
            "{} cases over kinds {kinds:?}, {samples} sampled steps each; largest |z| = {:.2} ({})",
            cases.len(),
            worst.0,
            worst.1
        ),
    )
}

fn csv_of(cfg: &SimulationConfig) -> Vec<u8> {
    let mut buf = Vec::new();
    write_curve(&run(cfg).unwrap(), Format::Csv, &mut buf).unwrap();
    buf
}

fn c10_determinism() -> Verdict {
    let mut identical = 0;
    let mut bytes = 0;
    for name in PRESET_NAMES {
        let mut cfg = preset(name).unwrap();
        cfg.rng_seed = 10;
        let (a, b) = (csv_of(&cfg), csv_of(&cfg));
        bytes += a.len();
        if a == b {
            identical += 1;
        }
    }
    verdict(
        "C10 determinism",
        identical == PRESET_NAMES.len(),
        format!("{identical}/{} presets byte-identical across two runs ({bytes} CSV bytes)", PRESET_NAMES.len()),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let timed = |label: &str, t: Instant| println!("  [{label}: {:.1}s]", t.elapsed().as_secs_f64());
    let mut verdicts = Vec::new();

    let t = Instant::now();
    verdicts.push(c1_independent());
    timed("C1", t);

    let t = Instant::now();
    let clique = ensemble("clique", 30, 2);
    verdicts.push(shape_single_burst("C2 clique", &clique));
    let er = ensemble("random_graph", 30, 3);
    verdicts.push(shape_single_burst("C3 Erdos-Renyi", &er));
    let pref = ensemble("preferential", 50, 4);
    verdicts.push(c4_preferential(&pref, &clique));
    timed("C2-C4", t);

    let t = Instant::now();
    let tree_cfg = preset("tree").unwrap();
    let tree = ensemble("tree", 30, 5);
    verdicts.push(c5_tree(&tree, tree_cfg.max_steps));
    let small = ensemble("tree_small_alpha", 50, 6);
    verdicts.push(c6_double_s(&small));
    timed("C5-C6", t);

    let t = Instant::now();
    let tiny = ensemble("tree_tiny_alpha", 30, 7);
    verdicts.push(c7_bursts(&tiny, &small, &tree));
    let tiny_cfg = preset("tree_tiny_alpha").unwrap();
    let tiny_wide: Vec<_> = map_runs(&tiny_cfg, 5, 7, EnsembleOptions::default(), |_, o| {
        curve_features(&o.curve, 2 * DEFAULT_WINDOW - 1, DEFAULT_PROMINENCE, tiny_cfg.stop_fraction).bursts
    })
    .unwrap();
    println!("  [alpha=39 bursts with window {}: {tiny_wide:?}]", 2 * DEFAULT_WINDOW - 1);
    timed("C7", t);

    let t = Instant::now();
    verdicts.push(c8_collapse());
    timed("C8", t);

    let t = Instant::now();
    verdicts.push(c9_exact_oracle());
    timed("C9", t);

    let t = Instant::now();
    verdicts.push(c10_determinism());
    timed("C10", t);

    let elapsed = start.elapsed();
    verdicts.push(verdict(
        "C10 runtime budget",
        elapsed < BUDGET,
        format!("suite took {:.1}s of {}s", elapsed.as_secs_f64(), BUDGET.as_secs()),
    ));

    let failed: Vec<_> = verdicts.iter().filter(|v| !v.pass).collect();
    println!("{}/{} criteria passed", verdicts.len() - failed.len(), verdicts.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        for v in failed {
            eprintln!("failed: {} ({})", v.id, v.detail);
        }
        ExitCode::FAILURE
    }
}
