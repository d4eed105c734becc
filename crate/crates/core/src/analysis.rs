//! Shape features of growth curves.
//!
//! Curves are turned into per-step adoption rates, smoothed with a centred
//! moving average, and then measured: how many prominent bursts the rate
//! has, whether growth stalls noticeably before its peak, and when a given
//! adoption fraction is first reached.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulation::{ceil_fraction, GrowthCurve};

pub const DEFAULT_WINDOW: usize = 11;
pub const DEFAULT_PROMINENCE: f64 = 0.25;

/// Per-step adoption increments, optionally smoothed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateSeries {
    pub rates: Vec<f64>,
    /// Smoothing window that produced `rates`; 1 for raw differences.
    pub window: usize,
}

impl RateSeries {
    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.rates.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// First differences `counts[t + 1] - counts[t]`.
pub fn growth_rate(curve: &GrowthCurve) -> Result<RateSeries> {
    rates_of(&curve.counts)
}

pub fn rates_of(counts: &[u32]) -> Result<RateSeries> {
    if counts.len() < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 curve points, got {}", counts.len())));
    }
    let rates = counts.windows(2).map(|w| w[1] as f64 - w[0] as f64).collect();
    Ok(RateSeries { rates, window: 1 })
}

/// Centred moving average of odd width; indices past either end read the
/// nearest edge value. Output has the input's length.
pub fn smooth(series: &RateSeries, window: usize) -> Result<RateSeries> {
    let n = series.len();
    if window.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("smoothing window {window} must be odd")));
    }
    if window > n {
        return Err(Error::InvalidParameter(format!("smoothing window {window} exceeds series length {n}")));
    }
    let x = &series.rates;
    let half = (window / 2) as isize;
    let at = |i: isize| x[i.clamp(0, n as isize - 1) as usize];
    let mut sum: f64 = (-half..=half).map(at).sum();
    let mut out = Vec::with_capacity(n);
    for i in 0..n as isize {
        out.push(sum / window as f64);
        sum += at(i + half + 1) - at(i - half);
    }
    Ok(RateSeries { rates: out, window })
}

/// A local maximum and its prominence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Peak {
    /// Middle of the (possibly flat) top.
    pub index: usize,
    pub height: f64,
    /// Height above the higher of the two lowest points separating this peak
    /// from strictly higher ground (or the series ends) on either side.
    pub prominence: f64,
}

/// Interior local maxima; a flat top counts once. Points at either end of the
/// series are never peaks.
pub fn peaks(series: &RateSeries) -> Vec<Peak> {
    let x = &series.rates;
    let n = x.len();
    let mut found = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if x[i - 1] < x[i] {
            let mut j = i;
            while j + 1 < n && x[j + 1] == x[i] {
                j += 1;
            }
            if j + 1 < n && x[j + 1] < x[i] {
                found.push(Peak { index: (i + j) / 2, height: x[i], prominence: prominence(x, i, j) });
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    found
}

fn prominence(x: &[f64], first: usize, last: usize) -> f64 {
    let h = x[first];
    let mut left_min = h;
    for &v in x[..first].iter().rev() {
        if v > h {
            break;
        }
        left_min = left_min.min(v);
    }
    let mut right_min = h;
    for &v in &x[last + 1..] {
        if v > h {
            break;
        }
        right_min = right_min.min(v);
    }
    h - left_min.max(right_min)
}

/// Number of peaks whose prominence exceeds `prominence_fraction` times the
/// series maximum.
pub fn count_bursts(series: &RateSeries, prominence_fraction: f64) -> usize {
    let top = series.max();
    if top.is_nan() || top <= 0.0 {
        return 0;
    }
    let threshold = prominence_fraction * top;
    peaks(series).iter().filter(|p| p.prominence > threshold).count()
}

/// Whether growth visibly slows before the main surge: some step strictly
/// between 0 and the (first) peak has a rate below 90 % of the initial rate
/// and below half of the peak rate.
pub fn detect_early_flattening(series: &RateSeries) -> bool {
    let x = &series.rates;
    let Some((peak_at, &top)) = x.iter().enumerate().reduce(|a, b| if b.1 > a.1 { b } else { a }) else {
        return false;
    };
    if peak_at < 2 {
        return false;
    }
    let dip = x[1..peak_at].iter().copied().fold(f64::INFINITY, f64::min);
    dip < 0.9 * x[0] && dip < 0.5 * top
}

/// First step at which the curve holds at least `ceil(fraction * n)` adopters.
pub fn saturation_step(curve: &GrowthCurve, fraction: f64) -> Option<usize> {
    let target = ceil_fraction(fraction, curve.node_count) as u64;
    curve.counts.iter().position(|&c| c as u64 >= target)
}

/// Features of one run, as used by the reports and acceptance checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveFeatures {
    pub bursts: usize,
    pub early_flattening: bool,
    pub saturation_step: Option<usize>,
}

/// Computes [`CurveFeatures`]. Curves too short for the requested window are
/// smoothed with the largest odd window that fits.
///
/// A curve that ends by reaching `stop_fraction` is cut off by the stop rule,
/// often while adoption is at its fastest. At most the remaining
/// `1 - stop_fraction` of the nodes can still adopt after that, so the
/// smoothed rate is closed with a trailing zero before bursts are counted; a
/// rate still climbing at the stop then registers as one burst.
pub fn curve_features(curve: &GrowthCurve, window: usize, prominence_fraction: f64, stop_fraction: f64) -> CurveFeatures {
    let saturation = saturation_step(curve, stop_fraction);
    let Ok(raw) = growth_rate(curve) else {
        return CurveFeatures { bursts: 0, early_flattening: false, saturation_step: saturation };
    };
    let fitted = window.min(raw.len() - (1 - raw.len() % 2));
    let mut smoothed = smooth(&raw, fitted.max(1)).expect("window fitted to series");
    let early_flattening = detect_early_flattening(&smoothed);
    if saturation == Some(curve.len() - 1) {
        smoothed.rates.push(0.0);
    }
    CurveFeatures { bursts: count_bursts(&smoothed, prominence_fraction), early_flattening, saturation_step: saturation }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepQuantiles {
    pub q10: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub q90: f64,
}

impl StepQuantiles {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let q = |p| crate::simulation::quantile_sorted(&sorted, p);
        Some(StepQuantiles { q10: q(0.10), q25: q(0.25), median: q(0.5), q75: q(0.75), q90: q(0.90) })
    }
}

/// Ensemble-level feature report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureReport {
    pub preset: String,
    pub runs: usize,
    /// Burst count -> number of runs with that count.
    pub burst_count_distribution: BTreeMap<usize, usize>,
    pub flattening_frequency: f64,
    /// Over runs that reached the stop fraction; null when none did.
    pub saturation_step_quantiles: Option<StepQuantiles>,
    pub window: usize,
    pub prominence: f64,
}

impl FeatureReport {
    pub fn from_features(preset: &str, features: &[CurveFeatures], window: usize, prominence: f64) -> Self {
        let mut burst_count_distribution = BTreeMap::new();
        for f in features {
            *burst_count_distribution.entry(f.bursts).or_insert(0) += 1;
        }
        let flattened = features.iter().filter(|f| f.early_flattening).count();
        let saturation: Vec<f64> = features.iter().filter_map(|f| f.saturation_step).map(|s| s as f64).collect();
        FeatureReport {
            preset: preset.to_owned(),
            runs: features.len(),
            burst_count_distribution,
            flattening_frequency: if features.is_empty() { 0.0 } else { flattened as f64 / features.len() as f64 },
            saturation_step_quantiles: StepQuantiles::of(&saturation),
            window,
            prominence,
        }
    }

    pub fn median_bursts(&self) -> f64 {
        let counts: Vec<f64> = self
            .burst_count_distribution
            .iter()
            .flat_map(|(&k, &n)| std::iter::repeat_n(k as f64, n))
            .collect();
        StepQuantiles::of(&counts).map_or(0.0, |q| q.median)
    }
}
