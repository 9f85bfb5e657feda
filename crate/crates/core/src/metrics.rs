//! Reductions of trial results: mean curves, paired differences, empirical
//! pdfs and sample skewness.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::allocators::AllocatorKind;
use crate::error::{Error, Result};
use crate::harness::{ExperimentResult, TrialResult};

/// Mean sum rate at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub num_cellular: usize,
    /// Number of D2D pairs.
    pub x: usize,
    pub mean_sum_rate: f64,
    pub std_err: f64,
    pub n_trials: usize,
}

/// Mean of the per-drop difference `a - b` at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairedDifference {
    pub num_cellular: usize,
    pub num_d2d: usize,
    pub mean_diff: f64,
    pub std_err: f64,
    pub n_trials: usize,
}

/// Sample mean and standard error (sample standard deviation over root n).
pub fn mean_and_std_err(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Groups trials by (C, D), ascending.
fn by_point(trials: &[TrialResult]) -> BTreeMap<(usize, usize), Vec<&TrialResult>> {
    let mut groups: BTreeMap<(usize, usize), Vec<&TrialResult>> = BTreeMap::new();
    for t in trials {
        groups
            .entry((t.num_cellular, t.num_d2d))
            .or_default()
            .push(t);
    }
    groups
}

pub fn curve_from_trials(trials: &[TrialResult]) -> Result<Vec<CurvePoint>> {
    if trials.is_empty() {
        return Err(Error::Usage("no trials to aggregate".into()));
    }
    Ok(by_point(trials)
        .into_iter()
        .map(|((c, d), group)| {
            let rates: Vec<f64> = group.iter().map(|t| t.sum_rate).collect();
            let (mean, std_err) = mean_and_std_err(&rates);
            CurvePoint {
                num_cellular: c,
                x: d,
                mean_sum_rate: mean,
                std_err,
                n_trials: rates.len(),
            }
        })
        .collect())
}

/// Mean sum-rate curve of the first series run with `kind`.
pub fn aggregate_curve(results: &ExperimentResult, kind: AllocatorKind) -> Result<Vec<CurvePoint>> {
    let series = results
        .series_for(kind)
        .ok_or_else(|| Error::Usage(format!("no results for allocator {kind}")))?;
    curve_from_trials(&series.trials)
}

/// Per-point mean of `a - b` over drops shared by both series.
pub fn paired_differences(a: &[TrialResult], b: &[TrialResult]) -> Result<Vec<PairedDifference>> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::Usage(
            "paired series must be non-empty and of equal length".into(),
        ));
    }
    let mut diffs: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    for (x, y) in a.iter().zip(b) {
        if (x.seed, x.num_cellular, x.num_d2d) != (y.seed, y.num_cellular, y.num_d2d) {
            return Err(Error::Usage(format!(
                "unpaired trials: seed {} (C={}, D={}) vs seed {} (C={}, D={})",
                x.seed, x.num_cellular, x.num_d2d, y.seed, y.num_cellular, y.num_d2d
            )));
        }
        diffs
            .entry((x.num_cellular, x.num_d2d))
            .or_default()
            .push(x.sum_rate - y.sum_rate);
    }
    Ok(diffs
        .into_iter()
        .map(|((c, d), v)| {
            let (mean_diff, std_err) = mean_and_std_err(&v);
            PairedDifference {
                num_cellular: c,
                num_d2d: d,
                mean_diff,
                std_err,
                n_trials: v.len(),
            }
        })
        .collect())
}

/// Equal-width histogram normalised to unit area.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PdfEstimate {
    pub bin_edges: Vec<f64>,
    pub densities: Vec<f64>,
    pub n_samples: usize,
}

impl PdfEstimate {
    pub fn integral(&self) -> f64 {
        self.bin_edges
            .windows(2)
            .zip(&self.densities)
            .map(|(e, d)| d * (e[1] - e[0]))
            .sum()
    }
}

/// Half-width added on each side when every sample is equal.
const DEGENERATE_PAD_DB: f64 = 0.5;

pub fn sinr_pdf(samples_db: &[f64], num_bins: usize) -> Result<PdfEstimate> {
    if samples_db.len() < 2 {
        return Err(Error::Usage("pdf estimate needs at least 2 samples".into()));
    }
    if num_bins == 0 {
        return Err(Error::Usage("pdf estimate needs at least 1 bin".into()));
    }
    if samples_db.iter().any(|s| !s.is_finite()) {
        return Err(Error::Usage("pdf samples must be finite".into()));
    }
    let mut lo = samples_db.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = samples_db.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        lo -= DEGENERATE_PAD_DB;
        hi += DEGENERATE_PAD_DB;
    }
    let width = (hi - lo) / num_bins as f64;
    let mut counts = vec![0usize; num_bins];
    for &s in samples_db {
        let i = (((s - lo) / width).floor() as usize).min(num_bins - 1);
        counts[i] += 1;
    }
    let mut bin_edges: Vec<f64> = (0..num_bins).map(|i| lo + width * i as f64).collect();
    bin_edges.push(hi);
    let n = samples_db.len();
    let densities = counts
        .iter()
        .zip(bin_edges.windows(2))
        .map(|(&c, e)| c as f64 / (n as f64 * (e[1] - e[0])))
        .collect();
    Ok(PdfEstimate {
        bin_edges,
        densities,
        n_samples: n,
    })
}

/// Fisher-Pearson skewness `m3 / m2^1.5` with population central moments.
pub fn skewness(samples: &[f64]) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::Usage("skewness needs at least 3 samples".into()));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let (m2, m3) = samples.iter().fold((0.0, 0.0), |(m2, m3), x| {
        let dx = x - mean;
        (m2 + dx * dx, m3 + dx * dx * dx)
    });
    let (m2, m3) = (m2 / n, m3 / n);
    let scale = samples.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if m2 <= (f64::EPSILON * scale).powi(2) {
        return Err(Error::Degenerate(
            "skewness of a zero-variance sample".into(),
        ));
    }
    Ok(m3 / m2.powf(1.5))
}
