//! Experiment drivers shared by the CLI and the acceptance tests: threshold
//! and start-node sweeps, sampled runtime benchmarks and a least-squares fit.

use std::time::Instant;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Graph, NodeId};
use crate::traversal::{run_lincom, Method, RunConfig, StartPolicy};
use crate::detect;

#[derive(Debug, Error, PartialEq)]
pub enum HarnessError {
    #[error("a linear fit needs at least two distinct x values, got {0}")]
    DegenerateFit(usize),
    #[error("sweep step must be positive and the range non-empty (from {from}, to {to}, step {step})")]
    BadRange { from: f64, to: f64, step: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares of `y` on `x`.
pub fn linear_fit(points: &[(f64, f64)]) -> Result<LinearFit, HarnessError> {
    let n = points.len() as f64;
    let mut distinct: Vec<f64> = points.iter().map(|p| p.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(HarnessError::DegenerateFit(distinct.len()));
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}

/// Population mean, standard deviation and relative standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub stddev: f64,
    pub rsd: f64,
}

pub fn summarize(values: &[f64]) -> Summary {
    if values.is_empty() {
        return Summary { mean: 0.0, stddev: 0.0, rsd: 0.0 };
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let stddev = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    Summary {
        mean,
        stddev,
        rsd: if mean == 0.0 { 0.0 } else { stddev / mean.abs() },
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    match v.len() {
        0 => f64::NAN,
        n if n % 2 == 1 => v[n / 2],
        n => (v[n / 2 - 1] + v[n / 2]) / 2.0,
    }
}

/// `from, from + step, ...` up to `to` inclusive, rounded to 1e-9 so that
/// accumulated float error does not show up in output.
pub fn threshold_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, HarnessError> {
    if !(step > 0.0) || !(to >= from) {
        return Err(HarnessError::BadRange { from, to, step });
    }
    let count = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=count)
        .map(|i| ((from + i as f64 * step) * 1e9).round() / 1e9)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdRow {
    pub r: f64,
    pub modularity: f64,
    pub communities: usize,
}

/// One detection per threshold; rows come back in input order.
pub fn threshold_sweep(g: &Graph, thresholds: &[f64], base: &RunConfig) -> Vec<ThresholdRow> {
    thresholds
        .par_iter()
        .map(|&r| {
            let cfg = RunConfig { threshold: r, method: Method::Ins, ..*base };
            let d = detect(g, &cfg);
            ThresholdRow {
                r,
                modularity: d.modularity,
                communities: d.community_count(),
            }
        })
        .collect()
}

/// All nodes when `sample` is `None` or at least `n`, otherwise a seeded
/// uniform sample of `sample` nodes in ascending order.
pub fn start_nodes(n: usize, sample: Option<usize>, seed: u64) -> Vec<NodeId> {
    match sample {
        Some(k) if k < n => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked = index::sample(&mut rng, n, k).into_vec();
            picked.sort_unstable();
            picked
        }
        _ => (0..n).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StartRow {
    pub start: NodeId,
    pub degree: usize,
    pub modularity: f64,
    pub communities: usize,
}

/// One detection per start node; rows come back in input order.
pub fn start_sweep(g: &Graph, starts: &[NodeId], base: &RunConfig) -> Vec<StartRow> {
    starts
        .par_iter()
        .map(|&v| {
            let cfg = RunConfig { start: StartPolicy::Explicit(v), ..*base };
            let d = detect(g, &cfg);
            StartRow {
                start: v,
                degree: g.degree(v),
                modularity: d.modularity,
                communities: d.community_count(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Traversal,
    Full,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Traversal => "traversal",
            Phase::Full => "full",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub fraction: f64,
    pub run: usize,
    /// Edges in the sampled graph.
    pub edges: usize,
    pub time_ms: f64,
    pub modularity: f64,
    pub communities: usize,
}

/// Times `repeats` runs on an edge sample for every fraction. Each run gets
/// a freshly built sample, drawn with the same seed for a given fraction, and
/// one untimed warm-up; sampling and scoring are outside the timed region,
/// and runs are sequential so timings do not compete for cores.
pub fn bench(
    g: &Graph,
    fractions: &[f64],
    repeats: usize,
    seed: u64,
    cfg: &RunConfig,
    phase: Phase,
) -> Vec<BenchRecord> {
    let mut records = Vec::with_capacity(fractions.len() * repeats);
    for (i, &fraction) in fractions.iter().enumerate() {
        for run in 0..repeats {
            let sample = if fraction >= 1.0 {
                g.clone()
            } else {
                g.sample_edges(fraction, seed.wrapping_add(i as u64))
            };
            run_lincom(&sample, cfg);
            let (time_ms, modularity, communities) = match phase {
                Phase::Traversal => {
                    let started = Instant::now();
                    let t = run_lincom(&sample, cfg);
                    let elapsed = started.elapsed();
                    let cover = t.initial_cover();
                    (millis(elapsed), crate::metrics::modularity(&sample, &cover), cover.community_count())
                }
                Phase::Full => {
                    let started = Instant::now();
                    let d = detect(&sample, cfg);
                    let elapsed = started.elapsed();
                    (millis(elapsed), d.modularity, d.community_count())
                }
            };
            records.push(BenchRecord {
                fraction,
                run,
                edges: sample.edge_count(),
                time_ms,
                modularity,
                communities,
            });
        }
    }
    records
}

/// Fit of median time per fraction against sampled edge count.
pub fn fit_medians(records: &[BenchRecord]) -> Result<LinearFit, HarnessError> {
    let mut points: Vec<(f64, f64)> = Vec::new();
    let mut fractions: Vec<f64> = records.iter().map(|r| r.fraction).collect();
    fractions.dedup();
    for f in fractions {
        let rows: Vec<&BenchRecord> = records.iter().filter(|r| r.fraction == f).collect();
        let times: Vec<f64> = rows.iter().map(|r| r.time_ms).collect();
        points.push((rows[0].edges as f64, median(&times)));
    }
    linear_fit(&points)
}

fn millis(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}
