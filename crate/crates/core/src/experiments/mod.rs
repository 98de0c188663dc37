//! Monte-Carlo experiments on random two-community graphs.
//!
//! Every trial draws its graph from a seed derived from the master seed and
//! the trial's coordinates, so results do not depend on scheduling. Records
//! are returned in grid-then-trial order.

mod plot;

pub use plot::{distribution_svg, sweep_svg};

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use crate::constructions::{derive_seed, random_two_community, TwoCommunitySpec};
use crate::curvature::{edge_curvature_cached, Alpha};
use crate::error::{Error, Result};
use crate::graph::{classify_edges, CommunityPartition, DistanceCache, Graph};
use crate::scalar::{Scalar, Tolerance};

/// Sign statistics over the intercommunity edges of one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct SignStats<S> {
    pub inter_edges: usize,
    /// Edges with `kappa <= 0` (up to tolerance).
    pub nonpositive: usize,
    /// Edges with `kappa < 0` (beyond tolerance).
    pub negative: usize,
    pub kappa_min: S,
    pub kappa_max: S,
}

impl<S> SignStats<S> {
    pub fn prop_nonpositive(&self) -> f64 {
        self.nonpositive as f64 / self.inter_edges as f64
    }

    pub fn prop_negative(&self) -> f64 {
        self.negative as f64 / self.inter_edges as f64
    }
}

/// Curvature signs of the intercommunity edges of `g`.
pub fn proportion_nonpositive<S: Scalar>(
    g: &Graph,
    p: &CommunityPartition,
    alpha: Alpha,
    tol: Tolerance,
) -> Result<SignStats<S>> {
    let inter = classify_edges(g, p)?.inter;
    if inter.is_empty() {
        return Err(Error::NoInterEdges);
    }
    let cache = DistanceCache::new(g);
    let kappas = inter
        .par_iter()
        .map(|&e| edge_curvature_cached::<S>(&cache, e, alpha, tol).map(|c| c.kappa))
        .collect::<Result<Vec<S>>>()?;
    let mut stats = SignStats {
        inter_edges: kappas.len(),
        nonpositive: 0,
        negative: 0,
        kappa_min: kappas[0].clone(),
        kappa_max: kappas[0].clone(),
    };
    for kappa in kappas {
        match tol.sign(&kappa) {
            std::cmp::Ordering::Less => {
                stats.negative += 1;
                stats.nonpositive += 1;
            }
            std::cmp::Ordering::Equal => stats.nonpositive += 1,
            std::cmp::Ordering::Greater => {}
        }
        if kappa < stats.kappa_min {
            stats.kappa_min = kappa.clone();
        }
        if kappa > stats.kappa_max {
            stats.kappa_max = kappa;
        }
    }
    Ok(stats)
}

/// Settings shared by every trial of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub alpha: Alpha,
    pub master_seed: u64,
    pub tol: Tolerance,
    /// Record wall time per trial. Off by default so that output is a pure
    /// function of the parameters.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            alpha: Alpha::HALF,
            master_seed: 0,
            tol: Tolerance::default(),
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord<S> {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub trial: usize,
    pub seed: u64,
    pub stats: Result<SignStats<S>>,
    pub ms: Option<u128>,
}

/// One trial: draw the graph for `(m, n, k, trial)` and measure its signs.
pub fn run_trial<S: Scalar>(
    m: usize,
    n: usize,
    k: usize,
    trial: usize,
    config: &ExperimentConfig,
) -> TrialRecord<S> {
    let seed = derive_seed(config.master_seed, m, n, k, trial);
    let start = config.timing.then(Instant::now);
    let stats = random_two_community(TwoCommunitySpec { m, n, k, seed })
        .and_then(|(g, p)| proportion_nonpositive::<S>(&g, &p, config.alpha, config.tol));
    TrialRecord {
        m,
        n,
        k,
        trial,
        seed,
        stats,
        ms: start.map(|t| t.elapsed().as_millis()),
    }
}

fn run_grid<S: Scalar>(
    grid: &[(usize, usize)],
    trials: usize,
    config: &ExperimentConfig,
) -> Vec<TrialRecord<S>> {
    let jobs: Vec<(usize, usize, usize)> = grid
        .iter()
        .flat_map(|&(n, k)| (0..trials).map(move |t| (n, k, t)))
        .collect();
    jobs.par_iter()
        .map(|&(n, k, t)| run_trial::<S>(n, n, k, t, config))
        .collect()
}

/// `trials` random graphs with two communities of size `n` for every `k`.
pub fn run_distribution<S: Scalar>(
    n: usize,
    k_list: &[usize],
    trials: usize,
    config: &ExperimentConfig,
) -> Result<Vec<TrialRecord<S>>> {
    if trials == 0 {
        return Err(Error::InvalidSize("trials must be at least 1".into()));
    }
    if let Some(&k) = k_list.iter().find(|&&k| k > n * n) {
        return Err(Error::InvalidK { k, max: n * n });
    }
    let grid: Vec<(usize, usize)> = k_list.iter().map(|&k| (n, k)).collect();
    Ok(run_grid(&grid, trials, config))
}

pub const DISTRIBUTION_CSV_HEADER: &str =
    "n,k,trial,seed,prop_nonpos,prop_neg,kappa_min,kappa_max,ms";

/// Distribution records as CSV. A failed trial puts its error code in the
/// `prop_nonpos` column and leaves the statistics empty.
pub fn distribution_csv<S: Scalar>(records: &[TrialRecord<S>]) -> String {
    let mut out = String::from(DISTRIBUTION_CSV_HEADER);
    out.push('\n');
    for r in records {
        let ms = r.ms.map(|t| t.to_string()).unwrap_or_default();
        let body = match &r.stats {
            Ok(s) => format!(
                "{},{},{},{}",
                s.prop_nonpositive(),
                s.prop_negative(),
                s.kappa_min,
                s.kappa_max
            ),
            Err(e) => format!("{},,,", e.code()),
        };
        writeln!(out, "{},{},{},{},{body},{ms}", r.n, r.k, r.trial, r.seed).unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub mean_prop_nonpos: f64,
    /// Population standard deviation over trials.
    pub std_prop_nonpos: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepSummary {
    pub rows: Vec<SweepRow>,
}

pub const SWEEP_CSV_HEADER: &str = "n,k,trials,mean_prop_nonpos,std_prop_nonpos";

impl SweepSummary {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SWEEP_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{}",
                r.n, r.k, r.trials, r.mean_prop_nonpos, r.std_prop_nonpos
            )
            .unwrap();
        }
        out
    }

    pub fn row(&self, n: usize, k: usize) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.n == n && r.k == k)
    }
}

/// Mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let len = values.len() as f64;
    let mean = values.iter().sum::<f64>() / len;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / len;
    (mean, var.sqrt())
}

/// Mean and spread of the nonpositive proportion for every `n` and
/// `k = mult * n`.
pub fn run_sweep<S: Scalar>(
    n_list: &[usize],
    multipliers: &[usize],
    trials: usize,
    config: &ExperimentConfig,
) -> Result<SweepSummary> {
    if trials == 0 {
        return Err(Error::InvalidSize("trials must be at least 1".into()));
    }
    if multipliers.contains(&0) {
        return Err(Error::InvalidSize("multipliers must be positive".into()));
    }
    let mut grid = Vec::new();
    for &n in n_list {
        for &mult in multipliers {
            let k = mult * n;
            if k > n * n {
                return Err(Error::InvalidK { k, max: n * n });
            }
            grid.push((n, k));
        }
    }
    let records = run_grid::<S>(&grid, trials, config);
    let rows = grid
        .iter()
        .zip(records.chunks(trials))
        .map(|(&(n, k), chunk)| {
            let props = chunk
                .iter()
                .map(|r| {
                    r.stats
                        .as_ref()
                        .map(|s| s.prop_nonpositive())
                        .map_err(Clone::clone)
                })
                .collect::<Result<Vec<f64>>>()?;
            let (mean, std) = mean_std(&props);
            Ok(SweepRow {
                n,
                k,
                trials,
                mean_prop_nonpos: mean,
                std_prop_nonpos: std,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepSummary { rows })
}
