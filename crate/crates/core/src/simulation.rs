//! Benchmark of the sampling route against the closed-form route on
//! simulated one-sample data.
//!
//! Each dataset is `y_i = mu + e_i` with `mu ~ N(0, g)` (`mu = 0` when
//! `g = 0`) and `e_i ~ N(0, 1)`. For every dataset both the JZS Bayes factor
//! and the MCMC Savage-Dickey Bayes factor are computed; a cell reports the
//! five-number summary of `log(bf01)` per method and how often the two
//! methods pick the same hypothesis.

use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bayesfactor::{jzs_bf, savage_dickey_bf};
use crate::density::quantile_sorted;
use crate::distributions::NormalStream;
use crate::error::{Error, Result};
use crate::models::{t_statistic, ModelSpec, ObservedSample, PriorSpec};
use crate::sampler::{sample_posterior, SamplerSettings};

pub const GRID_EFFECTS: [f64; 3] = [0.0, 0.05, 0.2];
pub const GRID_SIZES: [usize; 3] = [20, 50, 80];
/// Datasets per cell for the default (desk-scale) run.
pub const DESK_DATASETS: usize = 50;
/// Datasets per cell of the full benchmark.
pub const FULL_DATASETS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationCell {
    /// Variance of the true mean (not the quadrature variable of the JZS integral).
    pub g_effect: f64,
    pub n: usize,
    pub n_datasets: usize,
    pub seed: u64,
}

impl SimulationCell {
    pub fn new(g_effect: f64, n: usize, n_datasets: usize, seed: u64) -> Result<Self> {
        if !(g_effect.is_finite() && g_effect >= 0.0) {
            return Err(Error::param(format!("g must be >= 0, got {g_effect}")));
        }
        if n < 2 {
            return Err(Error::param(format!("N must be >= 2, got {n}")));
        }
        if n_datasets == 0 {
            return Err(Error::param("need at least one dataset per cell"));
        }
        Ok(SimulationCell {
            g_effect,
            n,
            n_datasets,
            seed,
        })
    }

    fn id(&self) -> u64 {
        mix(self.g_effect.to_bits() ^ mix(self.n as u64))
    }

    /// Seed for the RNG streams of dataset `index`; `salt` separates the data
    /// stream from the sampler stream.
    fn dataset_seed(&self, index: usize, salt: u64) -> u64 {
        mix(mix(mix(self.seed) ^ self.id()) ^ index as u64 ^ salt.rotate_left(32))
    }
}

/// The 3 x 3 grid of effect variances and sample sizes.
pub fn benchmark_grid(n_datasets: usize, seed: u64) -> Vec<SimulationCell> {
    GRID_EFFECTS
        .iter()
        .flat_map(|&g| {
            GRID_SIZES.iter().map(move |&n| SimulationCell {
                g_effect: g,
                n,
                n_datasets: n_datasets.max(1),
                seed,
            })
        })
        .collect()
}

// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Dataset `index` of `cell`; depends only on `(cell, index)`.
pub fn generate_dataset(cell: &SimulationCell, index: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(cell.dataset_seed(index, 0));
    let mut normal = NormalStream::default();
    let mu = if cell.g_effect > 0.0 {
        cell.g_effect.sqrt() * normal.next(&mut rng)
    } else {
        0.0
    };
    (0..cell.n).map(|_| mu + normal.next(&mut rng)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Selection {
    H0,
    H1,
}

/// `H0` iff `log_bf01 > 0`; a tie goes to `H1`.
pub fn model_select(log_bf01: f64) -> Result<Selection> {
    if !log_bf01.is_finite() {
        return Err(Error::param(format!(
            "log Bayes factor is not finite: {log_bf01}"
        )));
    }
    Ok(if log_bf01 > 0.0 {
        Selection::H0
    } else {
        Selection::H1
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Min, quartiles (type 7) and max.
pub fn five_number_summary(values: &[f64]) -> Result<FiveNumber> {
    if values.is_empty() {
        return Err(Error::param("five-number summary of no values"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::param("five-number summary needs finite values"));
    }
    let mut s = values.to_vec();
    s.sort_by(f64::total_cmp);
    Ok(FiveNumber {
        min: s[0],
        q1: quantile_sorted(&s, 0.25),
        median: quantile_sorted(&s, 0.5),
        q3: quantile_sorted(&s, 0.75),
        max: s[s.len() - 1],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetResult {
    pub index: usize,
    pub t: f64,
    pub log_bf01_jzs: f64,
    pub log_bf01_sd: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetFailure {
    pub index: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub cell: SimulationCell,
    pub jzs: Option<FiveNumber>,
    pub savage_dickey: Option<FiveNumber>,
    /// Fraction of successful datasets on which both methods select the same
    /// hypothesis.
    pub consistency: Option<f64>,
    pub n_unconverged: usize,
    pub failures: Vec<DatasetFailure>,
    pub runtime_seconds: f64,
    pub datasets: Vec<DatasetResult>,
}

impl CellReport {
    pub fn failed(&self) -> bool {
        self.datasets.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub r: f64,
    pub sampler: SamplerSettings,
    pub cells: Vec<CellReport>,
    pub runtime_seconds: f64,
}

fn run_dataset(
    cell: &SimulationCell,
    index: usize,
    settings: &SamplerSettings,
    prior: &PriorSpec,
) -> Result<DatasetResult> {
    let y = generate_dataset(cell, index);
    let sample = ObservedSample::one_sample(y)?;
    let (t, _) = t_statistic(&sample)?;
    let jzs = jzs_bf(t, cell.n, prior.dispersion())?;
    let spec = ModelSpec::one_sample(*prior);
    let s = SamplerSettings {
        seed: cell.dataset_seed(index, 1),
        ..*settings
    };
    let draws = sample_posterior(&spec, &sample, &s)?;
    let sd = savage_dickey_bf(&draws, prior, 0.0)?;
    let log_bf01_sd = sd.log_bf01();
    if !log_bf01_sd.is_finite() {
        return Err(Error::Estimation(format!(
            "Savage-Dickey log Bayes factor is {log_bf01_sd}"
        )));
    }
    Ok(DatasetResult {
        index,
        t,
        log_bf01_jzs: jzs.log_bf01(),
        log_bf01_sd,
        converged: draws.converged,
    })
}

fn run_cell(cell: &SimulationCell, settings: &SamplerSettings, prior: &PriorSpec) -> CellReport {
    let start = Instant::now();
    let outcomes: Vec<Result<DatasetResult>> = (0..cell.n_datasets)
        .into_par_iter()
        .map(|i| run_dataset(cell, i, settings, prior))
        .collect();
    let mut datasets = Vec::new();
    let mut failures = Vec::new();
    for (index, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(d) => datasets.push(d),
            Err(e) => failures.push(DatasetFailure {
                index,
                message: e.to_string(),
            }),
        }
    }
    let jzs: Vec<f64> = datasets.iter().map(|d| d.log_bf01_jzs).collect();
    let sd: Vec<f64> = datasets.iter().map(|d| d.log_bf01_sd).collect();
    let agree = datasets
        .iter()
        .filter(|d| model_select(d.log_bf01_jzs).ok() == model_select(d.log_bf01_sd).ok())
        .count();
    CellReport {
        cell: *cell,
        jzs: five_number_summary(&jzs).ok(),
        savage_dickey: five_number_summary(&sd).ok(),
        consistency: (!datasets.is_empty()).then(|| agree as f64 / datasets.len() as f64),
        n_unconverged: datasets.iter().filter(|d| !d.converged).count(),
        failures,
        runtime_seconds: start.elapsed().as_secs_f64(),
        datasets,
    }
}

/// Runs every cell with a `Cauchy(0, r)` effect-size prior.
///
/// Per-dataset failures are recorded in the report rather than aborting the
/// run. Apart from the runtime fields, the report does not depend on the
/// number of worker threads.
pub fn run_simulation(
    cells: &[SimulationCell],
    settings: &SamplerSettings,
    r: f64,
) -> Result<SimulationReport> {
    settings.validate()?;
    let prior = PriorSpec::cauchy(r)?;
    for c in cells {
        SimulationCell::new(c.g_effect, c.n, c.n_datasets, c.seed)?;
    }
    let start = Instant::now();
    let cells = cells
        .iter()
        .map(|c| run_cell(c, settings, &prior))
        .collect();
    Ok(SimulationReport {
        r,
        sampler: *settings,
        cells,
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl SimulationReport {
    /// One row per cell and method:
    /// `g,N,bf_type,min,q1,median,q3,max,consistency`.
    /// Summary columns are empty for a cell where every dataset failed.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Configuration(format!("writing report: {e}"));
        w.write_record([
            "g",
            "N",
            "bf_type",
            "min",
            "q1",
            "median",
            "q3",
            "max",
            "consistency",
        ])
        .map_err(io)?;
        for c in &self.cells {
            for (label, s) in [("JZS", c.jzs), ("SD", c.savage_dickey)] {
                let mut row = vec![
                    c.cell.g_effect.to_string(),
                    c.cell.n.to_string(),
                    label.into(),
                ];
                match s {
                    Some(s) => {
                        row.extend([s.min, s.q1, s.median, s.q3, s.max].map(|v| v.to_string()))
                    }
                    None => row.extend(std::iter::repeat(String::new()).take(5)),
                }
                row.push(fmt_opt(c.consistency));
                w.write_record(&row).map_err(io)?;
            }
        }
        w.flush()
            .map_err(|e| Error::Configuration(format!("writing report: {e}")))?;
        Ok(())
    }

    /// Per-dataset `g,N,index,t,log_bf01_jzs,log_bf01_sd,converged` rows.
    pub fn write_datasets_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Configuration(format!("writing datasets: {e}"));
        w.write_record([
            "g",
            "N",
            "index",
            "t",
            "log_bf01_jzs",
            "log_bf01_sd",
            "converged",
        ])
        .map_err(io)?;
        for c in &self.cells {
            for d in &c.datasets {
                w.write_record([
                    c.cell.g_effect.to_string(),
                    c.cell.n.to_string(),
                    d.index.to_string(),
                    d.t.to_string(),
                    d.log_bf01_jzs.to_string(),
                    d.log_bf01_sd.to_string(),
                    d.converged.to_string(),
                ])
                .map_err(io)?;
            }
        }
        w.flush()
            .map_err(|e| Error::Configuration(format!("writing datasets: {e}")))?;
        Ok(())
    }
}
