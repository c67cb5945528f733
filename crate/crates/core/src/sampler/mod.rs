//! Posterior sampling for the effect-size models.
//!
//! Component-wise random-walk Metropolis on `(delta, log sigma[, mu])`.
//! Increments are Gaussian, with a small share of Cauchy increments on the
//! same scale for heavy-tailed targets. Each coordinate has its own proposal
//! scale, tuned during warmup by a Robbins-Monro update toward
//! `target_accept`; scales are frozen once warmup ends so the kept draws come
//! from a fixed Markov kernel. The log-sigma coordinate carries its Jacobian.
//!
//! Chains run on independent ChaCha streams derived from the seed and are
//! merged in chain order, so output is bit-identical regardless of how many
//! threads execute them.

pub mod diagnostics;

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::NormalStream;
use crate::error::{Error, Result};
use crate::models::{sample_sd, Design, ModelSpec, ObservedSample, Params, PriorSpec};

pub use diagnostics::{effective_sample_size, gelman_rubin};

/// R-hat above this marks the draws as unconverged.
pub const RHAT_THRESHOLD: f64 = 1.01;

const INIT_RETRIES: usize = 100;
const THIN: usize = 10;
/// Share of proposals that use a Cauchy rather than a Gaussian increment.
/// The occasional long jump lets chains return from the tails of a
/// heavy-tailed posterior; the increment stays symmetric.
const HEAVY_TAIL_PROB: f64 = 0.1;
const LOG_SIGMA_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerSettings {
    pub n_chains: usize,
    pub n_warmup: usize,
    /// Kept draws per chain.
    pub n_keep: usize,
    /// Sweeps per kept draw after warmup.
    #[serde(default = "default_thin")]
    pub thin: usize,
    pub seed: u64,
    pub target_accept: f64,
}

fn default_thin() -> usize {
    THIN
}

impl Default for SamplerSettings {
    fn default() -> Self {
        SamplerSettings {
            n_chains: 4,
            n_warmup: 1000,
            n_keep: 5000,
            thin: default_thin(),
            seed: 0,
            target_accept: 0.40,
        }
    }
}

impl SamplerSettings {
    pub fn with_seed(seed: u64) -> Self {
        SamplerSettings {
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_chains < 2 {
            return Err(Error::Configuration("need at least 2 chains".into()));
        }
        if self.n_keep < 1000 {
            return Err(Error::Configuration(format!(
                "need at least 1000 kept draws per chain, got {}",
                self.n_keep
            )));
        }
        if self.thin == 0 {
            return Err(Error::Configuration("thin must be at least 1".into()));
        }
        if !(self.target_accept > 0.0 && self.target_accept < 1.0) {
            return Err(Error::Configuration(format!(
                "target acceptance must lie in (0, 1), got {}",
                self.target_accept
            )));
        }
        Ok(())
    }
}

/// Per-parameter summary; `mu` is present only for the two-sample model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerParam {
    pub delta: f64,
    pub sigma: f64,
    pub mu: Option<f64>,
}

impl PerParam {
    fn max(&self) -> f64 {
        self.delta
            .max(self.sigma)
            .max(self.mu.unwrap_or(f64::NEG_INFINITY))
    }
}

/// Kept draws, one inner vector per chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorDraws {
    pub design: Design,
    pub delta_prior: PriorSpec,
    pub seed: u64,
    pub delta: Vec<Vec<f64>>,
    pub sigma: Vec<Vec<f64>>,
    pub mu: Option<Vec<Vec<f64>>>,
    pub rhat: PerParam,
    pub ess: PerParam,
    pub accept_rate: Vec<f64>,
    pub converged: bool,
}

impl PosteriorDraws {
    pub fn n_chains(&self) -> usize {
        self.delta.len()
    }

    pub fn n_keep(&self) -> usize {
        self.delta.first().map_or(0, Vec::len)
    }

    /// All delta draws, concatenated in chain order.
    pub fn pooled_delta(&self) -> Vec<f64> {
        self.delta.concat()
    }

    /// Writes `chain,iteration,delta,sigma,mu` rows (mu blank for one-sample).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Configuration(format!("writing chains: {e}"));
        w.write_record(["chain", "iteration", "delta", "sigma", "mu"])
            .map_err(io)?;
        for c in 0..self.n_chains() {
            for i in 0..self.n_keep() {
                let mu = self
                    .mu
                    .as_ref()
                    .map(|m| m[c][i].to_string())
                    .unwrap_or_default();
                w.write_record([
                    (c + 1).to_string(),
                    (i + 1).to_string(),
                    self.delta[c][i].to_string(),
                    self.sigma[c][i].to_string(),
                    mu,
                ])
                .map_err(io)?;
            }
        }
        w.flush()
            .map_err(|e| Error::Configuration(format!("writing chains: {e}")))?;
        Ok(())
    }
}

/// Which coordinates are free in this model.
#[derive(Debug, Clone, Copy)]
struct Layout {
    sample_sigma: bool,
    sample_mu: bool,
}

impl Layout {
    fn of(spec: &ModelSpec) -> Self {
        Layout {
            sample_sigma: spec.fixed_sigma().is_none(),
            sample_mu: spec.design() == Design::TwoSample,
        }
    }

    fn dim(&self) -> usize {
        1 + self.sample_sigma as usize + self.sample_mu as usize
    }

    /// Unconstrained vector `[delta, log sigma?, mu?]` to parameters.
    fn params(&self, spec: &ModelSpec, theta: &[f64]) -> Params {
        let mut i = 1;
        let sigma = if self.sample_sigma {
            i += 1;
            theta[1].exp()
        } else {
            spec.fixed_sigma().unwrap_or(1.0)
        };
        let mu = if self.sample_mu { theta[i] } else { 0.0 };
        Params {
            delta: theta[0],
            sigma,
            mu,
        }
    }

    fn log_target(&self, spec: &ModelSpec, sample: &ObservedSample, theta: &[f64]) -> f64 {
        if self.sample_sigma && theta[1].abs() > LOG_SIGMA_LIMIT {
            return f64::NEG_INFINITY;
        }
        let p = self.params(spec, theta);
        let jacobian = if self.sample_sigma { theta[1] } else { 0.0 };
        let lp = spec.log_joint_unchecked(sample, &p) + jacobian;
        if lp.is_nan() {
            f64::NEG_INFINITY
        } else {
            lp
        }
    }
}

struct ChainOutput {
    delta: Vec<f64>,
    sigma: Vec<f64>,
    mu: Vec<f64>,
    accept_rate: f64,
}

fn initial_point(sample: &ObservedSample) -> [f64; 3] {
    let g = sample.standardized();
    match sample.design() {
        Design::OneSample => {
            let z = &g[0];
            let m = z.iter().sum::<f64>() / z.len() as f64;
            let sd = if z.len() > 1 { sample_sd(z) } else { 0.0 };
            let d = if sd > 0.0 { m / sd } else { 0.0 };
            [d, 0.0, 0.0]
        }
        Design::TwoSample => {
            let s = sample.stats();
            let (a, b) = (s[0], s[1]);
            let dof = (a.n + b.n) as f64 - 2.0;
            let pooled = ((a.centered_ss + b.centered_ss) / dof).sqrt();
            let pooled = if pooled > 0.0 { pooled } else { 1.0 };
            [
                (a.mean - b.mean) / pooled,
                pooled.ln(),
                0.5 * (a.mean + b.mean),
            ]
        }
    }
}

fn run_chain(
    spec: &ModelSpec,
    sample: &ObservedSample,
    settings: &SamplerSettings,
    chain: usize,
) -> Result<ChainOutput> {
    let layout = Layout::of(spec);
    let dim = layout.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    rng.set_stream(chain as u64 + 1);
    let mut normal = NormalStream::default();

    let base = initial_point(sample);
    let base: Vec<f64> = {
        let mut v = vec![base[0]];
        if layout.sample_sigma {
            v.push(base[1]);
        }
        if layout.sample_mu {
            v.push(base[2]);
        }
        v
    };
    let jitter: Vec<f64> = {
        let mut v = vec![1.0];
        if layout.sample_sigma {
            v.push(0.5);
        }
        if layout.sample_mu {
            v.push(0.5);
        }
        v
    };

    let mut theta = base.clone();
    let mut lp = f64::NEG_INFINITY;
    for _ in 0..INIT_RETRIES {
        for k in 0..dim {
            theta[k] = base[k] + jitter[k] * normal.next(&mut rng);
        }
        lp = layout.log_target(spec, sample, &theta);
        if lp.is_finite() {
            break;
        }
    }
    if !lp.is_finite() {
        return Err(Error::Initialization(format!(
            "chain {chain}: log density not finite after {INIT_RETRIES} attempts"
        )));
    }

    let mut log_step: Vec<f64> = jitter.iter().map(|j| (0.5 * j).ln()).collect();
    let total = settings.n_warmup + settings.n_keep * settings.thin;
    let mut out = ChainOutput {
        delta: Vec::with_capacity(settings.n_keep),
        sigma: Vec::with_capacity(settings.n_keep),
        mu: Vec::with_capacity(if layout.sample_mu { settings.n_keep } else { 0 }),
        accept_rate: 0.0,
    };
    let mut accepted_kept = 0usize;
    let mut proposal = theta.clone();

    for iter in 0..total {
        let warm = iter < settings.n_warmup;
        for k in 0..dim {
            proposal.copy_from_slice(&theta);
            let z = if rng.random::<f64>() < HEAVY_TAIL_PROB {
                (std::f64::consts::PI * (rng.random::<f64>() - 0.5)).tan()
            } else {
                normal.next(&mut rng)
            };
            proposal[k] += log_step[k].exp() * z;
            let lp_new = layout.log_target(spec, sample, &proposal);
            let u: f64 = rng.random();
            let accept = lp_new.is_finite() && u.ln() < lp_new - lp;
            if accept {
                theta[k] = proposal[k];
                lp = lp_new;
            }
            if warm {
                let gain = (iter as f64 + 1.0).powf(-0.6);
                let a = if accept { 1.0 } else { 0.0 };
                log_step[k] += gain * (a - settings.target_accept);
            } else if accept {
                accepted_kept += 1;
            }
        }
        if !warm && (iter + 1 - settings.n_warmup) % settings.thin == 0 {
            let p = layout.params(spec, &theta);
            out.delta.push(p.delta);
            out.sigma.push(p.sigma);
            if layout.sample_mu {
                out.mu.push(p.mu);
            }
        }
    }
    out.accept_rate = accepted_kept as f64 / (settings.n_keep * settings.thin * dim) as f64;
    Ok(out)
}

/// Draws from the posterior of `spec` given `sample`.
pub fn sample_posterior(
    spec: &ModelSpec,
    sample: &ObservedSample,
    settings: &SamplerSettings,
) -> Result<PosteriorDraws> {
    settings.validate()?;
    spec.check_sample(sample)?;

    let chains: Vec<ChainOutput> = (0..settings.n_chains)
        .into_par_iter()
        .map(|c| run_chain(spec, sample, settings, c))
        .collect::<Result<_>>()?;

    let mut delta = Vec::with_capacity(chains.len());
    let mut sigma = Vec::with_capacity(chains.len());
    let mut mu = Vec::with_capacity(chains.len());
    let mut accept_rate = Vec::with_capacity(chains.len());
    for c in chains {
        delta.push(c.delta);
        sigma.push(c.sigma);
        mu.push(c.mu);
        accept_rate.push(c.accept_rate);
    }
    let mu = (spec.design() == Design::TwoSample).then_some(mu);

    let rhat = PerParam {
        delta: gelman_rubin(&delta)?,
        sigma: gelman_rubin(&sigma)?,
        mu: mu.as_ref().map(|m| gelman_rubin(m)).transpose()?,
    };
    let ess = PerParam {
        delta: effective_sample_size(&delta)?,
        sigma: effective_sample_size(&sigma)?,
        mu: mu.as_ref().map(|m| effective_sample_size(m)).transpose()?,
    };
    let converged = rhat.max() <= RHAT_THRESHOLD;

    Ok(PosteriorDraws {
        design: spec.design(),
        delta_prior: spec.delta_prior(),
        seed: settings.seed,
        delta,
        sigma,
        mu,
        rhat,
        ess,
        accept_rate,
        converged,
    })
}
