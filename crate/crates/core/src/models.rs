//! The one-sample and two-sample effect-size models, data standardization
//! and the classical t statistic.
//!
//! One-sample: `z_i ~ Normal(delta * sigma, sigma)` with `z = y / sd(y)`.
//!
//! Two-sample: `zx_i ~ Normal(mu + alpha/2, sigma)`, `zy_j ~ Normal(mu - alpha/2, sigma)`
//! with `alpha = delta * sigma` and both groups rescaled by the mean and sd of `x`.
//!
//! In both models `delta` gets the effect-size prior, `sigma ~ HalfCauchy(0, 1)`
//! and (two-sample only) `mu ~ Cauchy(0, 1)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::DistParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Design {
    OneSample,
    TwoSample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorFamily {
    Cauchy,
    Normal,
}

/// Zero-centred prior on the effect size.
///
/// For `Cauchy` the dispersion is the scale `r`; for `Normal` it is the
/// variance (so `normal:0.3` has standard deviation `sqrt(0.3)`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorSpec {
    family: PriorFamily,
    dispersion: f64,
}

impl PriorSpec {
    pub fn cauchy(scale: f64) -> Result<Self> {
        Self::new(PriorFamily::Cauchy, scale)
    }

    pub fn normal(variance: f64) -> Result<Self> {
        Self::new(PriorFamily::Normal, variance)
    }

    pub fn new(family: PriorFamily, dispersion: f64) -> Result<Self> {
        if !(dispersion.is_finite() && dispersion > 0.0) {
            return Err(Error::param(format!(
                "prior dispersion must be positive and finite, got {dispersion}"
            )));
        }
        Ok(PriorSpec { family, dispersion })
    }

    pub fn family(&self) -> PriorFamily {
        self.family
    }

    pub fn dispersion(&self) -> f64 {
        self.dispersion
    }

    pub fn dist(&self) -> DistParams {
        match self.family {
            PriorFamily::Cauchy => DistParams::cauchy(0.0, self.dispersion),
            PriorFamily::Normal => DistParams::normal(0.0, self.dispersion.sqrt()),
        }
        .expect("dispersion validated")
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        self.dist().pdf(x)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.dist().cdf(x)
    }
}

impl fmt::Display for PriorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.family {
            PriorFamily::Cauchy => "cauchy",
            PriorFamily::Normal => "normal",
        };
        write!(f, "{name}:{}", self.dispersion)
    }
}

/// Parses `cauchy:<scale>` or `normal:<variance>`.
impl FromStr for PriorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, value) = s
            .split_once(':')
            .ok_or_else(|| Error::param(format!("prior `{s}` is not of the form family:value")))?;
        let family = match name.trim().to_ascii_lowercase().as_str() {
            "cauchy" => PriorFamily::Cauchy,
            "normal" => PriorFamily::Normal,
            other => return Err(Error::param(format!("unknown prior family `{other}`"))),
        };
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::param(format!("prior parameter `{value}` is not a number")))?;
        PriorSpec::new(family, value)
    }
}

/// Count, mean and centred sum of squares of one standardized group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupStats {
    pub n: usize,
    pub mean: f64,
    pub centered_ss: f64,
}

impl GroupStats {
    fn of(v: &[f64]) -> Self {
        let n = v.len();
        let mean = v.iter().sum::<f64>() / n as f64;
        let centered_ss = v.iter().map(|x| (x - mean) * (x - mean)).sum();
        GroupStats {
            n,
            mean,
            centered_ss,
        }
    }

    /// `sum_i log Normal(z_i; m, s)` for the group.
    #[inline]
    pub fn log_likelihood(&self, m: f64, s: f64) -> f64 {
        let n = self.n as f64;
        let r = (self.mean - m) / s;
        -n * s.ln() - 0.5 * n * LN_2PI - 0.5 * (self.centered_ss / s) / s - 0.5 * n * r * r
    }
}

const LN_2PI: f64 = 1.837_877_066_409_345_3;

/// Raw data together with its standardized form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservedSample {
    design: Design,
    raw: Vec<Vec<f64>>,
    standardized: Vec<Vec<f64>>,
    stats: Vec<GroupStats>,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Sample standard deviation with the `n - 1` denominator.
pub fn sample_sd(v: &[f64]) -> f64 {
    let m = mean(v);
    let ss: f64 = v.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (v.len() as f64 - 1.0)).sqrt()
}

fn check_vector(name: &str, v: &[f64], min_len: usize) -> Result<()> {
    if v.len() < min_len {
        return Err(Error::InsufficientData(format!(
            "{name} has {} values, need at least {min_len}",
            v.len()
        )));
    }
    if let Some(i) = v.iter().position(|x| !x.is_finite()) {
        return Err(Error::param(format!("{name}[{i}] is not finite")));
    }
    Ok(())
}

impl ObservedSample {
    /// Standardizes a one-sample vector as `z = y / sd(y)`.
    pub fn one_sample(y: Vec<f64>) -> Result<Self> {
        check_vector("y", &y, 2)?;
        let sd = sample_sd(&y);
        if !(sd > 0.0) {
            return Err(Error::DegenerateData("y has zero variance".into()));
        }
        let z: Vec<f64> = y.iter().map(|v| v / sd).collect();
        Ok(Self::build(Design::OneSample, vec![y], vec![z]))
    }

    /// Rescales both groups by the mean and sd of `x`:
    /// `zx = (x - mean(x)) / sd(x)`, `zy = (y - mean(x)) / sd(x)`.
    pub fn two_sample(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        check_vector("x", &x, 2)?;
        check_vector("y", &y, 2)?;
        let sd = sample_sd(&x);
        if !(sd > 0.0) {
            return Err(Error::DegenerateData("x has zero variance".into()));
        }
        let m = mean(&x);
        let zx = x.iter().map(|v| (v - m) / sd).collect();
        let zy = y.iter().map(|v| (v - m) / sd).collect();
        Ok(Self::build(Design::TwoSample, vec![x, y], vec![zx, zy]))
    }

    /// Uses `z` as already-standardized one-sample data (raw = z).
    ///
    /// Intended for synthetic data and the fixed-sigma verification model.
    pub fn one_sample_prestandardized(z: Vec<f64>) -> Result<Self> {
        check_vector("z", &z, 1)?;
        Ok(Self::build(Design::OneSample, vec![z.clone()], vec![z]))
    }

    fn build(design: Design, raw: Vec<Vec<f64>>, standardized: Vec<Vec<f64>>) -> Self {
        let stats = standardized.iter().map(|g| GroupStats::of(g)).collect();
        ObservedSample {
            design,
            raw,
            standardized,
            stats,
        }
    }

    pub fn design(&self) -> Design {
        self.design
    }

    /// Raw groups: `[y]` or `[x, y]`.
    pub fn raw(&self) -> &[Vec<f64>] {
        &self.raw
    }

    /// Standardized groups: `[z]` or `[zx, zy]`.
    pub fn standardized(&self) -> &[Vec<f64>] {
        &self.standardized
    }

    pub fn stats(&self) -> &[GroupStats] {
        &self.stats
    }

    pub fn n_total(&self) -> usize {
        self.raw.iter().map(Vec::len).sum()
    }
}

/// Classical one-sample t statistic `mean / (s / sqrt(n))` on the raw data,
/// with `n - 1` degrees of freedom.
pub fn t_statistic(sample: &ObservedSample) -> Result<(f64, f64)> {
    if sample.design() != Design::OneSample {
        return Err(Error::Configuration(
            "t statistic is defined for one-sample data".into(),
        ));
    }
    let y = &sample.raw()[0];
    if y.len() < 2 {
        return Err(Error::InsufficientData("t statistic needs n >= 2".into()));
    }
    let s = sample_sd(y);
    if !(s > 0.0) {
        return Err(Error::DegenerateData("zero variance".into()));
    }
    let n = y.len() as f64;
    Ok((mean(y) / (s / n.sqrt()), n - 1.0))
}

/// Model parameters. `mu` is only used by the two-sample model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub delta: f64,
    pub sigma: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    design: Design,
    delta_prior: PriorSpec,
    sigma_prior: DistParams,
    mu_prior: Option<DistParams>,
    fixed_sigma: Option<f64>,
    use_likelihood: bool,
}

impl ModelSpec {
    pub fn one_sample(delta_prior: PriorSpec) -> Self {
        ModelSpec {
            design: Design::OneSample,
            delta_prior,
            sigma_prior: DistParams::half_cauchy(1.0).expect("valid"),
            mu_prior: None,
            fixed_sigma: None,
            use_likelihood: true,
        }
    }

    pub fn two_sample(delta_prior: PriorSpec) -> Self {
        ModelSpec {
            design: Design::TwoSample,
            delta_prior,
            sigma_prior: DistParams::half_cauchy(1.0).expect("valid"),
            mu_prior: Some(DistParams::cauchy(0.0, 1.0).expect("valid")),
            fixed_sigma: None,
            use_likelihood: true,
        }
    }

    pub fn for_design(design: Design, delta_prior: PriorSpec) -> Self {
        match design {
            Design::OneSample => Self::one_sample(delta_prior),
            Design::TwoSample => Self::two_sample(delta_prior),
        }
    }

    /// Verification model: one-sample, `sigma` fixed at 1 and
    /// `delta ~ Normal(0, tau2)`. Its posterior and Bayes factor are
    /// available in closed form.
    pub fn conjugate_fixed_sigma(tau2: f64) -> Result<Self> {
        Ok(ModelSpec {
            fixed_sigma: Some(1.0),
            ..Self::one_sample(PriorSpec::normal(tau2)?)
        })
    }

    /// Drops the likelihood so the posterior equals the prior.
    pub fn without_likelihood(mut self) -> Self {
        self.use_likelihood = false;
        self
    }

    pub fn design(&self) -> Design {
        self.design
    }

    pub fn delta_prior(&self) -> PriorSpec {
        self.delta_prior
    }

    pub fn sigma_prior(&self) -> DistParams {
        self.sigma_prior
    }

    pub fn mu_prior(&self) -> Option<DistParams> {
        self.mu_prior
    }

    pub fn fixed_sigma(&self) -> Option<f64> {
        self.fixed_sigma
    }

    pub fn uses_likelihood(&self) -> bool {
        self.use_likelihood
    }

    pub fn check_sample(&self, sample: &ObservedSample) -> Result<()> {
        if sample.design() != self.design {
            return Err(Error::Configuration(format!(
                "model is {:?} but data are {:?}",
                self.design,
                sample.design()
            )));
        }
        Ok(())
    }

    /// Log joint density without the design check. Callers must have run
    /// [`ModelSpec::check_sample`].
    pub(crate) fn log_joint_unchecked(&self, sample: &ObservedSample, p: &Params) -> f64 {
        if !(p.sigma > 0.0) || !p.delta.is_finite() || !p.mu.is_finite() {
            return f64::NEG_INFINITY;
        }
        let sigma = self.fixed_sigma.unwrap_or(p.sigma);
        let mut lp = self.delta_prior.dist().ln_pdf_unchecked(p.delta);
        if self.fixed_sigma.is_none() {
            lp += self.sigma_prior.ln_pdf_unchecked(sigma);
        }
        if let Some(mu_prior) = self.mu_prior {
            lp += mu_prior.ln_pdf_unchecked(p.mu);
        }
        if self.use_likelihood {
            let stats = sample.stats();
            match self.design {
                Design::OneSample => {
                    lp += stats[0].log_likelihood(p.delta * sigma, sigma);
                }
                Design::TwoSample => {
                    let half_alpha = 0.5 * p.delta * sigma;
                    lp += stats[0].log_likelihood(p.mu + half_alpha, sigma);
                    lp += stats[1].log_likelihood(p.mu - half_alpha, sigma);
                }
            }
        }
        lp
    }
}

/// `log[prior(delta) prior(sigma) (prior(mu)) likelihood(z | params)]`, or
/// `-inf` when `sigma <= 0`.
pub fn log_joint_density(
    spec: &ModelSpec,
    sample: &ObservedSample,
    params: &Params,
) -> Result<f64> {
    spec.check_sample(sample)?;
    Ok(spec.log_joint_unchecked(sample, params))
}
