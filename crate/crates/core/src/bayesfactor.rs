//! Bayes factors for effect-size hypotheses.
//!
//! * Savage-Dickey: `B01 = posterior(delta0) / prior(delta0)` with the
//!   posterior ordinate read from a kernel density estimate of the draws.
//! * Encompassing prior: for a constraint region `R`,
//!   `B_Re = P(delta in R | y) / P(delta in R)`; the two competing
//!   constraints are then composed, `B01 = B0e / B1e`.
//! * JZS: the closed-form one-sample Bayes factor under a `Cauchy(0, r)`
//!   effect-size prior, evaluated by adaptive quadrature.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::density::{self, BandwidthSensitivity};
use crate::error::{Error, Result};
use crate::models::PriorSpec;
use crate::quadrature;
use crate::sampler::PosteriorDraws;

/// Number of batches used by [`mc_standard_error`].
pub const MC_BATCHES: usize = 20;

const JZS_REL_TOL: f64 = 1e-8;
const JZS_MAX_INTERVALS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    SavageDickey,
    Encompassing,
    Jzs,
}

/// Side of zero favoured by the alternative in a directional test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// H1: delta > 0 against H0: delta <= 0.
    #[default]
    Positive,
    /// H1: delta < 0 against H0: delta >= 0.
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HypothesisSpec {
    /// H0: delta = delta0 against H1: delta unrestricted.
    PointNull {
        delta0: f64,
    },
    Directional {
        direction: Direction,
    },
    /// H0: |delta| < epsilon against H1: |delta| > epsilon.
    IntervalNull {
        epsilon: f64,
    },
}

impl HypothesisSpec {
    pub fn point(delta0: f64) -> Result<Self> {
        if !delta0.is_finite() {
            return Err(Error::param(format!("delta0 must be finite, got {delta0}")));
        }
        Ok(HypothesisSpec::PointNull { delta0 })
    }

    pub fn interval(epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::param(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        Ok(HypothesisSpec::IntervalNull { epsilon })
    }
}

impl fmt::Display for HypothesisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypothesisSpec::PointNull { delta0 } => write!(f, "point:{delta0}"),
            HypothesisSpec::Directional {
                direction: Direction::Positive,
            } => write!(f, "directional:positive"),
            HypothesisSpec::Directional {
                direction: Direction::Negative,
            } => write!(f, "directional:negative"),
            HypothesisSpec::IntervalNull { epsilon } => write!(f, "interval:{epsilon}"),
        }
    }
}

/// Parses `point[:delta0]`, `directional[:positive|negative]` or
/// `interval:<epsilon>`.
impl FromStr for HypothesisSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let number = |a: &str| {
            a.parse::<f64>()
                .map_err(|_| Error::param(format!("`{a}` is not a number")))
        };
        match (kind.to_ascii_lowercase().as_str(), arg) {
            ("point", None) => HypothesisSpec::point(0.0),
            ("point", Some(a)) => HypothesisSpec::point(number(a)?),
            ("directional", None) => Ok(HypothesisSpec::Directional {
                direction: Direction::Positive,
            }),
            ("directional", Some(a)) => {
                let direction = match a.to_ascii_lowercase().as_str() {
                    "positive" | "+" => Direction::Positive,
                    "negative" | "-" => Direction::Negative,
                    other => return Err(Error::param(format!("unknown direction `{other}`"))),
                };
                Ok(HypothesisSpec::Directional { direction })
            }
            ("interval", Some(a)) => HypothesisSpec::interval(number(a)?),
            ("interval", None) => Err(Error::param("interval null needs an epsilon")),
            (other, _) => Err(Error::param(format!("unknown hypothesis `{other}`"))),
        }
    }
}

/// Intermediate quantities behind a Bayes factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Components {
    SavageDickey {
        delta0: f64,
        prior_ordinate: f64,
        posterior_ordinate: f64,
        /// Posterior ordinate at 0.5x, 1x and 2x the bandwidth.
        sensitivity: BandwidthSensitivity,
        /// `bf01` implied by each entry of `sensitivity`.
        bf01_half_bandwidth: f64,
        bf01_double_bandwidth: f64,
    },
    Encompassing {
        /// Prior mass agreeing with H0 / H1 (the `1/c` proportions).
        prior_h0: f64,
        prior_h1: f64,
        /// Posterior mass agreeing with H0 / H1 (the `1/d` proportions).
        posterior_h0: f64,
        posterior_h1: f64,
        b0e: f64,
        b1e: f64,
        count_h0: usize,
        count_h1: usize,
        n_draws: usize,
    },
    Jzs {
        t: f64,
        n: usize,
        r: f64,
        numerator: f64,
        denominator: f64,
        log_numerator: f64,
        log_denominator: f64,
        quadrature_error: f64,
        quadrature_intervals: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BayesFactorResult {
    pub method: Method,
    pub hypothesis: HypothesisSpec,
    #[serde(with = "crate::serde_float")]
    pub bf01: f64,
    #[serde(with = "crate::serde_float")]
    pub bf10: f64,
    pub components: Components,
    /// Batch-means standard error of `bf01` (sampling methods only).
    #[serde(with = "crate::serde_float::option", default)]
    pub mc_se: Option<f64>,
    /// Delta-method standard error of `bf10`.
    #[serde(with = "crate::serde_float::option", default)]
    pub mc_se_bf10: Option<f64>,
    /// Convergence of the underlying draws; `None` for closed-form results.
    pub converged: Option<bool>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl BayesFactorResult {
    fn from_bf01(
        method: Method,
        hypothesis: HypothesisSpec,
        bf01: f64,
        components: Components,
    ) -> Self {
        BayesFactorResult {
            method,
            hypothesis,
            bf01,
            bf10: 1.0 / bf01,
            components,
            mc_se: None,
            mc_se_bf10: None,
            converged: None,
            warnings: Vec::new(),
        }
    }

    fn with_mc_se(mut self, se: f64) -> Self {
        self.mc_se = Some(se);
        self.mc_se_bf10 = Some(se / (self.bf01 * self.bf01));
        self
    }

    fn with_convergence(mut self, converged: bool) -> Self {
        self.converged = Some(converged);
        if !converged {
            self.warnings
                .push("MCMC draws did not converge (R-hat > 1.01); consider more draws".into());
        }
        self
    }

    pub fn log_bf01(&self) -> f64 {
        match &self.components {
            Components::Jzs {
                log_numerator,
                log_denominator,
                ..
            } => log_numerator - log_denominator,
            _ => self.bf01.ln(),
        }
    }
}

/// Transitivity: `B_ab = B_ae / B_be`.
pub fn compose_bf(b_ae: f64, b_be: f64) -> Result<f64> {
    for (name, v) in [("b_ae", b_ae), ("b_be", b_be)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::param(format!(
                "{name} must be positive and finite, got {v}"
            )));
        }
    }
    Ok(b_ae / b_be)
}

/// Batch-means standard error of `estimator` over `draws`.
///
/// The draws are cut into [`MC_BATCHES`] contiguous batches (a remainder at
/// the end is dropped); the result is `sd(batch estimates) / sqrt(batches)`.
pub fn mc_standard_error<F>(draws: &[f64], estimator: F) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let size = draws.len() / MC_BATCHES;
    if size < 10 {
        return Err(Error::Estimation(format!(
            "{} draws are too few for {MC_BATCHES} batches",
            draws.len()
        )));
    }
    let est = draws
        .chunks_exact(size)
        .take(MC_BATCHES)
        .map(&estimator)
        .collect::<Result<Vec<f64>>>()?;
    if est.iter().all(|&e| e == est[0]) {
        return Ok(0.0);
    }
    let b = est.len() as f64;
    let mean = est.iter().sum::<f64>() / b;
    let var = est.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (b - 1.0);
    Ok((var / b).sqrt())
}

fn check_prior(draws: &PosteriorDraws, prior: &PriorSpec) -> Result<()> {
    if draws.delta_prior != *prior {
        return Err(Error::Configuration(format!(
            "draws were sampled under prior {} but the Bayes factor uses {}",
            draws.delta_prior, prior
        )));
    }
    Ok(())
}

/// Savage-Dickey ratio for `H0: delta = delta0` from posterior draws.
pub fn savage_dickey_bf(
    draws: &PosteriorDraws,
    prior: &PriorSpec,
    delta0: f64,
) -> Result<BayesFactorResult> {
    check_prior(draws, prior)?;
    Ok(
        savage_dickey_from_delta(&draws.pooled_delta(), prior, delta0)?
            .with_convergence(draws.converged),
    )
}

/// Savage-Dickey ratio from raw delta draws (no convergence information).
pub fn savage_dickey_from_delta(
    delta: &[f64],
    prior: &PriorSpec,
    delta0: f64,
) -> Result<BayesFactorResult> {
    let hypothesis = HypothesisSpec::point(delta0)?;
    let est = density::fit_density(delta)?;
    let prior_ordinate = prior.pdf(delta0)?;
    let sens = density::bandwidth_sensitivity(&est, delta0);
    let posterior_ordinate = sens.default;
    let bf01 = posterior_ordinate / prior_ordinate;
    let h = est.bandwidth();
    let se = mc_standard_error(delta, |batch| {
        Ok(density::kde_at(batch, h, delta0) / prior_ordinate)
    })?;
    let mut result = BayesFactorResult::from_bf01(
        Method::SavageDickey,
        hypothesis,
        bf01,
        Components::SavageDickey {
            delta0,
            prior_ordinate,
            posterior_ordinate,
            sensitivity: sens,
            bf01_half_bandwidth: sens.half / prior_ordinate,
            bf01_double_bandwidth: sens.double / prior_ordinate,
        },
    )
    .with_mc_se(se);
    if posterior_ordinate == 0.0 {
        result
            .warnings
            .push("posterior ordinate underflowed to zero; bf10 is unbounded".into());
    }
    Ok(result)
}

/// Which region a draw falls in: `Some(true)` for H0, `Some(false)` for H1,
/// `None` for neither (only the boundary `|delta| = epsilon`).
fn region(hypothesis: &HypothesisSpec, d: f64) -> Option<bool> {
    match *hypothesis {
        HypothesisSpec::Directional {
            direction: Direction::Positive,
        } => Some(d <= 0.0),
        HypothesisSpec::Directional {
            direction: Direction::Negative,
        } => Some(d >= 0.0),
        HypothesisSpec::IntervalNull { epsilon } => {
            let a = d.abs();
            if a < epsilon {
                Some(true)
            } else if a > epsilon {
                Some(false)
            } else {
                None
            }
        }
        HypothesisSpec::PointNull { .. } => None,
    }
}

/// Prior mass of H0 and H1 under the encompassing prior.
fn prior_masses(hypothesis: &HypothesisSpec, prior: &PriorSpec) -> Result<(f64, f64)> {
    match *hypothesis {
        HypothesisSpec::Directional { direction } => {
            let below = prior.cdf(0.0);
            Ok(match direction {
                Direction::Positive => (below, 1.0 - below),
                Direction::Negative => (1.0 - below, below),
            })
        }
        HypothesisSpec::IntervalNull { epsilon } => {
            let inside = prior.cdf(epsilon) - prior.cdf(-epsilon);
            Ok((inside, 1.0 - inside))
        }
        HypothesisSpec::PointNull { .. } => Err(Error::Configuration(
            "point nulls use the Savage-Dickey ratio, not encompassing priors".into(),
        )),
    }
}

fn counts(hypothesis: &HypothesisSpec, delta: &[f64]) -> (usize, usize) {
    delta
        .iter()
        .fold((0, 0), |(h0, h1), &d| match region(hypothesis, d) {
            Some(true) => (h0 + 1, h1),
            Some(false) => (h0, h1 + 1),
            None => (h0, h1),
        })
}

/// Encompassing-prior Bayes factor from raw delta draws for a directional or
/// interval hypothesis.
pub fn encompassing_from_delta(
    delta: &[f64],
    prior: &PriorSpec,
    hypothesis: HypothesisSpec,
) -> Result<BayesFactorResult> {
    if let HypothesisSpec::IntervalNull { epsilon } = hypothesis {
        HypothesisSpec::interval(epsilon)?;
    }
    let (prior_h0, prior_h1) = prior_masses(&hypothesis, prior)?;
    if delta.is_empty() {
        return Err(Error::Estimation("no draws".into()));
    }
    let n = delta.len();
    let (count_h0, count_h1) = counts(&hypothesis, delta);
    let posterior_h0 = count_h0 as f64 / n as f64;
    let posterior_h1 = count_h1 as f64 / n as f64;
    let b0e = posterior_h0 / prior_h0;
    let b1e = posterior_h1 / prior_h1;
    let bf01 = b0e / b1e;

    let se = mc_standard_error(delta, |batch| {
        let (c0, c1) = counts(&hypothesis, batch);
        Ok((c0 as f64 / prior_h0) / (c1 as f64 / prior_h1))
    })?;

    let mut result = BayesFactorResult::from_bf01(
        Method::Encompassing,
        hypothesis,
        bf01,
        Components::Encompassing {
            prior_h0,
            prior_h1,
            posterior_h0,
            posterior_h1,
            b0e,
            b1e,
            count_h0,
            count_h1,
            n_draws: n,
        },
    )
    .with_mc_se(se);
    if count_h0 == 0 || count_h1 == 0 {
        result.warnings.push(format!(
            "finite-sample limit: {count_h0} draws agree with H0 and {count_h1} with H1 out of {n}; \
             the Bayes factor is unbounded"
        ));
    }
    Ok(result)
}

/// Directional test (H1: delta on the chosen side of zero) by encompassing priors.
pub fn encompassing_directional_bf(
    draws: &PosteriorDraws,
    prior: &PriorSpec,
    direction: Direction,
) -> Result<BayesFactorResult> {
    check_prior(draws, prior)?;
    Ok(encompassing_from_delta(
        &draws.pooled_delta(),
        prior,
        HypothesisSpec::Directional { direction },
    )?
    .with_convergence(draws.converged))
}

/// Interval-null test `|delta| < epsilon` against `|delta| > epsilon`.
pub fn encompassing_interval_bf(
    draws: &PosteriorDraws,
    prior: &PriorSpec,
    epsilon: f64,
) -> Result<BayesFactorResult> {
    check_prior(draws, prior)?;
    let hypothesis = HypothesisSpec::interval(epsilon)?;
    Ok(
        encompassing_from_delta(&draws.pooled_delta(), prior, hypothesis)?
            .with_convergence(draws.converged),
    )
}

/// Dispatches on the hypothesis kind.
pub fn bayes_factor(
    draws: &PosteriorDraws,
    prior: &PriorSpec,
    hypothesis: HypothesisSpec,
) -> Result<BayesFactorResult> {
    match hypothesis {
        HypothesisSpec::PointNull { delta0 } => savage_dickey_bf(draws, prior, delta0),
        HypothesisSpec::Directional { direction } => {
            encompassing_directional_bf(draws, prior, direction)
        }
        HypothesisSpec::IntervalNull { epsilon } => encompassing_interval_bf(draws, prior, epsilon),
    }
}

/// Log of the JZS denominator integrand in the `g` variable.
fn jzs_log_integrand(g: f64, t2: f64, n: f64, r2: f64, nu: f64) -> f64 {
    let a = 1.0 + n * g * r2;
    -0.5 * a.ln()
        - 0.5 * (nu + 1.0) * (t2 / (a * nu)).ln_1p()
        - 0.5 * (2.0 * PI).ln()
        - 1.5 * g.ln()
        - 0.5 / g
}

/// Same integrand after `u = g / (1 + g)`, as a function of `w = ln g`.
fn jzs_log_integrand_u(w: f64, t2: f64, n: f64, r2: f64, nu: f64) -> f64 {
    let g = w.exp();
    // du = dg / (1 + g)^2
    jzs_log_integrand(g, t2, n, r2, nu) + 2.0 * w.exp().ln_1p()
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// JZS Bayes factor for a one-sample t statistic with `n` observations and
/// `Cauchy(0, r)` effect-size prior.
///
/// The integral over `g in (0, inf)` is mapped to `u = g / (1 + g)` and
/// integrated with adaptive Gauss-Kronrod at relative tolerance `1e-8`. The
/// integrand is evaluated relative to its maximum so very large `|t|` or `n`
/// neither overflow nor underflow; `log_bf01` stays accurate even when `bf01`
/// itself does not fit in an `f64`.
pub fn jzs_bf(t: f64, n: usize, r: f64) -> Result<BayesFactorResult> {
    if !t.is_finite() {
        return Err(Error::param(format!("t must be finite, got {t}")));
    }
    if n < 2 {
        return Err(Error::param(format!("need N >= 2, got {n}")));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::param(format!(
            "prior scale r must be positive, got {r}"
        )));
    }
    let nf = n as f64;
    let nu = nf - 1.0;
    let t2 = t * t;
    let r2 = r * r;
    let log_numerator = -0.5 * (nu + 1.0) * (t2 / nu).ln_1p();

    let lu = |w: f64| jzs_log_integrand_u(w, t2, nf, r2, nu);
    // Locate the peak in ln g to scale the integrand and seed breakpoints.
    let (mut best_w, mut best) = (0.0, f64::NEG_INFINITY);
    let mut w = -12.0;
    while w <= 40.0 {
        let v = lu(w);
        if v > best {
            best = v;
            best_w = w;
        }
        w += 0.25;
    }
    let peak_w = golden_max(lu, best_w - 0.25, best_w + 0.25);
    let shift = lu(peak_w).max(best);

    let to_u = |w: f64| {
        let g = w.exp();
        g / (1.0 + g)
    };
    let mut breaks = vec![0.0];
    for off in [-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0] {
        let u = to_u(peak_w + off);
        if u > *breaks.last().unwrap() && u < 1.0 {
            breaks.push(u);
        }
    }
    breaks.push(1.0);

    let integrand = |u: f64| {
        if u <= 0.0 || u >= 1.0 {
            return 0.0;
        }
        let w = u.ln() - (-u).ln_1p();
        (lu(w) - shift).exp()
    };
    let q = quadrature::integrate(integrand, &breaks, 0.0, JZS_REL_TOL, JZS_MAX_INTERVALS)?;
    if !(q.value > 0.0) {
        return Err(Error::Quadrature {
            estimate: q.value,
            abs_error: q.abs_error,
            intervals: q.intervals,
        });
    }
    let log_denominator = shift + q.value.ln();
    let log_bf01 = log_numerator - log_denominator;

    Ok(BayesFactorResult::from_bf01(
        Method::Jzs,
        HypothesisSpec::PointNull { delta0: 0.0 },
        log_bf01.exp(),
        Components::Jzs {
            t,
            n,
            r,
            numerator: log_numerator.exp(),
            denominator: log_denominator.exp(),
            log_numerator,
            log_denominator,
            quadrature_error: q.abs_error / q.value,
            quadrature_intervals: q.intervals,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DistParams;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cauchy1() -> PriorSpec {
        PriorSpec::cauchy(1.0).unwrap()
    }

    fn prior_draws(seed: u64, n: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DistParams::cauchy(0.0, 1.0)
            .unwrap()
            .sample(&mut rng, n)
            .unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(compose_bf(3.7, 3.7).unwrap(), 1.0);
        assert_eq!(compose_bf(6.0, 2.0).unwrap(), 3.0);
        assert!(compose_bf(0.0, 2.0).is_err());
        assert!(compose_bf(1.0, -2.0).is_err());
        assert!(compose_bf(f64::INFINITY, 2.0).is_err());
    }

    #[test]
    fn hypothesis_parsing() {
        assert_eq!(
            "point".parse::<HypothesisSpec>().unwrap(),
            HypothesisSpec::PointNull { delta0: 0.0 }
        );
        assert_eq!(
            "point:0.5".parse::<HypothesisSpec>().unwrap(),
            HypothesisSpec::PointNull { delta0: 0.5 }
        );
        assert_eq!(
            "directional:negative".parse::<HypothesisSpec>().unwrap(),
            HypothesisSpec::Directional {
                direction: Direction::Negative
            }
        );
        assert_eq!(
            "interval:0.2".parse::<HypothesisSpec>().unwrap(),
            HypothesisSpec::IntervalNull { epsilon: 0.2 }
        );
        for bad in [
            "interval",
            "interval:0",
            "interval:-1",
            "point:nan",
            "sideways",
            "directional:up",
        ] {
            assert!(bad.parse::<HypothesisSpec>().is_err(), "{bad}");
        }
        for h in ["point:0.25", "directional:positive", "interval:0.1"] {
            assert_eq!(h.parse::<HypothesisSpec>().unwrap().to_string(), h);
        }
    }

    #[test]
    fn zero_centred_prior_splits_evenly() {
        let h = HypothesisSpec::Directional {
            direction: Direction::Positive,
        };
        assert_eq!(prior_masses(&h, &cauchy1()).unwrap(), (0.5, 0.5));
        assert_eq!(
            prior_masses(&h, &PriorSpec::normal(0.3).unwrap()).unwrap(),
            (0.5, 0.5)
        );
    }

    #[test]
    fn interval_prior_mass_closed_form() {
        let (inside, outside) =
            prior_masses(&HypothesisSpec::IntervalNull { epsilon: 0.2 }, &cauchy1()).unwrap();
        let expected = 2.0 * 0.2f64.atan() / PI;
        assert!((inside - expected).abs() < 1e-15);
        assert!((inside - 0.12566).abs() < 1e-5);
        assert!((inside + outside - 1.0).abs() < 1e-15);
    }

    #[test]
    fn prior_draws_give_unit_factors() {
        let d = prior_draws(5, 200_000);
        let sd = savage_dickey_from_delta(&d, &cauchy1(), 0.0).unwrap();
        assert!((sd.bf01 - 1.0).abs() < 0.1, "{}", sd.bf01);
        let dir = encompassing_from_delta(
            &d,
            &cauchy1(),
            HypothesisSpec::Directional {
                direction: Direction::Positive,
            },
        )
        .unwrap();
        assert!((dir.bf10 - 1.0).abs() < 0.1, "{}", dir.bf10);
        let int = encompassing_from_delta(
            &d,
            &cauchy1(),
            HypothesisSpec::IntervalNull { epsilon: 0.2 },
        )
        .unwrap();
        assert!((int.bf10 - 1.0).abs() < 0.1, "{}", int.bf10);
    }

    #[test]
    fn zero_evidential_draws_are_reported() {
        let d: Vec<f64> = (0..1000).map(|i| 1.0 + i as f64 * 1e-3).collect();
        let r = encompassing_from_delta(
            &d,
            &cauchy1(),
            HypothesisSpec::Directional {
                direction: Direction::Positive,
            },
        )
        .unwrap();
        assert_eq!(r.bf01, 0.0);
        assert_eq!(r.bf10, f64::INFINITY);
        assert!(!r.warnings.is_empty());
        match r.components {
            Components::Encompassing {
                count_h0, count_h1, ..
            } => assert_eq!((count_h0, count_h1), (0, 1000)),
            _ => unreachable!(),
        }
        let json = serde_json::to_string(&r).unwrap();
        let back: BayesFactorResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back.bf10, f64::INFINITY);
    }

    #[test]
    fn encompassing_rejects_bad_inputs() {
        let d = prior_draws(1, 1000);
        assert!(encompassing_from_delta(
            &d,
            &cauchy1(),
            HypothesisSpec::IntervalNull { epsilon: 0.0 }
        )
        .is_err());
        assert!(
            encompassing_from_delta(&d, &cauchy1(), HypothesisSpec::PointNull { delta0: 0.0 })
                .is_err()
        );
        assert!(encompassing_from_delta(
            &d[..100],
            &cauchy1(),
            HypothesisSpec::IntervalNull { epsilon: 0.2 }
        )
        .is_err());
    }

    #[test]
    fn mc_se_edge_cases() {
        let d = prior_draws(2, 1000);
        assert_eq!(mc_standard_error(&d, |_| Ok(4.2)).unwrap(), 0.0);
        assert!(mc_standard_error(&d[..150], |_| Ok(1.0)).is_err());
    }

    #[test]
    fn jzs_symmetric_in_t() {
        for (t, n, r) in [(2.57, 10, 1.0), (0.3, 45, 0.707), (7.5, 200, 2.0)] {
            let a = jzs_bf(t, n, r).unwrap();
            let b = jzs_bf(-t, n, r).unwrap();
            assert_eq!(a.bf01, b.bf01);
        }
    }

    #[test]
    fn jzs_null_t_favours_null() {
        for n in [2, 5, 10, 100, 10_000] {
            for r in [0.1, 0.707, 1.0, 3.0] {
                let b = jzs_bf(0.0, n, r).unwrap();
                assert!(b.bf01 > 1.0, "n={n} r={r}: {}", b.bf01);
            }
        }
    }

    #[test]
    fn jzs_independent_quadrature_values() {
        // Reference values from an independent adaptive quadrature of the
        // integral over g in (0, inf).
        let cases = [
            (2.570473466625937, 10, 1.0, 0.41647525927703233f64.ln()),
            (0.0, 10, 1.0, 4.30429109491905f64.ln()),
            (0.0, 20, 1.0, 1.768564260157077),
            (0.0, 50, 1.0, 2.2008895455376876),
            (0.0, 80, 1.0, 2.428936197872112),
        ];
        for (t, n, r, expected) in cases {
            let got = jzs_bf(t, n, r).unwrap().log_bf01();
            assert!(
                (got - expected).abs() < 1e-6,
                "t={t} n={n}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn jzs_extreme_inputs_stay_finite_in_log() {
        let b = jzs_bf(50.0, 1_000_000, 1.0).unwrap();
        assert!(b.log_bf01().is_finite());
        assert!(b.log_bf01() < -1000.0);
        let b = jzs_bf(0.0, 1_000_000, 1.0).unwrap();
        // Large-N limit: B01 ~ sqrt(pi N / 2) / r.
        let approx = (PI * 1e6 / 2.0).sqrt().ln();
        assert!((b.log_bf01() - approx).abs() < 1e-2);
    }

    #[test]
    fn jzs_rejects_bad_inputs() {
        assert!(jzs_bf(1.0, 1, 1.0).is_err());
        assert!(jzs_bf(1.0, 10, 0.0).is_err());
        assert!(jzs_bf(f64::NAN, 10, 1.0).is_err());
    }

    #[test]
    fn reciprocity() {
        let d = prior_draws(9, 5000);
        let rs = [
            jzs_bf(1.3, 12, 1.0).unwrap(),
            savage_dickey_from_delta(&d, &cauchy1(), 0.3).unwrap(),
            encompassing_from_delta(
                &d,
                &cauchy1(),
                HypothesisSpec::IntervalNull { epsilon: 0.5 },
            )
            .unwrap(),
        ];
        for r in rs {
            assert!((r.bf01 * r.bf10 - 1.0).abs() < 1e-12);
        }
    }
}
