//! Density, CDF and sampling primitives for the univariate families used by
//! the models: Cauchy, half-Cauchy, Normal and Student-t.
//!
//! Everything here is a pure function of its arguments. Sampling takes an
//! explicit RNG so that callers own reproducibility.

use std::f64::consts::{FRAC_1_PI, PI};

use rand::Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;
use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Cauchy,
    /// Cauchy(0, scale) truncated to `[0, inf)`; the density is doubled there.
    HalfCauchy,
    /// `scale` is the standard deviation.
    Normal,
    StudentT,
}

/// A validated member of one of the supported families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistParams {
    family: Family,
    location: f64,
    scale: f64,
    dof: Option<f64>,
}

impl DistParams {
    pub fn cauchy(location: f64, scale: f64) -> Result<Self> {
        Self::new(Family::Cauchy, location, scale, None)
    }

    pub fn half_cauchy(scale: f64) -> Result<Self> {
        Self::new(Family::HalfCauchy, 0.0, scale, None)
    }

    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        Self::new(Family::Normal, mean, sd, None)
    }

    /// Standard Student-t with `dof` degrees of freedom.
    pub fn student_t(dof: f64) -> Result<Self> {
        Self::new(Family::StudentT, 0.0, 1.0, Some(dof))
    }

    pub fn new(family: Family, location: f64, scale: f64, dof: Option<f64>) -> Result<Self> {
        if !location.is_finite() {
            return Err(Error::param(format!(
                "location must be finite, got {location}"
            )));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::param(format!("scale must be positive, got {scale}")));
        }
        match (family, dof) {
            (Family::StudentT, Some(v)) if v > 0.0 && !v.is_nan() => {}
            (Family::StudentT, other) => {
                return Err(Error::param(format!(
                    "Student-t needs positive degrees of freedom, got {other:?}"
                )))
            }
            (_, Some(_)) => {
                return Err(Error::param("degrees of freedom only apply to Student-t"));
            }
            (Family::HalfCauchy, None) if location != 0.0 => {
                return Err(Error::param(
                    "half-Cauchy is truncated at zero; location must be 0",
                ));
            }
            _ => {}
        }
        Ok(DistParams {
            family,
            location,
            scale,
            dof,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn dof(&self) -> Option<f64> {
        self.dof
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::param(format!(
                "density argument must be finite, got {x}"
            )));
        }
        Ok(self.ln_pdf_unchecked(x).exp())
    }

    /// Log density; `-inf` outside the support. No finiteness check on `x`.
    pub fn ln_pdf_unchecked(&self, x: f64) -> f64 {
        let s = (x - self.location) / self.scale;
        let ln_scale = self.scale.ln();
        match self.family {
            Family::Cauchy => -(PI.ln()) - ln_scale - (s * s).ln_1p(),
            Family::HalfCauchy => {
                if x < 0.0 {
                    f64::NEG_INFINITY
                } else {
                    std::f64::consts::LN_2 - PI.ln() - ln_scale - (s * s).ln_1p()
                }
            }
            Family::Normal => -0.5 * (2.0 * PI).ln() - ln_scale - 0.5 * s * s,
            Family::StudentT => {
                let v = self.dof.expect("validated");
                ln_gamma(0.5 * (v + 1.0))
                    - ln_gamma(0.5 * v)
                    - 0.5 * (v * PI).ln()
                    - ln_scale
                    - 0.5 * (v + 1.0) * (s * s / v).ln_1p()
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x == f64::INFINITY {
            return 1.0;
        }
        if x == f64::NEG_INFINITY {
            return 0.0;
        }
        let s = (x - self.location) / self.scale;
        match self.family {
            Family::Cauchy => 0.5 + s.atan() * FRAC_1_PI,
            Family::HalfCauchy => {
                if x <= 0.0 {
                    0.0
                } else {
                    2.0 * s.atan() * FRAC_1_PI
                }
            }
            Family::Normal => 0.5 * erfc(-s / std::f64::consts::SQRT_2),
            Family::StudentT => {
                let v = self.dof.expect("validated");
                let upper = student_upper_tail(s.abs(), v);
                if s >= 0.0 {
                    1.0 - upper
                } else {
                    upper
                }
            }
        }
    }

    /// Draws `n` i.i.d. values.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::param("sample size must be at least 1"));
        }
        let mut out = Vec::with_capacity(n);
        match self.family {
            Family::Normal => {
                while out.len() < n {
                    let (a, b) = standard_normal_pair(rng);
                    out.push(self.location + self.scale * a);
                    if out.len() < n {
                        out.push(self.location + self.scale * b);
                    }
                }
            }
            Family::Cauchy => {
                for _ in 0..n {
                    let u: f64 = rng.random();
                    out.push(self.location + self.scale * (PI * (u - 0.5)).tan());
                }
            }
            Family::HalfCauchy => {
                for _ in 0..n {
                    let u: f64 = rng.random();
                    out.push(self.scale * (0.5 * PI * u).tan());
                }
            }
            Family::StudentT => {
                let t = rand_distr::StudentT::new(self.dof.expect("validated"))
                    .map_err(|e| Error::param(e.to_string()))?;
                for _ in 0..n {
                    out.push(self.location + self.scale * t.sample(rng));
                }
            }
        }
        Ok(out)
    }
}

/// Two independent standard normal deviates by the Marsaglia polar method.
pub fn standard_normal_pair<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    loop {
        let u = 2.0 * rng.random::<f64>() - 1.0;
        let v = 2.0 * rng.random::<f64>() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            let f = (-2.0 * s.ln() / s).sqrt();
            return (u * f, v * f);
        }
    }
}

/// A standard normal stream that keeps the spare deviate from each polar pair.
#[derive(Debug, Default, Clone)]
pub struct NormalStream {
    spare: Option<f64>,
}

impl NormalStream {
    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let (a, b) = standard_normal_pair(rng);
        self.spare = Some(b);
        a
    }
}

/// P(T > t) for t >= 0 computed directly from the incomplete beta function,
/// without the cancellation of `1 - F(t)`.
fn student_upper_tail(t: f64, dof: f64) -> f64 {
    if t == f64::INFINITY {
        return 0.0;
    }
    0.5 * beta_reg(0.5 * dof, 0.5, dof / (dof + t * t))
}

/// Upper-tail probability `1 - F(t)` of the Student-t distribution.
///
/// This is the one-sided quantity. For the two-sided p-value see
/// [`t_two_sided_p`].
pub fn t_tail_probability(t: f64, dof: f64) -> Result<f64> {
    if !(dof > 0.0) {
        return Err(Error::param(format!(
            "degrees of freedom must be positive, got {dof}"
        )));
    }
    if t.is_nan() {
        return Err(Error::param("t statistic is NaN"));
    }
    Ok(if t >= 0.0 {
        student_upper_tail(t, dof)
    } else {
        1.0 - student_upper_tail(-t, dof)
    })
}

/// `2 (1 - F(|t|))`.
pub fn t_two_sided_p(t: f64, dof: f64) -> Result<f64> {
    let upper = t_tail_probability(t.abs(), dof)?;
    Ok((2.0 * upper).min(1.0))
}
