//! Gaussian kernel density estimate of posterior draws, used to read off the
//! posterior ordinate at the null value.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_DRAWS: usize = 100;

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMethod {
    GaussianKde,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    draws: Vec<f64>,
    bandwidth: f64,
    method: DensityMethod,
}

/// Type-7 (linear interpolation) quantile of already sorted data.
pub(crate) fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Silverman's rule of thumb: `0.9 * min(sd, IQR / 1.34) * n^(-1/5)`.
///
/// Falls back to `sd` when the IQR is zero.
pub fn silverman_bandwidth(draws: &[f64]) -> Result<f64> {
    let n = draws.len();
    if n < 2 {
        return Err(Error::Estimation("need at least two draws".into()));
    }
    let mean = draws.iter().sum::<f64>() / n as f64;
    let sd = (draws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n as f64 - 1.0)).sqrt();
    if !(sd > 0.0) {
        return Err(Error::Estimation("draws have zero variance".into()));
    }
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    Ok(0.9 * spread * (n as f64).powf(-0.2))
}

/// Fits a Gaussian KDE with Silverman's bandwidth.
pub fn fit_density(draws: &[f64]) -> Result<DensityEstimate> {
    if draws.len() < MIN_DRAWS {
        return Err(Error::Estimation(format!(
            "need at least {MIN_DRAWS} draws, got {}",
            draws.len()
        )));
    }
    if draws.iter().any(|x| !x.is_finite()) {
        return Err(Error::Estimation("draws contain non-finite values".into()));
    }
    let bandwidth = silverman_bandwidth(draws)?;
    Ok(DensityEstimate {
        draws: draws.to_vec(),
        bandwidth,
        method: DensityMethod::GaussianKde,
    })
}

impl DensityEstimate {
    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn method(&self) -> DensityMethod {
        self.method
    }

    pub fn draws(&self) -> &[f64] {
        &self.draws
    }

    /// Same draws, bandwidth multiplied by `factor`.
    pub fn with_bandwidth_factor(&self, factor: f64) -> Result<Self> {
        let bandwidth = self.bandwidth * factor;
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(Error::Estimation(format!("invalid bandwidth {bandwidth}")));
        }
        Ok(DensityEstimate {
            bandwidth,
            ..self.clone()
        })
    }

    pub fn density_at(&self, point: f64) -> f64 {
        kde_at(&self.draws, self.bandwidth, point)
    }

    pub fn density_curve(&self, grid: &[f64]) -> Vec<(f64, f64)> {
        grid.iter().map(|&x| (x, self.density_at(x))).collect()
    }
}

/// Exact Gaussian KDE sum at `point` for an arbitrary bandwidth.
pub fn kde_at(draws: &[f64], bandwidth: f64, point: f64) -> f64 {
    let inv_h = 1.0 / bandwidth;
    let sum: f64 = draws
        .iter()
        .map(|&x| {
            let u = (point - x) * inv_h;
            (-0.5 * u * u).exp()
        })
        .sum();
    sum * INV_SQRT_2PI * inv_h / draws.len() as f64
}

pub fn density_at(est: &DensityEstimate, point: f64) -> f64 {
    est.density_at(point)
}

pub fn density_curve(est: &DensityEstimate, grid: &[f64]) -> Vec<(f64, f64)> {
    est.density_curve(grid)
}

/// Writes `x,density` rows.
pub fn write_curve_csv<W: Write>(curve: &[(f64, f64)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::Configuration(format!("writing density curve: {e}"));
    w.write_record(["x", "density"]).map_err(err)?;
    for (x, d) in curve {
        w.write_record([x.to_string(), d.to_string()])
            .map_err(err)?;
    }
    w.flush()
        .map_err(|e| Error::Configuration(format!("writing density curve: {e}")))?;
    Ok(())
}

/// Ordinate at a point under 0.5x, 1x and 2x the fitted bandwidth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandwidthSensitivity {
    pub bandwidth: f64,
    pub half: f64,
    pub default: f64,
    pub double: f64,
}

pub fn bandwidth_sensitivity(est: &DensityEstimate, point: f64) -> BandwidthSensitivity {
    let h = est.bandwidth;
    BandwidthSensitivity {
        bandwidth: h,
        half: kde_at(&est.draws, 0.5 * h, point),
        default: kde_at(&est.draws, h, point),
        double: kde_at(&est.draws, 2.0 * h, point),
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n).map(|i| lo + step * i as f64).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DistParams;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn normal_draws(seed: u64, n: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DistParams::normal(0.0, 1.0)
            .unwrap()
            .sample(&mut rng, n)
            .unwrap()
    }

    fn trapezoid(curve: &[(f64, f64)]) -> f64 {
        curve
            .windows(2)
            .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
            .sum()
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(matches!(
            fit_density(&[1.0; 500]),
            Err(Error::Estimation(_))
        ));
        assert!(fit_density(&[0.0, 1.0, 2.0]).is_err());
        let mut v = normal_draws(1, 200);
        v[3] = f64::NAN;
        assert!(fit_density(&v).is_err());
    }

    #[test]
    fn silverman_rule_by_hand() {
        // sd = 1.5811, IQR (type 7) = 4 - 2 = 2, min(1.5811, 1.4925) = 1.4925
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let h = silverman_bandwidth(&x).unwrap();
        let expected = 0.9 * (2.0 / 1.34) * 5f64.powf(-0.2);
        assert!((h - expected).abs() < 1e-14);
    }

    #[test]
    fn recovers_standard_normal_at_mode() {
        let est = fit_density(&normal_draws(2, 100_000)).unwrap();
        let d = est.density_at(0.0);
        assert!((d - 0.398_942_3).abs() < 0.015, "{d}");
    }

    #[test]
    fn recovers_uniform_interior() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let draws: Vec<f64> = (0..100_000).map(|_| rng.random::<f64>()).collect();
        let est = fit_density(&draws).unwrap();
        let d = est.density_at(0.5);
        assert!((d - 1.0).abs() < 0.05, "{d}");
    }

    #[test]
    fn far_tail_is_negligible() {
        let draws = normal_draws(4, 1000);
        let est = fit_density(&draws).unwrap();
        let max = draws.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(est.density_at(max + 50.0) < 1e-12);
    }

    #[test]
    fn symmetric_draws_give_symmetric_density() {
        let half = normal_draws(5, 500);
        let draws: Vec<f64> = half.iter().flat_map(|&x| [x, -x]).collect();
        let est = fit_density(&draws).unwrap();
        for a in [0.1, 0.7, 1.3, 2.9] {
            assert!((est.density_at(a) - est.density_at(-a)).abs() < 1e-12);
        }
    }

    #[test]
    fn curve_edge_cases() {
        let est = fit_density(&normal_draws(6, 1000)).unwrap();
        assert!(est.density_curve(&[]).is_empty());
        let c = est.density_curve(&[0.0]);
        assert_eq!(c, vec![(0.0, est.density_at(0.0))]);
    }

    #[test]
    fn curve_integrates_to_one() {
        let draws = normal_draws(7, 100_000);
        let est = fit_density(&draws).unwrap();
        let lo = draws.iter().cloned().fold(f64::INFINITY, f64::min) - 5.0 * est.bandwidth();
        let hi = draws.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 5.0 * est.bandwidth();
        let curve = est.density_curve(&linspace(lo, hi, 2000));
        let area = trapezoid(&curve);
        assert!((area - 1.0).abs() < 0.01, "{area}");
        assert!(curve.iter().all(|&(_, d)| d >= 0.0));
    }

    #[test]
    fn mode_error_shrinks_with_n() {
        let truth = 0.398_942_3;
        let small = fit_density(&normal_draws(8, 1000)).unwrap().density_at(0.0);
        let large = fit_density(&normal_draws(8, 100_000))
            .unwrap()
            .density_at(0.0);
        assert!((large - truth).abs() < (small - truth).abs());
    }

    #[test]
    fn sensitivity_triple() {
        let est = fit_density(&normal_draws(9, 5000)).unwrap();
        let s = bandwidth_sensitivity(&est, 0.0);
        assert_eq!(s.default, est.density_at(0.0));
        assert_eq!(s.bandwidth, est.bandwidth());
        // Oversmoothing flattens the mode.
        assert!(s.double < s.default);
    }

    #[test]
    fn curve_csv() {
        let mut buf = Vec::new();
        write_curve_csv(&[(0.0, 0.5), (1.0, 0.25)], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "x,density\n0,0.5\n1,0.25\n"
        );
    }
}
