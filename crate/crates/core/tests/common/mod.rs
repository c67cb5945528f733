#![allow(dead_code)]

use bfkit::{ObservedSample, SamplerSettings};

pub const SLEEP: [f64; 10] = [0.7, -1.1, -0.2, 1.2, 0.1, 3.4, 3.7, 0.8, 1.8, 2.0];
pub const RATS_RAW: [f64; 10] = [62., 60., 56., 63., 56., 63., 59., 56., 44., 61.];
pub const RATS_ROASTED: [f64; 10] = [57., 56., 49., 61., 55., 61., 57., 54., 62., 58.];

// Independent reference values: 2-D adaptive quadrature of the marginal
// likelihoods (sleep, rats) and of the JZS integral over g.
pub const SLEEP_T: f64 = 2.570_473_466_625_937;
pub const SLEEP_BF01_CAUCHY: f64 = 0.403_381;
pub const SLEEP_BF01_NORMAL: f64 = 0.287_402;
pub const SLEEP_JZS_BF01: f64 = 0.416_475_259_277_032;

pub fn sleep() -> ObservedSample {
    ObservedSample::one_sample(SLEEP.to_vec()).unwrap()
}

pub fn rats() -> ObservedSample {
    ObservedSample::two_sample(RATS_RAW.to_vec(), RATS_ROASTED.to_vec()).unwrap()
}

pub fn settings(seed: u64, n_keep: usize) -> SamplerSettings {
    SamplerSettings {
        n_keep,
        ..SamplerSettings::with_seed(seed)
    }
}

/// One-sample Kolmogorov-Smirnov distance against `cdf`.
pub fn ks_distance(draws: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut v = draws.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov-Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Closed-form BF01 of the fixed-sigma normal model with a `N(0, tau2)`
/// prior on the mean.
pub fn conjugate_bf01(z: &[f64], tau2: f64) -> f64 {
    let n = z.len() as f64;
    let zbar = z.iter().sum::<f64>() / n;
    let a = 1.0 + n * tau2;
    a.sqrt() * (-(n * n * tau2 * zbar * zbar) / (2.0 * a)).exp()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
