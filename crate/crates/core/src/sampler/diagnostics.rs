//! Convergence diagnostics over completed chains: split-R-hat and
//! multi-chain effective sample size (Geyer initial positive sequence).

use crate::error::{Error, Result};

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn var(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() as f64 - 1.0)
}

fn equal_lengths<C: AsRef<[f64]>>(chains: &[C], min_len: usize) -> Result<usize> {
    let n = chains
        .first()
        .map(|c| c.as_ref().len())
        .ok_or_else(|| Error::Shape("no chains".into()))?;
    if chains.iter().any(|c| c.as_ref().len() != n) {
        return Err(Error::Shape("chains have different lengths".into()));
    }
    if n < min_len {
        return Err(Error::Shape(format!(
            "chains need at least {min_len} draws, got {n}"
        )));
    }
    Ok(n)
}

/// Split-chain potential scale reduction factor.
///
/// Each chain is cut in half (dropping the middle draw of odd-length chains)
/// and the classic between/within variance ratio is computed over the halves.
/// Zero within-chain variance with identical chain means reports `1.0`.
pub fn gelman_rubin<C: AsRef<[f64]>>(chains: &[C]) -> Result<f64> {
    if chains.len() < 2 {
        return Err(Error::Shape("R-hat needs at least two chains".into()));
    }
    let n = equal_lengths(chains, 4)?;
    let half = n / 2;
    let mut halves: Vec<&[f64]> = Vec::with_capacity(2 * chains.len());
    for c in chains {
        let c = c.as_ref();
        halves.push(&c[..half]);
        halves.push(&c[n - half..]);
    }
    let means: Vec<f64> = halves.iter().map(|h| mean(h)).collect();
    let within = halves.iter().map(|h| var(h)).sum::<f64>() / halves.len() as f64;
    let between_over_n = var(&means);
    if within == 0.0 {
        return Ok(if between_over_n == 0.0 {
            1.0
        } else {
            f64::INFINITY
        });
    }
    let h = half as f64;
    let var_plus = (h - 1.0) / h * within + between_over_n;
    Ok((var_plus / within).sqrt())
}

/// Effective sample size across one or more chains of equal length.
///
/// Autocorrelations are combined across chains as in Stan, then summed in
/// adjacent pairs until a pair goes non-positive, with pair sums forced to be
/// non-increasing. The result is capped at the total number of draws; a
/// constant chain reports `1.0`.
pub fn effective_sample_size<C: AsRef<[f64]>>(chains: &[C]) -> Result<f64> {
    let n = equal_lengths(chains, 10)?;
    let m = chains.len();
    let total = (n * m) as f64;
    let nf = n as f64;

    let centered: Vec<Vec<f64>> = chains
        .iter()
        .map(|c| {
            let c = c.as_ref();
            let mu = mean(c);
            c.iter().map(|x| x - mu).collect()
        })
        .collect();
    let autocov = |lag: usize| -> f64 {
        centered
            .iter()
            .map(|c| {
                c[..n - lag]
                    .iter()
                    .zip(&c[lag..])
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    / nf
            })
            .sum::<f64>()
            / m as f64
    };

    let acov0 = autocov(0);
    let within = acov0 * nf / (nf - 1.0);
    let mut var_plus = within * (nf - 1.0) / nf;
    if m > 1 {
        let means: Vec<f64> = chains.iter().map(|c| mean(c.as_ref())).collect();
        var_plus += var(&means);
    }
    if !(var_plus > 0.0) {
        return Ok(1.0);
    }
    let rho = |lag: usize| 1.0 - (within - autocov(lag)) / var_plus;

    let mut tau = -1.0;
    let mut prev_pair = f64::INFINITY;
    let mut lag = 0;
    while lag + 1 < n - 2 {
        let pair = if lag == 0 {
            1.0 + rho(1)
        } else {
            rho(lag) + rho(lag + 1)
        };
        if pair <= 0.0 {
            break;
        }
        let pair = pair.min(prev_pair);
        tau += 2.0 * pair;
        prev_pair = pair;
        lag += 2;
    }
    let ess = if tau > 0.0 { total / tau } else { total };
    Ok(ess.min(total))
}
