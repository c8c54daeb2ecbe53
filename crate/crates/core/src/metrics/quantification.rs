//! Measures comparing a true prevalence vector against an estimate.
//!
//! KLD and RAE divide by prevalences, so both distributions are first
//! pushed away from zero with additive smoothing, `ε = 1 / (2 |Te|)`,
//! where `|Te|` is the number of test items the true distribution was
//! counted over.

use crate::dataset::Distribution;
use crate::error::{Error, Result};

/// True and estimated distributions after additive smoothing.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedPair {
    pub p: Distribution,
    pub phat: Distribution,
    pub epsilon: f64,
}

fn smooth_one(d: &Distribution, epsilon: f64) -> Distribution {
    let norm = 1.0 + epsilon * d.scale().points() as f64;
    Distribution::new_unchecked(
        d.scale(),
        d.as_slice().iter().map(|v| (v + epsilon) / norm).collect(),
    )
}

pub fn smoothing_epsilon(test_size: usize) -> Result<f64> {
    if test_size == 0 {
        return Err(Error::NonpositiveTestSize);
    }
    Ok(1.0 / (2.0 * test_size as f64))
}

pub fn smooth(p: &Distribution, phat: &Distribution, test_size: usize) -> Result<SmoothedPair> {
    p.same_scale(phat)?;
    let epsilon = smoothing_epsilon(test_size)?;
    Ok(SmoothedPair {
        p: smooth_one(p, epsilon),
        phat: smooth_one(phat, epsilon),
        epsilon,
    })
}

/// Kullback-Leibler divergence of the estimate from the true
/// distribution, natural log, over smoothed prevalences. Always finite.
pub fn kld(p: &Distribution, phat: &Distribution, test_size: usize) -> Result<f64> {
    let s = smooth(p, phat, test_size)?;
    let sum = s
        .p
        .as_slice()
        .iter()
        .zip(s.phat.as_slice())
        .map(|(&ps, &qs)| ps * (ps / qs).ln())
        .sum::<f64>();
    // Rounding can leave a tiny negative value when the inputs are close.
    Ok(sum.max(0.0))
}

/// Absolute error averaged over classes.
pub fn ae(p: &Distribution, phat: &Distribution) -> Result<f64> {
    p.same_scale(phat)?;
    let n = p.scale().points() as f64;
    let sum: f64 = p
        .as_slice()
        .iter()
        .zip(phat.as_slice())
        .map(|(a, b)| (b - a).abs())
        .sum();
    Ok(sum / n)
}

/// Relative absolute error averaged over classes, evaluated on the same
/// smoothed prevalences as [`kld`].
pub fn rae(p: &Distribution, phat: &Distribution, test_size: usize) -> Result<f64> {
    let s = smooth(p, phat, test_size)?;
    let n = p.scale().points() as f64;
    let sum: f64 = s
        .p
        .as_slice()
        .iter()
        .zip(s.phat.as_slice())
        .map(|(&ps, &qs)| (qs - ps).abs() / ps)
        .sum();
    Ok(sum / n)
}

/// Earth Mover's Distance on a totally ordered scale with unit distance
/// between adjacent classes: the L1 distance between the two cumulative
/// distributions, computed in one pass.
pub fn emd(p: &Distribution, phat: &Distribution) -> Result<f64> {
    p.same_scale(phat)?;
    let k = p.scale().points();
    let mut cum_p = 0.0;
    let mut cum_q = 0.0;
    let mut total = 0.0;
    for (a, b) in p.as_slice()[..k - 1].iter().zip(&phat.as_slice()[..k - 1]) {
        cum_p += a;
        cum_q += b;
        total += (cum_q - cum_p).abs();
    }
    Ok(total)
}
