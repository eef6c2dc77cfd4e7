//! Inference over the event-space size: size likelihoods, the size
//! posterior, and the concentration at which the prior entropy variance
//! peaks.

use crate::error::{Error, Result};
use crate::estimators::PosteriorKernel;
use crate::model::{log_g, ConcentrationPrior, CountVector, SizePrior};
use crate::quad::{self, log_sum_exp};
use crate::specfun::{ln_gamma, trigamma};

/// ln P(n | c, m): the probability of the observed counts when the event
/// space has exactly m bins and the Dirichlet concentration is c.
pub fn log_likelihood_size(n: &CountVector, c: f64, m: usize) -> Result<f64> {
    if m < n.support_size().max(1) {
        return Err(Error::InvalidArgument(format!(
            "bin count m = {m} is below the observed support size M = {}",
            n.support_size()
        )));
    }
    Ok(PosteriorKernel::new(n, c)?.log_likelihood(m))
}

/// ln P(n | m) with the concentration integrated out under its prior.
pub fn log_likelihood_size_marginal_c(
    n: &CountVector,
    m: usize,
    c_prior: &ConcentrationPrior,
    nodes: usize,
) -> Result<f64> {
    if m < n.support_size().max(1) {
        return Err(Error::InvalidArgument(format!(
            "bin count m = {m} is below the observed support size M = {}",
            n.support_size()
        )));
    }
    let grid = quad::c_grid(c_prior, nodes)?;
    let terms: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&(c, lw)| PosteriorKernel::new(n, c).map(|k| lw + k.log_likelihood(m)))
        .collect::<Result<_>>()?;
    log_sum_exp(&terms)
}

/// Posterior over the event-space size.
#[derive(Debug, Clone)]
pub struct SizePosterior {
    /// (m, posterior probability) pairs in increasing m, summing to 1 up to
    /// the reported truncation tail.
    pub probabilities: Vec<(usize, f64)>,
    /// Posterior mean of m.
    pub mean: f64,
    /// Posterior mode of m.
    pub map: usize,
    /// Upper bound on the prior-plus-likelihood mass beyond the last term
    /// (nonzero only for unbounded size priors).
    pub truncation_tail: f64,
}

/// P(m | n) under a size prior and a concentration prior, computed term by
/// term as P(m)·P(n | m) and normalized.
pub fn size_posterior(
    n: &CountVector,
    size_prior: &SizePrior,
    c_prior: &ConcentrationPrior,
    nodes: usize,
) -> Result<SizePosterior> {
    let grid = quad::c_grid(c_prior, nodes)?;
    let kernel_cache: Vec<(f64, PosteriorKernel)> = grid
        .nodes()
        .iter()
        .map(|&(c, lw)| PosteriorKernel::new(n, c).map(|k| (lw, k)))
        .collect::<Result<_>>()?;
    let mut sizes = Vec::new();
    let mix = quad::size_mixture::<1>(size_prior, n.support_size(), |m| {
        let terms: Vec<f64> = kernel_cache
            .iter()
            .map(|(lw, k)| lw + k.log_likelihood(m))
            .collect();
        let ll = log_sum_exp(&terms).unwrap_or(f64::NEG_INFINITY);
        sizes.push(m);
        ([m as f64], ll)
    })?;

    // recompute per-m weights to expose the normalized posterior itself
    let mut log_weights = Vec::with_capacity(sizes.len());
    for &m in &sizes {
        let terms: Vec<f64> = kernel_cache
            .iter()
            .map(|(lw, k)| lw + k.log_likelihood(m))
            .collect();
        let lp = size_prior.log_prob(m);
        log_weights.push(lp + log_sum_exp(&terms)?);
    }
    let log_norm = log_sum_exp(&log_weights)?;
    let probabilities: Vec<(usize, f64)> = sizes
        .iter()
        .zip(&log_weights)
        .map(|(&m, &lw)| (m, (lw - log_norm).exp()))
        .collect();
    let map = probabilities
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|&(m, _)| m)
        .ok_or_else(|| Error::SupportExhausted("size posterior is empty".into()))?;
    Ok(SizePosterior {
        probabilities,
        mean: mix.expectations[0],
        map,
        truncation_tail: mix.tail_bound,
    })
}

/// Unnormalized log-likelihood of the size m under the subset-selection
/// model: the true event space is a uniformly random m-subset of a known
/// superset Ẑ. The binomial factor C(|Ẑ| − M, m − M) counts the subsets
/// consistent with the M occupied bins; the caller normalizes over m.
pub fn subset_log_likelihood(n: &CountVector, m: usize, zhat_size: usize, c: f64) -> Result<f64> {
    let big_m = n.support_size();
    if m < big_m.max(1) || m > zhat_size {
        return Err(Error::InvalidArgument(format!(
            "need M <= m <= |Zhat|, got M = {big_m}, m = {m}, |Zhat| = {zhat_size}"
        )));
    }
    let ln_choose = ln_gamma((zhat_size - big_m) as f64 + 1.0)?
        - ln_gamma((m - big_m) as f64 + 1.0)?
        - ln_gamma((zhat_size - m) as f64 + 1.0)?;
    Ok(ln_choose + log_g(n, c, m)?)
}

/// Variance of the entropy under the prior alone (no data), as a function of
/// c for an m-bin space.
pub fn prior_entropy_variance(c: f64, m: usize) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidArgument(format!("concentration must be positive, got {c}")));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("bin count must be positive".into()));
    }
    let a = c / m as f64;
    Ok((a + 1.0) / (c + 1.0) * trigamma(a + 1.0)? - trigamma(c + 1.0)?)
}

/// The concentration that maximizes the prior entropy variance for an m-bin
/// space, found by golden-section search on c in [1e-4, 1e2].
pub fn c_max(m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidArgument(
            "prior entropy variance is identically zero below 2 bins".into(),
        ));
    }
    let f = |c: f64| prior_entropy_variance(c, m).unwrap_or(f64::NEG_INFINITY);
    golden_section_max(f, 1e-4, 1e2, 1e-5)
}

fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    Ok(0.5 * (lo + hi))
}
