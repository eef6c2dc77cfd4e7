//! Published entropy estimators used as comparison baselines: the plug-in
//! (maximum likelihood) estimator, the coverage-adjusted estimator of Chao &
//! Shen (2003), the NSB estimator in its large event-space form, and the
//! asymptotic NSB formula of Nemenman (2011) for severely undersampled data.

use crate::error::{Error, Result};
use crate::estimators::PosteriorKernel;
use crate::model::{ConcentrationPrior, CountVector};
use crate::quad;
use crate::specfun::{digamma, trigamma};

/// Plug-in (maximum likelihood) entropy: −Σ (n_i/N) ln(n_i/N).
pub fn plugin_entropy(n: &CountVector) -> Result<f64> {
    let total = n.total();
    if total == 0 {
        return Err(Error::InvalidArgument("plug-in entropy needs at least one sample".into()));
    }
    let total = total as f64;
    let mut h = 0.0;
    for count in n.positive_counts() {
        let p = count as f64 / total;
        h -= p * p.ln();
    }
    Ok(h)
}

/// Coverage-adjusted entropy (Chao & Shen 2003): sample coverage is
/// estimated from the singleton count as Ĉ = 1 − f₁/(N + 1), frequencies are
/// shrunk to p̃_i = Ĉ n_i/N, and each term gets the Horvitz–Thompson
/// correction 1/(1 − (1 − p̃_i)^N) for its detection probability.
pub fn cae_entropy(n: &CountVector) -> Result<f64> {
    let total = n.total();
    if total == 0 {
        return Err(Error::InvalidArgument(
            "coverage-adjusted entropy needs at least one sample".into(),
        ));
    }
    let big_n = total as f64;
    let singletons = n.positive_counts().iter().filter(|&&c| c == 1).count() as f64;
    let coverage = 1.0 - singletons / (big_n + 1.0);
    let mut h = 0.0;
    for count in n.positive_counts() {
        let p = coverage * count as f64 / big_n;
        let miss = (big_n * f64::ln_1p(-p)).exp(); // (1 − p̃)^N via ln_1p for tiny p̃
        h -= p * p.ln() / (1.0 - miss);
    }
    Ok(h)
}

/// NSB entropy estimate in the large event-space regime: a ratio of
/// integrals over the concentration, each term weighted by the size
/// likelihood at m = k_bins and by the density dξ/dc of the induced prior on
/// the a-priori expected entropy ξ(c).
pub fn nsb_large_z_entropy(n: &CountVector, k_bins: usize) -> Result<f64> {
    if n.total() == 0 {
        return Err(Error::InvalidArgument("NSB estimate needs at least one sample".into()));
    }
    if k_bins < n.support_size().max(1) {
        return Err(Error::InvalidArgument(format!(
            "event-space size {k_bins} is below the observed support {}",
            n.support_size()
        )));
    }
    let k = k_bins as f64;
    // wide coverage of the concentration axis; ξ(c) spans (0, ln k) over it
    let c_hi = (k_bins as f64) * 1e4;
    let grid = quad::c_grid(
        &ConcentrationPrior::log_uniform(1e-6, c_hi)?,
        480,
    )?;
    let mut w_max = f64::NEG_INFINITY;
    let mut w_sum = 0.0;
    let mut h_sum = 0.0;
    for &(c, lw_node) in grid.nodes() {
        let kernel = PosteriorKernel::new(n, c)?;
        // flat prior on ξ: weight P(n|c,k)·dξ/dc, with the log-uniform node
        // weight compensated by a factor c
        let dxi_dc = trigamma(c + 1.0)? - trigamma(c / k + 1.0)? / k;
        if dxi_dc <= 0.0 {
            continue;
        }
        let lw = lw_node + c.ln() + dxi_dc.ln() + kernel.log_likelihood(k_bins);
        if lw > w_max {
            let scale = (w_max - lw).exp();
            w_sum *= scale;
            h_sum *= scale;
            w_max = lw;
        }
        let w = (lw - w_max).exp();
        w_sum += w;
        h_sum += w * kernel.entropy_mean(k_bins);
    }
    if w_sum == 0.0 {
        return Err(Error::InvalidArgument("NSB integrand vanished everywhere".into()));
    }
    Ok(h_sum / w_sum)
}

/// Asymptotic NSB estimator for severely undersampled data
/// (Nemenman 2011, Eq. 29): Ĥ = (γ − ln 2) + 2 ln N − ψ₀(Δ), where
/// Δ = N − M is the number of coincidences. Fails with
/// [`Error::NoCoincidences`] when every sample landed in its own bin.
pub fn asymptotic_nsb_entropy(n: &CountVector) -> Result<f64> {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    let total = n.total();
    if total == 0 {
        return Err(Error::InvalidArgument("NSB estimate needs at least one sample".into()));
    }
    let coincidences = total - n.support_size() as u64;
    if coincidences == 0 {
        return Err(Error::NoCoincidences);
    }
    let big_n = total as f64;
    Ok((EULER_GAMMA - 2.0f64.ln()) + 2.0 * big_n.ln() - digamma(coincidences as f64)?)
}
