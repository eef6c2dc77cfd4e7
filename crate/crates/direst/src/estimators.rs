//! Posterior moments of entropy, Tsallis entropy, mutual information and
//! multi-information under fixed and random (c, |Z|).
//!
//! The hyperprior over (c, |Z|) is independent by construction: the two
//! priors are separate fields of [`EstimatorConfig`]. That independence is
//! what makes the entropy decomposition of mutual information well defined.

use crate::error::{Error, Result};
use crate::model::{
    ConcentrationPrior, CountVector, Diagnostics, JointCountTable, MomentEstimate, SizePrior,
};
use crate::quad::{self, LogGrid};
use crate::specfun::{
    digamma_raw, digamma_shift, ln_gamma_ratio, ln_gamma_raw, trigamma_raw, trigamma_shift,
};

/// Hyperprior and quadrature settings for the fully marginalized estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    pub c_prior: ConcentrationPrior,
    pub size_prior: SizePrior,
    pub quad_nodes: usize,
}

impl EstimatorConfig {
    pub fn new(c_prior: ConcentrationPrior, size_prior: SizePrior) -> Self {
        Self { c_prior, size_prior, quad_nodes: quad::DEFAULT_NODES }
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.quad_nodes = nodes;
        self
    }
}

/// Functional whose posterior mean is being estimated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Functional {
    Entropy,
    /// Tsallis entropy with index q (q > 0, q ≠ 1).
    Tsallis(f64),
}

impl Functional {
    fn validate(&self) -> Result<()> {
        if let Functional::Tsallis(q) = *self {
            if !(q > 0.0) || q == 1.0 {
                return Err(Error::InvalidArgument(format!(
                    "Tsallis index must be positive and != 1, got {q}"
                )));
            }
        }
        Ok(())
    }
}

/// Per-(n, c) precomputation shared by every fixed-size posterior moment.
///
/// All quantities that depend only on the data and on c are evaluated once;
/// per-m evaluations then need a single digamma (and, for second moments, a
/// single trigamma) at a = c/m plus cheap recurrences over the counts.
pub(crate) struct PosteriorKernel {
    counts: Vec<u64>,
    c: f64,
    /// A = N + c
    a_total: f64,
    ln_gamma_c: f64,
    ln_gamma_nc: f64,
    /// Ψ⁽⁰⁾(N + c + 1)
    psi_n1: f64,
    /// Ψ⁽⁰⁾(N + c + 2)
    psi_n2: f64,
    /// Ψ⁽¹⁾(N + c + 2)
    psi1_n2: f64,
}

impl PosteriorKernel {
    pub(crate) fn new(n: &CountVector, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidArgument(format!("concentration must be positive, got {c}")));
        }
        let a_total = n.total() as f64 + c;
        Ok(Self {
            counts: n.positive_counts(),
            c,
            a_total,
            ln_gamma_c: ln_gamma_raw(c),
            ln_gamma_nc: ln_gamma_raw(a_total),
            psi_n1: digamma_raw(a_total + 1.0),
            psi_n2: digamma_raw(a_total + 2.0),
            psi1_n2: trigamma_raw(a_total + 2.0),
        })
    }

    /// ln P(n | c, m) = ln[ Γ(c)/Γ(c/m)^M · Π_i Γ(n_i + c/m) / Γ(N + c) ].
    pub(crate) fn log_likelihood(&self, m: usize) -> f64 {
        let a = self.c / m as f64;
        let mut s = self.ln_gamma_c - self.ln_gamma_nc;
        for &count in &self.counts {
            s += ln_gamma_ratio(a, count);
        }
        s
    }

    /// E(H | n, c, m), summed over the M occupied bins plus m − M empty ones.
    pub(crate) fn entropy_mean(&self, m: usize) -> f64 {
        let a = self.c / m as f64;
        let psi_a1 = digamma_raw(a + 1.0);
        let mut s = 0.0;
        for &count in &self.counts {
            let alpha = count as f64 + a;
            s += alpha * (digamma_shift(psi_a1, a, count) - self.psi_n1);
        }
        let empty = (m - self.counts.len()) as f64;
        if empty > 0.0 {
            s += empty * a * (psi_a1 - self.psi_n1);
        }
        let mean = -s / self.a_total;
        // entropy is non-negative; clip digamma round-off at the m = 1 edge
        if mean < 0.0 && mean > -1e-9 {
            0.0
        } else {
            mean
        }
    }

    /// E(H² | n, c, m). The cross-bin double sum is collapsed to O(M) with
    /// power sums; empty bins form one group of multiplicity m − M.
    pub(crate) fn entropy_second_moment(&self, m: usize) -> f64 {
        let a = self.c / m as f64;
        let big_a = self.a_total;
        let psi_a1 = digamma_raw(a + 1.0);
        let psi1_a2 = trigamma_raw(a + 2.0);

        let mut sum_f = 0.0;
        let mut sum_f2 = 0.0;
        let mut sum_alpha2 = 0.0;
        let mut self_terms = 0.0;

        for &count in &self.counts {
            let alpha = count as f64 + a;
            let f = alpha * (digamma_shift(psi_a1, a, count) - self.psi_n2);
            sum_f += f;
            sum_f2 += f * f;
            sum_alpha2 += alpha * alpha;
            let g2 = digamma_shift(psi_a1, a, count + 1) - self.psi_n2;
            let tri = trigamma_shift(psi1_a2, a, count);
            self_terms += alpha * (alpha + 1.0) * (g2 * g2 + tri - self.psi1_n2);
        }
        let empty = (m - self.counts.len()) as f64;
        if empty > 0.0 {
            let f = a * (psi_a1 - self.psi_n2);
            sum_f += empty * f;
            sum_f2 += empty * f * f;
            sum_alpha2 += empty * a * a;
            let g2 = psi_a1 + 1.0 / (a + 1.0) - self.psi_n2;
            self_terms += empty * a * (a + 1.0) * (g2 * g2 + psi1_a2 - self.psi1_n2);
        }

        let cross = sum_f * sum_f - sum_f2 - self.psi1_n2 * (big_a * big_a - sum_alpha2);
        (cross + self_terms) / (big_a * (big_a + 1.0))
    }

    /// E[(1 − Σ_i p_iᑫ)/(q − 1) | n, c, m] via Dirichlet power moments.
    pub(crate) fn tsallis_mean(&self, m: usize, q: f64) -> f64 {
        let a = self.c / m as f64;
        let big_a = self.a_total;
        let ln_common = ln_gamma_raw(big_a) - ln_gamma_raw(big_a + q);
        let mut power_sum = 0.0;
        for &count in &self.counts {
            let alpha = count as f64 + a;
            power_sum += (ln_gamma_raw(alpha + q) - ln_gamma_raw(alpha) + ln_common).exp();
        }
        let empty = (m - self.counts.len()) as f64;
        if empty > 0.0 {
            power_sum += empty * (ln_gamma_raw(a + q) - ln_gamma_raw(a) + ln_common).exp();
        }
        (1.0 - power_sum) / (q - 1.0)
    }

    fn functional_mean(&self, m: usize, functional: Functional) -> f64 {
        match functional {
            Functional::Entropy => self.entropy_mean(m),
            Functional::Tsallis(q) => self.tsallis_mean(m, q),
        }
    }
}

fn check_size(n: &CountVector, m: usize) -> Result<()> {
    let big_m = n.support_size();
    if m < big_m.max(1) {
        return Err(Error::InvalidArgument(format!(
            "bin count m = {m} is below the observed support size M = {big_m}"
        )));
    }
    Ok(())
}

/// Posterior mean entropy for fixed concentration and bin count.
pub fn entropy_mean_fixed(n: &CountVector, c: f64, m: usize) -> Result<f64> {
    check_size(n, m)?;
    Ok(PosteriorKernel::new(n, c)?.entropy_mean(m))
}

/// Posterior mean and variance of the entropy for fixed (c, m).
pub fn entropy_variance_fixed(n: &CountVector, c: f64, m: usize) -> Result<(f64, f64)> {
    check_size(n, m)?;
    let kernel = PosteriorKernel::new(n, c)?;
    let mean = kernel.entropy_mean(m);
    let second = kernel.entropy_second_moment(m);
    let mut var = second - mean * mean;
    if var < 0.0 && var > -1e-9 {
        var = 0.0;
    }
    Ok((mean, var))
}

/// Posterior mean Tsallis entropy of index q for fixed (c, m).
pub fn tsallis_mean_fixed(n: &CountVector, c: f64, m: usize, q: f64) -> Result<f64> {
    check_size(n, m)?;
    Functional::Tsallis(q).validate()?;
    Ok(PosteriorKernel::new(n, c)?.tsallis_mean(m, q))
}

/// Posterior mean entropy with fixed c and the bin count mixed over a size
/// prior; the mixture weight at each m is P(m)·P(n | c, m).
pub fn entropy_mean_unknown_size(
    n: &CountVector,
    c: f64,
    size_prior: &SizePrior,
) -> Result<MomentEstimate> {
    let kernel = PosteriorKernel::new(n, c)?;
    let mix = quad::size_mixture::<1>(size_prior, n.support_size(), |m| {
        ([kernel.entropy_mean(m)], kernel.log_likelihood(m))
    })?;
    Ok(MomentEstimate::mean_only(
        mix.expectations[0],
        Diagnostics { truncation_tail: mix.tail_bound, size_terms: mix.terms, quad_nodes: 1 },
    ))
}

/// Shared machinery for the fully marginalized estimators: mixture over m of
/// c-quadratures, with `WANT_SECOND` controlling whether the entropy second
/// moment is also accumulated.
fn mixture_full<const WANT_SECOND: bool>(
    n: &CountVector,
    config: &EstimatorConfig,
    functional: Functional,
) -> Result<MomentEstimate> {
    functional.validate()?;
    let grid = quad::c_grid(&config.c_prior, config.quad_nodes)?;
    let kernels: Vec<(f64, PosteriorKernel)> = grid
        .nodes()
        .iter()
        .map(|&(c, lw)| PosteriorKernel::new(n, c).map(|k| (lw, k)))
        .collect::<Result<_>>()?;

    let mix = quad::size_mixture::<2>(&config.size_prior, n.support_size(), |m| {
        // inner c-quadrature, streamed in log space
        let mut w_max = f64::NEG_INFINITY;
        let mut w_sum = 0.0;
        let mut p1 = 0.0;
        let mut p2 = 0.0;
        for (lw_node, kernel) in &kernels {
            let lw = lw_node + kernel.log_likelihood(m);
            if lw == f64::NEG_INFINITY {
                continue;
            }
            if lw > w_max {
                let scale = (w_max - lw).exp();
                w_sum *= scale;
                p1 *= scale;
                p2 *= scale;
                w_max = lw;
            }
            let w = (lw - w_max).exp();
            w_sum += w;
            p1 += w * kernel.functional_mean(m, functional);
            if WANT_SECOND {
                p2 += w * kernel.entropy_second_moment(m);
            }
        }
        if w_sum == 0.0 {
            ([0.0, 0.0], f64::NEG_INFINITY)
        } else {
            ([p1 / w_sum, p2 / w_sum], w_max + w_sum.ln())
        }
    })?;

    let diagnostics = Diagnostics {
        truncation_tail: mix.tail_bound,
        size_terms: mix.terms,
        quad_nodes: grid.len(),
    };
    if WANT_SECOND {
        Ok(MomentEstimate::with_second_moment(mix.expectations[0], mix.expectations[1], diagnostics))
    } else {
        Ok(MomentEstimate::mean_only(mix.expectations[0], diagnostics))
    }
}

/// Fully marginalized posterior mean and variance of the entropy: both the
/// concentration and the bin count are integrated out under the independent
/// hyperprior, applied to numerator and denominator separately.
pub fn entropy_moments_full(n: &CountVector, config: &EstimatorConfig) -> Result<MomentEstimate> {
    mixture_full::<true>(n, config, Functional::Entropy)
}

/// First moment only; same mixture as [`entropy_moments_full`] but skips the
/// second-moment work. Used by the simulation sweeps.
pub fn entropy_mean_full(n: &CountVector, config: &EstimatorConfig) -> Result<MomentEstimate> {
    mixture_full::<false>(n, config, Functional::Entropy)
}

/// Fully marginalized posterior mean Tsallis entropy (first moment only;
/// higher Tsallis moments do not reduce to per-bin power moments).
pub fn tsallis_mean_full(
    n: &CountVector,
    config: &EstimatorConfig,
    q: f64,
) -> Result<MomentEstimate> {
    mixture_full::<false>(n, config, Functional::Tsallis(q))
}

/// Posterior mean mutual information for a two-axis table at fixed c,
/// computed as E(H_X) + E(H_Y) − E(H_XY) with the same concentration on all
/// three spaces (marginalization consistency of the Dirichlet makes the
/// decomposition exact).
pub fn mi_mean_fixed(table: &JointCountTable, c: f64) -> Result<f64> {
    if table.dims().len() != 2 {
        return Err(Error::InvalidArgument(format!(
            "mutual information needs a 2-axis table, got {} axes",
            table.dims().len()
        )));
    }
    let nx = table.marginal_counts(0)?;
    let ny = table.marginal_counts(1)?;
    let nxy = table.flatten();
    let hx = entropy_mean_fixed(&nx, c, table.dims()[0])?;
    let hy = entropy_mean_fixed(&ny, c, table.dims()[1])?;
    let hxy = entropy_mean_fixed(&nxy, c, table.dims()[0] * table.dims()[1])?;
    Ok(hx + hy - hxy)
}

/// Multi-information Σ_i E(H_{X_i}) − E(H_joint) with every term fully
/// marginalized under its own hyperprior. Second moments are not computed
/// (the cross terms do not decompose).
pub fn multi_information(
    table: &JointCountTable,
    axis_configs: &[EstimatorConfig],
    joint_config: &EstimatorConfig,
) -> Result<MomentEstimate> {
    let k = table.dims().len();
    if axis_configs.len() != k {
        return Err(Error::InvalidArgument(format!(
            "got {} axis configs for a {k}-way table",
            axis_configs.len()
        )));
    }
    let mut mean = 0.0;
    let mut diagnostics = Diagnostics::default();
    for (axis, config) in axis_configs.iter().enumerate() {
        let est = entropy_mean_full(&table.marginal_counts(axis)?, config)?;
        mean += est.mean;
        diagnostics.size_terms += est.diagnostics.size_terms;
        diagnostics.truncation_tail = diagnostics.truncation_tail.max(est.diagnostics.truncation_tail);
    }
    let joint = entropy_mean_full(&table.flatten(), joint_config)?;
    mean -= joint.mean;
    diagnostics.size_terms += joint.diagnostics.size_terms;
    diagnostics.truncation_tail = diagnostics.truncation_tail.max(joint.diagnostics.truncation_tail);
    diagnostics.quad_nodes = joint.diagnostics.quad_nodes;
    Ok(MomentEstimate::mean_only(mean, diagnostics))
}

/// Posterior mean mutual information, fully marginalized. The three size
/// priors (X, Y, joint) are supplied independently by the caller.
pub fn mi_mean_full(
    table: &JointCountTable,
    config_joint: &EstimatorConfig,
    config_x: &EstimatorConfig,
    config_y: &EstimatorConfig,
) -> Result<MomentEstimate> {
    if table.dims().len() != 2 {
        return Err(Error::InvalidArgument(format!(
            "mutual information needs a 2-axis table, got {} axes",
            table.dims().len()
        )));
    }
    multi_information(table, &[*config_x, *config_y], config_joint)
}

/// E(Q | n, |Z| = m) with the bin count fixed and the concentration
/// integrated out: a ratio of c-quadratures weighted by P(c)·P(n | c, m).
pub fn fixed_size_marginal_c(
    n: &CountVector,
    m: usize,
    c_prior: &ConcentrationPrior,
    functional: Functional,
) -> Result<f64> {
    check_size(n, m)?;
    functional.validate()?;
    let grid = quad::c_grid(c_prior, quad::DEFAULT_NODES)?;
    fixed_size_marginal_c_on_grid(n, m, &grid, functional)
}

pub(crate) fn fixed_size_marginal_c_on_grid(
    n: &CountVector,
    m: usize,
    grid: &LogGrid,
    functional: Functional,
) -> Result<f64> {
    let mut w_max = f64::NEG_INFINITY;
    let mut w_sum = 0.0;
    let mut p_sum = 0.0;
    for &(c, lw_node) in grid.nodes() {
        let kernel = PosteriorKernel::new(n, c)?;
        let lw = lw_node + kernel.log_likelihood(m);
        if lw > w_max {
            let scale = (w_max - lw).exp();
            w_sum *= scale;
            p_sum *= scale;
            w_max = lw;
        }
        let w = (lw - w_max).exp();
        w_sum += w;
        p_sum += w * kernel.functional_mean(m, functional);
    }
    if w_sum == 0.0 {
        return Err(Error::InvalidArgument("all quadrature weights vanished".into()));
    }
    Ok(p_sum / w_sum)
}
