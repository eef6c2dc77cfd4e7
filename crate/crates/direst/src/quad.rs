//! Deterministic numerical integration over the concentration parameter and
//! truncated summation over the event-space size.

use crate::error::{Error, Result};
use crate::model::{ConcentrationPrior, SizePrior};

/// Default number of Gauss–Legendre nodes for the c integral.
pub const DEFAULT_NODES: usize = 200;

/// Relative tail mass at which the unbounded size series is truncated.
pub const SIZE_TAIL_TOLERANCE: f64 = 1e-12;

/// Hard ceiling on the number of size terms; keeps a pathological prior
/// (alpha near zero) from looping forever. The reported tail bound exposes
/// any mass left behind.
const SIZE_TERM_CEILING: usize = 2_000_000;

/// Quadrature nodes in c with log-weights that absorb the prior density.
/// For a normalized prior the weights sum to 1.
#[derive(Debug, Clone)]
pub struct LogGrid {
    nodes: Vec<(f64, f64)>,
}

impl LogGrid {
    /// (c value, log-weight) pairs, strictly increasing in c.
    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre polynomial.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n(x) and P_n'(x) by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((-x, w));
        if 2 * i + 1 < n {
            out.push((x, w));
        }
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// Build a quadrature grid for the given concentration prior.
///
/// For a log-uniform prior the nodes are Gauss–Legendre in u = ln c mapped
/// back to c; the 1/c density cancels the Jacobian, so the weights are the
/// plain Gauss–Legendre weights scaled by 1/ln(c_max/c_min) and sum to 1.
pub fn c_grid(prior: &ConcentrationPrior, n_nodes: usize) -> Result<LogGrid> {
    if n_nodes < 1 {
        return Err(Error::InvalidArgument("need at least one quadrature node".into()));
    }
    match *prior {
        ConcentrationPrior::PointMass(c) => Ok(LogGrid { nodes: vec![(c, 0.0)] }),
        ConcentrationPrior::LogUniform { c_min, c_max } => {
            if n_nodes < 2 {
                return Err(Error::InvalidArgument(
                    "log-uniform prior needs at least 2 quadrature nodes".into(),
                ));
            }
            let (lo, hi) = (c_min.ln(), c_max.ln());
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            let ln_range = hi - lo;
            let nodes = gauss_legendre(n_nodes)
                .into_iter()
                .map(|(x, w)| {
                    let c = (mid + half * x).exp();
                    let log_w = (w * half / ln_range).ln();
                    (c, log_w)
                })
                .collect();
            Ok(LogGrid { nodes })
        }
    }
}

/// Overflow-safe ln Σ exp(tᵢ).
pub fn log_sum_exp(terms: &[f64]) -> Result<f64> {
    if terms.is_empty() {
        return Err(Error::InvalidArgument("log_sum_exp of an empty list".into()));
    }
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    let sum: f64 = terms.iter().map(|t| (t - max).exp()).sum();
    Ok(max + sum.ln())
}

/// Result of a normalized mixture over the size prior.
#[derive(Debug, Clone)]
pub struct SizeMixture<const K: usize> {
    /// Normalized expectations, one per payload component.
    pub expectations: [f64; K],
    /// ln of the total (unnormalized) weight mass Σ_m P(m) exp(lwᵐ).
    pub log_norm: f64,
    /// Bound on the relative weight mass dropped by truncation.
    pub tail_bound: f64,
    /// Number of m terms summed.
    pub terms: usize,
}

/// Normalized mixture Σ_m w(m)·payload(m) / Σ_m w(m) with
/// w(m) = P(m)·exp(log-weight contribution), summed over the size prior's
/// support intersected with [max(M,1), ∞).
///
/// Bounded priors are summed over their full support; the exponential prior
/// is extended until the remaining prior tail is below `SIZE_TAIL_TOLERANCE`
/// of the summed mass.
pub fn size_mixture<const K: usize>(
    prior: &SizePrior,
    support_size: usize,
    mut term: impl FnMut(usize) -> ([f64; K], f64),
) -> Result<SizeMixture<K>> {
    let m_lo = support_size.max(1);
    if let Some(hi) = prior.upper_bound() {
        if hi < m_lo {
            return Err(Error::SupportExhausted(format!(
                "size prior support ends at {hi} but the data occupy {m_lo} bins"
            )));
        }
    }

    // streaming log-sum-exp with weighted payload accumulators
    let mut w_max = f64::NEG_INFINITY;
    let mut w_sum = 0.0;
    let mut p_sum = [0.0f64; K];
    let mut terms = 0usize;
    let mut tail_bound = 0.0;
    let mut last_lw = f64::NEG_INFINITY;

    let hard_hi = prior.upper_bound().unwrap_or(usize::MAX);
    let mut m = m_lo;
    while m <= hard_hi {
        let lp = prior.log_prob(m);
        if lp > f64::NEG_INFINITY {
            let (payload, lw_contrib) = term(m);
            let lw = lp + lw_contrib;
            last_lw = lw_contrib;
            if lw > f64::NEG_INFINITY {
                if lw > w_max {
                    let scale = (w_max - lw).exp();
                    w_sum *= scale;
                    for p in p_sum.iter_mut() {
                        *p *= scale;
                    }
                    w_max = lw;
                }
                let w = (lw - w_max).exp();
                w_sum += w;
                for (acc, &p) in p_sum.iter_mut().zip(payload.iter()) {
                    *acc += w * p;
                }
            }
            terms += 1;
        }
        if prior.upper_bound().is_none() {
            // unbounded prior: stop once the prior tail, weighted by the
            // latest likelihood contribution, is negligible (the weights
            // decay in m, so this bounds the dropped mass)
            if w_sum > 0.0 && terms >= 1 {
                let tail = prior.tail_mass_above(m) * (last_lw - w_max).exp();
                if tail < SIZE_TAIL_TOLERANCE * w_sum {
                    tail_bound = tail / w_sum;
                    break;
                }
            }
            if terms >= SIZE_TERM_CEILING {
                tail_bound = prior.tail_mass_above(m) * (last_lw - w_max).exp() / w_sum.max(f64::MIN_POSITIVE);
                break;
            }
        }
        m += 1;
    }

    if terms == 0 || w_sum <= 0.0 {
        return Err(Error::SupportExhausted(
            "size prior places no usable mass on any feasible m".into(),
        ));
    }

    let mut expectations = [0.0f64; K];
    for (e, &p) in expectations.iter_mut().zip(p_sum.iter()) {
        *e = p / w_sum;
    }
    Ok(SizeMixture { expectations, log_norm: w_max + w_sum.ln(), tail_bound, terms })
}

/// Single-payload wrapper over [`size_mixture`]: returns the normalized
/// expectation and the truncation tail bound.
pub fn size_sum(
    prior: &SizePrior,
    support_size: usize,
    mut term: impl FnMut(usize) -> (f64, f64),
) -> Result<(f64, f64)> {
    let mix = size_mixture::<1>(prior, support_size, |m| {
        let (lw, payload) = term(m);
        ([payload], lw)
    })?;
    Ok((mix.expectations[0], mix.tail_bound))
}
