//! Domain types: observed count data, product-space count tables, and the
//! hyperprior over the concentration parameter and the event-space size.

use crate::error::{Error, Result};
use crate::specfun;

/// Observed histogram over labeled bins. Zero entries are retained (they are
/// observed-but-empty labeled bins) but only strictly positive entries count
/// toward the support size `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountVector {
    counts: Vec<u64>,
    total: u64,
    support: usize,
}

impl CountVector {
    pub fn new(counts: Vec<u64>) -> Self {
        let total = counts.iter().sum();
        let support = counts.iter().filter(|&&c| c > 0).count();
        Self { counts, total, support }
    }

    /// Parse whitespace-separated non-negative integers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut counts = Vec::new();
        for tok in text.split_whitespace() {
            let v: u64 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("non-integer count token {tok:?}")))?;
            counts.push(v);
        }
        Ok(Self::new(counts))
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Total number of samples, N.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Support size M = |S(n)|, the number of strictly positive entries.
    pub fn support_size(&self) -> usize {
        self.support
    }

    /// The strictly positive entries, in order.
    pub fn positive_counts(&self) -> Vec<u64> {
        self.counts.iter().copied().filter(|&c| c > 0).collect()
    }

    /// Number of bins that hold exactly `k` counts.
    pub fn multiplicity(&self, k: u64) -> usize {
        self.counts.iter().filter(|&&c| c == k).count()
    }
}

/// Dense counts over a k-way product space (k ≥ 2 axes), row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointCountTable {
    dims: Vec<usize>,
    counts: Vec<u64>,
}

impl JointCountTable {
    pub fn new(dims: Vec<usize>, counts: Vec<u64>) -> Result<Self> {
        if dims.len() < 2 || dims.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 non-empty axes, got dims {dims:?}"
            )));
        }
        let expected: usize = dims.iter().product();
        if counts.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "count buffer has {} entries, dims {:?} require {}",
                counts.len(),
                dims,
                expected
            )));
        }
        Ok(Self { dims, counts })
    }

    /// Parse a rectangular CSV of non-negative integers; rows form the first axis.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row: Result<Vec<u64>> = line
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<u64>().map_err(|_| {
                        Error::Parse(format!(
                            "non-integer token {:?} on line {}",
                            tok.trim(),
                            lineno + 1
                        ))
                    })
                })
                .collect();
            rows.push(row?);
        }
        if rows.is_empty() {
            return Err(Error::Parse("empty joint table".into()));
        }
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::Parse("ragged CSV: rows have differing lengths".into()));
        }
        let dims = vec![rows.len(), width];
        let counts = rows.into_iter().flatten().collect();
        Self::new(dims, counts)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    fn index_of(&self, idx: &[usize]) -> usize {
        let mut flat = 0;
        for (i, &d) in self.dims.iter().enumerate() {
            flat = flat * d + idx[i];
        }
        flat
    }

    /// Sum counts over all axes *not* listed in `axes`, keeping the listed
    /// axes in their given order.
    pub fn marginalize(&self, axes: &[usize]) -> Result<JointCountTable> {
        self.check_axes(axes)?;
        if axes.len() < 2 {
            return Err(Error::InvalidArgument(
                "marginalize to fewer than 2 axes yields a CountVector; use marginal_counts".into(),
            ));
        }
        let out_dims: Vec<usize> = axes.iter().map(|&a| self.dims[a]).collect();
        let mut out = vec![0u64; out_dims.iter().product()];
        let mut idx = vec![0usize; self.dims.len()];
        for flat in 0..self.counts.len() {
            let mut rem = flat;
            for i in (0..self.dims.len()).rev() {
                idx[i] = rem % self.dims[i];
                rem /= self.dims[i];
            }
            let mut oflat = 0;
            for (k, &a) in axes.iter().enumerate() {
                oflat = oflat * out_dims[k] + idx[a];
            }
            out[oflat] += self.counts[flat];
        }
        JointCountTable::new(out_dims, out)
    }

    /// Marginal histogram over one axis.
    pub fn marginal_counts(&self, axis: usize) -> Result<CountVector> {
        self.check_axes(&[axis])?;
        let mut out = vec![0u64; self.dims[axis]];
        let mut idx = vec![0usize; self.dims.len()];
        for flat in 0..self.counts.len() {
            let mut rem = flat;
            for i in (0..self.dims.len()).rev() {
                idx[i] = rem % self.dims[i];
                rem /= self.dims[i];
            }
            out[idx[axis]] += self.counts[flat];
        }
        Ok(CountVector::new(out))
    }

    /// The table flattened to a histogram over all |X₁|·…·|X_k| joint cells.
    pub fn flatten(&self) -> CountVector {
        CountVector::new(self.counts.clone())
    }

    pub fn get(&self, idx: &[usize]) -> u64 {
        self.counts[self.index_of(idx)]
    }

    fn check_axes(&self, axes: &[usize]) -> Result<()> {
        if axes.is_empty() {
            return Err(Error::InvalidArgument("empty axis list".into()));
        }
        for &a in axes {
            if a >= self.dims.len() {
                return Err(Error::InvalidArgument(format!(
                    "axis {a} out of range for {}-way table",
                    self.dims.len()
                )));
            }
        }
        Ok(())
    }
}

/// Prior over the concentration parameter c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConcentrationPrior {
    PointMass(f64),
    /// Density ∝ 1/c on [c_min, c_max], zero outside.
    LogUniform { c_min: f64, c_max: f64 },
}

impl ConcentrationPrior {
    pub fn point(c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::InvalidArgument(format!("concentration must be > 0, got {c}")));
        }
        Ok(Self::PointMass(c))
    }

    pub fn log_uniform(c_min: f64, c_max: f64) -> Result<Self> {
        if !(c_min > 0.0 && c_min < c_max) {
            return Err(Error::InvalidArgument(format!(
                "log-uniform prior needs 0 < c_min < c_max, got [{c_min}, {c_max}]"
            )));
        }
        Ok(Self::LogUniform { c_min, c_max })
    }

    /// Default bounds used when only "log-uniform" is requested.
    pub fn default_log_uniform() -> Self {
        Self::LogUniform { c_min: 1e-3, c_max: 1e3 }
    }
}

/// Prior over the event-space size |Z|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SizePrior {
    PointMass(usize),
    /// P(m) = 1/m_max for m in [1, m_max].
    UniformCutoff(usize),
    /// P(m) ∝ γ^m for m ≤ m_max.
    Geometric { gamma: f64, m_max: usize },
    /// P(m) ∝ exp(-α m), unbounded support.
    Exponential { alpha: f64 },
}

impl SizePrior {
    pub fn point(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("size point mass must be >= 1".into()));
        }
        Ok(Self::PointMass(m))
    }

    pub fn uniform_cutoff(m_max: usize) -> Result<Self> {
        if m_max == 0 {
            return Err(Error::InvalidArgument("uniform cutoff must be >= 1".into()));
        }
        Ok(Self::UniformCutoff(m_max))
    }

    pub fn geometric(gamma: f64, m_max: usize) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) || m_max == 0 {
            return Err(Error::InvalidArgument(format!(
                "geometric prior needs gamma in (0,1) and m_max >= 1, got ({gamma}, {m_max})"
            )));
        }
        Ok(Self::Geometric { gamma, m_max })
    }

    pub fn exponential(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidArgument(format!("exponential rate must be > 0, got {alpha}")));
        }
        Ok(Self::Exponential { alpha })
    }

    /// Upper end of the support, if bounded.
    pub fn upper_bound(&self) -> Option<usize> {
        match *self {
            SizePrior::PointMass(m) => Some(m),
            SizePrior::UniformCutoff(m_max) => Some(m_max),
            SizePrior::Geometric { m_max, .. } => Some(m_max),
            SizePrior::Exponential { .. } => None,
        }
    }

    /// Normalized prior probability of `m`.
    pub fn prob(&self, m: usize) -> f64 {
        if m == 0 {
            return 0.0;
        }
        match *self {
            SizePrior::PointMass(m0) => {
                if m == m0 {
                    1.0
                } else {
                    0.0
                }
            }
            SizePrior::UniformCutoff(m_max) => {
                if m <= m_max {
                    1.0 / m_max as f64
                } else {
                    0.0
                }
            }
            SizePrior::Geometric { gamma, m_max } => {
                if m > m_max {
                    0.0
                } else {
                    // P(m) = γ^m (1-γ) / (γ (1 - γ^m_max))
                    let norm = gamma * (1.0 - gamma.powi(m_max as i32)) / (1.0 - gamma);
                    gamma.powi(m as i32) / norm
                }
            }
            SizePrior::Exponential { alpha } => {
                // Σ_{m>=1} e^{-αm} = e^{-α} / (1 - e^{-α})
                let q = (-alpha).exp();
                (-alpha * m as f64).exp() * (1.0 - q) / q
            }
        }
    }

    /// ln P(m); −∞ outside the support. Computed in log space so that deep
    /// geometric/exponential tails do not underflow.
    pub fn log_prob(&self, m: usize) -> f64 {
        if m == 0 {
            return f64::NEG_INFINITY;
        }
        match *self {
            SizePrior::PointMass(m0) => {
                if m == m0 {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
            SizePrior::UniformCutoff(m_max) => {
                if m <= m_max {
                    -(m_max as f64).ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            SizePrior::Geometric { gamma, m_max } => {
                if m > m_max {
                    return f64::NEG_INFINITY;
                }
                let ln_norm = gamma.ln() + (1.0 - gamma.powi(m_max as i32)).ln() - (1.0 - gamma).ln();
                m as f64 * gamma.ln() - ln_norm
            }
            SizePrior::Exponential { alpha } => {
                let q = (-alpha).exp();
                -alpha * m as f64 + (1.0 - q).ln() + alpha
            }
        }
    }

    /// Prior mass strictly above `m`.
    pub fn tail_mass_above(&self, m: usize) -> f64 {
        match *self {
            SizePrior::PointMass(m0) => {
                if m0 > m {
                    1.0
                } else {
                    0.0
                }
            }
            SizePrior::UniformCutoff(m_max) => {
                if m >= m_max {
                    0.0
                } else {
                    (m_max - m) as f64 / m_max as f64
                }
            }
            SizePrior::Geometric { gamma, m_max } => {
                if m >= m_max {
                    return 0.0;
                }
                let norm = gamma * (1.0 - gamma.powi(m_max as i32)) / (1.0 - gamma);
                // Σ_{k=m+1}^{m_max} γ^k
                gamma.powi(m as i32 + 1) * (1.0 - gamma.powi((m_max - m) as i32)) / (1.0 - gamma)
                    / norm
            }
            SizePrior::Exponential { alpha } => {
                // normalized tail of the geometric series
                (-alpha * m as f64).exp()
            }
        }
    }
}

/// Symmetric Dirichlet over `m` bins with total concentration `c`; each bin
/// carries parameter c/m (uniform baseline).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletSpec {
    pub c: f64,
    pub m: usize,
}

impl DirichletSpec {
    pub fn new(c: f64, m: usize) -> Result<Self> {
        if !(c > 0.0) || m == 0 {
            return Err(Error::InvalidArgument(format!(
                "Dirichlet spec needs c > 0 and m >= 1, got ({c}, {m})"
            )));
        }
        Ok(Self { c, m })
    }

    pub fn per_bin_alpha(&self) -> f64 {
        self.c / self.m as f64
    }
}

/// Convergence diagnostics attached to mixture estimates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    /// Bound on the weight mass dropped by truncating the series over m.
    pub truncation_tail: f64,
    /// Number of size terms actually summed.
    pub size_terms: usize,
    /// Number of quadrature nodes used for the c integral.
    pub quad_nodes: usize,
}

/// Posterior moment estimate with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub mean: f64,
    pub second_moment: Option<f64>,
    pub variance: Option<f64>,
    pub diagnostics: Diagnostics,
}

impl MomentEstimate {
    pub fn mean_only(mean: f64, diagnostics: Diagnostics) -> Self {
        Self { mean, second_moment: None, variance: None, diagnostics }
    }

    pub fn with_second_moment(mean: f64, second: f64, diagnostics: Diagnostics) -> Self {
        let mut variance = second - mean * mean;
        // tolerance clamp: tiny negatives are quadrature round-off
        if variance < 0.0 && variance > -1e-9 {
            variance = 0.0;
        }
        Self { mean, second_moment: Some(second), variance: Some(variance), diagnostics }
    }
}

/// ln G(n, c, m) where G = Π_z Γ(n_z + c/m) / Γ(N + c), the product running
/// over all m bins (empty bins contribute Γ(c/m) each).
pub fn log_g(n: &CountVector, c: f64, m: usize) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::InvalidArgument(format!("c must be > 0, got {c}")));
    }
    let big_m = n.support_size();
    if m < big_m.max(1) {
        return Err(Error::InvalidArgument(format!(
            "m = {m} is below the observed support size M = {big_m}"
        )));
    }
    let a = c / m as f64;
    let ln_gamma_a = specfun::ln_gamma_raw(a);
    let mut sum = m as f64 * ln_gamma_a;
    for &count in n.counts() {
        if count > 0 {
            sum += specfun::ln_gamma_ratio(a, count);
        }
    }
    Ok(sum - specfun::ln_gamma_raw(n.total() as f64 + c))
}
