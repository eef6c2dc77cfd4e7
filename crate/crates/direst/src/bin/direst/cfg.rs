//! Line-oriented `key = value` sweep configuration files.
//!
//! Recognized keys (comma-separated lists where noted):
//!   dirichlet_c   list of Dirichlet concentrations to sweep (optional)
//!   power_alpha   list of power-law exponents to sweep (optional)
//!   m_true        true number of bins per generated distribution
//!   n_samples     observations per replicate
//!   replicates    replicates per grid point
//!   seed          base seed; replicate r uses seed + r
//!   roster        estimators: posterior, plugin, cae, nsb_large_z, nsb_asymptotic
//!   c_min, c_max  posterior estimator's log-uniform concentration range
//!   m_cutoff      posterior estimator's uniform size-prior cutoff
//!   nsb_k         event-space size assumed by nsb_large_z
//!   nodes         quadrature nodes for the concentration integral
//!
//! Blank lines and lines starting with `#` are ignored.

use direst::model::{ConcentrationPrior, SizePrior};
use direst::simulate::{standard_sweep_points, SweepEstimator, SweepSpec};
use direst::{Error, EstimatorConfig, Result};

pub fn parse_sweep_config(text: &str) -> Result<SweepSpec> {
    let mut dirichlet_c: Vec<f64> = Vec::new();
    let mut power_alpha: Vec<f64> = Vec::new();
    let mut m_true = 100usize;
    let mut n_samples = 10u64;
    let mut replicates = 200usize;
    let mut seed = 0u64;
    let mut roster: Option<Vec<SweepEstimator>> = None;
    let mut c_min = 1e-3f64;
    let mut c_max = 1e3f64;
    let mut m_cutoff = 10_000usize;
    let mut nsb_k: Option<usize> = None;
    let mut nodes = 200usize;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Parse(format!("line {}: expected `key = value`, got {line:?}", lineno + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| Error::Parse(format!("line {}: bad {what}: {value:?}", lineno + 1));
        match key {
            "dirichlet_c" => dirichlet_c = parse_list(value).ok_or_else(|| bad("float list"))?,
            "power_alpha" => power_alpha = parse_list(value).ok_or_else(|| bad("float list"))?,
            "m_true" => m_true = value.parse().map_err(|_| bad("integer"))?,
            "n_samples" => n_samples = value.parse().map_err(|_| bad("integer"))?,
            "replicates" => replicates = value.parse().map_err(|_| bad("integer"))?,
            "seed" => seed = value.parse().map_err(|_| bad("integer"))?,
            "c_min" => c_min = value.parse().map_err(|_| bad("float"))?,
            "c_max" => c_max = value.parse().map_err(|_| bad("float"))?,
            "m_cutoff" => m_cutoff = value.parse().map_err(|_| bad("integer"))?,
            "nsb_k" => nsb_k = Some(value.parse().map_err(|_| bad("integer"))?),
            "nodes" => nodes = value.parse().map_err(|_| bad("integer"))?,
            "roster" => {
                let mut list = Vec::new();
                for name in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    list.push(match name {
                        "posterior" => SweepEstimator::Posterior,
                        "plugin" => SweepEstimator::Plugin,
                        "cae" => SweepEstimator::CoverageAdjusted,
                        "nsb_large_z" => SweepEstimator::NsbLargeZ,
                        "nsb_asymptotic" => SweepEstimator::NsbAsymptotic,
                        other => {
                            return Err(Error::Parse(format!(
                                "line {}: unknown estimator {other:?}",
                                lineno + 1
                            )))
                        }
                    });
                }
                roster = Some(list);
            }
            other => {
                return Err(Error::Parse(format!(
                    "line {}: unknown config key {other:?}",
                    lineno + 1
                )))
            }
        }
    }

    let points = standard_sweep_points(m_true, &dirichlet_c, &power_alpha);
    let mut spec = SweepSpec::standard(points, n_samples, replicates, seed)?;
    spec.config = EstimatorConfig::new(
        ConcentrationPrior::log_uniform(c_min, c_max)?,
        SizePrior::uniform_cutoff(m_cutoff)?,
    )
    .with_nodes(nodes);
    spec.nsb_k = nsb_k.unwrap_or(m_cutoff);
    if let Some(roster) = roster {
        spec.estimators = roster;
    }
    Ok(spec)
}

fn parse_list(value: &str) -> Option<Vec<f64>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().ok())
        .collect()
}
