//! Command-line front end: every subcommand is a thin shell over one
//! library call. Exit codes: 0 success, 2 input error, 3 infeasible model.
//! stdout carries results only; diagnostics go to stderr.

mod cfg;
mod plot;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use direst::likelihood::{c_max, size_posterior};
use direst::model::{ConcentrationPrior, CountVector, JointCountTable, SizePrior};
use direst::simulate::{self, run_sweep};
use direst::{
    entropy_mean_full, entropy_moments_full, tsallis_mean_full, Error, EstimatorConfig,
};

#[derive(Parser)]
#[command(
    name = "direst",
    about = "Bayesian estimation of entropy and mutual information from count data",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Posterior mean (and variance) of the entropy of a counts file
    Entropy(EntropyArgs),
    /// Posterior mean mutual information of a joint-count CSV
    Mi(MiArgs),
    /// Posterior distribution over the event-space size
    SizePosterior(SizePosteriorArgs),
    /// RMS-error sweep over synthetic data, per a key = value config file
    Sweep(SweepArgs),
    /// Concentration maximizing the prior entropy variance
    Cmax(CmaxArgs),
}

#[derive(Args)]
struct CArgs {
    /// Fixed concentration c
    #[arg(long = "c", value_name = "C", conflicts_with = "c_log_uniform")]
    c: Option<f64>,
    /// Log-uniform prior on c over [MIN, MAX] (default 1e-3 1e3)
    #[arg(long = "c-log-uniform", num_args = 2, value_names = ["MIN", "MAX"])]
    c_log_uniform: Option<Vec<f64>>,
}

impl CArgs {
    fn prior(&self) -> Result<ConcentrationPrior, Error> {
        if let Some(c) = self.c {
            ConcentrationPrior::point(c)
        } else if let Some(range) = &self.c_log_uniform {
            ConcentrationPrior::log_uniform(range[0], range[1])
        } else {
            Ok(ConcentrationPrior::default_log_uniform())
        }
    }
}

#[derive(Args)]
struct SizeArgs {
    /// Fixed event-space size m
    #[arg(long = "m", value_name = "M")]
    m: Option<usize>,
    /// Uniform size prior on [M, MAX]
    #[arg(long = "m-uniform", value_name = "MAX", conflicts_with = "m")]
    m_uniform: Option<usize>,
    /// Truncated geometric size prior with ratio GAMMA on [M, MAX]
    #[arg(long = "m-geometric", num_args = 2, value_names = ["GAMMA", "MAX"],
          conflicts_with_all = ["m", "m_uniform"])]
    m_geometric: Option<Vec<f64>>,
    /// Exponential size prior with rate ALPHA (unbounded, auto-truncated)
    #[arg(long = "m-exp", value_name = "ALPHA",
          conflicts_with_all = ["m", "m_uniform", "m_geometric"])]
    m_exp: Option<f64>,
}

impl SizeArgs {
    fn prior(&self, default: Option<SizePrior>) -> Result<SizePrior, Error> {
        if let Some(m) = self.m {
            SizePrior::point(m)
        } else if let Some(max) = self.m_uniform {
            SizePrior::uniform_cutoff(max)
        } else if let Some(gm) = &self.m_geometric {
            SizePrior::geometric(gm[0], gm[1] as usize)
        } else if let Some(alpha) = self.m_exp {
            SizePrior::exponential(alpha)
        } else if let Some(d) = default {
            Ok(d)
        } else {
            Err(Error::InvalidArgument(
                "select a size prior: --m, --m-uniform, --m-geometric or --m-exp".into(),
            ))
        }
    }
}

#[derive(Args)]
struct EntropyArgs {
    /// Whitespace-separated counts file
    input: PathBuf,
    #[command(flatten)]
    c: CArgs,
    #[command(flatten)]
    size: SizeArgs,
    /// Estimate the Tsallis entropy of index Q instead of Shannon entropy
    #[arg(long = "tsallis", value_name = "Q")]
    tsallis: Option<f64>,
    /// Quadrature nodes for the concentration integral
    #[arg(long, default_value_t = 200)]
    nodes: usize,
}

#[derive(Args)]
struct MiArgs {
    /// Rectangular integer CSV of joint counts
    input: PathBuf,
    #[command(flatten)]
    c: CArgs,
    /// Uniform size prior cutoff for the X marginal (default: point at the row count)
    #[arg(long = "mx-uniform", value_name = "MAX")]
    mx_uniform: Option<usize>,
    /// Uniform size prior cutoff for the Y marginal (default: point at the column count)
    #[arg(long = "my-uniform", value_name = "MAX")]
    my_uniform: Option<usize>,
    /// Uniform size prior cutoff for the joint space (default: point at rows x cols)
    #[arg(long = "mxy-uniform", value_name = "MAX")]
    mxy_uniform: Option<usize>,
    /// Quadrature nodes for the concentration integral
    #[arg(long, default_value_t = 200)]
    nodes: usize,
}

#[derive(Args)]
struct SizePosteriorArgs {
    /// Whitespace-separated counts file
    input: PathBuf,
    #[command(flatten)]
    c: CArgs,
    #[command(flatten)]
    size: SizeArgs,
    /// Quadrature nodes for the concentration integral
    #[arg(long, default_value_t = 200)]
    nodes: usize,
    /// Write the full posterior as CSV (m,probability) to this path
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Write an SVG line chart of P(m|n) vs m to this path
    #[arg(long, value_name = "PATH")]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// key = value sweep configuration file
    config: PathBuf,
    /// Write the result CSV to this path (default: stdout)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Write log-x RMS curves per estimator as SVG to this path
    #[arg(long, value_name = "PATH")]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct CmaxArgs {
    /// Event-space size: an integer >= 2, or "infinite"
    #[arg(long = "m", value_name = "M")]
    m: String,
}

fn main() -> ExitCode {
    simulate::init_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::SupportExhausted(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Entropy(args) => cmd_entropy(args),
        Command::Mi(args) => cmd_mi(args),
        Command::SizePosterior(args) => cmd_size_posterior(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Cmax(args) => cmd_cmax(args),
    }
}

fn read_to_string(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &PathBuf, content: &str) -> Result<(), Error> {
    fs::write(path, content)
        .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
}

fn cmd_entropy(args: EntropyArgs) -> Result<(), Error> {
    let counts = CountVector::parse(&read_to_string(&args.input)?)?;
    let config = EstimatorConfig::new(args.c.prior()?, args.size.prior(None)?)
        .with_nodes(args.nodes);
    let est = match args.tsallis {
        Some(q) => tsallis_mean_full(&counts, &config, q)?,
        None => entropy_moments_full(&counts, &config)?,
    };
    println!("mean {:.6}", est.mean);
    if let Some(var) = est.variance {
        println!("variance {:.6}", var);
        println!("std_dev {:.6}", var.max(0.0).sqrt());
    }
    eprintln!(
        "# quad_nodes={} size_terms={} truncation_tail={:.3e}",
        est.diagnostics.quad_nodes, est.diagnostics.size_terms, est.diagnostics.truncation_tail
    );
    Ok(())
}

fn cmd_mi(args: MiArgs) -> Result<(), Error> {
    let table = JointCountTable::parse_csv(&read_to_string(&args.input)?)?;
    if table.dims().len() != 2 {
        return Err(Error::InvalidArgument("mi needs a two-axis table".into()));
    }
    let (rows, cols) = (table.dims()[0], table.dims()[1]);
    let c_prior = args.c.prior()?;
    let size = |uniform: Option<usize>, dim: usize| -> Result<SizePrior, Error> {
        match uniform {
            Some(max) => SizePrior::uniform_cutoff(max),
            None => SizePrior::point(dim),
        }
    };
    let cfg = |prior: SizePrior| EstimatorConfig::new(c_prior, prior).with_nodes(args.nodes);
    let cfg_x = cfg(size(args.mx_uniform, rows)?);
    let cfg_y = cfg(size(args.my_uniform, cols)?);
    let cfg_xy = cfg(size(args.mxy_uniform, rows * cols)?);

    let hx = entropy_mean_full(&table.marginal_counts(0)?, &cfg_x)?;
    let hy = entropy_mean_full(&table.marginal_counts(1)?, &cfg_y)?;
    let hxy = entropy_mean_full(&table.flatten(), &cfg_xy)?;
    println!("H_x {:.6}", hx.mean);
    println!("H_y {:.6}", hy.mean);
    println!("H_xy {:.6}", hxy.mean);
    println!("mi {:.6}", hx.mean + hy.mean - hxy.mean);
    eprintln!(
        "# quad_nodes={} size_terms={} truncation_tail={:.3e}",
        hxy.diagnostics.quad_nodes,
        hx.diagnostics.size_terms + hy.diagnostics.size_terms + hxy.diagnostics.size_terms,
        hx.diagnostics
            .truncation_tail
            .max(hy.diagnostics.truncation_tail)
            .max(hxy.diagnostics.truncation_tail)
    );
    Ok(())
}

fn cmd_size_posterior(args: SizePosteriorArgs) -> Result<(), Error> {
    let counts = CountVector::parse(&read_to_string(&args.input)?)?;
    let size_prior = args.size.prior(Some(SizePrior::uniform_cutoff(100)?))?;
    let post = size_posterior(&counts, &size_prior, &args.c.prior()?, args.nodes)?;
    println!("mean {:.6}", post.mean);
    println!("map {}", post.map);
    eprintln!(
        "# terms={} truncation_tail={:.3e}",
        post.probabilities.len(),
        post.truncation_tail
    );
    if let Some(path) = &args.csv {
        let mut csv = String::from("m,probability\n");
        for &(m, p) in &post.probabilities {
            csv.push_str(&format!("{m},{p:.10e}\n"));
        }
        write_file(path, &csv)?;
    }
    if let Some(path) = &args.plot {
        let chart = plot::Chart {
            title: "Posterior over the event-space size".into(),
            x_label: "m".into(),
            y_label: "P(m | n)".into(),
            log_x: false,
            series: vec![plot::Series {
                label: "P(m|n)".into(),
                points: post.probabilities.iter().map(|&(m, p)| (m as f64, p)).collect(),
            }],
        };
        write_file(path, &chart.to_svg())?;
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Error> {
    let spec = cfg::parse_sweep_config(&read_to_string(&args.config)?)?;
    let result = run_sweep(&spec)?;
    let csv = result.to_csv();
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }
    if let Some(path) = &args.plot {
        let mut series = Vec::new();
        for est in &spec.estimators {
            let points: Vec<(f64, f64)> = result
                .cells
                .iter()
                .filter(|c| c.estimator == *est)
                .map(|c| (c.param, c.rms))
                .collect();
            series.push(plot::Series { label: est.label().to_string(), points });
        }
        let chart = plot::Chart {
            title: "RMS error vs sweep parameter".into(),
            x_label: "sweep parameter".into(),
            y_label: "RMS error (nats)".into(),
            log_x: true,
            series,
        };
        write_file(path, &chart.to_svg())?;
    }
    Ok(())
}

fn cmd_cmax(args: CmaxArgs) -> Result<(), Error> {
    let m = if args.m.eq_ignore_ascii_case("infinite") {
        1_000_000
    } else {
        args.m
            .parse::<usize>()
            .map_err(|_| Error::InvalidArgument(format!("bad --m value {:?}", args.m)))?
    };
    let c = c_max(m)?;
    println!("c_max {c:.4}");
    Ok(())
}
