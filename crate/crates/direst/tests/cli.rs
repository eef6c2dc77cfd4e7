//! End-to-end tests of the `direst` binary: output formats, exit codes, and
//! agreement with the library calls the commands wrap.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use direst::likelihood::size_posterior;
use direst::model::{ConcentrationPrior, CountVector, SizePrior};
use direst::{entropy_moments_full, EstimatorConfig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_direst"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn direst")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tempfile(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("direst-test-{}-{name}", std::process::id()));
    std::fs::write(&path, content).unwrap();
    path
}

#[test]
fn entropy_single_bin_is_zero() {
    let input = tempfile("single.txt", "5\n");
    let out = run(&["entropy", input.to_str().unwrap(), "--c", "1", "--m", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("mean 0.000000"), "{}", stdout(&out));
}

#[test]
fn entropy_prior_mean_matches_harmonic_sum() {
    // N = 0, c = m = 3: mean is 1/2 + 1/3
    let input = tempfile("zeros.txt", "0 0 0\n");
    let out = run(&["entropy", input.to_str().unwrap(), "--c", "3", "--m", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("mean 0.833333"), "{}", stdout(&out));
}

#[test]
fn entropy_full_mixture_matches_library_to_printed_precision() {
    let out = run(&[
        "entropy",
        fixture("fig1_counts.txt").to_str().unwrap(),
        "--c-log-uniform",
        "1e-3",
        "1e3",
        "--m-uniform",
        "100",
    ]);
    assert!(out.status.success());
    let n = CountVector::parse(&std::fs::read_to_string(fixture("fig1_counts.txt")).unwrap())
        .unwrap();
    let config = EstimatorConfig::new(
        ConcentrationPrior::log_uniform(1e-3, 1e3).unwrap(),
        SizePrior::uniform_cutoff(100).unwrap(),
    );
    let est = entropy_moments_full(&n, &config).unwrap();
    let text = stdout(&out);
    assert!(text.contains(&format!("mean {:.6}", est.mean)), "{text}");
    assert!(text.contains(&format!("variance {:.6}", est.variance.unwrap())), "{text}");
    // diagnostics go to stderr, not stdout
    assert!(!text.contains("quad_nodes"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("quad_nodes"));
}

#[test]
fn entropy_bad_input_exits_2_and_infeasible_exits_3() {
    let out = run(&["entropy", "/nonexistent/counts.txt", "--c", "1", "--m", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let garbled = tempfile("garbled.txt", "1 2 abc\n");
    let out = run(&["entropy", garbled.to_str().unwrap(), "--c", "1", "--m", "3"]);
    assert_eq!(out.status.code(), Some(2));
    // three occupied bins cannot fit a size prior capped at 2
    let input = tempfile("three.txt", "1 1 1\n");
    let out = run(&["entropy", input.to_str().unwrap(), "--c", "1", "--m-uniform", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn mi_one_by_one_table_is_zero() {
    let input = tempfile("t11.csv", "7\n");
    let out = run(&["mi", input.to_str().unwrap(), "--c", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("mi 0.000000"), "{}", stdout(&out));
}

#[test]
fn mi_ragged_csv_exits_2() {
    let input = tempfile("ragged.csv", "1,2\n3\n");
    let out = run(&["mi", input.to_str().unwrap(), "--c", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn size_posterior_matches_library_and_emits_csv() {
    let csv_path = std::env::temp_dir().join(format!("direst-sp-{}.csv", std::process::id()));
    let svg_path = std::env::temp_dir().join(format!("direst-sp-{}.svg", std::process::id()));
    let out = run(&[
        "size-posterior",
        fixture("fig1_counts.txt").to_str().unwrap(),
        "--c",
        "1",
        "--m-uniform",
        "100",
        "--csv",
        csv_path.to_str().unwrap(),
        "--plot",
        svg_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let n = CountVector::parse(&std::fs::read_to_string(fixture("fig1_counts.txt")).unwrap())
        .unwrap();
    let post = size_posterior(
        &n,
        &SizePrior::uniform_cutoff(100).unwrap(),
        &ConcentrationPrior::point(1.0).unwrap(),
        200,
    )
    .unwrap();
    let text = stdout(&out);
    assert!(text.contains(&format!("mean {:.6}", post.mean)), "{text}");
    assert!(text.contains(&format!("map {}", post.map)), "{text}");

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("m,probability\n"));
    assert_eq!(csv.lines().count(), 1 + post.probabilities.len());
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("<svg") && svg.contains("polyline") || svg.contains("<path"));
    let _ = std::fs::remove_file(csv_path);
    let _ = std::fs::remove_file(svg_path);
}

#[test]
fn sweep_runs_and_is_deterministic() {
    let cfg = tempfile(
        "sweep.cfg",
        "dirichlet_c = 1\nm_true = 20\nn_samples = 10\nreplicates = 4\nseed = 5\n\
         roster = plugin, cae\nm_cutoff = 100\n",
    );
    let a = run(&["sweep", cfg.to_str().unwrap()]);
    assert!(a.status.success());
    let b = run(&["sweep", cfg.to_str().unwrap()]);
    let text = stdout(&a);
    assert_eq!(text, stdout(&b), "sweep output must be byte-identical");
    assert!(text.starts_with("sweep_param,estimator,rms,n_success,n_miss,replicates,base_seed"));
    assert_eq!(text.lines().count(), 3, "{text}");
}

#[test]
fn sweep_unknown_key_exits_2_naming_the_key() {
    let cfg = tempfile("bad.cfg", "replicates = 4\nbogus_key = 7\n");
    let out = run(&["sweep", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus_key"));
}

#[test]
fn cmax_known_values_and_errors() {
    let out = run(&["cmax", "--m", "infinite"]);
    assert!(out.status.success());
    let printed: f64 = stdout(&out).trim().strip_prefix("c_max ").unwrap().parse().unwrap();
    assert!((printed - 0.9222).abs() < 2.5e-3, "{printed}");

    let out = run(&["cmax", "--m", "5"]);
    let printed: f64 = stdout(&out).trim().strip_prefix("c_max ").unwrap().parse().unwrap();
    assert!((printed - 0.6997).abs() < 2e-3, "{printed}");

    let out = run(&["cmax", "--m", "2"]);
    let printed: f64 = stdout(&out).trim().strip_prefix("c_max ").unwrap().parse().unwrap();
    assert!(printed > 0.0 && printed < 100.0);

    let out = run(&["cmax", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
}
