//! Sweeps, records, fits and the verification suite, end to end.

use qdlab::lab::{
    bootstrap_mean_ci, fit_scaling, fit_scaling_with, mean, median, ols, read_csv,
    records_to_csv_string, run_one, run_sweep, std_dev, verify_suite, verify_suite_with, FitPolicy,
    Level, Milestone, SweepConfig, VerifyOptions, CSV_COLUMNS,
};
use qdlab::oracles::BoundId;
use statrs::statistics::{Data, Distribution, Median};

const ONEMAX: &str = r#"
config_id = "om"
master_seed = 17
replications = 30
n_grid = [15, 31, 63, 127]
timing = false
[problem]
kind = "onemax"
"#;

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let cfg = SweepConfig::from_toml(ONEMAX).unwrap();
    let wide = run_sweep(&cfg).unwrap();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run_sweep(&cfg).unwrap());
    assert_eq!(wide, single);
    assert_eq!(
        records_to_csv_string(&wide).unwrap(),
        records_to_csv_string(&single).unwrap()
    );
    for (i, r) in wide.iter().enumerate() {
        assert_eq!(r.stream, i as u64);
        assert_eq!(*r, run_one(&cfg, i / 30, i % 30).unwrap());
    }
}

#[test]
fn timing_only_changes_wall_clock_column() {
    let mut cfg = SweepConfig::from_toml(ONEMAX).unwrap();
    cfg.n_grid = vec![15, 31];
    cfg.replications = 5;
    let untimed = run_sweep(&cfg).unwrap();
    cfg.timing = true;
    let timed = run_sweep(&cfg).unwrap();
    assert!(timed.iter().any(|r| r.wall_ns > 0));
    for (a, b) in untimed.iter().zip(&timed) {
        assert_eq!(a.wall_ns, 0);
        let mut b = b.clone();
        b.wall_ns = 0;
        assert_eq!(*a, b);
    }
}

#[test]
fn csv_round_trip_and_fit() {
    let cfg = SweepConfig::from_toml(ONEMAX).unwrap();
    let records = run_sweep(&cfg).unwrap();
    let text = records_to_csv_string(&records).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_COLUMNS.join(","));
    let back = read_csv(text.as_bytes()).unwrap();
    assert_eq!(back.len(), records.len());
    for (a, b) in back.iter().zip(&records) {
        assert_eq!(a.t_cover, b.t_cover);
        assert_eq!(a.t_opt, b.t_opt);
        assert_eq!(a.stream, b.stream);
    }
    let fit = fit_scaling(&back, BoundId::CoverK1).unwrap();
    assert!(fit.passed(), "{fit:?}");
    assert!(fit.ratio_spread <= 2.5);
    let strict = FitPolicy {
        max_spread: 1.0,
        ..FitPolicy::default()
    };
    assert!(
        !fit_scaling_with(&back, BoundId::CoverK1, Milestone::TCover, &strict)
            .unwrap()
            .passed()
    );
}

#[test]
fn statistics_agree_with_statrs() {
    let xs = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0, 3.0, 5.0];
    let data = Data::new(xs.to_vec());
    assert!((mean(&xs).unwrap() - data.mean().unwrap()).abs() < 1e-12);
    assert!((std_dev(&xs).unwrap() - data.std_dev().unwrap()).abs() < 1e-12);
    assert_eq!(median(&xs).unwrap(), data.median());

    let x: Vec<f64> = (1..=20).map(f64::from).collect();
    let y: Vec<f64> = x.iter().map(|v| 0.5 + 1.75 * v).collect();
    let (slope, intercept) = ols(&x, &y).unwrap();
    assert!((slope - 1.75).abs() < 1e-12 && (intercept - 0.5).abs() < 1e-12);
}

#[test]
fn bootstrap_interval_covers_the_true_mean() {
    use rand::Rng;
    let mut rng = qdlab::bitcore::RandomSource::new(41, 0);
    let mut hits = 0;
    let trials = 200;
    for t in 0..trials {
        let xs: Vec<f64> = (0..100).map(|_| rng.random_range(0.0..10.0)).collect();
        let ci = bootstrap_mean_ci(&xs, 0.95, 1000, t).unwrap();
        assert!(ci.low <= ci.high);
        if ci.contains(5.0) {
            hits += 1;
        }
    }
    assert!((180..=199).contains(&hits), "{hits}/{trials}");
}

#[test]
fn fast_verification_passes() {
    let report = verify_suite(Level::Fast).unwrap();
    assert!(report.passed(), "{}", report.to_text());
    assert_eq!(
        report
            .checks
            .iter()
            .map(|c| c.id.as_str())
            .collect::<Vec<_>>(),
        ["P1", "P2", "C1", "S1"]
    );
}

#[test]
fn corrupted_transition_table_is_caught() {
    let options = VerifyOptions {
        corrupt_transition_table: true,
    };
    let report = verify_suite_with(Level::Fast, options, |_| {}).unwrap();
    assert!(!report.passed());
    let failed: Vec<_> = report
        .checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.id.as_str())
        .collect();
    assert_eq!(failed, ["P1"]);
}
