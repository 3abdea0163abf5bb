use hardy_core::experiment::{final_distribution, run_report, sample_runs, RunOutcome};

#[test]
fn chi_square_passes_on_nearly_every_seed() {
    let seeds = 100u64;
    let mut passed = 0;
    for seed in 0..seeds {
        let report = run_report(1_000_000, seed).unwrap();
        if report.p_value > 0.001 {
            passed += 1;
        }
    }
    assert!(passed as f64 >= 0.99 * seeds as f64, "{passed}/{seeds} seeds passed");
}

#[test]
fn identical_seeds_give_identical_counts() {
    assert_eq!(sample_runs(10_000, 42).unwrap(), sample_runs(10_000, 42).unwrap());
    assert_ne!(sample_runs(10_000, 42).unwrap(), sample_runs(10_000, 43).unwrap());
}

#[test]
fn coincidences_near_one_in_sixteen() {
    let counts = sample_runs(160_000, 7).unwrap();
    let sigma = (160_000.0f64 * (1.0 / 16.0) * (15.0 / 16.0)).sqrt();
    assert!((counts[&RunOutcome::DpDm] as f64 - 10_000.0).abs() < 3.0 * sigma);
    assert_eq!(counts.values().sum::<u64>(), 160_000);
    assert!(final_distribution().values().all(|p| *p > 0.0));
}

#[test]
fn zero_runs_rejected() {
    assert!(sample_runs(0, 1).is_err());
}
