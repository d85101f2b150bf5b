//! Declarative experiments: a JSON config runs seeded replications on a
//! worker pool, aggregates metrics, and emits plot-ready CSV series. The
//! same machinery backs the `auctionlab` CLI.
//!
//! Run: cargo run --release --example experiment_harness

use auctionlab::harness::{emit_plot_data, run_experiment, ExperimentConfig};

fn main() -> auctionlab::Result<()> {
    let cfg = ExperimentConfig::from_json(
        r#"{
            "scenario": "bk-curve",
            "n_draws": 200000,
            "params": {
                "dist": {"family": "uniform", "a": 0.0, "b": 1.0},
                "ns": [1, 2, 3, 4]
            },
            "seeds": {"master": 42, "replications": 3}
        }"#,
    )?;
    let report = run_experiment(&cfg)?;
    println!(
        "ran {} replications of {:?} in {:.2}s (version {})",
        report.per_replication.len(),
        report.config.scenario,
        report.wall_clock_s,
        report.artifact_version
    );
    for (key, agg) in &report.aggregates {
        println!("  {key:<12} mean {:.4}  std {:.5}", agg.mean, agg.std);
    }
    println!("\nplot series (bk-curve):\n{}", emit_plot_data(&report, "bk-curve")?);

    // Determinism contract: the same config and master seed reproduce the
    // per-replication metrics byte for byte.
    let again = run_experiment(&cfg)?;
    let a = serde_json::to_vec(&report.per_replication).unwrap();
    let b = serde_json::to_vec(&again.per_replication).unwrap();
    println!("re-run byte-identical: {}", a == b);
    Ok(())
}
