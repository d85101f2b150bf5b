//! End-to-end checks of the `auctionlab` binary: flag surfaces, config
//! errors, CSV/JSON outputs and exit codes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_auctionlab"))
}

#[test]
fn equilibrium_subcommand_emits_value_bid_rows() {
    let dir = std::env::temp_dir().join("auctionlab-cli-equilibrium");
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("strategy.csv");
    let status = bin()
        .args(["equilibrium", "--auction", "first-price", "--family", "uniform", "--n", "2"])
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("value,bid"));
    // uniform n = 2 shades to x/2
    let last = text.lines().last().unwrap();
    let fields: Vec<f64> = last.split(',').map(|f| f.parse().unwrap()).collect();
    assert!((fields[1] - fields[0] / 2.0).abs() < 1e-3, "{last}");
    assert!(!text.contains('\r'), "CSV must use LF line endings");
}

#[test]
fn bad_configs_exit_with_code_two() {
    let dir = std::env::temp_dir().join("auctionlab-cli-bad");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("bad.json");
    std::fs::write(&cfg, r#"{"scenario":"simulate","seeds":{"master":1},"bogus":1}"#).unwrap();
    let status = bin().arg("simulate").arg("--config").arg(&cfg).status().unwrap();
    assert_eq!(status.code(), Some(2));
    // unknown scenario also dies as a config error
    std::fs::write(&cfg, r#"{"scenario":"nope","seeds":{"master":1}}"#).unwrap();
    let status = bin().arg("simulate").arg("--config").arg(&cfg).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn report_round_trip_produces_plot_csv() {
    let dir = std::env::temp_dir().join("auctionlab-cli-report");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("bk.json");
    std::fs::write(
        &cfg,
        r#"{"scenario":"bk-curve","n_draws":20000,
            "params":{"dist":{"family":"uniform","a":0.0,"b":1.0},"ns":[1,2]},
            "seeds":{"master":9}}"#,
    )
    .unwrap();
    let report = dir.join("report.json");
    let status = bin()
        .arg("simulate")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&report)
        .status()
        .unwrap();
    assert!(status.success());
    let curve = dir.join("curve.csv");
    let status = bin()
        .args(["report", "--kind", "bk-curve"])
        .arg("--config")
        .arg(&report)
        .arg("--out")
        .arg(&curve)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&curve).unwrap();
    assert!(text.starts_with("n,vickrey_revenue,myerson_revenue\n"));
    // asking for a missing series is a numeric/domain failure: exit 3
    let status = bin()
        .args(["report", "--kind", "profit-curve"])
        .arg("--config")
        .arg(&report)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn bid_subcommand_writes_episode_and_summary() {
    let dir = std::env::temp_dir().join("auctionlab-cli-bid");
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("episode.csv");
    let status = bin()
        .args(["bid", "--algo", "ucbid", "--T", "2000", "--seed", "5"])
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("t,bid,win,competition,cumulative_utility\n"));
    assert_eq!(text.lines().count(), 2001);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("episode.summary.json")).unwrap())
            .unwrap();
    for key in ["T", "regret", "wins"] {
        assert!(summary.get(key).is_some(), "summary missing {key}");
    }
}
