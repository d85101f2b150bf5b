//! Thin command-line front end: every subcommand builds an experiment
//! config (from --config JSON or convenience flags), hands it to the
//! harness, and writes the report (JSON) and/or the primary series (CSV).
//!
//! Exit codes: 0 success, 2 config error, 3 numeric failure.

use auctionlab::error::Error;
use auctionlab::harness::{self, ExperimentConfig, RunReport};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "auctionlab",
    version,
    about = "Auction mechanisms, reserve learning and strategic bidding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct Common {
    /// Experiment config (JSON). Flags below override or replace it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path: .csv writes the scenario's primary series, anything
    /// else a JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replications of the experiment.
    #[arg(long)]
    replications: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Distribution diagnostics: monopoly price, regularity, virtual values.
    Dist {
        #[command(flatten)]
        common: Common,
        /// Family shortcut: uniform | exponential | lognormal | kumaraswamy
        /// | gpd | pareto-two-piece.
        #[arg(long)]
        family: Option<String>,
    },
    /// Monte Carlo metrics of a mechanism over value distributions.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n_draws: Option<usize>,
    },
    /// Symmetric first-price equilibrium and revenue-equivalence check.
    Equilibrium {
        #[command(flatten)]
        common: Common,
        /// Auction format (only first-price has a non-truthful equilibrium).
        #[arg(long, default_value = "first-price")]
        auction: String,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Batch learning: sample-complexity sweeps or ERM over reserves.
    Learn {
        #[command(flatten)]
        common: Common,
        /// Learner shortcut for a sweep: empirical | guarded.
        #[arg(long)]
        learner: Option<String>,
        #[arg(long)]
        kappa: Option<f64>,
    },
    /// Sequential learners: bandits, posted prices, reserve epochs.
    Online {
        #[command(flatten)]
        common: Common,
        /// ucb | exp3 | posted-ucb | posted-exp3 | cautious | reserve-epochs
        #[arg(long)]
        algo: Option<String>,
        #[arg(long = "T")]
        t: Option<usize>,
    },
    /// Buyer-side learning: ucbid | contextual | pacing.
    Bid {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        algo: Option<String>,
        #[arg(long = "T")]
        t: Option<usize>,
    },
    /// Strategic shading schemes: threshold | linear | myerson-eq | nash-threshold.
    Shade {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        r: Option<f64>,
    },
    /// Dynamic seller games: mean-based | fee | two-phase.
    Exploit {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long = "T")]
        t: Option<usize>,
        #[arg(long)]
        gamma: Option<f64>,
    },
    /// Extract a plot series from a report JSON as CSV.
    Report {
        /// Report JSON produced by another subcommand.
        #[arg(long)]
        config: PathBuf,
        /// Series name, e.g. bk-curve or profit-curve.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn family_json(family: &str) -> Result<serde_json::Value, Error> {
    let js = match family {
        "uniform" => r#"{"family":"uniform","a":0.0,"b":1.0}"#,
        "exponential" => r#"{"family":"exponential","scale":1.0}"#,
        "lognormal" => r#"{"family":"lognormal","mu":0.5,"sigma":0.5}"#,
        "kumaraswamy" => r#"{"family":"kumaraswamy","a":2.0,"b":10.0}"#,
        "gpd" => r#"{"family":"gpd","mu":0.0,"xi":-0.5,"sigma":1.0}"#,
        "pareto-two-piece" => r#"{"family":"pareto-two-piece"}"#,
        other => {
            return Err(Error::InvalidConfig {
                path: "--family".into(),
                message: format!("unknown family shortcut {other:?}"),
            })
        }
    };
    Ok(serde_json::from_str(js).expect("builtin family json"))
}

fn load_or_default(common: &Common, scenario: &str) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            ExperimentConfig::from_json(&text)?
        }
        None => ExperimentConfig::from_json(&format!(
            r#"{{"scenario":"{scenario}","seeds":{{"master":0}}}}"#
        ))?,
    };
    if let Some(seed) = common.seed {
        cfg.seeds.master = seed;
    }
    if let Some(reps) = common.replications {
        cfg.seeds.replications = reps;
    }
    if let Some(out) = &common.out {
        cfg.out = Some(out.display().to_string());
    }
    Ok(cfg)
}

fn set_param(cfg: &mut ExperimentConfig, key: &str, value: serde_json::Value) {
    if !cfg.params.is_object() {
        cfg.params = serde_json::json!({});
    }
    cfg.params.as_object_mut().expect("object").insert(key.to_string(), value);
}

/// Writes outputs: .csv gets the scenario's primary series (the bid
/// subcommand also drops a JSON summary next to it), anything else the
/// full report; no path prints aggregates to stdout.
fn write_outputs(
    report: &RunReport,
    out: Option<&Path>,
    summary: Option<serde_json::Value>,
) -> Result<(), Error> {
    let Some(path) = out else {
        println!("{}", serde_json::to_string_pretty(&report.aggregates)?);
        return Ok(());
    };
    if path.extension().and_then(|e| e.to_str()) == Some("csv") {
        let series = report
            .series
            .values()
            .next()
            .ok_or_else(|| Error::MissingSeries("no series captured".into()))?;
        std::fs::write(path, series.to_csv())?;
        if let Some(summary) = summary {
            let summary_path = path.with_extension("summary.json");
            std::fs::write(summary_path, serde_json::to_string_pretty(&summary)?)?;
        }
    } else {
        harness::write_report(report, path)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Dist { common, family } => {
            let mut cfg = load_or_default(&common, "dist-report")?;
            if let Some(f) = family {
                set_param(&mut cfg, "dist", family_json(&f)?);
            }
            let report = harness::run_experiment(&cfg)?;
            write_outputs(&report, common.out.as_deref(), None)
        }
        Command::Simulate { common, n_draws } => {
            let mut cfg = load_or_default(&common, "simulate")?;
            if n_draws.is_some() {
                cfg.n_draws = n_draws;
            }
            let report = harness::run_experiment(&cfg)?;
            write_outputs(&report, common.out.as_deref(), None)
        }
        Command::Equilibrium { common, auction, family, n } => {
            if auction != "first-price" {
                return Err(Error::InvalidConfig {
                    path: "--auction".into(),
                    message: format!("only first-price equilibria are tabulated, got {auction:?}"),
                });
            }
            let mut cfg = load_or_default(&common, "equilibrium")?;
            if let Some(f) = family {
                set_param(&mut cfg, "dist", family_json(&f)?);
            }
            if common.config.is_none() {
                set_param(&mut cfg, "n", serde_json::json!(n));
            }
            let report = harness::run_experiment(&cfg)?;
            write_outputs(&report, common.out.as_deref(), None)
        }
        Command::Learn { common, learner, kappa } => {
            let mut cfg = load_or_default(&common, "sweep")?;
            if common.config.is_none() {
                set_param(&mut cfg, "dist", family_json("uniform")?);
                set_param(&mut cfg, "Ts", serde_json::json!([100, 1000, 10000]));
                set_param(&mut cfg, "seeds", serde_json::json!(50));
                let learner = match learner.as_deref() {
                    None | Some("empirical") => serde_json::json!({"name":"empirical"}),
                    Some("guarded") => {
                        serde_json::json!({"name":"guarded","kappa":kappa.unwrap_or(0.05)})
                    }
                    Some(other) => {
                        return Err(Error::InvalidConfig {
                            path: "--learner".into(),
                            message: format!("unknown learner {other:?}"),
                        })
                    }
                };
                set_param(&mut cfg, "learner", learner);
            }
            let report = harness::run_experiment(&cfg)?;
            write_outputs(&report, common.out.as_deref(), None)
        }
        Command::Online { common, algo, t } => {
            let mut cfg = load_or_default(&common, "online")?;
            if let Some(algo) = algo {
                set_param(&mut cfg, "algo", serde_json::json!(algo));
            }
            if t.is_some() {
                cfg.horizon = t;
            }
            let report = harness::run_experiment(&cfg)?;
            write_outputs(&report, common.out.as_deref(), None)
        }
        Command::Bid { common, algo, t } => {
            let mut cfg = load_or_default(&common, "bid")?;
            if let Some(algo) = algo {
                set_param(&mut cfg, "algo", serde_json::json!(algo));
            }
            if t.is_some() {
                cfg.horizon = t;
            }
            let report = harness::run_experiment(&cfg)?;
            let rep0 = &report.per_replication[0];
            let summary = serde_json::json!({
                "T": cfg.horizon.unwrap_or(10_000),
                "regret": rep0.get("regret"),
                "spend": rep0.get("spend"),
                "wins": rep0.get("wins"),
            });
            write_outputs(&report, common.out.as_deref(), Some(summary))
        }
        Command::Shade { common, family, scheme, r } => {
            let mut cfg = load_or_default(&common, "shade")?;
            if let Some(f) = family {
                set_param(&mut cfg, "dist", family_json(&f)?);
            }
            if let Some(scheme) = scheme {
                set_param(&mut cfg, "scheme", serde_json::json!(scheme));
            }
            if let Some(r) = r {
                set_param(&mut cfg, "r", serde_json::json!(r));
            }
            let report = harness::run_experiment(&cfg)?;
            write_outputs(&report, common.out.as_deref(), None)
        }
        Command::Exploit { common, scenario, t, gamma } => {
            let mut cfg = load_or_default(&common, "exploit")?;
            if let Some(s) = scenario {
                set_param(&mut cfg, "scenario", serde_json::json!(s));
            } else if common.config.is_none() {
                set_param(&mut cfg, "scenario", serde_json::json!("mean-based"));
            }
            if let Some(g) = gamma {
                set_param(&mut cfg, "gamma", serde_json::json!(g));
            }
            if t.is_some() {
                cfg.horizon = t;
            }
            let report = harness::run_experiment(&cfg)?;
            write_outputs(&report, common.out.as_deref(), None)
        }
        Command::Report { config, kind, out } => {
            let text = std::fs::read_to_string(&config)?;
            let report: RunReport =
                serde_json::from_str(&text).map_err(|e| Error::InvalidConfig {
                    path: config.display().to_string(),
                    message: e.to_string(),
                })?;
            let csv = harness::emit_plot_data(&report, &kind)?;
            match out {
                Some(path) => std::fs::write(path, csv)?,
                None => print!("{csv}"),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ (Error::InvalidConfig { .. } | Error::Json(_) | Error::InvalidParams(_))) => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
        Err(Error::Io(e)) => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("numeric failure: {e}");
            ExitCode::from(3)
        }
    }
}
