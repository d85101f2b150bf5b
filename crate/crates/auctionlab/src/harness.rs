//! Experiment orchestration: declarative configs, seeded replication with
//! counter-derived RNG streams (results never depend on worker count),
//! JSON reports with per-replication metrics, and CSV series for plots.

use crate::batch::{self, Learner, SampleSet};
use crate::bidlearn;
use crate::dist::{self, Dist};
use crate::dynamic::{self, BuyerMode, PostedBuyer};
use crate::equil::{self, Strategy};
use crate::error::{Error, Result};
use crate::mech::{self, Mechanism};
use crate::online;
use crate::rng;
use crate::strat;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedSpec {
    pub master: u64,
    #[serde(default = "default_replications")]
    pub replications: usize,
}

fn default_replications() -> usize {
    1
}

/// Declarative experiment description: a scenario tag, its module-specific
/// parameter object, the horizon/draw count, seeding and output paths.
/// Unknown keys are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: String,
    #[serde(default)]
    pub params: serde_json::Value,
    #[serde(default)]
    pub n_draws: Option<usize>,
    #[serde(rename = "T", default)]
    pub horizon: Option<usize>,
    pub seeds: SeedSpec,
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default)]
    pub schema_version: Option<u32>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig {
                path: "config".into(),
                message: e.to_string(),
            })?;
        if let Some(v) = cfg.schema_version {
            if v != SCHEMA_VERSION {
                return Err(Error::InvalidConfig {
                    path: "schema_version".into(),
                    message: format!(
                        "config schema {v} does not match artifact schema {SCHEMA_VERSION}"
                    ),
                });
            }
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Aggregate {
    pub mean: f64,
    pub std: f64,
    pub p05: f64,
    pub p95: f64,
}

/// Named tabular series (CSV-ready) captured from the first replication.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Series {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

pub type Metrics = BTreeMap<String, f64>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub artifact_version: String,
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub master_seed: u64,
    pub wall_clock_s: f64,
    pub per_replication: Vec<Metrics>,
    pub aggregates: BTreeMap<String, Aggregate>,
    pub series: BTreeMap<String, Series>,
}

fn aggregate(per_replication: &[Metrics]) -> BTreeMap<String, Aggregate> {
    let mut out = BTreeMap::new();
    if per_replication.is_empty() {
        return out;
    }
    for key in per_replication[0].keys() {
        let mut values: Vec<f64> =
            per_replication.iter().filter_map(|m| m.get(key)).copied().collect();
        values.sort_by(f64::total_cmp);
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let idx = |p: f64| values[(p * (values.len() - 1) as f64).round() as usize];
        out.insert(
            key.clone(),
            Aggregate { mean, std: var.sqrt(), p05: idx(0.05), p95: idx(0.95) },
        );
    }
    out
}

fn params<T: serde::de::DeserializeOwned>(cfg: &ExperimentConfig) -> Result<T> {
    serde_json::from_value::<T>(cfg.params.clone()).map_err(|e| Error::InvalidConfig {
        path: format!("params ({})", cfg.scenario),
        message: e.to_string(),
    })
}

fn invalid(path: &str, message: impl Into<String>) -> Error {
    Error::InvalidConfig { path: path.into(), message: message.into() }
}

/// Runs the configured scenario across replications. Replication k draws
/// its RNG stream from (master seed, k, scenario), so per-replication
/// metrics are byte-identical however many workers execute them.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport> {
    validate(cfg)?;
    let start = std::time::Instant::now();
    let reps = cfg.seeds.replications.max(1);
    let results: Result<Vec<(Metrics, BTreeMap<String, Series>)>> = (0..reps)
        .into_par_iter()
        .map(|k| {
            let seed = rng::derive_seed(cfg.seeds.master, k as u64, &cfg.scenario);
            run_replication(cfg, seed, k == 0)
        })
        .collect();
    let results = results?;
    let per_replication: Vec<Metrics> = results.iter().map(|(m, _)| m.clone()).collect();
    let series = results.into_iter().next().map(|(_, s)| s).unwrap_or_default();
    Ok(RunReport {
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        master_seed: cfg.seeds.master,
        wall_clock_s: start.elapsed().as_secs_f64(),
        aggregates: aggregate(&per_replication),
        per_replication,
        series,
    })
}

/// Validates the scenario tag and its parameter object without running.
pub fn validate(cfg: &ExperimentConfig) -> Result<()> {
    match cfg.scenario.as_str() {
        "revenue-example-2-4-3" => Ok(()),
        "simulate" => params::<SimulateParams>(cfg).map(|_| ()),
        "dist-report" => params::<DistReportParams>(cfg).map(|_| ()),
        "equilibrium" => params::<EquilibriumParams>(cfg).map(|_| ()),
        "bk-curve" => params::<BkCurveParams>(cfg).map(|_| ()),
        "profit-curve" => params::<ProfitCurveParams>(cfg).map(|_| ()),
        "sweep" => params::<SweepParams>(cfg).map(|_| ()),
        "erm" => params::<ErmParams>(cfg).map(|_| ()),
        "online" => params::<OnlineParams>(cfg).map(|_| ()),
        "bid" => params::<BidParams>(cfg).map(|_| ()),
        "shade" => params::<ShadeParams>(cfg).map(|_| ()),
        "exploit" => params::<ExploitParams>(cfg).map(|_| ()),
        other => Err(invalid("scenario", format!("unknown scenario {other:?}"))),
    }
}

fn run_replication(
    cfg: &ExperimentConfig,
    seed: u64,
    capture_series: bool,
) -> Result<(Metrics, BTreeMap<String, Series>)> {
    let mut metrics = Metrics::new();
    let mut series = BTreeMap::new();
    match cfg.scenario.as_str() {
        "revenue-example-2-4-3" => {
            let draws = cfg.n_draws.unwrap_or(1_000_000);
            let u = Dist::uniform(0.0, 1.0)?;
            let dists = [u.clone(), u];
            let truthful = [Strategy::Identity, Strategy::Identity];
            let plain =
                mech::expected_metrics(&Mechanism::Vickrey, &dists, &truthful, draws, seed)?;
            let reserved = mech::expected_metrics(
                &Mechanism::SpAnonymous { reserve: 0.5 },
                &dists,
                &truthful,
                draws,
                seed.wrapping_add(1),
            )?;
            metrics.insert("vickrey_revenue".into(), plain.revenue);
            metrics.insert("vickrey_utility".into(), plain.utilities[0]);
            metrics.insert("vickrey_welfare".into(), plain.welfare);
            metrics.insert("reserved_revenue".into(), reserved.revenue);
            metrics.insert("reserved_utility".into(), reserved.utilities[0]);
            metrics.insert("reserved_welfare".into(), reserved.welfare);
        }
        "simulate" => {
            let p: SimulateParams = params(cfg)?;
            for d in &p.dists {
                d.validate()?;
            }
            let draws = cfg.n_draws.unwrap_or(1_000_000);
            let strategies =
                p.strategies.unwrap_or_else(|| vec![Strategy::Identity; p.dists.len()]);
            let m = mech::expected_metrics(&p.mechanism, &p.dists, &strategies, draws, seed)?;
            metrics.insert("revenue".into(), m.revenue);
            metrics.insert("welfare".into(), m.welfare);
            metrics.insert("sale_rate".into(), m.sale_rate);
            for (i, u) in m.utilities.iter().enumerate() {
                metrics.insert(format!("utility_{i}"), *u);
            }
        }
        "dist-report" => {
            let p: DistReportParams = params(cfg)?;
            p.dist.validate()?;
            let r_star = dist::monopoly_price(&p.dist)?;
            let (regular, mhr) = dist::regularity_report(&p.dist, dist::IRON_GRID)?;
            metrics.insert("monopoly_price".into(), r_star);
            metrics.insert("monopoly_revenue".into(), dist::monopoly_revenue(&p.dist, r_star));
            metrics.insert("regular".into(), f64::from(regular as u8));
            metrics.insert("mhr".into(), f64::from(mhr as u8));
            if capture_series {
                let table = dist::iron(&p.dist, dist::IRON_GRID)?;
                series.insert(
                    "virtual-values".into(),
                    Series {
                        columns: vec!["value".into(), "psi".into(), "psi_ironed".into()],
                        rows: table
                            .grid
                            .iter()
                            .zip(table.psi.iter().zip(&table.psi_ironed))
                            .map(|(x, (p, pi))| vec![*x, *p, *pi])
                            .collect(),
                    },
                );
            }
        }
        "equilibrium" => {
            let p: EquilibriumParams = params(cfg)?;
            p.dist.validate()?;
            let draws = cfg.n_draws.unwrap_or(400_000);
            let beta = equil::fp_symmetric_equilibrium(&p.dist, p.n)?;
            let (fp, sp) = equil::revenue_equivalence_check(&p.dist, p.n, draws, seed)?;
            metrics.insert("first_price_revenue".into(), fp);
            metrics.insert("second_price_revenue".into(), sp);
            if capture_series {
                series.insert("strategy".into(), strategy_series(&beta, &p.dist));
            }
        }
        "bk-curve" => {
            let p: BkCurveParams = params(cfg)?;
            p.dist.validate()?;
            let draws = cfg.n_draws.unwrap_or(1_000_000);
            let mut rows = Vec::new();
            for (i, &n) in p.ns.iter().enumerate() {
                let (vick, myer) = equil::bulow_klemperer_check(
                    &p.dist,
                    n,
                    draws,
                    seed.wrapping_add(i as u64),
                )?;
                metrics.insert(format!("vickrey_{}", n + 1), vick);
                metrics.insert(format!("myerson_{n}"), myer);
                rows.push(vec![n as f64, vick, myer]);
            }
            if capture_series {
                series.insert(
                    "bk-curve".into(),
                    Series {
                        columns: vec![
                            "n".into(),
                            "vickrey_revenue".into(),
                            "myerson_revenue".into(),
                        ],
                        rows,
                    },
                );
            }
        }
        "profit-curve" => {
            let p: ProfitCurveParams = params(cfg)?;
            let grid = p.grid.unwrap_or(512);
            let mut columns = vec!["r".into()];
            for label in p.dists.keys() {
                columns.push(format!("Pi_{label}"));
            }
            let hi = p
                .dists
                .values()
                .map(|d| {
                    let (_, h) = d.support();
                    if h.is_finite() { h } else { d.quantile(0.999) }
                })
                .fold(0.0f64, f64::max);
            let mut rows = Vec::new();
            for k in 0..grid {
                let r = hi * k as f64 / (grid - 1) as f64;
                let mut row = vec![r];
                for d in p.dists.values() {
                    row.push(dist::monopoly_revenue(d, r));
                }
                rows.push(row);
            }
            for (label, d) in &p.dists {
                d.validate()?;
                metrics.insert(format!("monopoly_price_{label}"), dist::monopoly_price(d)?);
            }
            if capture_series {
                series.insert("profit-curve".into(), Series { columns, rows });
            }
        }
        "sweep" => {
            let p: SweepParams = params(cfg)?;
            p.dist.validate()?;
            let report =
                batch::sample_complexity_sweep(&p.dist, &p.ts, p.seeds, p.learner, seed)?;
            for row in &report.per_t {
                metrics.insert(format!("mean_ratio_T{}", row.t), row.mean_ratio);
                metrics.insert(format!("p05_ratio_T{}", row.t), row.p05_ratio);
            }
            if capture_series {
                series.insert(
                    "sweep".into(),
                    Series {
                        columns: vec!["T".into(), "mean_ratio".into(), "p05_ratio".into()],
                        rows: report
                            .per_t
                            .iter()
                            .map(|r| vec![r.t as f64, r.mean_ratio, r.p05_ratio])
                            .collect(),
                    },
                );
            }
        }
        "erm" => {
            let p: ErmParams = params(cfg)?;
            let t = cfg.horizon.or(cfg.n_draws).unwrap_or(10_000);
            let (train, holdout) = match (&p.samples_csv, &p.dists) {
                (Some(path), _) => {
                    let file = std::fs::File::open(path)?;
                    let all = SampleSet::from_csv(std::io::BufReader::new(file))?;
                    // disjoint even split: first half trains, second half holds out
                    let rows = all.rows();
                    let half = rows.len() / 2;
                    (
                        SampleSet::new(rows[..half].to_vec())?,
                        SampleSet::new(rows[half..].to_vec())?,
                    )
                }
                (None, Some(dists)) => {
                    for d in dists {
                        d.validate()?;
                    }
                    (
                        SampleSet::draw(dists, t, seed)?,
                        SampleSet::draw(dists, t, seed.wrapping_add(1))?,
                    )
                }
                (None, None) => {
                    return Err(invalid("params", "erm needs dists or samples_csv"))
                }
            };
            let report = match p.method.as_str() {
                "anonymous" => batch::erm_anonymous_reserve(&train)?,
                "lazy" => {
                    let reserves = batch::lazy_reserves_from_samples(&train)?;
                    let m = Mechanism::SpLazy { reserves };
                    let revenue = batch::empirical_revenue(&m, &train)?;
                    batch::LearnedMechanismReport {
                        mechanism: m,
                        empirical_revenue: revenue,
                        holdout_revenue: None,
                        ratio_to_oracle: None,
                    }
                }
                "eager" => {
                    let init = batch::lazy_reserves_from_samples(&train)?;
                    batch::local_search_eager(&train, &init, p.grid_step.unwrap_or(0.05))?
                }
                "boosted" => {
                    let init = batch::lazy_reserves_from_samples(&train)?;
                    let boosts = p.boost_grid.unwrap_or_else(|| vec![1.0, 1.25, 1.5, 1.75]);
                    let reserves = p
                        .reserve_grid
                        .unwrap_or_else(|| (0..=10).map(|k| k as f64 / 10.0).collect());
                    batch::search_boosted(&train, &init, &boosts, &reserves)?
                }
                "llevel" => {
                    let grid = p
                        .reserve_grid
                        .unwrap_or_else(|| (0..=4).map(|k| k as f64 / 4.0).collect());
                    batch::search_llevel(&train, p.levels.unwrap_or(2), &grid)?
                }
                other => {
                    return Err(invalid("params.method", format!("unknown method {other:?}")))
                }
            };
            let report = report.with_holdout(&holdout)?;
            metrics.insert("train_revenue".into(), report.empirical_revenue);
            metrics.insert("holdout_revenue".into(), report.holdout_revenue.unwrap());
        }
        "online" => {
            let p: OnlineParams = params(cfg)?;
            let t = cfg.horizon.unwrap_or(100_000);
            run_online(&p, t, seed, &mut metrics, capture_series.then_some(&mut series))?;
        }
        "bid" => {
            let p: BidParams = params(cfg)?;
            let t = cfg.horizon.unwrap_or(10_000);
            run_bid(&p, t, seed, &mut metrics, capture_series.then_some(&mut series))?;
        }
        "shade" => {
            let p: ShadeParams = params(cfg)?;
            run_shade(&p, seed, cfg, &mut metrics, capture_series.then_some(&mut series))?;
        }
        "exploit" => {
            let p: ExploitParams = params(cfg)?;
            let t = cfg.horizon.unwrap_or(120_000);
            run_exploit(&p, t, cfg, seed, &mut metrics, capture_series.then_some(&mut series))?;
        }
        other => return Err(invalid("scenario", format!("unknown scenario {other:?}"))),
    }
    Ok((metrics, series))
}

fn strategy_series(beta: &Strategy, d: &Dist) -> Series {
    let (_, hi) = d.support();
    let qmax = if hi.is_finite() { 1.0 } else { dist::TAIL_CAP };
    let rows: Vec<Vec<f64>> = (0..512)
        .map(|k| {
            let x = d.quantile(qmax * k as f64 / 511.0);
            vec![x, beta.bid(x)]
        })
        .collect();
    Series { columns: vec!["value".into(), "bid".into()], rows }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulateParams {
    mechanism: Mechanism,
    dists: Vec<Dist>,
    #[serde(default)]
    strategies: Option<Vec<Strategy>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistReportParams {
    dist: Dist,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EquilibriumParams {
    dist: Dist,
    n: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BkCurveParams {
    dist: Dist,
    ns: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfitCurveParams {
    dists: BTreeMap<String, Dist>,
    #[serde(default)]
    grid: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepParams {
    dist: Dist,
    #[serde(rename = "Ts")]
    ts: Vec<usize>,
    seeds: usize,
    learner: Learner,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ErmParams {
    /// Draw samples from these laws, or load them from `samples_csv`.
    #[serde(default)]
    dists: Option<Vec<Dist>>,
    #[serde(default)]
    samples_csv: Option<String>,
    method: String,
    #[serde(default)]
    grid_step: Option<f64>,
    #[serde(default)]
    boost_grid: Option<Vec<f64>>,
    #[serde(default)]
    reserve_grid: Option<Vec<f64>>,
    #[serde(default)]
    levels: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OnlineParams {
    algo: String,
    #[serde(default)]
    dist: Option<Dist>,
    #[serde(default)]
    eps: Option<f64>,
    #[serde(default)]
    value: Option<f64>,
    #[serde(default)]
    n: Option<usize>,
    #[serde(default)]
    arms: Option<Vec<f64>>,
}

fn episode_series(prices: &[f64], accepts: &[bool], best_fixed_rate: f64) -> Series {
    let mut rows = Vec::with_capacity(prices.len());
    let mut cum_revenue = 0.0;
    for (t, (p, a)) in prices.iter().zip(accepts).enumerate() {
        if *a {
            cum_revenue += p;
        }
        let regret = best_fixed_rate * (t + 1) as f64 - cum_revenue;
        rows.push(vec![(t + 1) as f64, *p, f64::from(*a as u8), regret]);
    }
    Series {
        columns: vec!["t".into(), "price".into(), "accept".into(), "cumulative_regret".into()],
        rows,
    }
}

fn run_online(
    p: &OnlineParams,
    t: usize,
    seed: u64,
    metrics: &mut Metrics,
    mut series: Option<&mut BTreeMap<String, Series>>,
) -> Result<()> {
    match p.algo.as_str() {
        "ucb" | "exp3" => {
            let means = p.arms.clone().unwrap_or_else(|| vec![0.9, 0.5]);
            let mut state = online::BanditState::new(means.len(), t);
            let mut rng = rng::substream(seed, 0, "harness.bandit");
            let mut reward_sum = 0.0;
            let mut rows = Vec::with_capacity(if series.is_some() { t } else { 0 });
            let best = means.iter().copied().fold(0.0f64, f64::max);
            use rand::Rng;
            for step in 0..t {
                let arm = if p.algo == "ucb" {
                    online::ucb_step(&state)
                } else {
                    online::exp3_step(&state, &mut rng)
                };
                let reward = if rng.random::<f64>() < means[arm] { 1.0 } else { 0.0 };
                if p.algo == "ucb" {
                    state.record(arm, reward)?;
                } else {
                    online::exp3_update(&mut state, arm, reward)?;
                }
                reward_sum += reward;
                if series.is_some() {
                    rows.push(vec![
                        (step + 1) as f64,
                        arm as f64,
                        reward,
                        best * (step + 1) as f64 - reward_sum,
                    ]);
                }
            }
            metrics.insert("regret".into(), best * t as f64 - reward_sum);
            if let Some(series) = series.as_deref_mut() {
                series.insert(
                    "episode".into(),
                    Series {
                        columns: vec![
                            "t".into(),
                            "action".into(),
                            "reward".into(),
                            "cumulative_regret".into(),
                        ],
                        rows,
                    },
                );
            }
        }
        "posted-ucb" | "posted-exp3" => {
            let d = p.dist.clone().unwrap_or(Dist::Uniform { a: 0.0, b: 1.0 });
            d.validate()?;
            let mut rng = rng::substream(seed, 0, "harness.posted.values");
            let values = d.sample_n(&mut rng, t);
            let eps = p.eps.unwrap_or_else(|| (t as f64).powf(-1.0 / 3.0));
            let ep = online::posted_price_bandit(
                &values,
                eps,
                p.algo == "posted-ucb",
                t,
                seed.wrapping_add(1),
            )?;
            metrics.insert("revenue".into(), ep.revenue);
            metrics.insert("regret".into(), ep.regret);
            if let Some(series) = series.as_deref_mut() {
                let rate = (ep.revenue + ep.regret) / t as f64;
                series.insert("episode".into(), episode_series(&ep.prices, &ep.accepts, rate));
            }
        }
        "cautious" => {
            let x = p.value.unwrap_or(0.5);
            let ep = online::cautious_search(x, t);
            metrics.insert("revenue".into(), ep.revenue);
            metrics.insert("regret".into(), ep.regret);
            if let Some(series) = series.as_deref_mut() {
                series.insert("episode".into(), episode_series(&ep.prices, &ep.accepts, x));
            }
        }
        "reserve-epochs" => {
            let d = p.dist.clone().unwrap_or(Dist::Uniform { a: 0.0, b: 1.0 });
            d.validate()?;
            let n = p.n.unwrap_or(2);
            let ep = online::symmetric_reserve_learning(&d, n, t, seed)?;
            metrics.insert("regret".into(), ep.regret);
            metrics.insert("revenue".into(), ep.revenue);
            metrics.insert("oracle_reserve".into(), ep.oracle_reserve);
            metrics.insert("final_reserve".into(), ep.final_reserve());
            if let Some(series) = series {
                series.insert(
                    "episode".into(),
                    Series {
                        columns: vec![
                            "t".into(),
                            "price".into(),
                            "accept".into(),
                            "cumulative_regret".into(),
                        ],
                        rows: ep
                            .epochs
                            .iter()
                            .scan(0.0, |acc, e| {
                                *acc += e.gap * e.len as f64;
                                Some(vec![(e.start + e.len) as f64, e.reserve, 1.0, *acc])
                            })
                            .collect(),
                    },
                );
            }
        }
        other => return Err(invalid("params.algo", format!("unknown online algo {other:?}"))),
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BidParams {
    algo: String,
    #[serde(default)]
    click_prob: Option<f64>,
    #[serde(default)]
    competition: Option<Dist>,
    #[serde(default)]
    value_support: Option<Vec<f64>>,
    #[serde(default)]
    value_probs: Option<Vec<f64>>,
    #[serde(default)]
    bid_grid: Option<Vec<f64>>,
    #[serde(default)]
    mechanism: Option<Mechanism>,
    #[serde(default)]
    budget: Option<f64>,
    #[serde(default)]
    gamma: Option<f64>,
}

fn bidder_series(ep: &bidlearn::BidderEpisode) -> Series {
    let mut rows = Vec::with_capacity(ep.bids.len());
    let mut cum_utility = 0.0;
    for t in 0..ep.bids.len() {
        if ep.wins[t] {
            cum_utility += ep.values[t] - ep.competition[t];
        }
        rows.push(vec![
            (t + 1) as f64,
            ep.bids[t],
            f64::from(ep.wins[t] as u8),
            ep.competition[t],
            cum_utility,
        ]);
    }
    Series {
        columns: vec![
            "t".into(),
            "bid".into(),
            "win".into(),
            "competition".into(),
            "cumulative_utility".into(),
        ],
        rows,
    }
}

fn run_bid(
    p: &BidParams,
    t: usize,
    seed: u64,
    metrics: &mut Metrics,
    mut series: Option<&mut BTreeMap<String, Series>>,
) -> Result<()> {
    let comp_law = p.competition.clone().unwrap_or(Dist::Uniform { a: 0.0, b: 1.0 });
    comp_law.validate()?;
    let mut rng = rng::substream(seed, 0, "harness.bid.competition");
    match p.algo.as_str() {
        "ucbid" => {
            let comp = comp_law.sample_n(&mut rng, t);
            let ep = bidlearn::ucbid(p.click_prob.unwrap_or(0.5), &comp, t, seed)?;
            metrics.insert("regret".into(), ep.regret);
            metrics.insert("utility".into(), ep.utility);
            metrics.insert("wins".into(), ep.win_count() as f64);
            if let Some(series) = series.as_deref_mut() {
                series.insert("episode".into(), bidder_series(&ep));
            }
        }
        "contextual" => {
            let support = p.value_support.clone().unwrap_or_else(|| vec![0.8]);
            let probs = p
                .value_probs
                .clone()
                .unwrap_or_else(|| vec![1.0 / support.len() as f64; support.len()]);
            let grid = p
                .bid_grid
                .clone()
                .unwrap_or_else(|| (0..=20).map(|k| k as f64 / 20.0).collect());
            let mechanism = p.mechanism.clone().unwrap_or(Mechanism::Vickrey);
            let ep = bidlearn::contextual_bid_learner(
                &support,
                &probs,
                &grid,
                &mechanism,
                &[comp_law],
                t,
                seed,
            )?;
            metrics.insert("regret".into(), ep.regret);
            metrics.insert("utility".into(), ep.utility);
            metrics.insert("wins".into(), ep.win_count() as f64);
            if let Some(series) = series.as_deref_mut() {
                series.insert("episode".into(), bidder_series(&ep));
            }
        }
        "pacing" => {
            let values_law = Dist::Uniform { a: 0.0, b: 1.0 };
            let values = values_law.sample_n(&mut rng, t);
            let comp = comp_law.sample_n(&mut rng, t);
            let budget = p.budget.unwrap_or(0.1 * t as f64 / 6.0);
            let gamma = p.gamma.unwrap_or(1.0 / (t as f64).sqrt());
            let out = bidlearn::pacing_bidder(&values, &comp, budget, gamma, t)?;
            metrics.insert("regret".into(), out.episode.regret);
            metrics.insert("utility".into(), out.episode.utility);
            metrics.insert("wins".into(), out.episode.win_count() as f64);
            metrics.insert("spend".into(), out.spend);
            metrics.insert("terminal_mu".into(), out.terminal_mu);
            if let Some(series) = series {
                let mut s = bidder_series(&out.episode);
                s.columns.push("mu".into());
                for (row, mu) in s.rows.iter_mut().zip(&out.mu_path) {
                    row.push(*mu);
                }
                series.insert("episode".into(), s);
            }
        }
        other => return Err(invalid("params.algo", format!("unknown bid algo {other:?}"))),
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShadeParams {
    dist: Dist,
    scheme: String,
    #[serde(default)]
    r: Option<f64>,
    #[serde(default)]
    n: Option<usize>,
    #[serde(default)]
    competition: Option<Dist>,
}

fn run_shade(
    p: &ShadeParams,
    seed: u64,
    cfg: &ExperimentConfig,
    metrics: &mut Metrics,
    mut series: Option<&mut BTreeMap<String, Series>>,
) -> Result<()> {
    p.dist.validate()?;
    let g_law = p.competition.clone().unwrap_or_else(|| p.dist.clone());
    let draws = cfg.n_draws.unwrap_or(400_000);
    match p.scheme.as_str() {
        "threshold" => {
            let r = match p.r {
                Some(r) => r,
                None => dist::monopoly_price(&p.dist)?,
            };
            let shaded = strat::thresholded_strategy(&p.dist, Strategy::Identity, r)?;
            let (utility, payment) = strat::strategic_utility(&shaded, &g_law, draws, seed)?;
            metrics.insert("utility".into(), utility);
            metrics.insert("payment".into(), payment);
            metrics.insert("reserve_value".into(), shaded.reserve_value);
            metrics.insert("reserve_price".into(), shaded.reserve_price());
            if let Some(series) = series.as_deref_mut() {
                series.insert("strategy".into(), strategy_series(&shaded.strategy, &p.dist));
            }
        }
        "linear" => {
            let out = strat::optimal_linear_alpha(&p.dist, &g_law)?;
            metrics.insert("alpha".into(), out.alpha);
            metrics.insert("fallback".into(), f64::from(out.fallback as u8));
            let shaded = strat::ShadedStrategy::new(
                Strategy::Linear { alpha: out.alpha },
                p.dist.clone(),
            )?;
            let (utility, payment) = strat::strategic_utility(&shaded, &g_law, draws, seed)?;
            metrics.insert("utility".into(), utility);
            metrics.insert("payment".into(), payment);
            if let Some(series) = series.as_deref_mut() {
                series.insert("strategy".into(), strategy_series(&shaded.strategy, &p.dist));
            }
        }
        "myerson-eq" => {
            let n = p.n.unwrap_or(2);
            let beta = strat::myerson_shading(&p.dist, n)?;
            metrics.insert("min_bid".into(), beta.bid(p.dist.support().0));
            if let Some(series) = series.as_deref_mut() {
                series.insert("strategy".into(), strategy_series(&beta, &p.dist));
            }
        }
        "nash-threshold" => {
            let n = p.n.unwrap_or(2);
            let r = strat::thresholded_nash_reserve(&p.dist, n)?;
            metrics.insert("nash_reserve".into(), r);
            let shaded = strat::thresholded_strategy(&p.dist, Strategy::Identity, r)?;
            metrics.insert("reserve_price".into(), shaded.reserve_price());
            if let Some(series) = series {
                series.insert("strategy".into(), strategy_series(&shaded.strategy, &p.dist));
            }
        }
        other => return Err(invalid("params.scheme", format!("unknown scheme {other:?}"))),
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExploitParams {
    scenario: String,
    #[serde(default)]
    dist: Option<Dist>,
    #[serde(default)]
    gamma: Option<f64>,
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    buyer: Option<String>,
    #[serde(default)]
    tau: Option<f64>,
    #[serde(default)]
    dists: Option<Vec<Dist>>,
}

fn transcript_series(tr: &dynamic::DynamicTranscript) -> Series {
    let mut rows = Vec::with_capacity(tr.prices.len());
    let mut cum = 0.0;
    for t in 0..tr.prices.len() {
        cum += tr.payments[t];
        rows.push(vec![
            (t + 1) as f64,
            tr.prices[t],
            tr.bids[t],
            f64::from(tr.allocations[t] as u8),
            tr.payments[t],
            cum,
        ]);
    }
    Series {
        columns: vec![
            "t".into(),
            "price".into(),
            "bid".into(),
            "allocated".into(),
            "payment".into(),
            "cumulative_revenue".into(),
        ],
        rows,
    }
}

fn run_exploit(
    p: &ExploitParams,
    t: usize,
    cfg: &ExperimentConfig,
    seed: u64,
    metrics: &mut Metrics,
    mut series: Option<&mut BTreeMap<String, Series>>,
) -> Result<()> {
    match p.scenario.as_str() {
        "mean-based" => {
            let f_law = match &p.dist {
                Some(d) => d.clone(),
                None => Dist::discrete(vec![(0.25, 0.5), (0.5, 0.25), (1.0, 0.25)])?,
            };
            let mode = match p.buyer.as_deref() {
                None | Some("oracle") => BuyerMode::MeanBasedOracle,
                Some("exp3") => BuyerMode::MeanBasedExp3,
                Some("ex-post-ir") => BuyerMode::ExPostIr,
                Some(other) => {
                    return Err(invalid("params.buyer", format!("unknown buyer {other:?}")))
                }
            };
            let tr = dynamic::exploit_mean_based(&f_law, t, mode, seed)?;
            metrics.insert("revenue".into(), tr.seller_revenue);
            metrics.insert("revenue_rate".into(), tr.seller_revenue / t as f64);
            metrics.insert("buyer_utility".into(), tr.buyer_utility);
            for (v, r) in &tr.revenue_by_value {
                metrics.insert(format!("revenue_value_{v}"), *r);
            }
            if let Some(series) = series.as_deref_mut() {
                series.insert("transcript".into(), transcript_series(&tr));
            }
        }
        "fee" => {
            let dists = match &p.dists {
                Some(ds) => ds.clone(),
                None => vec![Dist::uniform(0.0, 1.0)?, Dist::uniform(0.0, 1.0)?],
            };
            for d in &dists {
                d.validate()?;
            }
            let draws = cfg.n_draws.unwrap_or(1_000_000);
            let out = dynamic::fee_mechanism(&dists, draws, seed)?;
            metrics.insert("revenue".into(), out.seller_revenue);
            metrics.insert(
                "losing_bidder_negative_rate".into(),
                out.losing_bidder_negative_rate,
            );
            for (i, (fee, u)) in out.fees.iter().zip(&out.buyer_utilities).enumerate() {
                metrics.insert(format!("fee_{i}"), *fee);
                metrics.insert(format!("net_utility_{i}"), *u);
            }
        }
        "two-phase" => {
            let f_law = match &p.dist {
                Some(d) => d.clone(),
                None => Dist::uniform(0.0, 1.0)?,
            };
            let gamma = p.gamma.unwrap_or(0.8);
            let alpha = p.alpha.unwrap_or_else(|| (t as f64).powf(-1.0 / 3.0));
            let buyer = match p.buyer.as_deref() {
                None | Some("myopic-truthful") => PostedBuyer::MyopicTruthful,
                Some("threshold-liar") => PostedBuyer::ThresholdLiar { tau: p.tau.unwrap_or(0.0) },
                Some(other) => {
                    return Err(invalid("params.buyer", format!("unknown buyer {other:?}")))
                }
            };
            let tr = dynamic::two_phase_posted_price(&f_law, gamma, t, alpha, buyer, seed)?;
            metrics.insert("revenue".into(), tr.seller_revenue);
            metrics.insert("regret".into(), dynamic::dynamic_regret(&tr, &f_law)?);
            metrics.insert("buyer_discounted_utility".into(), tr.buyer_discounted_utility);
            if let Some(series) = series {
                series.insert("transcript".into(), transcript_series(&tr));
            }
        }
        other => {
            return Err(invalid(
                "params.scenario",
                format!("unknown exploit scenario {other:?}"),
            ))
        }
    }
    Ok(())
}

/// Extracts a named plot series from a report as CSV text (LF, UTF-8).
pub fn emit_plot_data(report: &RunReport, kind: &str) -> Result<String> {
    let series = report
        .series
        .get(kind)
        .ok_or_else(|| Error::MissingSeries(kind.to_string()))?;
    if series.rows.is_empty() {
        return Err(Error::MissingSeries(kind.to_string()));
    }
    Ok(series.to_csv())
}

pub fn write_report(report: &RunReport, path: &std::path::Path) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut file, report)?;
    file.write_all(b"\n")?;
    Ok(())
}
