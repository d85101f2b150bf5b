//! Sequential decision algorithms: UCB and EXP3 bandits, posted-price
//! learners over a discretized price grid, the cautious search whose regret
//! grows like log log T, and reserve learning in repeated symmetric
//! second-price auctions.

use crate::dist::{self, Dist};
use crate::error::{Error, Result};
use crate::num;
use crate::rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// State shared by the UCB and EXP3 learners.
///
/// `sums`/`pulls` back the UCB indices; `cum_shift` holds the EXP3
/// importance-weighted reward sums in shifted form (only the pulled arm's
/// deficit -(1-X)/p is accumulated; the common +1 per round cancels in the
/// softmax).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BanditState {
    pub arms: usize,
    pub horizon: usize,
    pub t: usize,
    pub pulls: Vec<u64>,
    pub sums: Vec<f64>,
    pub cum_shift: Vec<f64>,
    pub eta: f64,
}

impl BanditState {
    pub fn new(arms: usize, horizon: usize) -> Self {
        assert!(arms >= 1 && horizon >= 1);
        let eta = ((arms as f64).ln().max(0.0) / (arms as f64 * horizon as f64)).sqrt();
        BanditState {
            arms,
            horizon,
            t: 0,
            pulls: vec![0; arms],
            sums: vec![0.0; arms],
            cum_shift: vec![0.0; arms],
            eta,
        }
    }

    /// Records an observed reward for the pulled arm.
    pub fn record(&mut self, arm: usize, reward: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&reward) {
            return Err(Error::RewardOutOfRange(reward));
        }
        self.pulls[arm] += 1;
        self.sums[arm] += reward;
        self.t += 1;
        Ok(())
    }

    /// EXP3 sampling probabilities: softmax of eta times the cumulative
    /// reward estimates, computed in the log domain.
    pub fn exp3_probs(&self) -> Vec<f64> {
        let max = self.cum_shift.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> =
            self.cum_shift.iter().map(|c| (self.eta * (c - max)).exp()).collect();
        let z: f64 = weights.iter().sum();
        weights.into_iter().map(|w| w / z).collect()
    }
}

/// UCB arm choice: unpulled arms first in index order, then the highest
/// index mean + sqrt(log T / N_k); ties to the smallest index.
pub fn ucb_step(s: &BanditState) -> usize {
    for k in 0..s.arms {
        if s.pulls[k] == 0 {
            return k;
        }
    }
    let log_t = (s.horizon as f64).ln();
    let index = |k: usize| {
        s.sums[k] / s.pulls[k] as f64 + (log_t / s.pulls[k] as f64).sqrt()
    };
    let mut best = 0;
    for k in 1..s.arms {
        if index(k) > index(best) {
            best = k;
        }
    }
    best
}

/// EXP3 arm choice: samples from the exponential-weights distribution.
pub fn exp3_step<R: Rng + ?Sized>(s: &BanditState, rng: &mut R) -> usize {
    let probs = s.exp3_probs();
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (k, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return k;
        }
    }
    s.arms - 1
}

/// EXP3 update with the loss-based estimator Xhat = 1 - (1-X)/p for the
/// pulled arm (and 1 implicitly for every other arm).
pub fn exp3_update(s: &mut BanditState, arm: usize, reward: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&reward) {
        return Err(Error::RewardOutOfRange(reward));
    }
    let p = s.exp3_probs()[arm];
    s.cum_shift[arm] -= (1.0 - reward) / p;
    s.record(arm, reward)
}

/// One posted-price run: prices, accept flags, realized revenue and regret
/// against the best fixed grid price in hindsight.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PricingEpisode {
    pub horizon: usize,
    pub prices: Vec<f64>,
    pub accepts: Vec<bool>,
    pub revenue: f64,
    pub regret: f64,
}

impl PricingEpisode {
    fn close(mut self, best_fixed: f64) -> Self {
        self.revenue = self
            .prices
            .iter()
            .zip(&self.accepts)
            .map(|(p, a)| if *a { *p } else { 0.0 })
            .sum();
        self.regret = best_fixed - self.revenue;
        self
    }
}

/// The eps-grid of prices {0, eps, 2 eps, ...} inside [0, 1). Grid points
/// are snapped to 1e-12 so decimal steps like 0.1 yield exact decimals.
pub fn price_grid(eps: f64) -> Vec<f64> {
    let k = (1.0 / eps + 1e-9).floor() as usize;
    (0..k.max(1))
        .map(|i| (i as f64 * eps * 1e12).round() / 1e12)
        .collect()
}

/// Runs UCB (stochastic) or EXP3 (adversarial) over the eps-grid of posted
/// prices; a buyer with value x accepts any price <= x and the reward is
/// p * accept.
pub fn posted_price_bandit(
    values: &[f64],
    eps: f64,
    stochastic: bool,
    t: usize,
    seed: u64,
) -> Result<PricingEpisode> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParams(format!("eps must be in (0,1), got {eps}")));
    }
    if values.len() < t {
        return Err(Error::InvalidParams("value stream shorter than horizon".into()));
    }
    let grid = price_grid(eps);
    let mut state = BanditState::new(grid.len(), t);
    let mut rng = rng::substream(seed, 0, "online.posted");
    let mut episode = PricingEpisode {
        horizon: t,
        prices: Vec::with_capacity(t),
        accepts: Vec::with_capacity(t),
        revenue: 0.0,
        regret: 0.0,
    };
    for &value in &values[..t] {
        let arm = if stochastic { ucb_step(&state) } else { exp3_step(&state, &mut rng) };
        let price = grid[arm];
        let accept = value >= price;
        let reward = if accept { price } else { 0.0 };
        if stochastic {
            state.record(arm, reward)?;
        } else {
            exp3_update(&mut state, arm, reward)?;
        }
        episode.prices.push(price);
        episode.accepts.push(accept);
    }
    let best_fixed = grid
        .iter()
        .map(|&p| p * values[..t].iter().filter(|&&x| x >= p).count() as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(episode.close(best_fixed))
}

/// Cautious price search against a fixed buyer value x in [0, 1]: epoch l
/// climbs from the last accepted price in steps 1/2^(2^l) until a price is
/// refused; after ceil(log2 log2 T) epochs the last accepted price is
/// posted to the horizon. Regret is measured against posting x throughout.
pub fn cautious_search(x: f64, t: usize) -> PricingEpisode {
    debug_assert!((0.0..=1.0).contains(&x));
    let epochs = cautious_epoch_count(t);
    let mut episode = PricingEpisode {
        horizon: t,
        prices: Vec::with_capacity(t),
        accepts: Vec::with_capacity(t),
        revenue: 0.0,
        regret: 0.0,
    };
    let mut last_accepted = 0.0f64;
    let post = |p: f64, episode: &mut PricingEpisode| -> bool {
        episode.prices.push(p);
        let accept = p <= x;
        episode.accepts.push(accept);
        accept
    };
    'outer: for l in 0..=epochs {
        let step = 0.5f64.powi(1 << l.min(10));
        let mut j = 0u64;
        loop {
            if episode.prices.len() >= t {
                break 'outer;
            }
            let p = last_accepted + j as f64 * step;
            if p > 1.0 {
                // next price would leave [0,1]; move on without posting
                break;
            }
            if post(p, &mut episode) {
                last_accepted = p;
                j += 1;
            } else {
                break;
            }
        }
    }
    while episode.prices.len() < t {
        post(last_accepted, &mut episode);
    }
    episode.close(x * t as f64)
}

pub fn cautious_epoch_count(t: usize) -> u32 {
    if t < 4 {
        return 0;
    }
    (t as f64).log2().log2().ceil() as u32
}

/// Bisection baseline for the same problem: log2(T) probes to precision
/// 1/T, each refused probe costing the full value.
pub fn binary_search_pricing(x: f64, t: usize) -> PricingEpisode {
    debug_assert!((0.0..=1.0).contains(&x));
    let mut episode = PricingEpisode {
        horizon: t,
        prices: Vec::with_capacity(t),
        accepts: Vec::with_capacity(t),
        revenue: 0.0,
        regret: 0.0,
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1.0 / t as f64 && episode.prices.len() < t {
        let mid = 0.5 * (lo + hi);
        episode.prices.push(mid);
        let accept = mid <= x;
        episode.accepts.push(accept);
        if accept {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    while episode.prices.len() < t {
        episode.prices.push(lo);
        episode.accepts.push(lo <= x);
    }
    episode.close(x * t as f64)
}

/// Expected seller revenue of a symmetric second-price auction with
/// anonymous reserve p: E[max(p, X2) 1{X1 >= p}] with X1, X2 the two
/// highest of n i.i.d. values.
pub fn expected_sp_revenue(d: &Dist, n: usize, p: f64) -> f64 {
    let f_left = d.cdf_left(p);
    let top_ge = 1.0 - f_left.powi(n as i32);
    let second_ge = 1.0
        - f_left.powi(n as i32)
        - n as f64 * f_left.powi(n as i32 - 1) * (1.0 - f_left);
    // E[X2 1{X2 >= p}] via X2 = Finv(B), B ~ Beta(n-1, 2).
    let (_, hi) = d.support();
    let qmax = if hi.is_finite() { 1.0 } else { dist::TAIL_CAP };
    let k = 2048;
    let m = n as f64;
    let qs: Vec<f64> = (0..k).map(|i| qmax * i as f64 / (k - 1) as f64).collect();
    let ys: Vec<f64> = qs
        .iter()
        .map(|&q| {
            let x = d.quantile(q);
            if x >= p {
                x * m * (m - 1.0) * q.powf(m - 2.0) * (1.0 - q)
            } else {
                0.0
            }
        })
        .collect();
    let tail = num::trapezoid(&qs, &ys);
    p * (top_ge - second_ge) + tail
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReserveEpoch {
    pub start: usize,
    pub len: usize,
    pub reserve: f64,
    /// Per-round expected revenue gap to the oracle reserve.
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReserveLearningEpisode {
    pub horizon: usize,
    pub oracle_reserve: f64,
    pub oracle_revenue: f64,
    pub epochs: Vec<ReserveEpoch>,
    /// Cumulative expected regret against always posting the oracle reserve.
    pub regret: f64,
    /// Realized revenue collected over the run.
    pub revenue: f64,
}

impl ReserveLearningEpisode {
    pub fn final_reserve(&self) -> f64 {
        self.epochs.last().map_or(0.0, |e| e.reserve)
    }
}

const DKW_BAND_SCALE: f64 = 1.0;

/// Learns the reserve of a repeated symmetric second-price auction from
/// revenue feedback only. Doubling epochs post a fixed reserve kept below
/// the optimum with high probability; at each epoch end a DKW confidence
/// band around the revenue curve (identified through the second-highest-bid
/// law) picks the next reserve as the smallest still-plausible maximizer.
pub fn symmetric_reserve_learning(
    d: &Dist,
    n: usize,
    t: usize,
    seed: u64,
) -> Result<ReserveLearningEpisode> {
    if n < 2 {
        return Err(Error::DegenerateCompetition);
    }
    let (regular, _) = dist::regularity_report(d, dist::IRON_GRID)?;
    if !regular {
        return Err(Error::NotRegular);
    }
    let oracle_reserve = dist::monopoly_price(d)?;
    let oracle_revenue = expected_sp_revenue(d, n, oracle_reserve);
    let mut rng = rng::substream(seed, 0, "online.reserve");
    let mut episode = ReserveLearningEpisode {
        horizon: t,
        oracle_reserve,
        oracle_revenue,
        epochs: Vec::new(),
        regret: 0.0,
        revenue: 0.0,
    };
    let mut reserve = 0.0f64;
    let mut start = 0usize;
    let mut epoch = 0u32;
    while start < t {
        let len = (1usize << epoch.min(40)).min(t - start);
        // play the epoch
        let mut observations = Vec::with_capacity(len);
        for _ in 0..len {
            let mut top = f64::NEG_INFINITY;
            let mut second = f64::NEG_INFINITY;
            for _ in 0..n {
                let v = d.sample(&mut rng);
                if v > top {
                    second = top;
                    top = v;
                } else if v > second {
                    second = v;
                }
            }
            let o = if top >= reserve { second.max(reserve) } else { 0.0 };
            episode.revenue += o;
            observations.push(o);
        }
        let gap = oracle_revenue - expected_sp_revenue(d, n, reserve);
        episode.regret += gap * len as f64;
        episode.epochs.push(ReserveEpoch { start, len, reserve, gap });
        start += len;
        epoch += 1;
        if start >= t {
            break;
        }
        reserve = next_reserve(&observations, reserve, n, t);
    }
    Ok(episode)
}

/// Confidence-band reserve pick from one epoch of revenue observations.
fn next_reserve(observations: &[f64], current: f64, n: usize, horizon: usize) -> f64 {
    let m = observations.len();
    let eps = ((2.0 * horizon as f64).ln() / (2.0 * m as f64)).sqrt();
    let w = DKW_BAND_SCALE * eps;
    let mut sorted = observations.to_vec();
    sorted.sort_by(f64::total_cmp);
    // candidate prices: subsampled observation quantiles above the reserve
    let mut grid: Vec<f64> = Vec::new();
    grid.push(current);
    let take = 256.min(m);
    for i in 0..take {
        let v = sorted[i * (m - 1) / take.max(1)];
        if v >= current {
            grid.push(v);
        }
    }
    if let Some(&max) = sorted.last() {
        grid.push(max);
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    // suffix sums for mean(o * 1{o >= p})
    let mut suffix = vec![0.0; m + 1];
    for i in (0..m).rev() {
        suffix[i] = suffix[i + 1] + sorted[i];
    }
    let pi_hat = |p: f64| -> f64 {
        let below = sorted.partition_point(|v| *v < p);
        let h_left = below as f64 / m as f64; // P(X2 < p)
        let f_left = invert_second_highest_cdf(h_left, n);
        let top_ge = 1.0 - f_left.powi(n as i32);
        let second_ge = 1.0 - h_left;
        let tail = suffix[below] / m as f64;
        p * (top_ge - second_ge).max(0.0) + tail
    };
    let values: Vec<f64> = grid.iter().map(|&p| pi_hat(p)).collect();
    let best_lcb = values.iter().map(|v| v - w).fold(f64::NEG_INFINITY, f64::max);
    for (p, v) in grid.iter().zip(&values) {
        if v + w >= best_lcb {
            return *p;
        }
    }
    current
}

/// Solves n F^(n-1) - (n-1) F^n = h for F in [0,1] (the second-highest-of-n
/// cdf seen as a function of the marginal cdf).
fn invert_second_highest_cdf(h: f64, n: usize) -> f64 {
    if h <= 0.0 {
        return 0.0;
    }
    if h >= 1.0 {
        return 1.0;
    }
    let m = n as f64;
    num::bisect(
        |f| m * f.powf(m - 1.0) - (m - 1.0) * f.powf(m) - h,
        0.0,
        1.0,
        1e-12,
    )
}
