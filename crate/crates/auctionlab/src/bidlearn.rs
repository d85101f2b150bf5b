//! Buyer-side online learning: bidding with an unknown expected value
//! (UCB-style optimistic bids), bidding with an unknown mechanism (one EXP3
//! instance per value), and budget pacing by online dual subgradient
//! descent.

use crate::error::{Error, Result};
use crate::mech::{BidProfile, Mechanism};
use crate::online::BanditState;
use crate::online::{exp3_step, exp3_update};
use crate::rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// One bidder-side run: bids, win flags, realized values, the highest
/// competing bid per step, cumulative utility and regret against the
/// operation's stated benchmark.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BidderEpisode {
    pub horizon: usize,
    pub bids: Vec<f64>,
    pub wins: Vec<bool>,
    pub values: Vec<f64>,
    pub competition: Vec<f64>,
    pub utility: f64,
    pub regret: f64,
}

impl BidderEpisode {
    fn new(horizon: usize) -> Self {
        BidderEpisode {
            horizon,
            bids: Vec::with_capacity(horizon),
            wins: Vec::with_capacity(horizon),
            values: Vec::with_capacity(horizon),
            competition: Vec::with_capacity(horizon),
            utility: 0.0,
            regret: 0.0,
        }
    }

    pub fn win_count(&self) -> usize {
        self.wins.iter().filter(|w| **w).count()
    }
}

/// Optimistic index bid for a bidder who has won `wins` auctions with
/// average realized value `mean`: mean + 2 sqrt(log T / wins), clamped to
/// the [0, 1] bid space. The first bid (no wins yet) is 1 to force a win.
pub fn ucbid_index(mean: f64, wins: u64, horizon: usize) -> f64 {
    if wins == 0 {
        return 1.0;
    }
    (mean + 2.0 * ((horizon as f64).ln() / wins as f64).sqrt()).min(1.0)
}

/// Repeated second-price auctions with binary realized values of unknown
/// mean `click_prob`, observed only on wins. Bids the optimistic index;
/// regret is measured against always bidding the true mean. Ties at the
/// competing bid go against the learner, so a competitor pinned at 1 shuts
/// the learner out entirely.
pub fn ucbid(
    click_prob: f64,
    competition: &[f64],
    t: usize,
    seed: u64,
) -> Result<BidderEpisode> {
    if !(0.0..=1.0).contains(&click_prob) {
        return Err(Error::InvalidParams(format!("click_prob in [0,1], got {click_prob}")));
    }
    if competition.len() < t {
        return Err(Error::InvalidParams("competition stream shorter than horizon".into()));
    }
    let mut rng = rng::substream(seed, 0, "bidlearn.ucbid");
    let mut episode = BidderEpisode::new(t);
    let mut wins = 0u64;
    let mut sum = 0.0f64;
    for &g in &competition[..t] {
        let v = if rng.random::<f64>() < click_prob { 1.0 } else { 0.0 };
        let bid = ucbid_index(if wins == 0 { 0.0 } else { sum / wins as f64 }, wins, t);
        let win = bid > g;
        if win {
            wins += 1;
            sum += v;
            episode.utility += v - g;
        }
        let truthful_win = click_prob > g;
        episode.regret +=
            (click_prob - g) * (f64::from(truthful_win as u8) - f64::from(win as u8));
        episode.bids.push(bid);
        episode.wins.push(win);
        episode.values.push(v);
        episode.competition.push(g);
    }
    Ok(episode)
}

/// Per-value EXP3 bidding against an unknown mechanism. The learner is
/// bidder 0; each opponent's bid is drawn i.i.d. from its own law. One
/// independent EXP3 instance runs per support value, fed with utilities
/// rescaled to [0, 1] by (u + 1) / (1 + max value).
pub fn contextual_bid_learner(
    value_support: &[f64],
    value_probs: &[f64],
    bid_grid: &[f64],
    mechanism: &Mechanism,
    opponent_bid_laws: &[crate::dist::Dist],
    t: usize,
    seed: u64,
) -> Result<BidderEpisode> {
    if value_support.len() != value_probs.len() || value_support.is_empty() {
        return Err(Error::InvalidParams("value support/probs mismatch".into()));
    }
    let mut rng = rng::substream(seed, 0, "bidlearn.ctx.arrivals");
    let mut arrivals = Vec::with_capacity(t);
    for _ in 0..t {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut idx = value_support.len() - 1;
        for (l, p) in value_probs.iter().enumerate() {
            acc += p;
            if u < acc {
                idx = l;
                break;
            }
        }
        arrivals.push(idx);
    }
    contextual_bid_learner_seq(
        value_support,
        &arrivals,
        bid_grid,
        mechanism,
        opponent_bid_laws,
        seed,
    )
}

/// Core of `contextual_bid_learner` with an explicit arrival sequence of
/// support indices. Each value's instance consumes its own RNG substream
/// and its own opponent stream, so per-value transcripts are invariant to
/// the arrival order of the other values.
pub fn contextual_bid_learner_seq(
    value_support: &[f64],
    arrivals: &[usize],
    bid_grid: &[f64],
    mechanism: &Mechanism,
    opponent_bid_laws: &[crate::dist::Dist],
    seed: u64,
) -> Result<BidderEpisode> {
    if bid_grid.is_empty() {
        return Err(Error::Empty);
    }
    if bid_grid.iter().chain(value_support).any(|b| !(0.0..=1.0).contains(b)) {
        return Err(Error::InvalidParams("bids and values must live in [0, 1]".into()));
    }
    let t = arrivals.len();
    let n = 1 + opponent_bid_laws.len();
    if let Some(expected) = mechanism.arity() {
        if expected != n {
            return Err(Error::InconsistentArity { expected, got: n });
        }
    }
    let compiled = mechanism.compile()?;
    let max_value = value_support.iter().copied().fold(0.0f64, f64::max);
    let scale = 1.0 + max_value;
    let l = value_support.len();
    let mut states: Vec<BanditState> =
        (0..l).map(|_| BanditState::new(bid_grid.len(), t)).collect();
    let mut rngs: Vec<_> = (0..l)
        .map(|i| rng::substream(seed, i as u64, "bidlearn.ctx.instance"))
        .collect();
    let mut episode = BidderEpisode::new(t);
    // replay ledger for the best-fixed-bid-per-value benchmark
    let mut grid_utility = vec![vec![0.0f64; bid_grid.len()]; l];
    let mut profile = vec![0.0; n];
    for &ctx in arrivals {
        let x = value_support[ctx];
        let r = &mut rngs[ctx];
        for (j, law) in opponent_bid_laws.iter().enumerate() {
            profile[j + 1] = law.sample(r);
        }
        let arm = exp3_step(&states[ctx], r);
        profile[0] = bid_grid[arm];
        let out = compiled.run(&BidProfile::new(profile.clone())?)?;
        let win = out.winner == Some(0);
        let u = if win { x - out.payments[0] } else { 0.0 };
        exp3_update(&mut states[ctx], arm, (u + 1.0) / scale)?;
        for (k, &b) in bid_grid.iter().enumerate() {
            profile[0] = b;
            let alt = compiled.run(&BidProfile::new(profile.clone())?)?;
            if alt.winner == Some(0) {
                grid_utility[ctx][k] += x - alt.payments[0];
            }
        }
        let top_comp = profile[1..].iter().copied().fold(0.0f64, f64::max);
        episode.bids.push(bid_grid[arm]);
        episode.wins.push(win);
        episode.values.push(x);
        episode.competition.push(top_comp);
        episode.utility += u;
    }
    let benchmark: f64 = grid_utility
        .iter()
        .map(|g| g.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(0.0))
        .sum();
    episode.regret = benchmark - episode.utility;
    Ok(episode)
}

/// Dual state of the budget-paced bidder.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PacingState {
    pub budget: f64,
    pub mu: f64,
    pub gamma: f64,
    pub spend: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PacingOutcome {
    pub episode: BidderEpisode,
    pub mu_path: Vec<f64>,
    pub spend: f64,
    pub terminal_mu: f64,
}

/// Budget-paced second-price bidding: bid x_t / (1 + mu_t), update mu by
/// the online subgradient of the per-step dual loss
/// (x_t - (1+mu) g_t)_+ + mu B / T, projected onto mu >= 0. Bidding stops
/// once the budget is spent, so the overshoot is at most one payment.
pub fn pacing_bidder(
    values: &[f64],
    competition: &[f64],
    budget: f64,
    gamma: f64,
    t: usize,
) -> Result<PacingOutcome> {
    if budget.is_nan() || budget <= 0.0 {
        return Err(Error::NonpositiveBudget);
    }
    if values.len() < t || competition.len() < t {
        return Err(Error::InvalidParams("streams shorter than horizon".into()));
    }
    let mut state = PacingState { budget, mu: 0.0, gamma, spend: 0.0 };
    let mut episode = BidderEpisode::new(t);
    let mut mu_path = Vec::with_capacity(t);
    let per_step_budget = budget / t as f64;
    for step in 0..t {
        let (x, g) = (values[step], competition[step]);
        mu_path.push(state.mu);
        let bidding = state.spend < budget;
        let bid = if bidding { x / (1.0 + state.mu) } else { 0.0 };
        // the learner is bidder 0: ties go to the learner
        let win = bidding && bid >= g;
        if win {
            state.spend += g;
            episode.utility += x - g;
        }
        episode.bids.push(bid);
        episode.wins.push(win);
        episode.values.push(x);
        episode.competition.push(g);
        if bidding {
            let subgrad =
                if x > (1.0 + state.mu) * g { -g } else { 0.0 } + per_step_budget;
            state.mu = (state.mu - state.gamma * subgrad).max(0.0);
        }
    }
    // benchmark: replay the best fixed multiplier in hindsight
    let mu_star = offline_dual_mu(&values[..t], &competition[..t], budget);
    let bench = replay_fixed_mu(&values[..t], &competition[..t], budget, mu_star).1;
    episode.regret = bench - episode.utility;
    Ok(PacingOutcome { episode, spend: state.spend, terminal_mu: state.mu, mu_path })
}

/// Offline dual oracle: grid search of the aggregate dual objective
/// sum_t (x_t - (1+mu) g_t)_+ + mu B over mu >= 0 (coarse pass, then a
/// refined pass around the coarse minimizer).
pub fn offline_dual_mu(values: &[f64], competition: &[f64], budget: f64) -> f64 {
    let objective = |mu: f64| -> f64 {
        let mut acc = mu * budget;
        for (x, g) in values.iter().zip(competition) {
            acc += (x - (1.0 + mu) * g).max(0.0);
        }
        acc
    };
    let scan = |lo: f64, hi: f64, cells: usize| -> (f64, f64) {
        let mut best = (lo, objective(lo));
        for k in 1..=cells {
            let mu = lo + (hi - lo) * k as f64 / cells as f64;
            let v = objective(mu);
            if v < best.1 {
                best = (mu, v);
            }
        }
        best
    };
    let coarse = scan(0.0, 4.0, 400);
    let lo = (coarse.0 - 0.02).max(0.0);
    scan(lo, coarse.0 + 0.02, 400).0
}

/// Spend and utility of bidding x/(1+mu) throughout with a hard budget stop.
pub fn replay_fixed_mu(
    values: &[f64],
    competition: &[f64],
    budget: f64,
    mu: f64,
) -> (f64, f64) {
    let mut spend = 0.0;
    let mut utility = 0.0;
    for (x, g) in values.iter().zip(competition) {
        if spend >= budget {
            break;
        }
        if x / (1.0 + mu) >= *g {
            spend += g;
            utility += x - g;
        }
    }
    (spend, utility)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Dist;
    use crate::rng::seeded;

    #[test]
    fn ucbid_index_is_optimistic_and_monotone() {
        let t = 10_000;
        for mean in [0.0, 0.3, 0.9] {
            let mut prev = f64::INFINITY;
            for wins in 1..200u64 {
                let idx = ucbid_index(mean, wins, t);
                assert!(idx >= mean.min(1.0) - 1e-15);
                assert!(idx <= prev + 1e-15, "index increased in wins");
                prev = idx;
            }
        }
    }

    #[test]
    fn ucbid_free_competition_means_zero_regret() {
        let t = 2000;
        let comp = vec![0.0; t];
        let ep = ucbid(0.5, &comp, t, 1).unwrap();
        assert_eq!(ep.win_count(), t);
        assert_eq!(ep.regret, 0.0);
        assert!(ep.bids.iter().all(|b| *b > 0.0));
    }

    #[test]
    fn ucbid_unbeatable_competition_means_zero_wins() {
        let t = 2000;
        let comp = vec![1.0; t];
        let ep = ucbid(0.5, &comp, t, 2).unwrap();
        assert_eq!(ep.win_count(), 0);
        assert_eq!(ep.regret, 0.0);
    }

    #[test]
    fn ucbid_sublinear_regret_against_iid_uniform() {
        let t = 10_000;
        let bound = 8.0 * (t as f64 * (t as f64).ln()).sqrt();
        let mut total = 0.0;
        let n_seeds = 50;
        for seed in 0..n_seeds {
            let mut rng = seeded(100 + seed);
            let comp: Vec<f64> = (0..t).map(|_| rng.random()).collect();
            let ep = ucbid(0.5, &comp, t, 200 + seed).unwrap();
            total += ep.regret;
        }
        let mean = total / n_seeds as f64;
        assert!(mean <= bound, "mean regret {mean} > {bound}");
        assert!(mean >= 0.0);
    }

    #[test]
    fn contextual_single_bid_grid_has_zero_regret() {
        let u = Dist::uniform(0.0, 1.0).unwrap();
        let ep = contextual_bid_learner(
            &[0.8],
            &[1.0],
            &[0.6],
            &Mechanism::Vickrey,
            &[u],
            2000,
            3,
        )
        .unwrap();
        assert!(ep.regret.abs() < 1e-9, "regret {}", ep.regret);
    }

    #[test]
    fn contextual_learns_truthful_bidding_under_vickrey() {
        let u = Dist::uniform(0.0, 1.0).unwrap();
        let grid: Vec<f64> = (0..=5).map(|k| k as f64 / 5.0).collect();
        let t = 100_000;
        let ep = contextual_bid_learner(
            &[0.8],
            &[1.0],
            &grid,
            &Mechanism::Vickrey,
            &[u],
            t,
            4,
        )
        .unwrap();
        let mut counts = std::collections::HashMap::new();
        for b in &ep.bids[3 * t / 4..] {
            *counts.entry((b * 10.0).round() as i64).or_insert(0usize) += 1;
        }
        let modal = *counts.iter().max_by_key(|(_, c)| **c).unwrap().0;
        assert_eq!(modal, 8, "modal late bid {modal}");
    }

    #[test]
    fn contextual_learns_to_shade_under_first_price() {
        let u = Dist::uniform(0.0, 1.0).unwrap();
        let grid: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();
        let t = 200_000;
        let ep = contextual_bid_learner(
            &[0.8],
            &[1.0],
            &grid,
            &Mechanism::FirstPrice { reserve: 0.0 },
            &[u],
            t,
            5,
        )
        .unwrap();
        let mut counts = std::collections::HashMap::new();
        for b in &ep.bids[3 * t / 4..] {
            *counts.entry((b * 20.0).round() as i64).or_insert(0usize) += 1;
        }
        let modal = *counts.iter().max_by_key(|(_, c)| **c).unwrap().0 as f64 / 20.0;
        // the best response to one truthful uniform opponent is x/2 = 0.4
        assert!((modal - 0.4).abs() <= 0.05 + 1e-12, "modal late bid {modal}");
    }

    #[test]
    fn contextual_instances_ignore_arrival_order() {
        let u = Dist::uniform(0.0, 1.0).unwrap();
        let grid = vec![0.0, 0.25, 0.5, 0.75, 1.0];
        let support = [0.3, 0.9];
        let interleaved: Vec<usize> = (0..400).map(|i| i % 2).collect();
        let grouped: Vec<usize> = std::iter::repeat_n(0usize, 200)
            .chain(std::iter::repeat_n(1usize, 200))
            .collect();
        let run = |arrivals: &[usize]| {
            contextual_bid_learner_seq(
                &support,
                arrivals,
                &grid,
                &Mechanism::Vickrey,
                std::slice::from_ref(&u),
                6,
            )
            .unwrap()
        };
        let a = run(&interleaved);
        let b = run(&grouped);
        for (ctx, &ctx_value) in support.iter().enumerate() {
            let pick = |ep: &BidderEpisode| -> Vec<f64> {
                ep.values
                    .iter()
                    .zip(&ep.bids)
                    .filter(|(v, _)| **v == ctx_value)
                    .map(|(_, b)| *b)
                    .collect()
            };
            assert_eq!(pick(&a), pick(&b), "context {ctx} transcript changed");
        }
    }

    #[test]
    fn pacing_slack_budget_goes_truthful() {
        let t = 10_000;
        let mut rng = seeded(7);
        let values: Vec<f64> = (0..t).map(|_| rng.random()).collect();
        let comp: Vec<f64> = (0..t).map(|_| rng.random()).collect();
        let budget = 1e9;
        let gamma = 1.0 / (t as f64).sqrt();
        let out = pacing_bidder(&values, &comp, budget, gamma, t).unwrap();
        assert!(out.terminal_mu <= 0.01, "terminal mu {}", out.terminal_mu);
        // mu pinned at 0 means bid == value throughout
        let truthful_spend: f64 = values
            .iter()
            .zip(&comp)
            .filter(|(x, g)| x >= g)
            .map(|(_, g)| *g)
            .sum();
        assert!((out.spend - truthful_spend).abs() < 1e-9);
    }

    #[test]
    fn pacing_binding_budget_tracks_offline_dual() {
        // long horizon: with the default 1/sqrt(T) stepsize the dual
        // transient from mu = 0 needs lambda sqrt(T) >> 1 to wash out
        let t = 1_000_000;
        let mut rng = seeded(9);
        let values: Vec<f64> = (0..t).map(|_| rng.random()).collect();
        let comp: Vec<f64> = (0..t).map(|_| rng.random()).collect();
        // B = 0.1 T E[g 1{x >= g}] = 0.1 T / 6 for uniform pairs
        let budget = 0.1 * t as f64 / 6.0;
        let gamma = 1.0 / (t as f64).sqrt();
        let out = pacing_bidder(&values, &comp, budget, gamma, t).unwrap();
        let mu_star = offline_dual_mu(&values, &comp, budget);
        assert!(
            (out.terminal_mu - mu_star).abs() <= 0.05,
            "terminal mu {} vs oracle {mu_star}",
            out.terminal_mu
        );
        // spend never exceeds the budget by more than one payment (<= 1)
        assert!(out.spend <= budget + 1.0);
        assert!(out.episode.utility > 0.0);
    }

    #[test]
    fn pacing_frozen_stepsize_keeps_constant_shading() {
        let t = 1000;
        let values = vec![0.8; t];
        let comp = vec![0.3; t];
        let out = pacing_bidder(&values, &comp, 1e9, 0.0, t).unwrap();
        assert!(out.mu_path.iter().all(|m| *m == 0.0));
        assert!(out.episode.bids.iter().all(|b| (*b - 0.8).abs() < 1e-15));
    }

    #[test]
    fn pacing_rejects_nonpositive_budget() {
        assert!(matches!(
            pacing_bidder(&[0.5], &[0.2], 0.0, 0.1, 1),
            Err(Error::NonpositiveBudget)
        ));
    }

    #[test]
    fn pacing_beats_not_bidding_on_average() {
        let t = 5000;
        let mut total = 0.0;
        for seed in 0..50 {
            let mut rng = seeded(300 + seed);
            let values: Vec<f64> = (0..t).map(|_| rng.random()).collect();
            let comp: Vec<f64> = (0..t).map(|_| rng.random()).collect();
            let budget = 0.2 * t as f64 / 6.0;
            let gamma = 1.0 / (t as f64).sqrt();
            let out = pacing_bidder(&values, &comp, budget, gamma, t).unwrap();
            assert!(out.spend <= budget + 1.0);
            total += out.episode.utility;
        }
        assert!(total / 50.0 > 0.0);
    }
}
