//! Dynamic seller-vs-buyer games: exploiting mean-based learning bidders,
//! entry-fee full-surplus extraction, and the two-phase posted-price
//! mechanism against geometrically discounted buyers.

use crate::dist::{self, Dist};
use crate::equil::Strategy;
use crate::error::{Error, Result};
use crate::mech::{self, Mechanism};
use crate::rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// One dynamic-game run: per-step mechanism parameter (the posted or
/// allocation price), buyer actions, allocations and payments, with seller
/// and (discounted) buyer totals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DynamicTranscript {
    pub horizon: usize,
    pub prices: Vec<f64>,
    pub bids: Vec<f64>,
    pub allocations: Vec<bool>,
    pub payments: Vec<f64>,
    pub seller_revenue: f64,
    pub buyer_utility: f64,
    pub buyer_discounted_utility: f64,
    pub gamma: f64,
    /// Seller revenue attributed to each distinct buyer value.
    pub revenue_by_value: Vec<(f64, f64)>,
}

impl DynamicTranscript {
    fn new(horizon: usize, gamma: f64) -> Self {
        DynamicTranscript {
            horizon,
            prices: Vec::with_capacity(horizon),
            bids: Vec::with_capacity(horizon),
            allocations: Vec::with_capacity(horizon),
            payments: Vec::with_capacity(horizon),
            seller_revenue: 0.0,
            buyer_utility: 0.0,
            buyer_discounted_utility: 0.0,
            gamma,
            revenue_by_value: Vec::new(),
        }
    }

    fn push(&mut self, price: f64, bid: f64, alloc: bool, payment: f64, value: f64) {
        let t = self.prices.len() + 1; // discounting counts from t = 1
        self.prices.push(price);
        self.bids.push(bid);
        self.allocations.push(alloc);
        self.payments.push(payment);
        self.seller_revenue += payment;
        if alloc {
            let u = value - payment;
            self.buyer_utility += u;
            self.buyer_discounted_utility += self.gamma.powi(t as i32) * u;
        }
    }
}

/// Buyer models for the exploitation game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuyerMode {
    /// Full-information mean-based ledger: picks the bid with the highest
    /// cumulative counterfactual utility, deterministically (ties to the
    /// smallest bid).
    MeanBasedOracle,
    /// Delegates each value's bid choice to an EXP3 instance.
    MeanBasedExp3,
    /// Refuses any bid whose instantaneous utility would be negative.
    ExPostIr,
}

/// The two-stage exploitation mechanism for a discrete value law: the item
/// goes only to a bid of 1; the price is 0 for the first half of the run
/// and 1 afterwards. A mean-based buyer keeps bidding 1 long into the
/// expensive phase, handing the seller nearly the full welfare.
pub fn exploit_mean_based(
    f_law: &Dist,
    t: usize,
    mode: BuyerMode,
    seed: u64,
) -> Result<DynamicTranscript> {
    let Dist::Discrete { atoms } = f_law else {
        return Err(Error::RequiresDiscrete);
    };
    if !t.is_multiple_of(2) {
        return Err(Error::InvalidParams("horizon must be even".into()));
    }
    let mut rng = rng::substream(seed, 0, "dynamic.exploit");
    let values: Vec<f64> = atoms.iter().map(|(v, _)| *v).collect();
    let index_of = |v: f64| values.iter().position(|x| *x == v).expect("atom value");
    // per-value ledgers over the bid set {0, 1}
    let mut cum = vec![[0.0f64; 2]; values.len()];
    let mut exp3: Vec<crate::online::BanditState> =
        values.iter().map(|_| crate::online::BanditState::new(2, t)).collect();
    let mut transcript = DynamicTranscript::new(t, 1.0);
    let mut by_value = vec![0.0f64; values.len()];
    for step in 0..t {
        let price = if step < t / 2 { 0.0 } else { 1.0 };
        let v = f_law.sample(&mut rng);
        let vi = index_of(v);
        let bid = match mode {
            BuyerMode::MeanBasedOracle => {
                if cum[vi][1] > cum[vi][0] {
                    1.0
                } else {
                    0.0
                }
            }
            BuyerMode::MeanBasedExp3 => {
                let arm = crate::online::exp3_step(&exp3[vi], &mut rng);
                arm as f64
            }
            BuyerMode::ExPostIr => {
                if v - price >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        };
        let alloc = bid == 1.0;
        let payment = if alloc { price } else { 0.0 };
        if alloc {
            by_value[vi] += payment;
        }
        // ledger updates: counterfactual utilities of both bids
        match mode {
            BuyerMode::MeanBasedOracle => {
                cum[vi][1] += v - price;
            }
            BuyerMode::MeanBasedExp3 => {
                let u = if alloc { v - price } else { 0.0 };
                crate::online::exp3_update(&mut exp3[vi], bid as usize, (u + 1.0) / 2.0)?;
            }
            BuyerMode::ExPostIr => {}
        }
        transcript.push(price, bid, alloc, payment, v);
    }
    transcript.revenue_by_value =
        values.iter().copied().zip(by_value).collect();
    Ok(transcript)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeeOutcome {
    pub fees: Vec<f64>,
    pub seller_revenue: f64,
    pub buyer_utilities: Vec<f64>,
    /// Fraction of profiles in which some losing bidder ends up with a
    /// strictly negative ex-post utility (the mechanism is not interim IR).
    pub losing_bidder_negative_rate: f64,
}

/// Entry fees plus a Vickrey auction: each fee equals that bidder's
/// expected Vickrey utility, so expected net utilities vanish and the
/// seller extracts the full surplus E[max value].
pub fn fee_mechanism(dists: &[Dist], n_draws: usize, seed: u64) -> Result<FeeOutcome> {
    let n = dists.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    let truthful = vec![Strategy::Identity; n];
    let calib = mech::expected_metrics(&Mechanism::Vickrey, dists, &truthful, n_draws, seed)?;
    let fees = calib.utilities.clone();
    // fresh draws for the run itself
    let run = mech::expected_metrics(
        &Mechanism::Vickrey,
        dists,
        &truthful,
        n_draws,
        seed.wrapping_add(0x9E37),
    )?;
    let seller_revenue = run.revenue + fees.iter().sum::<f64>();
    let buyer_utilities: Vec<f64> =
        run.utilities.iter().zip(&fees).map(|(u, f)| u - f).collect();
    // ex-post: a losing bidder pays the fee and takes nothing
    let mut rng = rng::substream(seed, 1, "dynamic.fee");
    let mut negative = 0usize;
    let probes = 10_000.min(n_draws);
    for _ in 0..probes {
        let values: Vec<f64> = dists.iter().map(|d| d.sample(&mut rng)).collect();
        let out = mech::run(&Mechanism::Vickrey, &mech::BidProfile::new(values)?)?;
        let some_negative = (0..n).any(|i| out.winner != Some(i) && -fees[i] < 0.0);
        if some_negative {
            negative += 1;
        }
    }
    Ok(FeeOutcome {
        fees,
        seller_revenue,
        buyer_utilities,
        losing_bidder_negative_rate: negative as f64 / probes as f64,
    })
}

/// Buyer models for the two-phase posted-price game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum PostedBuyer {
    /// Accepts whenever the value covers the price.
    MyopicTruthful,
    /// Pretends to value at most tau during the exploration phase, hoping
    /// for a lower exploitation price; truthful afterwards.
    ThresholdLiar { tau: f64 },
}

/// Two-phase dynamic pricing against a discounted buyer: phase 1 posts
/// i.i.d. uniform prices for ceil(alpha T) rounds, phase 2 posts the
/// empirical monopoly price fit on the phase-1 (price, accept) pairs:
/// argmax over offered prices p of p * #{accepts at price >= p} /
/// #{offers at price >= p}.
pub fn two_phase_posted_price(
    f_law: &Dist,
    gamma: f64,
    t: usize,
    alpha: f64,
    buyer: PostedBuyer,
    seed: u64,
) -> Result<DynamicTranscript> {
    if !(0.0 < gamma && gamma <= 1.0) {
        return Err(Error::InvalidParams(format!("gamma in (0,1], got {gamma}")));
    }
    if !(0.0 < alpha && alpha <= 1.0) {
        return Err(Error::InvalidParams(format!("alpha in (0,1], got {alpha}")));
    }
    let mut rng = rng::substream(seed, 0, "dynamic.two_phase");
    let explore = ((alpha * t as f64).ceil() as usize).min(t);
    let mut transcript = DynamicTranscript::new(t, gamma);
    let mut offers: Vec<(f64, bool)> = Vec::with_capacity(explore);
    for _ in 0..explore {
        let price: f64 = rng.random();
        let value = f_law.sample(&mut rng);
        let accept = match buyer {
            PostedBuyer::MyopicTruthful => value >= price,
            PostedBuyer::ThresholdLiar { tau } => price <= tau && value >= price,
        };
        offers.push((price, accept));
        transcript.push(price, f64::from(accept as u8), accept, if accept { price } else { 0.0 }, value);
    }
    if explore < t {
        let exploit_price = empirical_demand_price(&offers);
        for _ in explore..t {
            let value = f_law.sample(&mut rng);
            let accept = value >= exploit_price;
            transcript.push(
                exploit_price,
                f64::from(accept as u8),
                accept,
                if accept { exploit_price } else { 0.0 },
                value,
            );
        }
    }
    Ok(transcript)
}

/// Monopoly price fit on explored (price, accept) pairs: maximizes
/// p * #{accepted offers with price >= p} / #{offers with price >= p} over
/// the offered prices; smallest maximizer.
pub fn empirical_demand_price(offers: &[(f64, bool)]) -> f64 {
    let mut sorted: Vec<(f64, bool)> = offers.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let m = sorted.len();
    // suffix counts of offers and accepts at price >= p
    let mut accept_suffix = vec![0usize; m + 1];
    for i in (0..m).rev() {
        accept_suffix[i] = accept_suffix[i + 1] + usize::from(sorted[i].1);
    }
    let mut best = (0.0f64, f64::NEG_INFINITY);
    for i in 0..m {
        let p = sorted[i].0;
        if i > 0 && sorted[i - 1].0 == p {
            continue;
        }
        let offers_ge = (m - i) as f64;
        let demand = accept_suffix[i] as f64 / offers_ge;
        let objective = p * demand;
        if objective > best.1 {
            best = (p, objective);
        }
    }
    best.0
}

/// Posts one fixed price for the whole horizon (reference transcript).
pub fn posted_price_transcript(
    f_law: &Dist,
    price: f64,
    t: usize,
    seed: u64,
) -> DynamicTranscript {
    let mut rng = rng::substream(seed, 0, "dynamic.fixed_price");
    let mut transcript = DynamicTranscript::new(t, 1.0);
    for _ in 0..t {
        let value = f_law.sample(&mut rng);
        let accept = value >= price;
        transcript.push(price, f64::from(accept as u8), accept, if accept { price } else { 0.0 }, value);
    }
    transcript
}

/// Seller regret of a transcript against posting the true monopoly price
/// at every round: T Pi(p*) - realized revenue.
pub fn dynamic_regret(transcript: &DynamicTranscript, f_law: &Dist) -> Result<f64> {
    let p_star = dist::monopoly_price(f_law)?;
    let pi_star = dist::monopoly_revenue(f_law, p_star);
    Ok(transcript.horizon as f64 * pi_star - transcript.seller_revenue)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_point_law() -> Dist {
        Dist::discrete(vec![(0.25, 0.5), (0.5, 0.25), (1.0, 0.25)]).unwrap()
    }

    #[test]
    fn monopoly_benchmark_of_the_example_law() {
        let f = three_point_law();
        // all three atoms tie at revenue 1/4; smallest maximizer is 1/4
        let p = dist::monopoly_price(&f).unwrap();
        assert_eq!(p, 0.25);
        assert!((dist::monopoly_revenue(&f, p) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn oracle_buyer_hands_over_a_third_per_round() {
        let f = three_point_law();
        let t = 120_000;
        let tr = exploit_mean_based(&f, t, BuyerMode::MeanBasedOracle, 1).unwrap();
        let rate = tr.seller_revenue / t as f64;
        assert!((rate - 1.0 / 3.0).abs() <= 0.02, "revenue/T = {rate}");
        // class decomposition: T/8 + T/8 + T/12
        let share = |v: f64| {
            tr.revenue_by_value
                .iter()
                .find(|(val, _)| *val == v)
                .map(|(_, r)| *r)
                .unwrap()
        };
        let t_f = t as f64;
        assert!((share(1.0) - t_f / 8.0).abs() <= 0.01 * t_f, "v=1 share {}", share(1.0));
        assert!((share(0.5) - t_f / 8.0).abs() <= 0.01 * t_f, "v=1/2 share {}", share(0.5));
        assert!((share(0.25) - t_f / 12.0).abs() <= 0.01 * t_f, "v=1/4 share {}", share(0.25));
    }

    #[test]
    fn ex_post_ir_buyer_caps_revenue_at_monopoly_rate() {
        let f = three_point_law();
        let t = 120_000;
        let tr = exploit_mean_based(&f, t, BuyerMode::ExPostIr, 2).unwrap();
        let rate = tr.seller_revenue / t as f64;
        assert!(rate <= 0.25 + 0.02, "revenue/T = {rate}");
    }

    #[test]
    fn exp3_buyer_is_mean_based() {
        // Replay the transcript with full-information counterfactual
        // ledgers: the EXP3 buyer almost never plays a bid whose cumulative
        // mean utility trails the leader by more than eta.
        let f = three_point_law();
        let t = 10_000;
        let tr = exploit_mean_based(&f, t, BuyerMode::MeanBasedExp3, 17).unwrap();
        // replay the seeded value stream (one draw per value, one per EXP3
        // arm pick) to rebuild the per-class counterfactual ledgers
        let mut rng = crate::rng::substream(17, 0, "dynamic.exploit");
        let mut cum: std::collections::HashMap<u64, [f64; 2]> = Default::default();
        let mut count: std::collections::HashMap<u64, f64> = Default::default();
        let eta = 0.2;
        let mut trailing_pulls = 0usize;
        let mut decided = 0usize;
        for step in 0..t {
            let price = if step < t / 2 { 0.0 } else { 1.0 };
            let v = f.sample(&mut rng);
            let _: f64 = rand::Rng::random(&mut rng); // exp3_step's draw
            let key = v.to_bits();
            let c = cum.entry(key).or_insert([0.0, 0.0]);
            let n = count.entry(key).or_insert(0.0);
            if *n > 0.0 {
                let bid = tr.bids[step] as usize;
                let means = [c[0] / *n, c[1] / *n];
                let leader = means[0].max(means[1]);
                decided += 1;
                if means[bid] < leader - eta {
                    trailing_pulls += 1;
                }
            }
            c[1] += v - price;
            *n += 1.0;
        }
        let freq = trailing_pulls as f64 / decided as f64;
        let sigma = (eta * (1.0 - eta) / decided as f64).sqrt();
        assert!(
            freq <= eta + 3.0 * sigma,
            "trailing-bid frequency {freq} exceeds eta {eta} + 3 sigma"
        );
    }

    #[test]
    fn exp3_buyer_is_also_exploitable() {
        let f = three_point_law();
        let t = 120_000;
        let tr = exploit_mean_based(&f, t, BuyerMode::MeanBasedExp3, 3).unwrap();
        let rate = tr.seller_revenue / t as f64;
        // above the monopoly benchmark, approaching the welfare rate 1/2
        assert!(rate > 0.25 + 0.02, "revenue/T = {rate}");
    }

    #[test]
    fn tiny_horizon_trace_follows_the_rules() {
        let f = three_point_law();
        let tr = exploit_mean_based(&f, 2, BuyerMode::MeanBasedOracle, 4).unwrap();
        // step 0 (price 0): empty ledger ties to bid 0, no revenue;
        // step 1 (price 1): bids 1 only if the same value class reappeared
        assert_eq!(tr.prices, vec![0.0, 1.0]);
        assert_eq!(tr.bids[0], 0.0);
        assert_eq!(tr.payments[0], 0.0);
        assert_eq!(tr.payments[1], tr.bids[1]);
        assert!(tr.seller_revenue == 0.0 || tr.seller_revenue == 1.0);
        // deterministic replay
        let tr2 = exploit_mean_based(&f, 2, BuyerMode::MeanBasedOracle, 4).unwrap();
        assert_eq!(tr.payments, tr2.payments);
    }

    #[test]
    fn requires_discrete_law_and_even_horizon() {
        let u = Dist::uniform(0.0, 1.0).unwrap();
        assert!(matches!(
            exploit_mean_based(&u, 10, BuyerMode::MeanBasedOracle, 5),
            Err(Error::RequiresDiscrete)
        ));
        let f = three_point_law();
        assert!(exploit_mean_based(&f, 11, BuyerMode::MeanBasedOracle, 5).is_err());
    }

    #[test]
    fn fee_mechanism_extracts_full_surplus() {
        let u = Dist::uniform(0.0, 1.0).unwrap();
        let out = fee_mechanism(&[u.clone(), u], 400_000, 6).unwrap();
        assert!((out.fees[0] - 1.0 / 6.0).abs() < 0.003, "fee {}", out.fees[0]);
        assert!((out.fees[1] - 1.0 / 6.0).abs() < 0.003);
        assert!((out.seller_revenue - 2.0 / 3.0).abs() < 0.005, "{}", out.seller_revenue);
        for u_i in &out.buyer_utilities {
            assert!(u_i.abs() < 0.005, "net utility {u_i}");
        }
        assert!(out.losing_bidder_negative_rate >= 0.99);
    }

    #[test]
    fn fee_mechanism_single_point_mass() {
        let d = Dist::point_mass(0.7).unwrap();
        let out = fee_mechanism(&[d], 50_000, 7).unwrap();
        // a single bidder wins at price 0; the fee captures the whole value
        assert!((out.fees[0] - 0.7).abs() < 1e-12);
        assert!((out.seller_revenue - 0.7).abs() < 1e-12);
        assert!(out.buyer_utilities[0].abs() < 1e-12);
    }

    #[test]
    fn fee_mechanism_conserves_welfare() {
        let u = Dist::uniform(0.0, 1.0).unwrap();
        let k = Dist::kumaraswamy(2.0, 10.0).unwrap();
        let out = fee_mechanism(&[u.clone(), k], 400_000, 8).unwrap();
        let welfare = out.seller_revenue + out.buyer_utilities.iter().sum::<f64>();
        // welfare = E[max value]; estimate it independently
        let mut rng = crate::rng::seeded(9);
        let mut e_max = 0.0;
        let draws = 400_000;
        let u2 = Dist::uniform(0.0, 1.0).unwrap();
        let k2 = Dist::kumaraswamy(2.0, 10.0).unwrap();
        for _ in 0..draws {
            e_max += u2.sample(&mut rng).max(k2.sample(&mut rng));
        }
        e_max /= draws as f64;
        assert!((welfare - e_max).abs() < 0.005, "welfare {welfare} vs E[max] {e_max}");
    }

    #[test]
    fn two_phase_truthful_buyer_has_sublinear_regret() {
        let u = Dist::uniform(0.0, 1.0).unwrap();
        let t = 100_000;
        let alpha = (t as f64).powf(-1.0 / 3.0);
        let norm = (t as f64).powf(2.0 / 3.0);
        for seed in 0..5 {
            let tr = two_phase_posted_price(
                &u,
                0.8,
                t,
                alpha,
                PostedBuyer::MyopicTruthful,
                10 + seed,
            )
            .unwrap();
            let regret = dynamic_regret(&tr, &u).unwrap();
            assert!(regret / norm <= 6.0, "regret/T^(2/3) = {}", regret / norm);
        }
    }

    #[test]
    fn threshold_liar_payoff_depends_on_patience() {
        let u = Dist::uniform(0.0, 1.0).unwrap();
        let t = 1000;
        let alpha = (t as f64).powf(-1.0 / 3.0);
        for (gamma, lying_should_pay) in [(0.3, false), (0.5, false), (0.999, true)] {
            let mut gain = 0.0;
            for seed in 0..20 {
                let truthful = two_phase_posted_price(
                    &u,
                    gamma,
                    t,
                    alpha,
                    PostedBuyer::MyopicTruthful,
                    100 + seed,
                )
                .unwrap();
                let liar = two_phase_posted_price(
                    &u,
                    gamma,
                    t,
                    alpha,
                    PostedBuyer::ThresholdLiar { tau: 0.0 },
                    100 + seed,
                )
                .unwrap();
                // the liar faces a collapsed exploitation price
                let explore = (alpha * t as f64).ceil() as usize;
                assert!(liar.prices[explore] <= 0.1, "learned price {}", liar.prices[explore]);
                gain += liar.buyer_discounted_utility - truthful.buyer_discounted_utility;
            }
            if lying_should_pay {
                assert!(gain > 0.0, "gamma={gamma}: lying gain {gain}");
            } else {
                assert!(gain < 0.0, "gamma={gamma}: lying gain {gain}");
            }
        }
    }

    #[test]
    fn pure_exploration_regret_is_the_posted_price_gap() {
        let u = Dist::uniform(0.0, 1.0).unwrap();
        let t = 20_000;
        let tr =
            two_phase_posted_price(&u, 0.8, t, 1.0, PostedBuyer::MyopicTruthful, 11).unwrap();
        let regret = dynamic_regret(&tr, &u).unwrap();
        let direct: f64 = t as f64 * 0.25 - tr.seller_revenue;
        assert!((regret - direct).abs() < 1e-3);
        // and exploring for half the horizon costs more than alpha = T^(-1/3)
        let smart = two_phase_posted_price(
            &u,
            0.8,
            t,
            (t as f64).powf(-1.0 / 3.0),
            PostedBuyer::MyopicTruthful,
            11,
        )
        .unwrap();
        let half = two_phase_posted_price(&u, 0.8, t, 0.5, PostedBuyer::MyopicTruthful, 11)
            .unwrap();
        assert!(
            dynamic_regret(&half, &u).unwrap() > dynamic_regret(&smart, &u).unwrap(),
            "half-exploration should cost more"
        );
    }

    #[test]
    fn fixed_price_transcripts_anchor_the_regret() {
        let u = Dist::uniform(0.0, 1.0).unwrap();
        let t = 50_000;
        // posting p* has regret ~ 0 in expectation
        let mut total = 0.0;
        for seed in 0..10 {
            let tr = posted_price_transcript(&u, 0.5, t, 20 + seed);
            total += dynamic_regret(&tr, &u).unwrap();
        }
        let mean = total / 10.0;
        // 3 sigma of the per-run revenue noise
        let sigma = 3.0 * (t as f64 * 0.25 * 0.25).sqrt() / (10.0f64).sqrt();
        assert!(mean.abs() <= sigma, "mean regret {mean} vs 3 sigma {sigma}");
        // posting price 1 never sells: regret = T/4
        let tr = posted_price_transcript(&u, 1.0, t, 30);
        let regret = dynamic_regret(&tr, &u).unwrap();
        assert!((regret - t as f64 * 0.25).abs() < 1e-3);
    }
}
