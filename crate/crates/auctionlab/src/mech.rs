//! One-shot auction execution: allocation and payment rules for the
//! second-price family (plain, anonymous/lazy/eager reserves, L-level
//! floors), the Myerson auction over priors, the boosted second-price
//! auction and the first-price auction. Ties always break toward the
//! lowest bidder index.

use crate::dist::{self, Dist, VirtualValueTable};
use crate::equil::Strategy;
use crate::error::{Error, Result};
use crate::rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// One bid per bidder; entries finite and non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct BidProfile(Vec<f64>);

impl BidProfile {
    pub fn new(bids: Vec<f64>) -> Result<Self> {
        if bids.is_empty() {
            return Err(Error::Empty);
        }
        if bids.iter().any(|b| !b.is_finite() || *b < 0.0) {
            return Err(Error::InvalidParams("bids must be finite and >= 0".into()));
        }
        Ok(BidProfile(bids))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bids(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuctionOutcome {
    pub winner: Option<usize>,
    pub payments: Vec<f64>,
    pub allocated: bool,
}

impl AuctionOutcome {
    fn no_sale(n: usize) -> Self {
        AuctionOutcome { winner: None, payments: vec![0.0; n], allocated: false }
    }

    fn sale(n: usize, winner: usize, price: f64) -> Self {
        let mut payments = vec![0.0; n];
        payments[winner] = price;
        AuctionOutcome { winner: Some(winner), payments, allocated: true }
    }

    pub fn revenue(&self) -> f64 {
        self.payments.iter().sum()
    }
}

/// Allocation + payment rule descriptor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Mechanism {
    Vickrey,
    SpAnonymous { reserve: f64 },
    SpLazy { reserves: Vec<f64> },
    SpEager { reserves: Vec<f64> },
    /// Per-bidder floor ladders, non-decreasing in the level.
    LLevel { floors: Vec<Vec<f64>> },
    Myerson { priors: Vec<Dist> },
    BoostedSp { boosts: Vec<f64>, reserves: Vec<f64> },
    FirstPrice { reserve: f64 },
}

impl Mechanism {
    /// Number of bidders pinned by the parameters; `None` for anonymous kinds.
    pub fn arity(&self) -> Option<usize> {
        match self {
            Mechanism::Vickrey
            | Mechanism::SpAnonymous { .. }
            | Mechanism::FirstPrice { .. } => None,
            Mechanism::SpLazy { reserves } | Mechanism::SpEager { reserves } => {
                Some(reserves.len())
            }
            Mechanism::LLevel { floors } => Some(floors.len()),
            Mechanism::Myerson { priors } => Some(priors.len()),
            Mechanism::BoostedSp { boosts, .. } => Some(boosts.len()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        match self {
            Mechanism::SpAnonymous { reserve } | Mechanism::FirstPrice { reserve } => {
                if !(reserve.is_finite() && *reserve >= 0.0) {
                    return bad("reserve must be finite and >= 0".into());
                }
            }
            Mechanism::SpLazy { reserves } | Mechanism::SpEager { reserves } => {
                if reserves.iter().any(|r| !r.is_finite() || *r < 0.0) {
                    return bad("reserves must be finite and >= 0".into());
                }
            }
            Mechanism::LLevel { floors } => {
                if floors.is_empty() {
                    return bad("l-level needs at least one bidder".into());
                }
                let l = floors[0].len();
                if l == 0 {
                    return bad("l-level needs at least one floor per bidder".into());
                }
                for f in floors {
                    if f.len() != l {
                        return bad("all bidders need the same number of floors".into());
                    }
                    if f.windows(2).any(|w| w[0] > w[1]) {
                        return bad("floors must be non-decreasing per bidder".into());
                    }
                    if f.iter().any(|r| !r.is_finite() || *r < 0.0) {
                        return bad("floors must be finite and >= 0".into());
                    }
                }
            }
            Mechanism::Myerson { priors } => {
                for p in priors {
                    p.validate()?;
                }
            }
            Mechanism::BoostedSp { boosts, reserves } => {
                if boosts.len() != reserves.len() {
                    return bad("boosts and reserves must have equal length".into());
                }
                if boosts.iter().any(|b| b.is_nan() || *b <= 0.0) {
                    return bad("boosts must be > 0".into());
                }
                if reserves.iter().any(|r| !r.is_finite() || *r < 0.0) {
                    return bad("reserves must be finite and >= 0".into());
                }
            }
            Mechanism::Vickrey => {}
        }
        Ok(())
    }

    /// Precomputes what `run` needs (ironed virtual values for Myerson).
    pub fn compile(&self) -> Result<CompiledMechanism> {
        self.validate()?;
        let tables = match self {
            Mechanism::Myerson { priors } => priors
                .iter()
                .map(|p| dist::iron(p, dist::IRON_GRID))
                .collect::<Result<Vec<_>>>()?,
            _ => Vec::new(),
        };
        Ok(CompiledMechanism { mech: self.clone(), tables })
    }
}

/// A mechanism with its derived numerical artifacts, ready to run.
#[derive(Debug, Clone)]
pub struct CompiledMechanism {
    mech: Mechanism,
    tables: Vec<VirtualValueTable>,
}

fn top_two(bids: &[f64]) -> (usize, f64) {
    // (argmax with lowest-index ties, second-highest value)
    let mut best = 0usize;
    for i in 1..bids.len() {
        if bids[i] > bids[best] {
            best = i;
        }
    }
    let mut second = f64::NEG_INFINITY;
    for (i, &b) in bids.iter().enumerate() {
        if i != best && b > second {
            second = b;
        }
    }
    if second == f64::NEG_INFINITY {
        second = 0.0;
    }
    (best, second)
}

impl CompiledMechanism {
    pub fn mechanism(&self) -> &Mechanism {
        &self.mech
    }

    pub fn run(&self, profile: &BidProfile) -> Result<AuctionOutcome> {
        let b = profile.bids();
        let n = b.len();
        if let Some(expected) = self.mech.arity() {
            if expected != n {
                return Err(Error::InconsistentArity { expected, got: n });
            }
        }
        let out = match &self.mech {
            Mechanism::Vickrey => {
                let (w, second) = top_two(b);
                AuctionOutcome::sale(n, w, second)
            }
            Mechanism::SpAnonymous { reserve } => {
                let (w, second) = top_two(b);
                if b[w] >= *reserve {
                    AuctionOutcome::sale(n, w, second.max(*reserve))
                } else {
                    AuctionOutcome::no_sale(n)
                }
            }
            Mechanism::SpLazy { reserves } => {
                let (w, second) = top_two(b);
                if b[w] >= reserves[w] {
                    AuctionOutcome::sale(n, w, second.max(reserves[w]))
                } else {
                    AuctionOutcome::no_sale(n)
                }
            }
            Mechanism::SpEager { reserves } => {
                let mut winner: Option<usize> = None;
                for i in 0..n {
                    if b[i] >= reserves[i] && winner.is_none_or(|w| b[i] > b[w]) {
                        winner = Some(i);
                    }
                }
                match winner {
                    None => AuctionOutcome::no_sale(n),
                    Some(w) => {
                        let mut best_other = f64::NEG_INFINITY;
                        for i in 0..n {
                            if i != w && b[i] >= reserves[i] && b[i] > best_other {
                                best_other = b[i];
                            }
                        }
                        AuctionOutcome::sale(n, w, best_other.max(reserves[w]))
                    }
                }
            }
            Mechanism::LLevel { floors } => {
                let levels = floors[0].len();
                let index = |i: usize, bid: f64| -> i64 {
                    let mut idx = -1i64;
                    for (l, r) in floors[i].iter().enumerate() {
                        if bid >= *r {
                            idx = l as i64;
                        } else {
                            break;
                        }
                    }
                    idx
                };
                let idxs: Vec<i64> = (0..n).map(|i| index(i, b[i])).collect();
                // Highest index wins; ties to the highest bid, then lowest i.
                let mut w: Option<usize> = None;
                for i in 0..n {
                    if idxs[i] < 0 {
                        continue;
                    }
                    match w {
                        None => w = Some(i),
                        Some(j) => {
                            if idxs[i] > idxs[j] || (idxs[i] == idxs[j] && b[i] > b[j]) {
                                w = Some(i);
                            }
                        }
                    }
                }
                let Some(w) = w else {
                    return Ok(AuctionOutcome::no_sale(n));
                };
                // Runner-up: who would win without w.
                let mut ru: Option<usize> = None;
                for i in 0..n {
                    if i == w || idxs[i] < 0 {
                        continue;
                    }
                    match ru {
                        None => ru = Some(i),
                        Some(j) => {
                            if idxs[i] > idxs[j] || (idxs[i] == idxs[j] && b[i] > b[j]) {
                                ru = Some(i);
                            }
                        }
                    }
                }
                let price = match ru {
                    // no competing index cleared: charge the winner's lowest floor
                    None => floors[w][0],
                    Some(j) => {
                        let tau = idxs[j] as usize;
                        // Cheapest winning bid: clear floor tau and beat the
                        // runner-up bid, or clear floor tau+1 outright.
                        let beat_tie = floors[w][tau].max(b[j]);
                        if tau + 1 < levels {
                            beat_tie.min(floors[w][tau + 1])
                        } else {
                            beat_tie
                        }
                    }
                };
                AuctionOutcome::sale(n, w, price)
            }
            Mechanism::Myerson { .. } => {
                let vv: Vec<f64> = (0..n).map(|i| self.tables[i].ironed_at(b[i])).collect();
                let mut w: Option<usize> = None;
                for i in 0..n {
                    if vv[i] >= 0.0 && w.is_none_or(|j| vv[i] > vv[j]) {
                        w = Some(i);
                    }
                }
                let Some(w) = w else {
                    return Ok(AuctionOutcome::no_sale(n));
                };
                let competing = (0..n)
                    .filter(|i| *i != w)
                    .map(|i| vv[i])
                    .fold(0.0f64, f64::max);
                let price = self.tables[w].inverse_ironed(competing);
                AuctionOutcome::sale(n, w, price)
            }
            Mechanism::BoostedSp { boosts, reserves } => {
                let vv: Vec<f64> = (0..n).map(|i| boosts[i] * b[i] - reserves[i]).collect();
                let mut w: Option<usize> = None;
                for i in 0..n {
                    if vv[i] >= 0.0 && w.is_none_or(|j| vv[i] > vv[j]) {
                        w = Some(i);
                    }
                }
                let Some(w) = w else {
                    return Ok(AuctionOutcome::no_sale(n));
                };
                let competing = (0..n)
                    .filter(|i| *i != w)
                    .map(|i| vv[i])
                    .fold(0.0f64, f64::max);
                AuctionOutcome::sale(n, w, (competing + reserves[w]) / boosts[w])
            }
            Mechanism::FirstPrice { reserve } => {
                let (w, _) = top_two(b);
                if b[w] >= *reserve {
                    AuctionOutcome::sale(n, w, b[w])
                } else {
                    AuctionOutcome::no_sale(n)
                }
            }
        };
        Ok(out)
    }
}

/// Runs the mechanism on a single bid profile.
pub fn run(m: &Mechanism, profile: &BidProfile) -> Result<AuctionOutcome> {
    m.compile()?.run(profile)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedMetrics {
    pub revenue: f64,
    pub utilities: Vec<f64>,
    pub welfare: f64,
    pub sale_rate: f64,
}

const SHARD: usize = 1 << 16;

/// Monte Carlo expected revenue / per-bidder utility / welfare / sale rate.
///
/// Draws are sharded into fixed-size blocks with independently derived RNG
/// substreams and combined in shard order, so the totals depend only on the
/// seed, never on the worker count.
pub fn expected_metrics(
    m: &Mechanism,
    dists: &[Dist],
    strategies: &[Strategy],
    n_draws: usize,
    seed: u64,
) -> Result<ExpectedMetrics> {
    let n = dists.len();
    if n == 0 || n_draws == 0 {
        return Err(Error::Empty);
    }
    if strategies.len() != n {
        return Err(Error::InconsistentArity { expected: n, got: strategies.len() });
    }
    if let Some(expected) = m.arity() {
        if expected != n {
            return Err(Error::InconsistentArity { expected, got: n });
        }
    }
    let compiled = m.compile()?;
    let n_shards = n_draws.div_ceil(SHARD);
    let partials: Result<Vec<_>> = (0..n_shards)
        .into_par_iter()
        .map(|s| {
            let mut rng = rng::substream(seed, s as u64, "mech.metrics");
            let draws = SHARD.min(n_draws - s * SHARD);
            let mut revenue = 0.0;
            let mut utilities = vec![0.0; n];
            let mut sales = 0usize;
            let mut values = vec![0.0; n];
            let mut bids = vec![0.0; n];
            for _ in 0..draws {
                for i in 0..n {
                    values[i] = dists[i].sample(&mut rng);
                    bids[i] = strategies[i].bid(values[i]);
                }
                let out = compiled.run(&BidProfile(bids.clone()))?;
                revenue += out.revenue();
                if let Some(w) = out.winner {
                    utilities[w] += values[w] - out.payments[w];
                    sales += 1;
                }
            }
            Ok((revenue, utilities, sales))
        })
        .collect();
    let partials = partials?;
    let mut revenue = 0.0;
    let mut utilities = vec![0.0; n];
    let mut sales = 0usize;
    for (r, u, s) in partials {
        revenue += r;
        for i in 0..n {
            utilities[i] += u[i];
        }
        sales += s;
    }
    let t = n_draws as f64;
    revenue /= t;
    for u in &mut utilities {
        *u /= t;
    }
    let welfare = revenue + utilities.iter().sum::<f64>();
    Ok(ExpectedMetrics { revenue, utilities, welfare, sale_rate: sales as f64 / t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use rand::Rng;

    fn bids(v: &[f64]) -> BidProfile {
        BidProfile::new(v.to_vec()).unwrap()
    }

    #[test]
    fn lazy_example_no_sale() {
        let m = Mechanism::SpLazy { reserves: vec![0.7, 0.4] };
        let out = run(&m, &bids(&[0.6, 0.5])).unwrap();
        assert_eq!(out.winner, None);
        assert_eq!(out.payments, vec![0.0, 0.0]);
        assert!(!out.allocated);
    }

    #[test]
    fn eager_example_second_bidder_wins() {
        let m = Mechanism::SpEager { reserves: vec![0.7, 0.4] };
        let out = run(&m, &bids(&[0.6, 0.5])).unwrap();
        assert_eq!(out.winner, Some(1));
        assert!((out.payments[1] - 0.4).abs() < 1e-15);
        assert_eq!(out.payments[0], 0.0);
    }

    #[test]
    fn myerson_symmetric_uniform_example() {
        let u = Dist::uniform(0.0, 1.0).unwrap();
        let m = Mechanism::Myerson { priors: vec![u.clone(), u] };
        let out = run(&m, &bids(&[0.8, 0.6])).unwrap();
        assert_eq!(out.winner, Some(0));
        assert!((out.payments[0] - 0.6).abs() < 1e-6, "paid {}", out.payments[0]);
        // Below-reserve bids sell to nobody.
        let out = run(&m, &bids(&[0.4, 0.3])).unwrap();
        assert_eq!(out.winner, None);
    }

    #[test]
    fn myerson_reserve_binds_at_monopoly_price() {
        let u = Dist::uniform(0.0, 1.0).unwrap();
        let m = Mechanism::Myerson { priors: vec![u.clone(), u] };
        let out = run(&m, &bids(&[0.8, 0.2])).unwrap();
        assert_eq!(out.winner, Some(0));
        assert!((out.payments[0] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn anonymous_reserves_make_lazy_and_eager_coincide() {
        let mut rng = seeded(11);
        for _ in 0..500 {
            let n = 2 + (rng.random::<u32>() % 4) as usize;
            let r: f64 = rng.random();
            let profile = bids(&(0..n).map(|_| rng.random::<f64>()).collect::<Vec<_>>());
            let lazy = run(&Mechanism::SpLazy { reserves: vec![r; n] }, &profile).unwrap();
            let eager = run(&Mechanism::SpEager { reserves: vec![r; n] }, &profile).unwrap();
            assert_eq!(lazy, eager);
        }
    }

    #[test]
    fn one_level_equals_eager_exactly() {
        let mut rng = seeded(12);
        for _ in 0..500 {
            let n = 2 + (rng.random::<u32>() % 4) as usize;
            let reserves: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let profile = bids(&(0..n).map(|_| rng.random::<f64>()).collect::<Vec<_>>());
            let eager = run(&Mechanism::SpEager { reserves: reserves.clone() }, &profile).unwrap();
            let floors: Vec<Vec<f64>> = reserves.iter().map(|r| vec![*r]).collect();
            let ll = run(&Mechanism::LLevel { floors }, &profile).unwrap();
            assert_eq!(eager, ll);
        }
    }

    #[test]
    fn lazy_reserve_independence() {
        let mut rng = seeded(13);
        for _ in 0..300 {
            let n = 3usize;
            let mut reserves: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let profile = bids(&(0..n).map(|_| rng.random::<f64>()).collect::<Vec<_>>());
            let base = run(&Mechanism::SpLazy { reserves: reserves.clone() }, &profile).unwrap();
            // Changing bidder 2's reserve never touches bidders 0/1 outcomes.
            reserves[2] = rng.random();
            let alt = run(&Mechanism::SpLazy { reserves }, &profile).unwrap();
            for i in 0..2 {
                assert_eq!(base.payments[i], alt.payments[i]);
                assert_eq!(base.winner == Some(i), alt.winner == Some(i));
            }
        }
    }

    fn dsic_mechanisms() -> Vec<Mechanism> {
        let u = Dist::uniform(0.0, 1.0).unwrap();
        let k = Dist::kumaraswamy(2.0, 10.0).unwrap();
        vec![
            Mechanism::Vickrey,
            Mechanism::SpLazy { reserves: vec![0.5, 0.3, 0.6] },
            Mechanism::SpEager { reserves: vec![0.5, 0.3, 0.6] },
            Mechanism::LLevel {
                floors: vec![vec![0.2, 0.5], vec![0.3, 0.6], vec![0.1, 0.9]],
            },
            Mechanism::Myerson { priors: vec![u.clone(), u, k] },
        ]
    }

    #[test]
    fn dsic_spot_check_no_profitable_deviation() {
        // 1e3 random profiles x 1e2 unilateral deviations per mechanism.
        for m in dsic_mechanisms() {
            let compiled = m.compile().unwrap();
            let mut rng = seeded(14);
            for _ in 0..1000 {
                let values: Vec<f64> = (0..3).map(|_| rng.random::<f64>()).collect();
                let truthful = compiled.run(&bids(&values)).unwrap();
                for _ in 0..100 {
                    let who = (rng.random::<u32>() % 3) as usize;
                    let mut dev = values.clone();
                    dev[who] = rng.random::<f64>() * 1.2;
                    let out = compiled.run(&bids(&dev)).unwrap();
                    let u_truth = if truthful.winner == Some(who) {
                        values[who] - truthful.payments[who]
                    } else {
                        0.0
                    };
                    let u_dev = if out.winner == Some(who) {
                        values[who] - out.payments[who]
                    } else {
                        0.0
                    };
                    assert!(
                        u_dev <= u_truth + 1e-12,
                        "{m:?}: profitable deviation {u_dev} > {u_truth}"
                    );
                }
            }
        }
    }

    #[test]
    fn welfare_accounting_exact_per_draw() {
        let mut rng = seeded(15);
        for m in dsic_mechanisms() {
            let compiled = m.compile().unwrap();
            for _ in 0..200 {
                let values: Vec<f64> = (0..3).map(|_| rng.random::<f64>()).collect();
                let out = compiled.run(&bids(&values)).unwrap();
                let revenue = out.revenue();
                let utility: f64 = match out.winner {
                    Some(w) => values[w] - out.payments[w],
                    None => 0.0,
                };
                let welfare = revenue + utility;
                match out.winner {
                    Some(w) => assert!((welfare - values[w]).abs() < 1e-12),
                    None => assert_eq!(welfare, 0.0),
                }
            }
        }
    }

    #[test]
    fn single_draw_matches_direct_run() {
        let u = Dist::uniform(0.0, 1.0).unwrap();
        let m = Mechanism::SpAnonymous { reserve: 0.5 };
        let metrics = expected_metrics(
            &m,
            &[u.clone(), u.clone()],
            &[Strategy::Identity, Strategy::Identity],
            1,
            99,
        )
        .unwrap();
        let mut rng = rng::substream(99, 0, "mech.metrics");
        let values = [u.sample(&mut rng), u.sample(&mut rng)];
        let out = run(&m, &bids(&values)).unwrap();
        assert!((metrics.revenue - out.revenue()).abs() < 1e-15);
    }

    #[test]
    fn textbook_revenues_small_sample() {
        let u = Dist::uniform(0.0, 1.0).unwrap();
        let truthful = [Strategy::Identity, Strategy::Identity];
        let vick =
            expected_metrics(&Mechanism::Vickrey, &[u.clone(), u.clone()], &truthful, 200_000, 1)
                .unwrap();
        assert!((vick.revenue - 1.0 / 3.0).abs() < 0.01);
        let reserved = expected_metrics(
            &Mechanism::SpAnonymous { reserve: 0.5 },
            &[u.clone(), u.clone()],
            &truthful,
            200_000,
            1,
        )
        .unwrap();
        assert!((reserved.revenue - 5.0 / 12.0).abs() < 0.01);
        assert!(reserved.sale_rate < vick.sale_rate);
    }

    #[test]
    fn arity_mismatch_rejected() {
        let m = Mechanism::SpLazy { reserves: vec![0.5, 0.5] };
        assert!(matches!(
            run(&m, &bids(&[0.1, 0.2, 0.3])),
            Err(Error::InconsistentArity { expected: 2, got: 3 })
        ));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn outcomes_are_accounting_consistent(
                bids_v in proptest::collection::vec(0.0..2.0f64, 1..6),
                reserve in 0.0..1.5f64,
            ) {
                let n = bids_v.len();
                let profile = BidProfile::new(bids_v.clone()).unwrap();
                for m in [
                    Mechanism::Vickrey,
                    Mechanism::SpAnonymous { reserve },
                    Mechanism::SpLazy { reserves: vec![reserve; n] },
                    Mechanism::SpEager { reserves: vec![reserve; n] },
                    Mechanism::FirstPrice { reserve },
                ] {
                    let out = run(&m, &profile).unwrap();
                    match out.winner {
                        Some(w) => {
                            prop_assert!(out.allocated);
                            // ex-post IR at the bid: never pay above the bid
                            prop_assert!(out.payments[w] <= bids_v[w] + 1e-12);
                            for (i, p) in out.payments.iter().enumerate() {
                                prop_assert!(i == w || *p == 0.0);
                            }
                        }
                        None => {
                            prop_assert!(!out.allocated);
                            prop_assert!(out.payments.iter().all(|p| *p == 0.0));
                        }
                    }
                }
            }

            #[test]
            fn anonymous_lazy_and_eager_coincide(
                bids_v in proptest::collection::vec(0.0..2.0f64, 2..6),
                reserve in 0.0..1.5f64,
            ) {
                let n = bids_v.len();
                let profile = BidProfile::new(bids_v).unwrap();
                let lazy = run(&Mechanism::SpLazy { reserves: vec![reserve; n] }, &profile).unwrap();
                let eager = run(&Mechanism::SpEager { reserves: vec![reserve; n] }, &profile).unwrap();
                prop_assert_eq!(lazy, eager);
            }
        }
    }

    #[test]
    fn mechanism_json_schema() {
        let m: Mechanism = serde_json::from_str(r#"{"kind":"sp-lazy","reserves":[0.5,0.5]}"#).unwrap();
        assert_eq!(m, Mechanism::SpLazy { reserves: vec![0.5, 0.5] });
        let m: Mechanism =
            serde_json::from_str(r#"{"kind":"l-level","floors":[[0.2,0.5],[0.3,0.6]]}"#).unwrap();
        assert!(matches!(m, Mechanism::LLevel { .. }));
        let m: Mechanism = serde_json::from_str(
            r#"{"kind":"boosted-sp","boosts":[1.0,1.2],"reserves":[0.5,0.4]}"#,
        )
        .unwrap();
        assert!(matches!(m, Mechanism::BoostedSp { .. }));
        let m: Mechanism = serde_json::from_str(
            r#"{"kind":"myerson","priors":[{"family":"uniform","a":0.0,"b":1.0}]}"#,
        )
        .unwrap();
        assert!(matches!(m, Mechanism::Myerson { .. }));
        let m: Mechanism = serde_json::from_str(r#"{"kind":"vickrey"}"#).unwrap();
        assert_eq!(m, Mechanism::Vickrey);
    }
}
