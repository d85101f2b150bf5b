//! The buyer's side: bidding with an unknown click probability, learning a
//! bid per value under an unknown mechanism, and pacing a budget with an
//! online dual multiplier.
//!
//! Run: cargo run --release --example learning_to_bid

use auctionlab::bidlearn::{contextual_bid_learner, offline_dual_mu, pacing_bidder, ucbid};
use auctionlab::dist::Dist;
use auctionlab::mech::Mechanism;
use auctionlab::rng;
use rand::Rng;

fn main() -> auctionlab::Result<()> {
    let t = 50_000;
    let u = Dist::uniform(0.0, 1.0)?;

    // Unknown value: optimistic bidding learns the click rate on wins only.
    let mut rng = rng::seeded(1);
    let comp: Vec<f64> = (0..t).map(|_| rng.random()).collect();
    let ep = ucbid(0.5, &comp, t, 2)?;
    println!(
        "ucbid (click prob 0.5): wins {}, utility {:.1}, regret {:.1} ({:.2} x sqrt(T log T))",
        ep.win_count(),
        ep.utility,
        ep.regret,
        ep.regret / (t as f64 * (t as f64).ln()).sqrt()
    );

    // Unknown mechanism: a per-value EXP3 learns to bid truthfully under a
    // second-price rule and to shade to x/2 under a first-price rule.
    let grid: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();
    for (name, mechanism) in [
        ("second price", Mechanism::Vickrey),
        ("first price", Mechanism::FirstPrice { reserve: 0.0 }),
    ] {
        let ep = contextual_bid_learner(&[0.8], &[1.0], &grid, &mechanism, std::slice::from_ref(&u), t, 3)?;
        let late = &ep.bids[3 * t / 4..];
        let modal = {
            let mut counts = std::collections::HashMap::new();
            for b in late {
                *counts.entry((b * 20.0).round() as i64).or_insert(0usize) += 1;
            }
            *counts.iter().max_by_key(|(_, c)| **c).unwrap().0 as f64 / 20.0
        };
        println!("contextual EXP3 under {name}: modal late bid {modal:.2} (value 0.8)");
    }

    // Budget pacing: the dual multiplier settles at the fluid optimum.
    let t = 200_000;
    let mut rng = rng::seeded(4);
    let values: Vec<f64> = (0..t).map(|_| rng.random()).collect();
    let comp: Vec<f64> = (0..t).map(|_| rng.random()).collect();
    let budget = 0.1 * t as f64 / 6.0;
    let out = pacing_bidder(&values, &comp, budget, 1.0 / (t as f64).sqrt(), t)?;
    let mu_star = offline_dual_mu(&values, &comp, budget);
    println!(
        "pacing: spend {:.0} of budget {budget:.0}, terminal mu {:.3} (offline dual {:.3})",
        out.spend, out.terminal_mu, mu_star
    );
    Ok(())
}
