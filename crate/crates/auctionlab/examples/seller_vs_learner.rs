//! Dynamic games the seller can win: luring a mean-based learning buyer
//! into overpaying, extracting the full surplus with entry fees, and
//! two-phase pricing against a discounted buyer (including what lying in
//! the exploration phase buys).
//!
//! Run: cargo run --release --example seller_vs_learner

use auctionlab::dist::Dist;
use auctionlab::dynamic::{
    dynamic_regret, exploit_mean_based, fee_mechanism, two_phase_posted_price, BuyerMode,
    PostedBuyer,
};

fn main() -> auctionlab::Result<()> {
    // The two-stage price schedule (free, then 1) against a mean-based
    // buyer: revenue climbs to T/3 while the monopoly benchmark is T/4.
    let f = Dist::discrete(vec![(0.25, 0.5), (0.5, 0.25), (1.0, 0.25)])?;
    let t = 120_000;
    for (name, mode) in [
        ("mean-based oracle", BuyerMode::MeanBasedOracle),
        ("mean-based EXP3", BuyerMode::MeanBasedExp3),
        ("ex-post IR buyer", BuyerMode::ExPostIr),
    ] {
        let tr = exploit_mean_based(&f, t, mode, 1)?;
        println!("{name:<18}: revenue/T = {:.4}", tr.seller_revenue / t as f64);
    }

    // Entry fees equal to the expected Vickrey utility drain the surplus.
    let u = Dist::uniform(0.0, 1.0)?;
    let fee = fee_mechanism(&[u.clone(), u.clone()], 500_000, 2)?;
    println!(
        "\nentry fees: ({:.4}, {:.4}); seller takes {:.4} = E[max value]; net utilities ({:+.4}, {:+.4})",
        fee.fees[0], fee.fees[1], fee.seller_revenue, fee.buyer_utilities[0], fee.buyer_utilities[1]
    );

    // Two-phase pricing against a gamma-discounted buyer.
    let t = 100_000;
    let alpha = (t as f64).powf(-1.0 / 3.0);
    let tr = two_phase_posted_price(&u, 0.8, t, alpha, PostedBuyer::MyopicTruthful, 3)?;
    println!(
        "\ntwo-phase pricing (truthful buyer): regret {:.0} = {:.2} x T^(2/3)",
        dynamic_regret(&tr, &u)?,
        dynamic_regret(&tr, &u)? / (t as f64).powf(2.0 / 3.0)
    );

    // A patient liar rejects everything in phase 1 and buys cheap after;
    // an impatient one just forfeits early surplus.
    let t = 1000;
    let alpha = (t as f64).powf(-1.0 / 3.0);
    for gamma in [0.5, 0.999] {
        let honest = two_phase_posted_price(&u, gamma, t, alpha, PostedBuyer::MyopicTruthful, 4)?;
        let liar = two_phase_posted_price(
            &u,
            gamma,
            t,
            alpha,
            PostedBuyer::ThresholdLiar { tau: 0.0 },
            4,
        )?;
        println!(
            "gamma = {gamma}: discounted utility truthful {:.3} vs liar {:.3}",
            honest.buyer_discounted_utility, liar.buyer_discounted_utility
        );
    }
    Ok(())
}
