//! Sequential pricing with partial feedback: bandits over a price grid,
//! the log-log cautious search against a fixed buyer (binary search pays
//! log T), and reserve learning in repeated second-price auctions.
//!
//! Run: cargo run --release --example online_pricing

use auctionlab::dist::Dist;
use auctionlab::online::{
    binary_search_pricing, cautious_search, posted_price_bandit, symmetric_reserve_learning,
};
use auctionlab::rng;
use rand::Rng;

fn main() -> auctionlab::Result<()> {
    // UCB over a price grid against i.i.d. uniform buyers.
    let t = 50_000;
    let mut rng = rng::seeded(1);
    let values: Vec<f64> = (0..t).map(|_| rng.random()).collect();
    let eps = (t as f64).powf(-1.0 / 3.0);
    let ep = posted_price_bandit(&values, eps, true, t, 2)?;
    println!(
        "posted-price UCB, T = {t}: revenue {:.0}, regret {:.0} ({:.2} x T^(2/3))",
        ep.revenue,
        ep.regret,
        ep.regret / (t as f64).powf(2.0 / 3.0)
    );

    // Fixed buyer value: cautious search spends ~log log T, bisection ~log T.
    for t in [1usize << 8, 1 << 16] {
        let cautious = cautious_search(0.5, t);
        let binary = binary_search_pricing(0.5, t);
        println!(
            "fixed value 1/2, T = {t:>6}: cautious regret {:>5.2}, binary-search regret {:>5.2}",
            cautious.regret, binary.regret
        );
    }

    // Reserve learning in a repeated symmetric second-price auction with
    // revenue-only feedback: doubling epochs under a DKW confidence band.
    let u = Dist::uniform(0.0, 1.0)?;
    let t = 100_000;
    let ep = symmetric_reserve_learning(&u, 2, t, 3)?;
    println!(
        "\nreserve epochs (n = 2 uniform bidders, T = {t}): oracle reserve {:.3}",
        ep.oracle_reserve
    );
    for e in &ep.epochs {
        println!(
            "  epoch at t = {:>6}, len {:>6}: reserve {:.4} (per-round gap {:.5})",
            e.start, e.len, e.reserve, e.gap
        );
    }
    println!(
        "cumulative regret {:.0} = {:.2} x sqrt(T log T)",
        ep.regret,
        ep.regret / (t as f64 * (t as f64).ln()).sqrt()
    );
    Ok(())
}
