//! Shading against a seller who learns reserves from bids: thresholding
//! the virtual value collapses the reserve and lifts utility 57%, linear
//! shading has a closed first-order condition, and the thresholded class
//! has a symmetric Nash that hands back the no-reserve outcome.
//!
//! Run: cargo run --release --example bid_shading

use auctionlab::dist::Dist;
use auctionlab::equil::Strategy;
use auctionlab::strat::{
    myerson_shading, optimal_linear_alpha, strategic_utility, thresholded_nash_reserve,
    thresholded_strategy, ShadedStrategy,
};

fn main() -> auctionlab::Result<()> {
    let u = Dist::uniform(0.0, 1.0)?;
    let draws = 500_000;

    // Truthful baseline: the seller's reserve sits at the monopoly price.
    let truthful = ShadedStrategy::new(Strategy::Identity, u.clone())?;
    let (u0, p0) = strategic_utility(&truthful, &u, draws, 1)?;
    println!("truthful: reserve {:.3}, utility {u0:.4}, payment {p0:.4}", truthful.reserve_price());

    // Thresholding at the monopoly price: overbid below 1/2 so the bid
    // law's virtual value vanishes there; the reserve collapses to 1/4.
    let shaded = thresholded_strategy(&u, Strategy::Identity, 0.5)?;
    let (u1, p1) = strategic_utility(&shaded, &u, draws, 2)?;
    println!(
        "thresholded: reserve {:.3}, utility {u1:.4} (+{:.0}%), payment {p1:.4} (unchanged)",
        shaded.reserve_price(),
        (u1 / u0 - 1.0) * 100.0
    );
    println!("  bid at 0: {:.3}, bid at 0.5: {:.3}", shaded.strategy.bid(0.0), shaded.strategy.bid(0.5));

    // Optimal linear shading against one truthful uniform opponent.
    let alpha = optimal_linear_alpha(&u, &u)?;
    println!("\noptimal linear shading factor: {:.3}", alpha.alpha);

    // All-strategic play: the thresholded-class Nash reserve, and the
    // closed form (n+1)/(2n) it satisfies for uniform values.
    print!("thresholded-class Nash thresholds:");
    for n in 2..=5usize {
        print!("  n={n}: {:.4}", thresholded_nash_reserve(&u, n)?);
    }
    println!();

    // Against a per-bidder Myerson seller the equilibrium shade maps values
    // through the first-price equilibrium: beta(x) = (1+x)/4 for n = 2.
    let beta = myerson_shading(&u, 2)?;
    println!(
        "Myerson-auction equilibrium shading: beta(0) = {:.3}, beta(1/2) = {:.3}, beta(1) = {:.3}",
        beta.bid(0.0),
        beta.bid(0.5),
        beta.bid(1.0)
    );
    Ok(())
}
