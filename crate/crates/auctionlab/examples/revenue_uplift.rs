//! The textbook reserve-price story: two uniform bidders, a second-price
//! auction, and the revenue/welfare shift when the seller posts the
//! optimal reserve.
//!
//! Run: cargo run --release --example revenue_uplift

use auctionlab::dist::{self, Dist};
use auctionlab::equil::Strategy;
use auctionlab::mech::{expected_metrics, Mechanism};

fn main() -> auctionlab::Result<()> {
    let u = Dist::uniform(0.0, 1.0)?;
    let r_star = dist::monopoly_price(&u)?;
    println!("monopoly price of U[0,1]: {r_star:.3}");

    let dists = [u.clone(), u];
    let truthful = [Strategy::Identity, Strategy::Identity];
    let draws = 1_000_000;

    let plain = expected_metrics(&Mechanism::Vickrey, &dists, &truthful, draws, 1)?;
    let reserved = expected_metrics(
        &Mechanism::SpAnonymous { reserve: r_star },
        &dists,
        &truthful,
        draws,
        2,
    )?;

    println!("\n{:<28}{:>10}{:>10}{:>10}{:>11}", "mechanism", "revenue", "utility", "welfare", "sale rate");
    for (name, m) in [("second price, no reserve", &plain), ("second price, r = 1/2", &reserved)] {
        println!(
            "{:<28}{:>10.4}{:>10.4}{:>10.4}{:>11.4}",
            name, m.revenue, m.utilities[0], m.welfare, m.sale_rate
        );
    }
    println!(
        "\nrevenue +{:.1}%, bidder utility {:.1}%, welfare {:.1}%",
        (reserved.revenue / plain.revenue - 1.0) * 100.0,
        (reserved.utilities[0] / plain.utilities[0] - 1.0) * 100.0,
        (reserved.welfare / plain.welfare - 1.0) * 100.0
    );
    Ok(())
}
