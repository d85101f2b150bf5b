//! First-price play: best responses, the symmetric equilibrium, revenue
//! equivalence with the second-price auction, and the Bulow-Klemperer
//! comparison (one extra bidder beats the optimal mechanism).
//!
//! Run: cargo run --release --example first_price_equilibrium

use auctionlab::dist::Dist;
use auctionlab::equil::{
    bulow_klemperer_check, fp_best_response, fp_symmetric_equilibrium, induced_max_bid_law,
    revenue_equivalence_check,
};

fn main() -> auctionlab::Result<()> {
    let u = Dist::uniform(0.0, 1.0)?;

    // Best reply to a known competition law: for U[0,1] it halves the value.
    for x in [0.4, 0.8] {
        println!("best response to uniform competition at x = {x}: {:.4}", fp_best_response(x, &u)?);
    }

    // Symmetric equilibrium strategies shave by (n-1)/n for uniform values.
    for n in [2usize, 5] {
        let beta = fp_symmetric_equilibrium(&u, n)?;
        println!(
            "n = {n}: beta(0.5) = {:.4}, beta(1.0) = {:.4}",
            beta.bid(0.5),
            beta.bid(1.0)
        );
        // the equilibrium is a fixed point of the best-response map
        let g = induced_max_bid_law(&u, &beta, n)?;
        let br = fp_best_response(0.7, &g)?;
        println!("   best response vs induced bid law at 0.7: {br:.4} (beta: {:.4})", beta.bid(0.7));
    }

    // Revenue equivalence: both formats earn the same at equilibrium.
    for n in [2usize, 3] {
        let (fp, sp) = revenue_equivalence_check(&u, n, 500_000, 7)?;
        println!("n = {n}: first-price {fp:.4} vs second-price {sp:.4}");
    }

    // Bulow-Klemperer: Vickrey with n+1 bidders tops Myerson with n.
    println!("\n{:>3}{:>16}{:>14}", "n", "vickrey(n+1)", "myerson(n)");
    for n in 1..=4usize {
        let (vick, myer) = bulow_klemperer_check(&u, n, 300_000, 11 + n as u64)?;
        println!("{n:>3}{vick:>16.4}{myer:>14.4}");
    }
    Ok(())
}
