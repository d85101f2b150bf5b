//! Virtual values across families, regularity/MHR diagnostics, and ironing
//! a non-regular mixture in quantile space.
//!
//! Run: cargo run --release --example virtual_values

use auctionlab::dist::{self, Dist};

fn main() -> auctionlab::Result<()> {
    let families = vec![
        ("uniform[0,1]", Dist::uniform(0.0, 1.0)?),
        ("exponential(scale 1)", Dist::exponential(1.0)?),
        ("lognormal(0.5, 0.5)", Dist::lognormal(0.5, 0.5)?),
        ("gpd(0, -0.5, 1)", Dist::gpd(0.0, -0.5, 1.0)?),
        ("kumaraswamy(2, 10)", Dist::kumaraswamy(2.0, 10.0)?),
        ("pareto two-piece", Dist::pareto_two_piece()),
    ];
    println!(
        "{:<24}{:>10}{:>12}{:>9}{:>6}",
        "family", "r*", "Pi(r*)", "regular", "mhr"
    );
    for (name, d) in &families {
        let r = dist::monopoly_price(d)?;
        let (regular, mhr) = dist::regularity_report(d, 4096)?;
        println!(
            "{:<24}{:>10.4}{:>12.4}{:>9}{:>6}",
            name,
            r,
            dist::monopoly_revenue(d, r),
            regular,
            mhr
        );
    }

    // A mixture of U[0, 0.5] and U[0, 1] is not regular: psi dips where the
    // first component's density drops out, and ironing flattens the dip.
    let mix = Dist::mixture(
        vec![Dist::uniform(0.0, 0.5)?, Dist::uniform(0.0, 1.0)?],
        vec![0.5, 0.5],
    )?;
    let table = dist::iron(&mix, 4096)?;
    println!("\nmixture of U[0,0.5] and U[0,1]: regular = {}", table.regular);
    println!("{:>8}{:>10}{:>12}", "value", "psi", "ironed");
    for k in (0..table.grid.len()).step_by(table.grid.len() / 12) {
        println!(
            "{:>8.3}{:>10.4}{:>12.4}",
            table.grid[k], table.psi[k], table.psi_ironed[k]
        );
    }
    Ok(())
}
