//! Best responses and symmetric equilibria for sealed-bid auctions, plus the
//! classical cross-checks: revenue equivalence and Bulow-Klemperer.

use crate::dist::{self, Dist};
use crate::error::{Error, Result};
use crate::mech::{self, Mechanism};
use crate::num;
use crate::rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Monotone bid function mapping values to bids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Strategy {
    /// Truthful bidding.
    Identity,
    Linear { alpha: f64 },
    Affine { slope: f64, intercept: f64 },
    /// Overbid below the threshold so the bid law's virtual value vanishes
    /// there: beta(x) = base(r)(1-F(r))/(1-F(x)) for x < r, base above.
    Thresholded { dist: Dist, base: Box<Strategy>, threshold: f64 },
    /// Monotone (value, bid) table with linear interpolation; flat-clamped
    /// outside the tabulated range.
    Grid { values: Vec<f64>, bids: Vec<f64> },
}

impl Strategy {
    pub fn grid(values: Vec<f64>, bids: Vec<f64>) -> Result<Self> {
        if values.len() != bids.len() || values.len() < 2 {
            return Err(Error::InvalidParams("grid needs matching value/bid tables".into()));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParams("grid values must be strictly increasing".into()));
        }
        if bids.windows(2).any(|w| w[1] < w[0]) || bids[0] < 0.0 {
            return Err(Error::InvalidParams("grid bids must be non-decreasing and >= 0".into()));
        }
        Ok(Strategy::Grid { values, bids })
    }

    pub fn bid(&self, x: f64) -> f64 {
        match self {
            Strategy::Identity => x,
            Strategy::Linear { alpha } => alpha * x,
            Strategy::Affine { slope, intercept } => (slope * x + intercept).max(0.0),
            Strategy::Thresholded { dist, base, threshold } => {
                if x < *threshold {
                    base.bid(*threshold) * (1.0 - dist.cdf(*threshold)) / (1.0 - dist.cdf(x))
                } else {
                    base.bid(x)
                }
            }
            Strategy::Grid { values, bids } => num::interp_clamped(values, bids, x),
        }
    }

    /// Local knot spacing for grid strategies; used to pick a central
    /// difference step spanning whole interpolation cells.
    pub fn knot_spacing(&self, x: f64) -> Option<f64> {
        match self {
            Strategy::Grid { values, .. } => {
                let n = values.len();
                let j = values.partition_point(|v| *v <= x).clamp(1, n - 1);
                let left = values[j] - values[j - 1];
                let right = if j + 1 < n { values[j + 1] - values[j] } else { left };
                Some(left.max(right))
            }
            Strategy::Thresholded { base, .. } => base.knot_spacing(x),
            _ => None,
        }
    }

    /// Analytic derivative where the closed form is known; `None` for grid
    /// strategies (callers fall back to central differences).
    pub fn bid_derivative(&self, x: f64) -> Option<f64> {
        match self {
            Strategy::Identity => Some(1.0),
            Strategy::Linear { alpha } => Some(*alpha),
            Strategy::Affine { slope, intercept } => {
                Some(if slope * x + intercept >= 0.0 { *slope } else { 0.0 })
            }
            Strategy::Thresholded { dist, base, threshold } => {
                if x < *threshold {
                    let c = base.bid(*threshold) * (1.0 - dist.cdf(*threshold));
                    let s = 1.0 - dist.cdf(x);
                    dist.pdf(x).map(|f| c * f / (s * s))
                } else {
                    base.bid_derivative(x)
                }
            }
            Strategy::Grid { .. } => None,
        }
    }
}

/// Best reply to the law `G` of the highest competing bid.
///
/// For laws with a density this solves g(b)(x - b) - G(b) = 0 by bisection
/// over every bracketing interval and keeps the global maximizer of
/// (x - b) G(b); if G(x) = 0 the best reply is truthful. Atomic laws are
/// maximized directly over their support points.
pub fn fp_best_response(x: f64, g_law: &Dist) -> Result<f64> {
    debug_assert!(x >= 0.0);
    if g_law.cdf(x) <= 0.0 {
        return Ok(x);
    }
    if !g_law.has_density() {
        // Step cdf: expected utility is maximized at a support point.
        let atoms: Vec<f64> = match g_law {
            Dist::Discrete { atoms } => atoms.iter().map(|(v, _)| *v).collect(),
            Dist::Empirical { samples } => samples.clone(),
            _ => return Err(Error::NoDensity),
        };
        let mut best = (x, 0.0);
        for &a in atoms.iter().filter(|a| **a <= x) {
            let u = (x - a) * g_law.cdf(a);
            if u > best.1 {
                best = (a, u);
            }
        }
        return Ok(best.0.min(x));
    }
    let lo = g_law.support().0.min(x).max(0.0);
    let utility = |b: f64| (x - b) * g_law.cdf(b);
    let deriv = |b: f64| {
        let g = g_law.pdf(b).unwrap_or(0.0);
        g * (x - b) - g_law.cdf(b)
    };
    // Bracket scan for stationary points of the utility on [lo, x].
    const CELLS: usize = 512;
    let mut candidates = vec![lo, x];
    let mut prev_b = lo;
    let mut prev_d = deriv(lo);
    for k in 1..=CELLS {
        let b = lo + (x - lo) * k as f64 / CELLS as f64;
        let d = deriv(b);
        if prev_d == 0.0 {
            candidates.push(prev_b);
        } else if prev_d * d < 0.0 {
            candidates.push(num::bisect(deriv, prev_b, b, 1e-12));
        }
        prev_b = b;
        prev_d = d;
    }
    let mut best = (x, utility(x));
    for &c in &candidates {
        let u = utility(c);
        if u > best.1 {
            best = (c, u);
        }
    }
    Ok(best.0)
}

/// Symmetric first-price equilibrium beta(x) = E[Y | Y < x] with Y the
/// highest competing value, tabulated on a quantile grid.
pub fn fp_symmetric_equilibrium(d: &Dist, n: usize) -> Result<Strategy> {
    if n < 2 {
        return Err(Error::DegenerateCompetition);
    }
    if !d.has_density() {
        return Err(Error::NoDensity);
    }
    let (lo, hi) = d.support();
    let qmax = if hi.is_finite() { 1.0 } else { dist::TAIL_CAP };
    let k = dist::IRON_GRID;
    let m = (n - 1) as f64;
    let qs: Vec<f64> = (0..k).map(|i| qmax * i as f64 / (k - 1) as f64).collect();
    let xs: Vec<f64> = qs.iter().map(|&q| d.quantile(q)).collect();
    // integral of F^{-1}(q) d(q^{n-1}) accumulated by trapezoid.
    let integrand: Vec<f64> = qs
        .iter()
        .zip(&xs)
        .map(|(&q, &x)| if n == 2 { x } else { x * m * q.powf(m - 1.0) })
        .collect();
    let prefix = num::trapezoid_prefix(&qs, &integrand);
    let mut bids = vec![lo; k];
    for i in 1..k {
        bids[i] = prefix[i] / qs[i].powf(m);
    }
    // Guard against float jitter: bids must be monotone for a Strategy.
    for i in 1..k {
        if bids[i] < bids[i - 1] {
            bids[i] = bids[i - 1];
        }
    }
    // Deduplicate equal x knots (possible on flat quantile stretches).
    let mut values = Vec::with_capacity(k);
    let mut final_bids = Vec::with_capacity(k);
    for (x, b) in xs.into_iter().zip(bids) {
        if values.last().map(|v| x > *v + 0.0).unwrap_or(true) {
            values.push(x);
            final_bids.push(b);
        }
    }
    Strategy::grid(values, final_bids)
}

/// Law of the highest competing bid when the n-1 opponents draw from `d`
/// and bid through `beta`; tabulated by pushing the quantile grid of the
/// max-value law through the strategy.
pub fn induced_max_bid_law(d: &Dist, beta: &Strategy, n: usize) -> Result<Dist> {
    if n < 2 {
        return Err(Error::DegenerateCompetition);
    }
    let (_, hi) = d.support();
    let qmax = if hi.is_finite() { 1.0 } else { dist::TAIL_CAP };
    let k = dist::IRON_GRID;
    let m = (n - 1) as f64;
    let knots: Vec<f64> = (0..k)
        .map(|i| {
            let q = qmax * i as f64 / (k - 1) as f64;
            beta.bid(d.quantile(q.powf(1.0 / m)))
        })
        .collect();
    Dist::tabulated(knots)
}

/// Same law estimated from pushforward samples (step empirical cdf).
pub fn induced_max_bid_law_sampled(
    d: &Dist,
    beta: &Strategy,
    n: usize,
    n_samples: usize,
    seed: u64,
) -> Result<Dist> {
    if n < 2 {
        return Err(Error::DegenerateCompetition);
    }
    let mut rng = rng::substream(seed, 0, "equil.pushforward");
    let mut out = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let mut top = f64::NEG_INFINITY;
        for _ in 0..n - 1 {
            top = top.max(d.sample(&mut rng));
        }
        out.push(beta.bid(top));
    }
    Dist::empirical(out)
}

/// Monte Carlo revenues of the first-price auction at the symmetric
/// equilibrium and of the truthful Vickrey auction.
pub fn revenue_equivalence_check(
    d: &Dist,
    n: usize,
    n_draws: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let beta = fp_symmetric_equilibrium(d, n)?;
    let dists = vec![d.clone(); n];
    let fp = mech::expected_metrics(
        &Mechanism::FirstPrice { reserve: 0.0 },
        &dists,
        &vec![beta; n],
        n_draws,
        seed,
    )?;
    let sp = mech::expected_metrics(
        &Mechanism::Vickrey,
        &dists,
        &vec![Strategy::Identity; n],
        n_draws,
        seed.wrapping_add(1),
    )?;
    Ok((fp.revenue, sp.revenue))
}

/// Monte Carlo revenues for the Bulow-Klemperer comparison: Vickrey with
/// n+1 bidders vs the Myerson auction with n bidders.
pub fn bulow_klemperer_check(
    d: &Dist,
    n: usize,
    n_draws: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let (regular, _) = dist::regularity_report(d, dist::IRON_GRID)?;
    if !regular {
        return Err(Error::NotRegular);
    }
    let vick = mech::expected_metrics(
        &Mechanism::Vickrey,
        &vec![d.clone(); n + 1],
        &vec![Strategy::Identity; n + 1],
        n_draws,
        seed,
    )?;
    let myer = mech::expected_metrics(
        &Mechanism::Myerson { priors: vec![d.clone(); n] },
        &vec![d.clone(); n],
        &vec![Strategy::Identity; n],
        n_draws,
        seed.wrapping_add(1),
    )?;
    Ok((vick.revenue, myer.revenue))
}

/// Monte Carlo estimate of the seller revenue E[G(beta(X)) psi(X)] coming
/// from one bidder at an increasing strategy.
pub fn fp_revenue_via_virtual_value(
    d: &Dist,
    beta: &Strategy,
    g_law: &Dist,
    n_draws: usize,
    seed: u64,
) -> Result<f64> {
    if d.is_atomic() {
        return Err(Error::NoDensity);
    }
    let mut rng = rng::substream(seed, 0, "equil.vv_revenue");
    let mut acc = 0.0;
    for _ in 0..n_draws {
        let x = d.sample(&mut rng);
        let psi = match dist::virtual_value(d, x) {
            Ok(p) => p,
            // Sampling can land on a density zero of the closed form
            // (support edge); such draws have measure zero, skip them.
            Err(Error::ZeroDensity(_)) => continue,
            Err(e) => return Err(e),
        };
        acc += g_law.cdf(beta.bid(x)) * psi;
    }
    Ok(acc / n_draws as f64)
}

/// Value estimates from first-price bids: x = b + G(b)/g(b).
pub fn estimate_values_from_fp_bids(bids: &[f64], g_law: &Dist) -> Result<Vec<f64>> {
    bids.iter()
        .map(|&b| {
            let g = g_law.pdf(b).ok_or(Error::NoDensity)?;
            if g <= 0.0 {
                return Err(Error::ZeroDensity(b));
            }
            Ok(b + g_law.cdf(b) / g)
        })
        .collect()
}

/// Randomized Vickrey variant that inflates the second-highest bid: with
/// probability eps the winner must beat (1+delta) times the runner-up and
/// pays that inflated price, otherwise a plain Vickrey auction runs.
pub fn inflated_vickrey<R: Rng + ?Sized>(
    profile: &mech::BidProfile,
    eps: f64,
    delta: f64,
    rng: &mut R,
) -> Result<mech::AuctionOutcome> {
    debug_assert!((0.0..=1.0).contains(&eps) && delta >= 0.0);
    let vickrey = mech::run(&Mechanism::Vickrey, profile)?;
    if rng.random::<f64>() >= eps {
        return Ok(vickrey);
    }
    let b = profile.bids();
    let n = b.len();
    let w = vickrey.winner.expect("vickrey always allocates");
    let second = if n == 1 { 0.0 } else { vickrey.payments[w] };
    let price = (1.0 + delta) * second;
    if b[w] >= price {
        let mut payments = vec![0.0; n];
        payments[w] = price;
        Ok(mech::AuctionOutcome { winner: Some(w), payments, allocated: true })
    } else {
        Ok(mech::AuctionOutcome { winner: None, payments: vec![0.0; n], allocated: false })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn u01() -> Dist {
        Dist::uniform(0.0, 1.0).unwrap()
    }

    #[test]
    fn best_response_uniform_halves_value() {
        let br = fp_best_response(0.8, &u01()).unwrap();
        assert!((br - 0.4).abs() < 1e-6, "got {br}");
    }

    #[test]
    fn best_response_power_law() {
        // G(b) = b^k on [0,1]: maximize (x-b) b^k at b = kx/(k+1).
        for k in [2.0, 3.0] {
            let g = Dist::kumaraswamy(k, 1.0).unwrap();
            let br = fp_best_response(0.5, &g).unwrap();
            assert!((br - k * 0.5 / (k + 1.0)).abs() < 1e-6, "k={k}: {br}");
        }
    }

    #[test]
    fn best_response_outside_competition_is_truthful() {
        let g = Dist::uniform(2.0, 3.0).unwrap();
        assert_eq!(fp_best_response(1.0, &g).unwrap(), 1.0);
    }

    #[test]
    fn best_response_dominates_random_alternatives() {
        let mut rng = seeded(3);
        let laws = [u01(), Dist::kumaraswamy(2.0, 10.0).unwrap(), Dist::exponential(0.5).unwrap()];
        for law in &laws {
            for _ in 0..32 {
                let x: f64 = rng.random::<f64>() * 1.5;
                let br = fp_best_response(x, law).unwrap();
                assert!((0.0..=x).contains(&br), "br {br} outside [0, {x}]");
                let u_star = (x - br) * law.cdf(br);
                for _ in 0..64 {
                    let alt: f64 = rng.random::<f64>() * x;
                    let u_alt = (x - alt) * law.cdf(alt);
                    assert!(u_alt <= u_star + 1e-9);
                }
            }
        }
    }

    #[test]
    fn symmetric_equilibrium_uniform_closed_forms() {
        let beta2 = fp_symmetric_equilibrium(&u01(), 2).unwrap();
        let beta5 = fp_symmetric_equilibrium(&u01(), 5).unwrap();
        for k in 0..=20 {
            let x = k as f64 / 20.0;
            assert!((beta2.bid(x) - x / 2.0).abs() < 1e-4, "n=2 at {x}");
            assert!((beta5.bid(x) - 4.0 * x / 5.0).abs() < 1e-4, "n=5 at {x}");
        }
        assert_eq!(beta2.bid(0.0), 0.0);
    }

    #[test]
    fn equilibrium_boundary_is_support_infimum() {
        let d = Dist::uniform(0.25, 1.5).unwrap();
        let beta = fp_symmetric_equilibrium(&d, 3).unwrap();
        assert!((beta.bid(0.25) - 0.25).abs() < 1e-9);
    }

    #[test]
    fn equilibrium_is_a_best_response_fixed_point() {
        // 32 random values; the induced max-bid law is tabulated by the
        // quantile transform, which keeps the check noise-free.
        for n in [2usize, 3] {
            let beta = fp_symmetric_equilibrium(&u01(), n).unwrap();
            let g_law = induced_max_bid_law(&u01(), &beta, n).unwrap();
            let mut rng = seeded(17);
            for _ in 0..32 {
                let x: f64 = rng.random::<f64>() * 0.98 + 0.01;
                let br = fp_best_response(x, &g_law).unwrap();
                assert!(
                    (br - beta.bid(x)).abs() < 5e-3,
                    "n={n} x={x}: br={br} beta={}",
                    beta.bid(x)
                );
            }
        }
    }

    #[test]
    fn revenue_equivalence_uniform_quick() {
        let (fp, sp) = revenue_equivalence_check(&u01(), 2, 400_000, 5).unwrap();
        assert!((fp - 1.0 / 3.0).abs() < 0.005, "fp={fp}");
        assert!((sp - 1.0 / 3.0).abs() < 0.005, "sp={sp}");
        let (fp3, sp3) = revenue_equivalence_check(&u01(), 3, 400_000, 6).unwrap();
        assert!((fp3 - 0.5).abs() < 0.005, "fp3={fp3}");
        assert!((sp3 - 0.5).abs() < 0.005, "sp3={sp3}");
    }

    #[test]
    fn revenue_equivalence_exponential_and_larger_n() {
        // heavier-tailed family and a larger field of bidders
        let e = Dist::exponential(1.0).unwrap();
        let (fp, sp) = revenue_equivalence_check(&e, 4, 300_000, 51).unwrap();
        assert!((fp - sp).abs() < 0.01, "exponential n=4: fp={fp} sp={sp}");
        let k = Dist::kumaraswamy(2.0, 10.0).unwrap();
        let (fp, sp) = revenue_equivalence_check(&k, 4, 300_000, 52).unwrap();
        assert!((fp - sp).abs() < 0.005, "kumaraswamy n=4: fp={fp} sp={sp}");
    }

    #[test]
    fn vickrey_competitive_ratio_across_families() {
        // Vickrey_n / Myerson_n >= (n-1)/n for symmetric regular priors
        for (label, d) in
            [("uniform", u01()), ("kumaraswamy", Dist::kumaraswamy(2.0, 10.0).unwrap())]
        {
            for n in [2usize, 6] {
                let vick = mech::expected_metrics(
                    &Mechanism::Vickrey,
                    &vec![d.clone(); n],
                    &vec![Strategy::Identity; n],
                    100_000,
                    60 + n as u64,
                )
                .unwrap()
                .revenue;
                let myer = mech::expected_metrics(
                    &Mechanism::Myerson { priors: vec![d.clone(); n] },
                    &vec![d.clone(); n],
                    &vec![Strategy::Identity; n],
                    100_000,
                    70 + n as u64,
                )
                .unwrap()
                .revenue;
                let floor = (n as f64 - 1.0) / n as f64 - 0.02;
                assert!(
                    vick / myer >= floor,
                    "{label} n={n}: ratio {} < {floor}",
                    vick / myer
                );
            }
        }
    }

    #[test]
    fn revenue_equivalence_degenerate_point_mass() {
        // With a point mass both formats charge the common value; no
        // simulation needed beyond the Vickrey path.
        let d = Dist::point_mass(1.0).unwrap();
        let sp = mech::expected_metrics(
            &Mechanism::Vickrey,
            &[d.clone(), d.clone()],
            &[Strategy::Identity, Strategy::Identity],
            1000,
            7,
        )
        .unwrap();
        assert!((sp.revenue - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bulow_klemperer_single_bidder() {
        let (vick2, myer1) = bulow_klemperer_check(&u01(), 1, 300_000, 8).unwrap();
        assert!((vick2 - 1.0 / 3.0).abs() < 0.005);
        assert!((myer1 - 0.25).abs() < 0.005);
        assert!(vick2 >= myer1);
    }

    #[test]
    fn bulow_klemperer_rejects_irregular() {
        let m = Dist::mixture(
            vec![Dist::uniform(0.0, 0.5).unwrap(), u01()],
            vec![0.5, 0.5],
        )
        .unwrap();
        assert!(matches!(bulow_klemperer_check(&m, 2, 10, 9), Err(Error::NotRegular)));
    }

    #[test]
    fn virtual_value_revenue_matches_payment_simulation() {
        // Two symmetric uniform bidders at the FP equilibrium: per-bidder
        // revenue 1/6 both by the virtual-value route and by direct payments.
        let beta = fp_symmetric_equilibrium(&u01(), 2).unwrap();
        let g_law = induced_max_bid_law(&u01(), &beta, 2).unwrap();
        let vv = fp_revenue_via_virtual_value(&u01(), &beta, &g_law, 400_000, 10).unwrap();
        let sim = mech::expected_metrics(
            &Mechanism::FirstPrice { reserve: 0.0 },
            &[u01(), u01()],
            &[beta.clone(), beta],
            400_000,
            11,
        )
        .unwrap();
        let per_bidder = sim.revenue / 2.0;
        assert!((vv - 1.0 / 6.0).abs() < 0.005, "vv={vv}");
        assert!((vv - per_bidder).abs() < 0.005, "vv={vv} sim={per_bidder}");
    }

    #[test]
    fn virtual_value_revenue_no_competition_is_support_infimum() {
        // G == 1 everywhere (competition always bids 0), truthful, no
        // reserve: E[psi(X)] equals the support infimum, here 0.
        let g_law = Dist::point_mass(0.0).unwrap();
        let vv =
            fp_revenue_via_virtual_value(&u01(), &Strategy::Identity, &g_law, 400_000, 12).unwrap();
        assert!(vv.abs() < 0.005, "E[psi] = {vv}");
    }

    #[test]
    fn virtual_value_revenue_rejects_atoms() {
        let d = Dist::point_mass(1.0).unwrap();
        let g_law = Dist::point_mass(0.0).unwrap();
        assert!(matches!(
            fp_revenue_via_virtual_value(&d, &Strategy::Identity, &g_law, 10, 13),
            Err(Error::NoDensity)
        ));
    }

    #[test]
    fn value_estimation_from_bids() {
        // FP equilibrium bids of 2 uniform bidders live on [0, 1/2] with
        // G(b) = 2b: bid 0.3 -> 0.6.
        let g = Dist::uniform(0.0, 0.5).unwrap();
        let xs = estimate_values_from_fp_bids(&[0.3], &g).unwrap();
        assert!((xs[0] - 0.6).abs() < 1e-12);
        let g = u01();
        let xs = estimate_values_from_fp_bids(&[0.25], &g).unwrap();
        assert!((xs[0] - 0.5).abs() < 1e-12);
        // Density vanishing at the infimum is an error.
        let g = Dist::kumaraswamy(2.0, 1.0).unwrap();
        assert!(matches!(
            estimate_values_from_fp_bids(&[0.0], &g),
            Err(Error::ZeroDensity(_))
        ));
    }

    #[test]
    fn inflated_vickrey_degenerate_cases() {
        let mut rng = seeded(21);
        let profile = mech::BidProfile::new(vec![1.0, 0.6]).unwrap();
        for _ in 0..50 {
            let base = mech::run(&Mechanism::Vickrey, &profile).unwrap();
            let eps0 = inflated_vickrey(&profile, 0.0, 0.7, &mut rng).unwrap();
            assert_eq!(eps0, base);
            let delta0 = inflated_vickrey(&profile, 1.0, 0.0, &mut rng).unwrap();
            assert_eq!(delta0, base);
            let inflated = inflated_vickrey(&profile, 1.0, 1.0, &mut rng).unwrap();
            assert_eq!(inflated.winner, None, "1.0 < 1.2 means no sale");
        }
    }
}
