//! Value distributions: cdf/pdf/quantile/sampling plus the virtual-value
//! facilities (monopoly price, regularity diagnostics, ironing).
//!
//! All distributions are immutable after construction and safe to share
//! across threads. Sampling takes an explicit RNG.

use crate::error::{Error, Result};
use crate::num;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Quantile used to cap quadrature and grid searches on unbounded supports.
pub const TAIL_CAP: f64 = 1.0 - 1e-9;
/// Default quantile-grid resolution for ironing.
pub const IRON_GRID: usize = 4096;
/// Default grid resolution for monopoly-price searches.
pub const PRICE_GRID: usize = 100_000;

/// A value distribution. Values are non-negative reals.
///
/// The generalized Pareto family is accepted for xi <= 1; the range
/// xi in (0, 1] is an extended range (heavy tails, the mean is infinite at
/// xi = 1) kept for the regular-but-not-MHR examples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Dist {
    Uniform { a: f64, b: f64 },
    Exponential { scale: f64 },
    Lognormal { mu: f64, sigma: f64 },
    Gpd { mu: f64, xi: f64, sigma: f64 },
    Kumaraswamy { a: f64, b: f64 },
    Mixture { components: Vec<Dist>, weights: Vec<f64> },
    Discrete { atoms: Vec<(f64, f64)> },
    Empirical { samples: Vec<f64> },
    /// The two-piece regular heavy-tail law F(x) = 1 - 1/x on [1, 2) and
    /// F(x) = 1 - 1/(2(x-1)) beyond; its monopoly revenue is 1 on [1, 2].
    ParetoTwoPiece,
    /// Piecewise-linear quantile function: `knots[k]` is the value at
    /// quantile k/(K-1). Gives a density when knots strictly increase.
    Tabulated { knots: Vec<f64> },
}

impl Dist {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        let d = Dist::Uniform { a, b };
        d.validate()?;
        Ok(d)
    }

    pub fn exponential(scale: f64) -> Result<Self> {
        let d = Dist::Exponential { scale };
        d.validate()?;
        Ok(d)
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        let d = Dist::Lognormal { mu, sigma };
        d.validate()?;
        Ok(d)
    }

    pub fn gpd(mu: f64, xi: f64, sigma: f64) -> Result<Self> {
        let d = Dist::Gpd { mu, xi, sigma };
        d.validate()?;
        Ok(d)
    }

    pub fn kumaraswamy(a: f64, b: f64) -> Result<Self> {
        let d = Dist::Kumaraswamy { a, b };
        d.validate()?;
        Ok(d)
    }

    pub fn mixture(components: Vec<Dist>, weights: Vec<f64>) -> Result<Self> {
        let d = Dist::Mixture { components, weights };
        d.validate()?;
        Ok(d)
    }

    /// Atoms are (value, probability) pairs; sorted by value on construction.
    pub fn discrete(mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        atoms.sort_by(|x, y| x.0.total_cmp(&y.0));
        let d = Dist::Discrete { atoms };
        d.validate()?;
        Ok(d)
    }

    pub fn point_mass(v: f64) -> Result<Self> {
        Self::discrete(vec![(v, 1.0)])
    }

    /// Step empirical cdf; the quantile function returns order statistics.
    pub fn empirical(mut samples: Vec<f64>) -> Result<Self> {
        samples.sort_by(f64::total_cmp);
        let d = Dist::Empirical { samples };
        d.validate()?;
        Ok(d)
    }

    pub fn pareto_two_piece() -> Self {
        Dist::ParetoTwoPiece
    }

    /// Values at uniform quantile knots 0, 1/(K-1), ..., 1.
    pub fn tabulated(knots: Vec<f64>) -> Result<Self> {
        let d = Dist::Tabulated { knots };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        match self {
            Dist::Uniform { a, b } => {
                if !(a.is_finite() && b.is_finite() && *a >= 0.0 && b > a) {
                    return bad(format!("uniform requires 0 <= a < b, got [{a}, {b}]"));
                }
            }
            Dist::Exponential { scale } => {
                if !(scale.is_finite() && *scale > 0.0) {
                    return bad(format!("exponential scale must be > 0, got {scale}"));
                }
            }
            Dist::Lognormal { mu, sigma } => {
                if !(mu.is_finite() && sigma.is_finite() && *sigma > 0.0) {
                    return bad(format!("lognormal sigma must be > 0, got {sigma}"));
                }
            }
            Dist::Gpd { mu, xi, sigma } => {
                if !(mu.is_finite() && *mu >= 0.0 && sigma.is_finite() && *sigma > 0.0) {
                    return bad(format!("gpd requires mu >= 0 and sigma > 0, got mu={mu} sigma={sigma}"));
                }
                if !(xi.is_finite() && *xi <= 1.0) {
                    return bad(format!("gpd xi must be <= 1, got {xi}"));
                }
            }
            Dist::Kumaraswamy { a, b } => {
                if !(*a > 0.0 && *b > 0.0 && a.is_finite() && b.is_finite()) {
                    return bad(format!("kumaraswamy requires a, b > 0, got ({a}, {b})"));
                }
            }
            Dist::Mixture { components, weights } => {
                if components.is_empty() || components.len() != weights.len() {
                    return bad("mixture components/weights length mismatch".into());
                }
                if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
                    return bad("mixture weights must be non-negative".into());
                }
                let s: f64 = weights.iter().sum();
                if (s - 1.0).abs() > 1e-9 {
                    return bad(format!("mixture weights sum to {s}, expected 1"));
                }
                for c in components {
                    c.validate()?;
                }
            }
            Dist::Discrete { atoms } => {
                if atoms.is_empty() {
                    return Err(Error::Empty);
                }
                if atoms.iter().any(|(v, p)| !v.is_finite() || *v < 0.0 || *p < 0.0) {
                    return bad("discrete atoms need values >= 0 and probs >= 0".into());
                }
                if atoms.windows(2).any(|w| w[0].0 > w[1].0) {
                    return bad("discrete atoms must be sorted by value".into());
                }
                let s: f64 = atoms.iter().map(|(_, p)| p).sum();
                if (s - 1.0).abs() > 1e-9 {
                    return bad(format!("atom probabilities sum to {s}, expected 1"));
                }
            }
            Dist::Empirical { samples } => {
                if samples.is_empty() {
                    return Err(Error::Empty);
                }
                if samples.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return bad("empirical samples must be finite and >= 0".into());
                }
                if samples.windows(2).any(|w| w[0] > w[1]) {
                    return bad("empirical samples must be sorted".into());
                }
            }
            Dist::ParetoTwoPiece => {}
            Dist::Tabulated { knots } => {
                if knots.len() < 2 {
                    return bad("tabulated distribution needs at least 2 knots".into());
                }
                if knots.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return bad("tabulated knots must be finite and >= 0".into());
                }
                if knots.windows(2).any(|w| w[0] > w[1]) {
                    return bad("tabulated knots must be non-decreasing".into());
                }
            }
        }
        Ok(())
    }

    /// Closed support interval; the right end may be +inf.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Dist::Uniform { a, b } => (*a, *b),
            Dist::Exponential { .. } => (0.0, f64::INFINITY),
            Dist::Lognormal { .. } => (0.0, f64::INFINITY),
            Dist::Gpd { mu, xi, sigma } => {
                if *xi < 0.0 {
                    (*mu, mu - sigma / xi)
                } else {
                    (*mu, f64::INFINITY)
                }
            }
            Dist::Kumaraswamy { .. } => (0.0, 1.0),
            Dist::Mixture { components, .. } => {
                let lo = components.iter().map(|c| c.support().0).fold(f64::INFINITY, f64::min);
                let hi = components.iter().map(|c| c.support().1).fold(0.0, f64::max);
                (lo, hi)
            }
            Dist::Discrete { atoms } => (atoms[0].0, atoms[atoms.len() - 1].0),
            Dist::Empirical { samples } => (samples[0], samples[samples.len() - 1]),
            Dist::ParetoTwoPiece => (1.0, f64::INFINITY),
            Dist::Tabulated { knots } => (knots[0], knots[knots.len() - 1]),
        }
    }

    /// Right-continuous cdf.
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Dist::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            Dist::Exponential { scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-x / scale).exp_m1()
                }
            }
            Dist::Lognormal { mu, sigma } => {
                if x <= 0.0 {
                    0.0
                } else {
                    num::norm_cdf((x.ln() - mu) / sigma)
                }
            }
            Dist::Gpd { mu, xi, sigma } => {
                if x <= *mu {
                    return 0.0;
                }
                let z = (x - mu) / sigma;
                if *xi == 0.0 {
                    -(-z).exp_m1()
                } else {
                    let t = 1.0 + xi * z;
                    if t <= 0.0 {
                        1.0
                    } else {
                        1.0 - t.powf(-1.0 / xi)
                    }
                }
            }
            Dist::Kumaraswamy { a, b } => {
                if x <= 0.0 {
                    0.0
                } else if x >= 1.0 {
                    1.0
                } else {
                    1.0 - (1.0 - x.powf(*a)).powf(*b)
                }
            }
            Dist::Mixture { components, weights } => components
                .iter()
                .zip(weights)
                .map(|(c, w)| w * c.cdf(x))
                .sum(),
            Dist::Discrete { atoms } => atoms
                .iter()
                .take_while(|(v, _)| *v <= x)
                .map(|(_, p)| p)
                .sum(),
            Dist::Empirical { samples } => {
                samples.partition_point(|s| *s <= x) as f64 / samples.len() as f64
            }
            Dist::ParetoTwoPiece => {
                if x <= 1.0 {
                    0.0
                } else if x < 2.0 {
                    1.0 - 1.0 / x
                } else {
                    1.0 - 1.0 / (2.0 * (x - 1.0))
                }
            }
            Dist::Tabulated { knots } => {
                let n = knots.len();
                if x < knots[0] {
                    return 0.0;
                }
                if x >= knots[n - 1] {
                    return 1.0;
                }
                let j = knots.partition_point(|v| *v <= x);
                // knots[j-1] <= x < knots[j]
                let (x0, x1) = (knots[j - 1], knots[j]);
                let (q0, q1) = ((j - 1) as f64 / (n - 1) as f64, j as f64 / (n - 1) as f64);
                if x1 == x0 {
                    q0
                } else {
                    q0 + (x - x0) / (x1 - x0) * (q1 - q0)
                }
            }
        }
    }

    /// Left limit F(x-); differs from `cdf` only at atoms.
    pub fn cdf_left(&self, x: f64) -> f64 {
        match self {
            Dist::Discrete { atoms } => atoms
                .iter()
                .take_while(|(v, _)| *v < x)
                .map(|(_, p)| p)
                .sum(),
            Dist::Empirical { samples } => {
                samples.partition_point(|s| *s < x) as f64 / samples.len() as f64
            }
            Dist::Mixture { components, weights } => components
                .iter()
                .zip(weights)
                .map(|(c, w)| w * c.cdf_left(x))
                .sum(),
            _ => self.cdf(x),
        }
    }

    /// Survival P(X > x), computed without the cancellation of `1 - cdf(x)`
    /// so heavy tails stay accurate.
    pub fn survival(&self, x: f64) -> f64 {
        match self {
            Dist::Uniform { a, b } => ((b - x) / (b - a)).clamp(0.0, 1.0),
            Dist::Exponential { scale } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-x / scale).exp()
                }
            }
            Dist::Lognormal { mu, sigma } => {
                if x <= 0.0 {
                    1.0
                } else {
                    0.5 * num::erfc((x.ln() - mu) / sigma / std::f64::consts::SQRT_2)
                }
            }
            Dist::Gpd { mu, xi, sigma } => {
                if x <= *mu {
                    return 1.0;
                }
                let z = (x - mu) / sigma;
                if *xi == 0.0 {
                    (-z).exp()
                } else {
                    let t = 1.0 + xi * z;
                    if t <= 0.0 {
                        0.0
                    } else {
                        t.powf(-1.0 / xi)
                    }
                }
            }
            Dist::Kumaraswamy { a, b } => {
                if x <= 0.0 {
                    1.0
                } else if x >= 1.0 {
                    0.0
                } else {
                    (1.0 - x.powf(*a)).powf(*b)
                }
            }
            Dist::Mixture { components, weights } => components
                .iter()
                .zip(weights)
                .map(|(c, w)| w * c.survival(x))
                .sum(),
            Dist::ParetoTwoPiece => {
                if x <= 1.0 {
                    1.0
                } else if x < 2.0 {
                    1.0 / x
                } else {
                    0.5 / (x - 1.0)
                }
            }
            _ => 1.0 - self.cdf(x),
        }
    }

    /// Probability of a sale at posted price `x` under the
    /// accept-iff-value>=price rule: P(X >= x).
    pub fn survival_at(&self, x: f64) -> f64 {
        match self {
            Dist::Discrete { .. } | Dist::Empirical { .. } | Dist::Tabulated { .. } => {
                1.0 - self.cdf_left(x)
            }
            _ => self.survival(x),
        }
    }

    /// Inverse hazard (1 - F(x)) / f(x), in closed form where one exists.
    /// `None` when no density; may be +inf where the density vanishes.
    pub fn inv_hazard(&self, x: f64) -> Option<f64> {
        match self {
            Dist::Uniform { b, .. } => Some(b - x),
            Dist::Exponential { scale } => Some(*scale),
            Dist::Gpd { mu, xi, sigma } => Some(sigma + xi * (x - mu)),
            Dist::Kumaraswamy { a, b } => {
                let xa = x.powf(*a);
                Some((1.0 - xa) / (a * b * x.powf(a - 1.0)))
            }
            Dist::ParetoTwoPiece => Some(if x < 2.0 { x } else { x - 1.0 }),
            _ => {
                let f = self.pdf(x)?;
                Some(self.survival(x) / f)
            }
        }
    }

    pub fn has_density(&self) -> bool {
        match self {
            Dist::Discrete { .. } | Dist::Empirical { .. } => false,
            Dist::Mixture { components, .. } => components.iter().all(Dist::has_density),
            Dist::Tabulated { knots } => knots.windows(2).all(|w| w[1] > w[0]),
            _ => true,
        }
    }

    /// Density where it exists. Returns `None` for atomic laws.
    pub fn pdf(&self, x: f64) -> Option<f64> {
        match self {
            Dist::Uniform { a, b } => Some(if x < *a || x > *b { 0.0 } else { 1.0 / (b - a) }),
            Dist::Exponential { scale } => {
                Some(if x < 0.0 { 0.0 } else { (-x / scale).exp() / scale })
            }
            Dist::Lognormal { mu, sigma } => {
                if x <= 0.0 {
                    return Some(0.0);
                }
                let z = (x.ln() - mu) / sigma;
                Some((-0.5 * z * z).exp() / (x * sigma * (2.0 * std::f64::consts::PI).sqrt()))
            }
            Dist::Gpd { mu, xi, sigma } => {
                if x < *mu {
                    return Some(0.0);
                }
                let z = (x - mu) / sigma;
                if *xi == 0.0 {
                    Some((-z).exp() / sigma)
                } else {
                    let t = 1.0 + xi * z;
                    if t <= 0.0 {
                        Some(0.0)
                    } else {
                        Some(t.powf(-1.0 / xi - 1.0) / sigma)
                    }
                }
            }
            Dist::Kumaraswamy { a, b } => {
                if !(0.0..=1.0).contains(&x) {
                    return Some(0.0);
                }
                let xa = x.powf(*a);
                Some(a * b * x.powf(a - 1.0) * (1.0 - xa).powf(b - 1.0))
            }
            Dist::Mixture { components, weights } => {
                let mut acc = 0.0;
                for (c, w) in components.iter().zip(weights) {
                    acc += w * c.pdf(x)?;
                }
                Some(acc)
            }
            Dist::Discrete { .. } | Dist::Empirical { .. } => None,
            Dist::ParetoTwoPiece => Some(if x < 1.0 {
                0.0
            } else if x < 2.0 {
                1.0 / (x * x)
            } else {
                0.5 / ((x - 1.0) * (x - 1.0))
            }),
            Dist::Tabulated { knots } => {
                if !self.has_density() {
                    return None;
                }
                let n = knots.len();
                if x < knots[0] || x > knots[n - 1] {
                    return Some(0.0);
                }
                let j = knots.partition_point(|v| *v <= x).clamp(1, n - 1);
                let dq = 1.0 / (n - 1) as f64;
                Some(dq / (knots[j] - knots[j - 1]))
            }
        }
    }

    /// Generalized inverse cdf: inf { x : F(x) >= q }, with quantile(0) the
    /// support infimum.
    pub fn quantile(&self, q: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&q), "quantile domain");
        let (lo, hi) = self.support();
        if q <= 0.0 {
            return lo;
        }
        if q >= 1.0 {
            return hi;
        }
        match self {
            Dist::Uniform { a, b } => a + q * (b - a),
            Dist::Exponential { scale } => -scale * (-q).ln_1p(),
            Dist::Lognormal { mu, sigma } => (mu + sigma * num::norm_quantile(q)).exp(),
            Dist::Gpd { mu, xi, sigma } => {
                if *xi == 0.0 {
                    mu - sigma * (-q).ln_1p()
                } else {
                    mu + sigma * ((1.0 - q).powf(-xi) - 1.0) / xi
                }
            }
            Dist::Kumaraswamy { a, b } => (1.0 - (1.0 - q).powf(1.0 / b)).powf(1.0 / a),
            Dist::Mixture { components, .. } => {
                let hi_b = components
                    .iter()
                    .map(|c| c.quantile(q))
                    .fold(lo, f64::max);
                if hi_b <= lo {
                    return lo;
                }
                // Smallest x with F(x) >= q by bisection.
                let mut l = lo;
                let mut h = hi_b;
                for _ in 0..200 {
                    if h - l <= 1e-13 * h.abs().max(1.0) {
                        break;
                    }
                    let m = 0.5 * (l + h);
                    if self.cdf(m) >= q {
                        h = m;
                    } else {
                        l = m;
                    }
                }
                h
            }
            Dist::Discrete { atoms } => {
                let mut acc = 0.0;
                for (v, p) in atoms {
                    acc += p;
                    if acc >= q - 1e-15 {
                        return *v;
                    }
                }
                atoms[atoms.len() - 1].0
            }
            Dist::Empirical { samples } => {
                let n = samples.len();
                let k = (q * n as f64).ceil() as usize;
                samples[k.clamp(1, n) - 1]
            }
            Dist::ParetoTwoPiece => {
                if q < 0.5 {
                    1.0 / (1.0 - q)
                } else {
                    1.0 + 0.5 / (1.0 - q)
                }
            }
            Dist::Tabulated { knots } => {
                let n = knots.len();
                let pos = q * (n - 1) as f64;
                let j = (pos.floor() as usize).min(n - 2);
                let t = pos - j as f64;
                knots[j] + t * (knots[j + 1] - knots[j])
            }
        }
    }

    /// Inverse-transform sampling (mixtures pick a component first).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Dist::Mixture { components, weights } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (c, w) in components.iter().zip(weights) {
                    acc += w;
                    if u < acc {
                        return c.sample(rng);
                    }
                }
                components[components.len() - 1].sample(rng)
            }
            _ => self.quantile(rng.random()),
        }
    }

    pub fn sample_n<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.sample(rng)).collect()
    }

    /// Analytic mean; +inf for laws without a first moment.
    pub fn mean(&self) -> f64 {
        match self {
            Dist::Uniform { a, b } => 0.5 * (a + b),
            Dist::Exponential { scale } => *scale,
            Dist::Lognormal { mu, sigma } => (mu + 0.5 * sigma * sigma).exp(),
            Dist::Gpd { mu, xi, sigma } => {
                if *xi >= 1.0 {
                    f64::INFINITY
                } else {
                    mu + sigma / (1.0 - xi)
                }
            }
            Dist::Kumaraswamy { a, b } => {
                // b * B(1 + 1/a, b)
                let x = 1.0 + 1.0 / a;
                (b.ln() + num::ln_gamma(x) + num::ln_gamma(*b) - num::ln_gamma(x + b)).exp()
            }
            Dist::Mixture { components, weights } => components
                .iter()
                .zip(weights)
                .map(|(c, w)| w * c.mean())
                .sum(),
            Dist::Discrete { atoms } => atoms.iter().map(|(v, p)| v * p).sum(),
            Dist::Empirical { samples } => {
                samples.iter().sum::<f64>() / samples.len() as f64
            }
            Dist::ParetoTwoPiece => f64::INFINITY,
            Dist::Tabulated { knots } => {
                let qs: Vec<f64> = (0..knots.len())
                    .map(|k| k as f64 / (knots.len() - 1) as f64)
                    .collect();
                num::trapezoid(&qs, knots)
            }
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Dist::Discrete { .. } | Dist::Empirical { .. })
    }
}

/// Virtual value psi(x) = x - (1 - F(x)) / f(x).
///
/// Defined only where a positive density exists; atomic laws go through the
/// quantile-space ironing path instead.
pub fn virtual_value(d: &Dist, x: f64) -> Result<f64> {
    let (lo, hi) = d.support();
    if x < lo || x > hi {
        return Err(Error::OutOfSupport(x));
    }
    let f = d.pdf(x).ok_or(Error::NoDensity)?;
    if f <= 0.0 {
        return Err(Error::ZeroDensity(x));
    }
    Ok(x - d.inv_hazard(x).expect("density checked above"))
}

/// Expected posted-price revenue Pi(r) = r * P(X >= r).
pub fn monopoly_revenue(d: &Dist, r: f64) -> f64 {
    debug_assert!(r >= 0.0);
    r * d.survival_at(r)
}

/// Price maximizing Pi(r) = r(1 - F(r)); smallest maximizer on ties.
///
/// Atom laws are maximized over their support points; continuous laws over a
/// dense grid capped at the 1 - 1e-9 quantile. Errors with `Unbounded` when
/// the revenue is still climbing at the cap.
pub fn monopoly_price(d: &Dist) -> Result<f64> {
    monopoly_price_with_grid(d, PRICE_GRID)
}

pub fn monopoly_price_with_grid(d: &Dist, grid: usize) -> Result<f64> {
    match d {
        Dist::Discrete { atoms } => {
            let mut best = (atoms[0].0, f64::NEG_INFINITY);
            for (v, _) in atoms {
                let rev = monopoly_revenue(d, *v);
                if rev > best.1 {
                    best = (*v, rev);
                }
            }
            Ok(best.0)
        }
        Dist::Empirical { samples } => {
            let mut best = (samples[0], f64::NEG_INFINITY);
            for v in samples {
                let rev = monopoly_revenue(d, *v);
                if rev > best.1 {
                    best = (*v, rev);
                }
            }
            Ok(best.0)
        }
        _ => {
            let (lo, hi) = d.support();
            let cap = if hi.is_finite() { hi } else { d.quantile(TAIL_CAP) };
            let mut best = (lo, monopoly_revenue(d, lo.max(0.0)));
            let mut best_idx = 0usize;
            for k in 1..grid {
                let r = lo + (cap - lo) * k as f64 / (grid - 1) as f64;
                let rev = monopoly_revenue(d, r);
                if rev > best.1 {
                    best = (r, rev);
                    best_idx = k;
                }
            }
            if !hi.is_finite() && best_idx == grid - 1 {
                return Err(Error::Unbounded);
            }
            Ok(best.0)
        }
    }
}

/// Virtual values tabulated on a uniform quantile grid, together with the
/// ironed (concavified) version and regularity flags.
#[derive(Debug, Clone)]
pub struct VirtualValueTable {
    /// Grid in value space (quantiles of the distribution).
    pub grid: Vec<f64>,
    /// Quantile grid the values sit on.
    pub quantiles: Vec<f64>,
    /// Virtual value per grid point (discrete slope of the revenue curve).
    pub psi: Vec<f64>,
    /// Ironed virtual value per grid point; non-decreasing.
    pub psi_ironed: Vec<f64>,
    pub regular: bool,
    pub mhr: bool,
}

impl VirtualValueTable {
    /// Ironed virtual value at `x`, clamped outside the grid.
    pub fn ironed_at(&self, x: f64) -> f64 {
        num::interp_clamped(&self.grid, &self.psi_ironed, x)
    }

    /// Smallest x with ironed psi(x) >= v, by bisection (1e-10 absolute);
    /// flat segments resolve to their left endpoint. Clamps v into the
    /// attainable range.
    pub fn inverse_ironed(&self, v: f64) -> f64 {
        let lo0 = self.grid[0];
        let hi0 = self.grid[self.grid.len() - 1];
        if self.ironed_at(lo0) >= v {
            return lo0;
        }
        if self.ironed_at(hi0) < v {
            return hi0;
        }
        let mut lo = lo0;
        let mut hi = hi0;
        while hi - lo > 1e-10 {
            let mid = 0.5 * (lo + hi);
            if self.ironed_at(mid) >= v {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Builds the ironed virtual value by concavifying the revenue curve
/// R(q) = F^{-1}(q) (1 - q) in quantile space; psi is the centered negated
/// slope of R and psi_ironed of its upper concave envelope.
pub fn iron(d: &Dist, grid_size: usize) -> Result<VirtualValueTable> {
    if grid_size < 16 {
        return Err(Error::GridTooCoarse(grid_size));
    }
    let (_, hi) = d.support();
    let qmax = if hi.is_finite() { 1.0 } else { TAIL_CAP };
    let k = grid_size;
    let qs: Vec<f64> = (0..k).map(|i| qmax * i as f64 / (k - 1) as f64).collect();
    let xs: Vec<f64> = qs.iter().map(|&q| d.quantile(q)).collect();
    let revenue: Vec<f64> = qs.iter().zip(&xs).map(|(&q, &x)| x * (1.0 - q)).collect();
    let env = num::upper_concave_envelope(&qs, &revenue);

    let slope = |ys: &[f64], i: usize| -> f64 {
        if i == 0 {
            -(ys[1] - ys[0]) / (qs[1] - qs[0])
        } else if i == k - 1 {
            -(ys[k - 1] - ys[k - 2]) / (qs[k - 1] - qs[k - 2])
        } else {
            -(ys[i + 1] - ys[i - 1]) / (qs[i + 1] - qs[i - 1])
        }
    };
    let psi: Vec<f64> = (0..k).map(|i| slope(&revenue, i)).collect();
    let mut psi_ironed: Vec<f64> = (0..k).map(|i| slope(&env, i)).collect();
    // Guard against float jitter breaking monotonicity of the envelope slopes.
    for i in 1..k {
        if psi_ironed[i] < psi_ironed[i - 1] {
            psi_ironed[i] = psi_ironed[i - 1];
        }
    }

    let (regular, mhr) = regularity_flags(d, &qs, &xs, &psi);
    Ok(VirtualValueTable { grid: xs, quantiles: qs, psi, psi_ironed, regular, mhr })
}

fn regularity_flags(d: &Dist, qs: &[f64], xs: &[f64], slope_psi: &[f64]) -> (bool, bool) {
    const TOL: f64 = -1e-9;
    if d.has_density() {
        // Analytic psi wherever the density is positive.
        let mut prev: Option<f64> = None;
        let mut regular = true;
        for &x in xs {
            if let Ok(p) = virtual_value(d, x) {
                if let Some(q) = prev {
                    if p - q < TOL {
                        regular = false;
                        break;
                    }
                }
                prev = Some(p);
            }
        }
        // MHR <=> the inverse hazard (1-F)/f is non-increasing.
        let mut mhr = true;
        let mut prev_h: Option<f64> = None;
        for (&q, &x) in qs.iter().zip(xs) {
            if d.pdf(x).unwrap_or(0.0) <= 0.0 || q >= 1.0 {
                continue;
            }
            let h = d.inv_hazard(x).unwrap();
            if let Some(ph) = prev_h {
                if h - ph > -TOL * h.abs().max(1.0) {
                    mhr = false;
                    break;
                }
            }
            prev_h = Some(h);
        }
        (regular, mhr)
    } else {
        let regular = slope_psi.windows(2).all(|w| w[1] - w[0] >= TOL);
        (regular, false)
    }
}

/// (regular, mhr) flags; see `iron`.
pub fn regularity_report(d: &Dist, grid_size: usize) -> Result<(bool, bool)> {
    if grid_size < 16 {
        return Err(Error::GridTooCoarse(grid_size));
    }
    let table = iron(d, grid_size)?;
    Ok((table.regular, table.mhr))
}
