//! Learning mechanisms from batches of value samples: empirical cdfs and
//! (guarded) monopoly prices, ERM over reserve-price classes, L-level and
//! boosted searches, contextual partition reserves and sample-complexity
//! sweeps.

use crate::dist::{self, Dist};
use crate::error::{Error, Result};
use crate::mech::{BidProfile, Mechanism};
use crate::rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

/// T i.i.d. draws of the value vector, one row per auction, plus optional
/// per-auction context features.
#[derive(Debug, Clone)]
pub struct SampleSet {
    values: Vec<Vec<f64>>,
    context: Option<Vec<Vec<f64>>>,
}

impl SampleSet {
    pub fn new(values: Vec<Vec<f64>>) -> Result<Self> {
        if values.is_empty() || values[0].is_empty() {
            return Err(Error::Empty);
        }
        let n = values[0].len();
        for row in &values {
            if row.len() != n {
                return Err(Error::InvalidParams("ragged sample matrix".into()));
            }
            if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::InvalidParams("values must be finite and >= 0".into()));
            }
        }
        Ok(SampleSet { values, context: None })
    }

    pub fn with_context(values: Vec<Vec<f64>>, context: Vec<Vec<f64>>) -> Result<Self> {
        let mut s = Self::new(values)?;
        if context.len() != s.len() {
            return Err(Error::InvalidParams("context rows must match value rows".into()));
        }
        s.context = Some(context);
        Ok(s)
    }

    /// Draws T value vectors from per-bidder distributions.
    pub fn draw(dists: &[Dist], t: usize, seed: u64) -> Result<Self> {
        let mut rng = rng::substream(seed, 0, "batch.draw");
        let mut rows = Vec::with_capacity(t);
        for _ in 0..t {
            rows.push(dists.iter().map(|d| d.sample(&mut rng)).collect());
        }
        Self::new(rows)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn n_bidders(&self) -> usize {
        self.values[0].len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn context(&self) -> Option<&[Vec<f64>]> {
        self.context.as_deref()
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        self.values.iter().map(|r| r[i]).collect()
    }

    /// Highest value per auction.
    pub fn row_maxima(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|r| r.iter().copied().fold(f64::NEG_INFINITY, f64::max))
            .collect()
    }

    /// Reads the `bidder_0,...,bidder_{n-1}[,ctx_0,...]` CSV layout.
    pub fn from_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines();
        let header = lines.next().ok_or(Error::Empty)??;
        let cols: Vec<&str> = header.trim().split(',').collect();
        let n = cols.iter().filter(|c| c.starts_with("bidder_")).count();
        let d = cols.iter().filter(|c| c.starts_with("ctx_")).count();
        if n == 0 || n + d != cols.len() {
            return Err(Error::InvalidConfig {
                path: "csv header".into(),
                message: "expected bidder_* columns then optional ctx_* columns".into(),
            });
        }
        let mut values = Vec::new();
        let mut context = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<f64> = line
                .trim()
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::InvalidConfig {
                    path: "csv row".into(),
                    message: e.to_string(),
                })?;
            if fields.len() != n + d {
                return Err(Error::InvalidConfig {
                    path: "csv row".into(),
                    message: format!("expected {} fields, got {}", n + d, fields.len()),
                });
            }
            values.push(fields[..n].to_vec());
            context.push(fields[n..].to_vec());
        }
        if d > 0 {
            Self::with_context(values, context)
        } else {
            Self::new(values)
        }
    }

    pub fn to_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let n = self.n_bidders();
        let d = self.context.as_ref().map_or(0, |c| c[0].len());
        let mut header: Vec<String> = (0..n).map(|i| format!("bidder_{i}")).collect();
        header.extend((0..d).map(|i| format!("ctx_{i}")));
        writeln!(w, "{}", header.join(","))?;
        for (i, row) in self.values.iter().enumerate() {
            let mut fields: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            if let Some(ctx) = &self.context {
                fields.extend(ctx[i].iter().map(|v| format!("{v}")));
            }
            writeln!(w, "{}", fields.join(","))?;
        }
        Ok(())
    }
}

/// A learned mechanism with its in-sample revenue and optional holdout
/// diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LearnedMechanismReport {
    pub mechanism: Mechanism,
    pub empirical_revenue: f64,
    pub holdout_revenue: Option<f64>,
    pub ratio_to_oracle: Option<f64>,
}

impl LearnedMechanismReport {
    pub fn with_holdout(mut self, holdout: &SampleSet) -> Result<Self> {
        self.holdout_revenue = Some(empirical_revenue(&self.mechanism, holdout)?);
        Ok(self)
    }
}

/// Average revenue of `m` over the sample rows (values bid truthfully).
pub fn empirical_revenue(m: &Mechanism, s: &SampleSet) -> Result<f64> {
    let compiled = m.compile()?;
    let mut acc = 0.0;
    for row in s.rows() {
        acc += compiled.run(&BidProfile::new(row.clone())?)?.revenue();
    }
    Ok(acc / s.len() as f64)
}

/// Step empirical cdf of a sample.
pub fn empirical_cdf(samples: &[f64]) -> Result<Dist> {
    if samples.is_empty() {
        return Err(Error::Empty);
    }
    Dist::empirical(samples.to_vec())
}

/// Maximizer of r * (1 - Fhat(r-)) over the sample points; a sale at a
/// price equal to a sample counts as a sale. Smallest maximizer on ties.
pub fn empirical_monopoly_price(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Empty);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let t = sorted.len();
    let mut best = (sorted[0], f64::NEG_INFINITY);
    let mut i = 0;
    while i < t {
        let v = sorted[i];
        // all samples >= v buy at price v
        let rev = v * (t - i) as f64 / t as f64;
        if rev > best.1 {
            best = (v, rev);
        }
        while i < t && sorted[i] == v {
            i += 1;
        }
    }
    Ok(best.0)
}

/// Empirical monopoly price after removing the ceil(kappa T) largest samples.
pub fn guarded_empirical_monopoly_price(samples: &[f64], kappa: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&kappa) {
        return Err(Error::InvalidParams(format!("kappa must be in [0, 1), got {kappa}")));
    }
    if samples.is_empty() {
        return Err(Error::Empty);
    }
    let drop = (kappa * samples.len() as f64).ceil() as usize;
    if drop >= samples.len() {
        return Err(Error::AllRemoved);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.truncate(samples.len() - drop);
    empirical_monopoly_price(&sorted)
}

fn top_two_of_row(row: &[f64]) -> (f64, f64) {
    let mut top = f64::NEG_INFINITY;
    let mut second = f64::NEG_INFINITY;
    for &v in row {
        if v > top {
            second = top;
            top = v;
        } else if v > second {
            second = v;
        }
    }
    (top, second)
}

/// ERM over anonymous-reserve second-price auctions. The empirical revenue
/// is piecewise in the reserve with breakpoints at observed values, so the
/// candidate set {0} plus every observed value is sufficient.
pub fn erm_anonymous_reserve(s: &SampleSet) -> Result<LearnedMechanismReport> {
    if s.n_bidders() < 2 {
        return Err(Error::DegenerateCompetition);
    }
    let t = s.len() as f64;
    let pairs: Vec<(f64, f64)> = s.rows().iter().map(|r| top_two_of_row(r)).collect();
    let mut tops: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut seconds: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    tops.sort_by(f64::total_cmp);
    seconds.sort_by(f64::total_cmp);
    let mut suffix = vec![0.0; seconds.len() + 1];
    for i in (0..seconds.len()).rev() {
        suffix[i] = suffix[i + 1] + seconds[i];
    }
    let mut candidates: Vec<f64> = s.rows().iter().flatten().copied().collect();
    candidates.push(0.0);
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let mut best = (0.0, f64::NEG_INFINITY);
    for &r in &candidates {
        // rows with top >= r sell at max(r, second); second >= r implies
        // top >= r, so the two sorted arrays decompose the sum exactly.
        let n_top = tops.len() - tops.partition_point(|v| *v < r);
        let i_sec = seconds.partition_point(|v| *v < r);
        let n_sec = seconds.len() - i_sec;
        let revenue = (r * (n_top - n_sec) as f64 + suffix[i_sec]) / t;
        if revenue > best.1 {
            best = (r, revenue);
        }
    }
    Ok(LearnedMechanismReport {
        mechanism: Mechanism::SpAnonymous { reserve: best.0 },
        empirical_revenue: best.1,
        holdout_revenue: None,
        ratio_to_oracle: None,
    })
}

/// Optimal lazy reserves: per-bidder empirical monopoly prices.
pub fn lazy_reserves_from_samples(s: &SampleSet) -> Result<Vec<f64>> {
    (0..s.n_bidders())
        .map(|i| empirical_monopoly_price(&s.column(i)))
        .collect()
}

fn candidate_grid(col: &[f64], grid_step: f64, extra: &[f64]) -> Result<Vec<f64>> {
    let max = col.iter().copied().fold(0.0f64, f64::max);
    let mut grid: Vec<f64> = Vec::new();
    if grid_step > 0.0 {
        let mut r = 0.0;
        while r <= max {
            grid.push(r);
            r += grid_step;
        }
    }
    // deciles of the observed bids plus the learned monopoly price
    let mut sorted = col.to_vec();
    sorted.sort_by(f64::total_cmp);
    for k in 0..=10 {
        let idx = ((k as f64 / 10.0) * (sorted.len() - 1) as f64).round() as usize;
        grid.push(sorted[idx]);
    }
    grid.push(empirical_monopoly_price(col)?);
    grid.extend_from_slice(extra);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

fn coordinate_ascent<F>(
    init: Vec<Vec<f64>>,
    grids: &[Vec<Vec<f64>>],
    eval: F,
) -> (Vec<Vec<f64>>, f64)
where
    F: Fn(&[Vec<f64>]) -> f64,
{
    // One parameter vector per bidder; moves only on strict improvement, so
    // the smallest-candidate tie rule is inherited from the grid order.
    let mut params = init;
    let mut best = eval(&params);
    loop {
        let mut improved = false;
        for i in 0..params.len() {
            let current = params[i].clone();
            let mut local_best = best;
            let mut local_pick = current;
            for cand in &grids[i] {
                params[i] = cand.clone();
                let v = eval(&params);
                if v > local_best {
                    local_best = v;
                    local_pick = cand.clone();
                }
            }
            params[i] = local_pick;
            if local_best > best {
                best = local_best;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    (params, best)
}

/// Coordinate ascent over per-bidder reserve grids for the eager
/// second-price auction; returns the local optimum reached from `init`.
pub fn local_search_eager(
    s: &SampleSet,
    init: &[f64],
    grid_step: f64,
) -> Result<LearnedMechanismReport> {
    let n = s.n_bidders();
    if init.len() != n {
        return Err(Error::InconsistentArity { expected: n, got: init.len() });
    }
    let grids: Vec<Vec<Vec<f64>>> = (0..n)
        .map(|i| {
            candidate_grid(&s.column(i), grid_step, &[init[i]])
                .map(|g| g.into_iter().map(|r| vec![r]).collect())
        })
        .collect::<Result<_>>()?;
    let init_params: Vec<Vec<f64>> = init.iter().map(|r| vec![*r]).collect();
    let rows = s.rows();
    let eval = |params: &[Vec<f64>]| {
        let mut acc = 0.0;
        for row in rows {
            let mut w: Option<usize> = None;
            for (i, &b) in row.iter().enumerate() {
                if b >= params[i][0] && w.is_none_or(|j| b > row[j]) {
                    w = Some(i);
                }
            }
            if let Some(w) = w {
                let mut other = f64::NEG_INFINITY;
                for (i, &b) in row.iter().enumerate() {
                    if i != w && b >= params[i][0] && b > other {
                        other = b;
                    }
                }
                acc += other.max(params[w][0]);
            }
        }
        acc / rows.len() as f64
    };
    let (params, revenue) = coordinate_ascent(init_params, &grids, eval);
    Ok(LearnedMechanismReport {
        mechanism: Mechanism::SpEager { reserves: params.into_iter().map(|p| p[0]).collect() },
        empirical_revenue: revenue,
        holdout_revenue: None,
        ratio_to_oracle: None,
    })
}

/// Coordinate ascent over per-bidder (boost, reserve) pairs for the boosted
/// second-price auction, started from boosts 1 and the given reserves.
pub fn search_boosted(
    s: &SampleSet,
    init_reserves: &[f64],
    boost_grid: &[f64],
    reserve_grid: &[f64],
) -> Result<LearnedMechanismReport> {
    let n = s.n_bidders();
    if init_reserves.len() != n {
        return Err(Error::InconsistentArity { expected: n, got: init_reserves.len() });
    }
    if boost_grid.is_empty() || reserve_grid.is_empty() {
        return Err(Error::Empty);
    }
    let mut pair_grid = Vec::new();
    for &b in boost_grid {
        if b.is_nan() || b <= 0.0 {
            return Err(Error::InvalidParams("boosts must be > 0".into()));
        }
        for &r in reserve_grid {
            pair_grid.push(vec![b, r]);
        }
    }
    let grids = vec![pair_grid; n];
    let init: Vec<Vec<f64>> = init_reserves.iter().map(|r| vec![1.0, *r]).collect();
    let rows = s.rows();
    let eval = |params: &[Vec<f64>]| {
        let mut acc = 0.0;
        for row in rows {
            let mut w: Option<usize> = None;
            let mut best_vv = 0.0;
            let mut second_vv = 0.0;
            for (i, &b) in row.iter().enumerate() {
                let vv = params[i][0] * b - params[i][1];
                if vv >= 0.0 {
                    if w.is_none() || vv > best_vv {
                        second_vv = if w.is_some() { best_vv } else { 0.0 };
                        best_vv = vv;
                        w = Some(i);
                    } else if vv > second_vv {
                        second_vv = vv;
                    }
                }
            }
            if let Some(w) = w {
                acc += (second_vv.max(0.0) + params[w][1]) / params[w][0];
            }
        }
        acc / rows.len() as f64
    };
    let (params, revenue) = coordinate_ascent(init, &grids, eval);
    Ok(LearnedMechanismReport {
        mechanism: Mechanism::BoostedSp {
            boosts: params.iter().map(|p| p[0]).collect(),
            reserves: params.iter().map(|p| p[1]).collect(),
        },
        empirical_revenue: revenue,
        holdout_revenue: None,
        ratio_to_oracle: None,
    })
}

fn multisets(grid: &[f64], l: usize) -> Vec<Vec<f64>> {
    fn rec(grid: &[f64], l: usize, start: usize, cur: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
        if cur.len() == l {
            out.push(cur.clone());
            return;
        }
        for i in start..grid.len() {
            cur.push(grid[i]);
            rec(grid, l, i, cur, out);
            cur.pop();
        }
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let mut out = Vec::new();
    rec(&sorted, l, 0, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive search over L-level floor ladders drawn from `grid`
/// (non-decreasing multisets per bidder). Desk scale only: errs when the
/// candidate count exceeds 1e6.
pub fn search_llevel(s: &SampleSet, l: usize, grid: &[f64]) -> Result<LearnedMechanismReport> {
    if grid.is_empty() || l == 0 {
        return Err(Error::Empty);
    }
    let n = s.n_bidders();
    let ladders = multisets(grid, l);
    let per = ladders.len() as u128;
    let total = per.checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > 1_000_000 {
        return Err(Error::SearchSpaceTooLarge(total));
    }
    let mut idx = vec![0usize; n];
    let mut best_floors: Option<Vec<Vec<f64>>> = None;
    let mut best_rev = f64::NEG_INFINITY;
    'outer: loop {
        let floors: Vec<Vec<f64>> = idx.iter().map(|&i| ladders[i].clone()).collect();
        let m = Mechanism::LLevel { floors: floors.clone() };
        let rev = empirical_revenue(&m, s)?;
        if rev > best_rev {
            best_rev = rev;
            best_floors = Some(floors);
        }
        // advance the mixed-radix counter
        let mut k = n;
        while k > 0 {
            k -= 1;
            idx[k] += 1;
            if idx[k] < ladders.len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    Ok(LearnedMechanismReport {
        mechanism: Mechanism::LLevel { floors: best_floors.expect("non-empty enumeration") },
        empirical_revenue: best_rev,
        holdout_revenue: None,
        ratio_to_oracle: None,
    })
}

/// Partition-based contextual reserve rule: cells over the predicted value,
/// one posted price per cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContextualReserve {
    /// Left edge of each cell in prediction space; the first cell is open
    /// below and the last extends to +inf.
    pub thresholds: Vec<f64>,
    pub reserves: Vec<f64>,
}

impl ContextualReserve {
    pub fn reserve_for(&self, prediction: f64) -> f64 {
        let mut cell = 0;
        for (i, &t) in self.thresholds.iter().enumerate().skip(1) {
            if prediction >= t {
                cell = i;
            } else {
                break;
            }
        }
        self.reserves[cell]
    }
}

/// Chooses K cells over sorted predictions by minimizing intra-cell
/// variance (1-d dynamic program), then posts the empirical monopoly price
/// of the highest values restricted to each cell. K is capped at the number
/// of distinct predictions, which merges would-be-empty cells rightward.
pub fn contextual_partition_reserve<P>(
    s: &SampleSet,
    predictor: P,
    k: usize,
) -> Result<ContextualReserve>
where
    P: Fn(&[f64]) -> f64,
{
    let ctx = s.context().ok_or(Error::Empty)?;
    if k == 0 {
        return Err(Error::Empty);
    }
    let preds: Vec<f64> = ctx.iter().map(|z| predictor(z)).collect();
    let maxima = s.row_maxima();
    let mut order: Vec<usize> = (0..preds.len()).collect();
    order.sort_by(|&a, &b| preds[a].total_cmp(&preds[b]));
    let mut xs: Vec<f64> = Vec::new();
    let mut ws: Vec<f64> = Vec::new();
    for &i in &order {
        if xs.last().is_some_and(|v| *v == preds[i]) {
            *ws.last_mut().unwrap() += 1.0;
        } else {
            xs.push(preds[i]);
            ws.push(1.0);
        }
    }
    let k_eff = k.min(xs.len());
    let cuts = variance_partition(&xs, &ws, k_eff);
    let mut thresholds: Vec<f64> = cuts.iter().map(|&c| xs[c]).collect();
    thresholds[0] = f64::NEG_INFINITY;
    let mut cell_maxima: Vec<Vec<f64>> = vec![Vec::new(); k_eff];
    for (i, &p) in preds.iter().enumerate() {
        let mut cell = 0;
        for (j, &t) in thresholds.iter().enumerate().skip(1) {
            if p >= t {
                cell = j;
            } else {
                break;
            }
        }
        cell_maxima[cell].push(maxima[i]);
    }
    let reserves: Vec<f64> = cell_maxima
        .iter()
        .map(|m| empirical_monopoly_price(m))
        .collect::<Result<_>>()?;
    Ok(ContextualReserve { thresholds, reserves })
}

/// Optimal contiguous partition of weighted points into k segments
/// minimizing the total within-segment squared deviation; returns the
/// start index of each segment. Divide-and-conquer dynamic program.
fn variance_partition(xs: &[f64], ws: &[f64], k: usize) -> Vec<usize> {
    let n = xs.len();
    if k <= 1 {
        return vec![0];
    }
    let mut pw = vec![0.0; n + 1];
    let mut pwx = vec![0.0; n + 1];
    let mut pwx2 = vec![0.0; n + 1];
    for i in 0..n {
        pw[i + 1] = pw[i] + ws[i];
        pwx[i + 1] = pwx[i] + ws[i] * xs[i];
        pwx2[i + 1] = pwx2[i] + ws[i] * xs[i] * xs[i];
    }
    let sse = move |a: usize, b: usize| -> f64 {
        let w = pw[b] - pw[a];
        if w <= 0.0 {
            return 0.0;
        }
        let sx = pwx[b] - pwx[a];
        ((pwx2[b] - pwx2[a]) - sx * sx / w).max(0.0)
    };

    #[allow(clippy::too_many_arguments)]
    fn solve<F: Fn(usize, usize) -> f64>(
        lo: usize,
        hi: usize,
        opt_lo: usize,
        opt_hi: usize,
        prev: &[f64],
        cur: &mut [f64],
        choice: &mut [usize],
        sse: &F,
    ) {
        if lo > hi {
            return;
        }
        let mid = (lo + hi) / 2;
        let mut best = (f64::INFINITY, opt_lo);
        let upper = opt_hi.min(mid - 1);
        #[allow(clippy::needless_range_loop)]
        for c in opt_lo..=upper {
            let v = prev[c] + sse(c, mid);
            if v < best.0 {
                best = (v, c);
            }
        }
        cur[mid] = best.0;
        choice[mid] = best.1;
        if mid > lo {
            solve(lo, mid - 1, opt_lo, best.1, prev, cur, choice, sse);
        }
        if mid < hi {
            solve(mid + 1, hi, best.1, opt_hi, prev, cur, choice, sse);
        }
    }

    let mut prev: Vec<f64> = (0..=n).map(|i| sse(0, i)).collect();
    let mut choices: Vec<Vec<usize>> = Vec::with_capacity(k.saturating_sub(1));
    for j in 2..=k {
        let mut cur = vec![f64::INFINITY; n + 1];
        let mut choice = vec![0usize; n + 1];
        solve(j, n, j - 1, n - 1, &prev, &mut cur, &mut choice, &sse);
        choices.push(choice);
        prev = cur;
    }
    let mut cuts = vec![0usize; k];
    let mut i = n;
    for j in (2..=k).rev() {
        let c = choices[j - 2][i];
        cuts[j - 1] = c;
        i = c;
    }
    cuts[0] = 0;
    cuts
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum Learner {
    Empirical,
    Guarded { kappa: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "T")]
    pub t: usize,
    pub mean_ratio: f64,
    pub p05_ratio: f64,
}

/// Output of `sample_complexity_sweep`; serializes to
/// {learner, params, per_T: [{T, mean_ratio, p05_ratio}]}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub learner: Learner,
    pub params: serde_json::Value,
    #[serde(rename = "per_T")]
    pub per_t: Vec<SweepRow>,
}

/// For each sample size T, replicates the learn-then-evaluate loop and
/// reports the mean and 5th-percentile ratio Pi(r_hat) / Pi(r*) under the
/// true distribution.
pub fn sample_complexity_sweep(
    d: &Dist,
    ts: &[usize],
    seeds: usize,
    learner: Learner,
    master_seed: u64,
) -> Result<SweepReport> {
    let r_star = dist::monopoly_price(d)?;
    let pi_star = dist::monopoly_revenue(d, r_star);
    let mut per_t = Vec::with_capacity(ts.len());
    for (ti, &t) in ts.iter().enumerate() {
        let ratios: Result<Vec<f64>> = (0..seeds)
            .into_par_iter()
            .map(|j| {
                let mut rng =
                    rng::substream(master_seed, (ti * seeds + j) as u64, "batch.sweep");
                let samples = d.sample_n(&mut rng, t);
                let r_hat = match learner {
                    Learner::Empirical => empirical_monopoly_price(&samples)?,
                    Learner::Guarded { kappa } => {
                        guarded_empirical_monopoly_price(&samples, kappa)?
                    }
                };
                Ok(dist::monopoly_revenue(d, r_hat) / pi_star)
            })
            .collect();
        let mut ratios = ratios?;
        ratios.sort_by(f64::total_cmp);
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let p05 = ratios[(0.05 * (ratios.len() - 1) as f64).floor() as usize];
        per_t.push(SweepRow { t, mean_ratio: mean, p05_ratio: p05 });
    }
    Ok(SweepReport {
        learner,
        params: serde_json::json!({ "distribution": d, "seeds": seeds }),
        per_t,
    })
}
