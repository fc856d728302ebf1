//! Deterministic, mergeable Monte Carlo estimation over G(n,p).
//!
//! Every trial t derives its own seed from the master seed with the same
//! 64-bit finalizer the sampler uses, so a trial's outcome depends only on
//! (n, p, r, master_seed, t). Aggregates hold exact integers (counts, and
//! per-trial ratios quantized to multiples of 2⁻⁵³) so merging is exactly
//! associative and commutative, and a run's aggregate is bit-identical no
//! matter how the trial range is split across workers.

use crate::error::{Error, Result};
use crate::exact::{count_maximal_and_dominating, has_dominating_complete_set};
use crate::graph::{sample_gnp, sample_gnp_coupled, GnpParams};
use crate::rng::trial_seed;
use crate::analytic;

/// 95% two-sided normal quantile.
const Z_95: f64 = 1.959963984540054;

/// Per-trial ratios are stored as integer multiples of 2⁻⁵³.
const RATIO_SCALE: f64 = 9007199254740992.0; // 2^53

/// Mergeable accumulator of per-trial dominating/maximal clique counts.
///
/// `x` is the trial's dominating r-clique count, `y` its maximal r-clique
/// count; x ≤ y always. Trials with y = 0 contribute no ratio observation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrialAggregate {
    trials: u64,
    sum_x: u128,
    sum_x_sq: u128,
    sum_y: u128,
    exists_count: u64,
    ratio_quanta: u128,
    ratio_sq_quanta: u128,
    ratio_trials: u64,
}

impl TrialAggregate {
    pub fn new() -> Self {
        Self::default()
    }

    /// Folds in one trial's exact counts.
    pub fn record_trial(&mut self, x: u64, y: u64) {
        debug_assert!(x <= y, "dominating count {x} exceeds maximal count {y}");
        self.trials += 1;
        self.sum_x += x as u128;
        self.sum_x_sq += (x as u128) * (x as u128);
        self.sum_y += y as u128;
        if x >= 1 {
            self.exists_count += 1;
        }
        if y > 0 {
            let ratio = x as f64 / y as f64;
            self.ratio_quanta += (ratio * RATIO_SCALE).round() as u128;
            self.ratio_sq_quanta += (ratio * ratio * RATIO_SCALE).round() as u128;
            self.ratio_trials += 1;
        }
    }

    /// Field-wise sum; exact, so merge order never matters.
    pub fn merge(&mut self, other: &TrialAggregate) {
        self.trials += other.trials;
        self.sum_x += other.sum_x;
        self.sum_x_sq += other.sum_x_sq;
        self.sum_y += other.sum_y;
        self.exists_count += other.exists_count;
        self.ratio_quanta += other.ratio_quanta;
        self.ratio_sq_quanta += other.ratio_sq_quanta;
        self.ratio_trials += other.ratio_trials;
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn sum_x(&self) -> f64 {
        self.sum_x as f64
    }

    pub fn sum_x_sq(&self) -> f64 {
        self.sum_x_sq as f64
    }

    pub fn sum_y(&self) -> f64 {
        self.sum_y as f64
    }

    pub fn exists_count(&self) -> u64 {
        self.exists_count
    }

    /// Σ x/y over trials with y > 0, up to the 2⁻⁵³ quantization.
    pub fn ratio_sum(&self) -> f64 {
        self.ratio_quanta as f64 / RATIO_SCALE
    }

    pub fn ratio_trials(&self) -> u64 {
        self.ratio_trials
    }

    /// Trials dropped from ratio estimation because no maximal r-clique existed.
    pub fn excluded_trials(&self) -> u64 {
        self.trials - self.ratio_trials
    }

    pub fn mean_x(&self) -> f64 {
        self.sum_x() / self.trials as f64
    }

    /// Sample standard error of the per-trial x mean.
    pub fn mean_x_standard_error(&self) -> f64 {
        if self.trials < 2 {
            return f64::NAN;
        }
        let m = self.trials as f64;
        let mean = self.mean_x();
        let var = (self.sum_x_sq() - m * mean * mean) / (m - 1.0);
        (var.max(0.0) / m).sqrt()
    }
}

/// Interval construction used for an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalMethod {
    /// Wilson score interval at 95%, for proportions.
    WilsonScore95,
    /// Mean ± z·SE at 95%, clamped to [0,1], for the bounded ratio.
    NormalApprox95,
}

/// Point estimate with a 95% confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateWithCI {
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub method: IntervalMethod,
}

fn check_trial_args(n: usize, p: f64, r: usize, trials: u64) -> Result<()> {
    GnpParams { n, p, seed: 0 }.validate()?;
    if r < 1 || r > n {
        return Err(Error::domain(format!("r = {r} outside 1..={n}")));
    }
    if trials < 1 {
        return Err(Error::domain("trials must be at least 1"));
    }
    Ok(())
}

fn run_range(n: usize, p: f64, r: usize, lo: u64, hi: u64, master_seed: u64) -> TrialAggregate {
    let mut agg = TrialAggregate::new();
    for t in lo..hi {
        let params = GnpParams { n, p, seed: trial_seed(master_seed, t) };
        let g = sample_gnp(&params).expect("parameters validated by caller");
        let (y, x) = count_maximal_and_dominating(&g, r);
        agg.record_trial(x, y);
    }
    agg
}

/// Contiguous near-equal split of [0, trials) into `workers` ranges.
fn chunk_ranges(trials: u64, workers: usize) -> Vec<(u64, u64)> {
    let workers = workers.max(1) as u64;
    let base = trials / workers;
    let extra = trials % workers;
    let mut ranges = Vec::new();
    let mut start = 0;
    for w in 0..workers {
        let len = base + u64::from(w < extra);
        if len == 0 {
            break;
        }
        ranges.push((start, start + len));
        start += len;
    }
    ranges
}

/// Samples `trials` graphs and accumulates dominating/maximal r-clique counts.
pub fn run_trials(n: usize, p: f64, r: usize, trials: u64, master_seed: u64) -> Result<TrialAggregate> {
    run_trials_with_workers(n, p, r, trials, master_seed, 1)
}

/// [`run_trials`] with the trial range split into contiguous chunks across
/// threads. The merged aggregate is bit-identical for every worker count.
pub fn run_trials_with_workers(
    n: usize,
    p: f64,
    r: usize,
    trials: u64,
    master_seed: u64,
    workers: usize,
) -> Result<TrialAggregate> {
    check_trial_args(n, p, r, trials)?;
    let ranges = chunk_ranges(trials, workers);
    if ranges.len() == 1 {
        return Ok(run_range(n, p, r, 0, trials, master_seed));
    }
    let parts = std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .iter()
            .map(|&(lo, hi)| scope.spawn(move || run_range(n, p, r, lo, hi, master_seed)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect::<Vec<_>>()
    });
    let mut agg = TrialAggregate::new();
    for part in &parts {
        agg.merge(part);
    }
    Ok(agg)
}

/// Wilson score interval for Pr[at least one dominating r-clique].
pub fn estimate_existence_probability(agg: &TrialAggregate) -> EstimateWithCI {
    assert!(agg.trials() >= 1, "existence estimate needs at least one trial");
    let m = agg.trials() as f64;
    let phat = agg.exists_count() as f64 / m;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / m;
    let center = (phat + z2 / (2.0 * m)) / denom;
    let half = Z_95 * (phat * (1.0 - phat) / m + z2 / (4.0 * m * m)).sqrt() / denom;
    // At 0 or m successes the exact algebra collapses one endpoint; rounding
    // would otherwise leave a ~1e-17 residue there.
    let ci_low = if phat == 0.0 { 0.0 } else { (center - half).max(0.0) };
    let ci_high = if phat == 1.0 { 1.0 } else { (center + half).min(1.0) };
    EstimateWithCI {
        point: phat,
        ci_low,
        ci_high,
        method: IntervalMethod::WilsonScore95,
    }
}

/// Normal-approximation interval for the mean of x/y over trials with y > 0.
///
/// Trials without a maximal r-clique are excluded (`excluded_trials` reports
/// how many); with no usable trial the estimate is undefined.
pub fn estimate_mean_ratio(agg: &TrialAggregate) -> Result<EstimateWithCI> {
    let m = agg.ratio_trials();
    if m == 0 {
        return Err(Error::UndefinedEstimate(
            "no trial had a maximal r-clique, so the ratio has no observations".into(),
        ));
    }
    let mf = m as f64;
    let mean = agg.ratio_sum() / mf;
    let half = if m >= 2 {
        let sum_sq = agg.ratio_sq_quanta as f64 / RATIO_SCALE;
        let var = ((sum_sq - mf * mean * mean) / (mf - 1.0)).max(0.0);
        Z_95 * (var / mf).sqrt()
    } else {
        0.0
    };
    Ok(EstimateWithCI {
        point: mean,
        ci_low: (mean - half).max(0.0),
        ci_high: (mean + half).min(1.0),
        method: IntervalMethod::NormalApprox95,
    })
}

/// Outcome of an empirical concentration check against the analytic window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationReport {
    pub trials: u64,
    /// Trials with |x − E| ≤ window_halfwidth.
    pub within_window: u64,
    /// Analytic E[X_r].
    pub expected: f64,
    /// E[X_r]·(ln n)³·n^(−β/2).
    pub window_halfwidth: f64,
    pub fraction: f64,
}

/// Fraction of trials whose dominating r-clique count lands within the
/// relative window E·(ln n)³·n^(−β/2) around the analytic expectation.
/// Reported, never asserted: the window's hidden constant is unknown.
pub fn concentration_check(
    n: usize,
    p: f64,
    r: usize,
    trials: u64,
    master_seed: u64,
) -> Result<ConcentrationReport> {
    concentration_check_with_workers(n, p, r, trials, master_seed, 1)
}

/// [`concentration_check`] across threads; same report for every worker count.
pub fn concentration_check_with_workers(
    n: usize,
    p: f64,
    r: usize,
    trials: u64,
    master_seed: u64,
    workers: usize,
) -> Result<ConcentrationReport> {
    check_trial_args(n, p, r, trials)?;
    let expected = analytic::expected_dominating_cliques(n as u64, r as u64, p)?;
    let ctx = analytic::AnalyticContext::new(p)?;
    let ln_n = (n as f64).ln();
    let halfwidth = expected * ln_n.powi(3) * (n as f64).powf(-ctx.beta / 2.0);
    let count_range = |lo: u64, hi: u64| -> u64 {
        let mut within = 0;
        for t in lo..hi {
            let params = GnpParams { n, p, seed: trial_seed(master_seed, t) };
            let g = sample_gnp(&params).expect("parameters validated");
            let (_, x) = count_maximal_and_dominating(&g, r);
            if (x as f64 - expected).abs() <= halfwidth {
                within += 1;
            }
        }
        within
    };
    let ranges = chunk_ranges(trials, workers);
    let within_window: u64 = if ranges.len() == 1 {
        count_range(0, trials)
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = ranges
                .iter()
                .map(|&(lo, hi)| scope.spawn(move || count_range(lo, hi)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).sum()
        })
    };
    Ok(ConcentrationReport {
        trials,
        within_window,
        expected,
        window_halfwidth: halfwidth,
        fraction: within_window as f64 / trials as f64,
    })
}

/// Counts trials where the existence of a dominating complete r-set fails to
/// be nondecreasing across the given thresholds. Each trial draws one uniform
/// per potential edge and thresholds it at every p, so edge sets are nested
/// and the correct count is exactly zero; any violation is an implementation
/// bug, not sampling noise.
pub fn coupled_monotonicity_violations(
    n: usize,
    r: usize,
    ps: &[f64],
    trials: u64,
    master_seed: u64,
) -> Result<u64> {
    if ps.is_empty() {
        return Err(Error::domain("need at least one probability"));
    }
    if !ps.windows(2).all(|w| w[0] <= w[1]) {
        return Err(Error::domain("probabilities must be nondecreasing"));
    }
    for &p in ps {
        check_trial_args(n, p, r, trials)?;
    }
    let mut violations = 0;
    for t in 0..trials {
        let graphs = sample_gnp_coupled(n, trial_seed(master_seed, t), ps)?;
        let mut prev = false;
        for g in &graphs {
            let exists = has_dominating_complete_set(g, r);
            if prev && !exists {
                violations += 1;
                break;
            }
            prev = exists;
        }
    }
    Ok(violations)
}
