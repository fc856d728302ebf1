//! Release gate: every test prints one `criterion NN PASS/FAIL` line with the
//! measured numbers and then asserts. Run with `--nocapture` to see the lines
//! for passing tests too.

use std::time::{Duration, Instant};

use domclique::analytic::{
    alpha, critical_r, expected_dominating_cliques, expected_maximal_cliques,
    lower_phase_boundary, poissonization_error, q_factor, r0, r1, r_from_rho, ratio_analytic,
    ratio_offset_asymptote, s_sum, second_moment_upper_log, AnalyticContext, OffsetKind,
    PhaseClass,
};
use domclique::exact::{clique_number, ExhaustiveTally};
use domclique::graph::{sample_gnp, GnpParams};
use domclique::montecarlo::{coupled_monotonicity_violations, run_trials_with_workers};
use domclique::rng::trial_seed;

fn report(id: u32, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id:02} {verdict}: {detail}");
    assert!(pass, "criterion {id:02} {verdict}: {detail}");
}

fn oracle_grid_ps() -> [f64; 5] {
    [0.2, lower_phase_boundary(), 0.45, 0.5, 0.7]
}

/// Relative 1e-9, absolute 1e-12 when the reference is zero.
fn within_oracle_tolerance(oracle: f64, formula: f64) -> bool {
    if formula == 0.0 {
        oracle.abs() <= 1e-12
    } else {
        (oracle - formula).abs() <= 1e-9 * formula.abs()
    }
}

#[test]
fn criterion_01_dominating_expectation_matches_exhaustive_oracle() {
    let t0 = Instant::now();
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    let mut checked = 0u32;
    for n in 2..=6usize {
        let tally = ExhaustiveTally::new(n).unwrap();
        for r in 1..=n {
            for p in oracle_grid_ps() {
                let oracle = tally.expected_dominating(r, p).unwrap();
                let formula = expected_dominating_cliques(n as u64, r as u64, p).unwrap();
                if !within_oracle_tolerance(oracle, formula) {
                    bad.push(format!("n={n} r={r} p={p}: {oracle:e} vs {formula:e}"));
                }
                if formula != 0.0 {
                    worst = worst.max((oracle - formula).abs() / formula.abs());
                }
                checked += 1;
            }
        }
    }
    let elapsed = t0.elapsed();
    let pass = bad.is_empty() && elapsed < Duration::from_secs(60);
    report(
        1,
        pass,
        &format!(
            "{checked} grid points, worst relative gap {worst:.2e}, {elapsed:.2?} (budget 60s){}{}",
            if bad.is_empty() { "" } else { "; mismatches: " },
            bad.join("; ")
        ),
    );
}

#[test]
fn criterion_02_maximal_expectation_matches_exhaustive_oracle() {
    let t0 = Instant::now();
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    let mut checked = 0u32;
    for n in 2..=6usize {
        let tally = ExhaustiveTally::new(n).unwrap();
        for r in 1..=n {
            for p in oracle_grid_ps() {
                let oracle = tally.expected_maximal(r, p).unwrap();
                let formula = expected_maximal_cliques(n as u64, r as u64, p).unwrap();
                if !within_oracle_tolerance(oracle, formula) {
                    bad.push(format!("n={n} r={r} p={p}: {oracle:e} vs {formula:e}"));
                }
                if formula != 0.0 {
                    worst = worst.max((oracle - formula).abs() / formula.abs());
                }
                checked += 1;
            }
        }
    }
    let elapsed = t0.elapsed();
    let pass = bad.is_empty() && elapsed < Duration::from_secs(60);
    report(
        2,
        pass,
        &format!(
            "{checked} grid points, worst relative gap {worst:.2e}, {elapsed:.2?}{}{}",
            if bad.is_empty() { "" } else { "; mismatches: " },
            bad.join("; ")
        ),
    );
}

#[test]
fn criterion_03_alpha_identities() {
    let mut bad = Vec::new();
    let a = alpha(0.5).unwrap();
    if (a - 1.0).abs() > 1e-12 {
        bad.push(format!("alpha(0.5) = {a}"));
    }
    let a = alpha(lower_phase_boundary()).unwrap();
    if (a - 0.5).abs() > 1e-12 {
        bad.push(format!("alpha((3-sqrt5)/2) = {a}"));
    }
    for p in [0.3, 0.45, 0.5, 0.7] {
        let a = alpha(p).unwrap();
        for r in 1..=40 {
            let lhs = (1.0 - p).powi(r);
            let rhs = (r as f64 * a * p.ln()).exp();
            if (lhs - rhs).abs() > 1e-12 * rhs {
                bad.push(format!("(1-p)^r vs p^(r a) at p={p} r={r}"));
            }
        }
    }
    for i in 1..=99u32 {
        let ctx = AnalyticContext::new(i as f64 / 100.0).unwrap();
        if (ctx.rho_hat * ctx.alpha - 1.0).abs() > 1e-12 {
            bad.push(format!("rho_hat*alpha at p={}", ctx.p));
        }
        if (ctx.epsilon_hat - (2.0 - ctx.rho_hat)).abs() > 1e-12 {
            bad.push(format!("epsilon_hat vs 2-rho_hat at p={}", ctx.p));
        }
    }
    report(
        3,
        bad.is_empty(),
        &format!(
            "362 identity checks{}{}",
            if bad.is_empty() { ", all within 1e-12" } else { "; failed: " },
            bad.join("; ")
        ),
    );
}

#[test]
fn criterion_04_phase_classifier_table() {
    let mut bad = Vec::new();
    match classify(0.6) {
        PhaseClass::AlmostSurelyDominating => {}
        other => bad.push(format!("p=0.6 -> {other:?}")),
    }
    match classify(0.381966) {
        PhaseClass::AlmostSurelyNotDominating => {}
        other => bad.push(format!("p=0.381966 -> {other:?}")),
    }
    match classify(0.45) {
        PhaseClass::Critical { rho_hat, .. } if (rho_hat - 1.33566).abs() <= 1e-3 => {}
        other => bad.push(format!("p=0.45 -> {other:?}")),
    }
    report(
        4,
        bad.is_empty(),
        &format!(
            "0.6 dominating, 0.381966 not dominating, 0.45 critical(1.33566 +/- 1e-3){}{}",
            if bad.is_empty() { "" } else { "; failed: " },
            bad.join("; ")
        ),
    );
}

fn classify(p: f64) -> PhaseClass {
    domclique::analytic::classify_phase(p, 1.5).unwrap()
}

#[test]
fn criterion_05_critical_band_limits() {
    let mut bad = Vec::new();
    let n = 100_000_000u64;
    let at_critical = ratio_analytic(n, critical_r(n, 0.45).unwrap(), 0.45).unwrap();
    let e_inv = (-1.0f64).exp();
    if (at_critical - e_inv).abs() > 0.02 {
        bad.push(format!("ratio at critical r, n=1e8: {at_critical}"));
    }
    let rho_hat = AnalyticContext::new(0.45).unwrap().rho_hat;
    let mut at_1e6 = (f64::NAN, f64::NAN);
    for n in [1_000u64, 10_000, 100_000, 1_000_000, 10_000_000] {
        let curve = |rho: f64| {
            ratio_analytic(n, r_from_rho(n, rho, 0.45).unwrap(), 0.45).unwrap()
        };
        let (hi, mid, lo) = (curve(1.9), curve(rho_hat), curve(1.05));
        if !(hi > mid && mid > lo) {
            bad.push(format!("ordering at n={n}: {hi} / {mid} / {lo}"));
        }
        if n == 1_000_000 {
            at_1e6 = (hi, lo);
        }
    }
    if at_1e6.0 < 0.99 {
        bad.push(format!("rho=1.9 curve at n=1e6: {}", at_1e6.0));
    }
    if at_1e6.1 > 0.01 {
        bad.push(format!("rho=1.05 curve at n=1e6: {}", at_1e6.1));
    }
    report(
        5,
        bad.is_empty(),
        &format!(
            "ratio(critical, n=1e8)={at_critical:.6}, curve ordering holds, n=1e6 endpoints {:.4}/{:.2e}{}{}",
            at_1e6.0,
            at_1e6.1,
            if bad.is_empty() { "" } else { "; failed: " },
            bad.join("; ")
        ),
    );
}

#[test]
fn criterion_06_offset_asymptotes() {
    let mut bad = Vec::new();
    let e_inv = (-1.0f64).exp();
    for i in 1..=99u32 {
        let p = i as f64 / 100.0;
        let v = ratio_offset_asymptote(p, 0.0, OffsetKind::ConstantLambda).unwrap();
        if (v - e_inv).abs() > 1e-12 {
            bad.push(format!("lambda=0 at p={p}: {v}"));
        }
    }
    let offsets = [0.0, 1.0, 2.0, 5.0, 10.0];
    for p in [0.4, 0.45, 0.5] {
        let plus: Vec<f64> = offsets
            .iter()
            .map(|&d| ratio_offset_asymptote(p, d, OffsetKind::PlusDelta).unwrap())
            .collect();
        let minus: Vec<f64> = offsets
            .iter()
            .map(|&d| ratio_offset_asymptote(p, d, OffsetKind::MinusDelta).unwrap())
            .collect();
        if !plus.windows(2).all(|w| w[1] > w[0]) || plus[4] <= 0.99 {
            bad.push(format!("plus-delta sequence at p={p}: {plus:?}"));
        }
        if !minus.windows(2).all(|w| w[1] < w[0]) || minus[4] >= 0.01 {
            bad.push(format!("minus-delta sequence at p={p}: {minus:?}"));
        }
    }
    report(
        6,
        bad.is_empty(),
        &format!(
            "lambda=0 equals 1/e on 99-point grid; delta sequences monotone toward 1 and 0{}{}",
            if bad.is_empty() { "" } else { "; failed: " },
            bad.join("; ")
        ),
    );
}

#[test]
fn criterion_07_second_moment_upper_bound() {
    let mut bad = Vec::new();
    let mut checked = 0u32;
    for n in [4usize, 5, 6] {
        let tally = ExhaustiveTally::new(n).unwrap();
        for r in [2usize, 3] {
            if r * 2 > n {
                continue;
            }
            for p in [0.3, 0.45, 0.5, 0.7] {
                let exact = tally.second_moment_dominating(r, p).unwrap();
                let bound = second_moment_upper_log(n as u64, r as u64, p).unwrap().exp();
                if exact > bound * (1.0 + 1e-12) {
                    bad.push(format!("n={n} r={r} p={p}: exact {exact:.12} > bound {bound:.12}"));
                }
                checked += 1;
            }
        }
    }
    report(
        7,
        bad.is_empty(),
        &format!(
            "{checked} grid points{}{}",
            if bad.is_empty() { ", bound holds everywhere" } else { "; bound violated at: " },
            bad.join("; ")
        ),
    );
}

#[test]
fn criterion_08_monte_carlo_calibration() {
    let t0 = Instant::now();
    let a1 = run_trials_with_workers(4, 0.5, 2, 1_000_000, 7, 1).unwrap();
    let a4 = run_trials_with_workers(4, 0.5, 2, 1_000_000, 7, 4).unwrap();
    let a8 = run_trials_with_workers(4, 0.5, 2, 1_000_000, 7, 8).unwrap();
    let elapsed = t0.elapsed();
    let identical = a1 == a4 && a4 == a8;
    let mean = a1.mean_x();
    let se = a1.mean_x_standard_error();
    let calibrated = (mean - 0.75).abs() <= 3.0 * se;
    let pass = identical && calibrated && elapsed < Duration::from_secs(30);
    report(
        8,
        pass,
        &format!(
            "mean {mean:.6} vs 0.75 ({:+.2} se), workers 1/4/8 identical: {identical}, {elapsed:.2?} (budget 30s)",
            (mean - 0.75) / se
        ),
    );
}

#[test]
fn criterion_09_clique_number_window() {
    let t0 = Instant::now();
    let total = 500usize;
    let n = 500usize;
    let lo = r0(n as u64, 0.5).unwrap().floor() as usize;
    let hi = r1(n as u64, 0.5).unwrap().ceil() as usize;
    let master = 905u64;

    let workers = std::thread::available_parallelism().map_or(4, |c| c.get()).min(8);
    let mut sizes = vec![0usize; total];
    std::thread::scope(|scope| {
        let chunk = total.div_ceil(workers);
        for (w, out) in sizes.chunks_mut(chunk).enumerate() {
            scope.spawn(move || {
                for (k, slot) in out.iter_mut().enumerate() {
                    let params = GnpParams {
                        n,
                        p: 0.5,
                        seed: trial_seed(master, (w * chunk + k) as u64),
                    };
                    *slot = clique_number(&sample_gnp(&params).unwrap());
                }
            });
        }
    });

    let within = sizes.iter().filter(|&&c| lo <= c && c <= hi).count();
    let elapsed = t0.elapsed();
    let pass = within * 100 >= total * 99 && elapsed < Duration::from_secs(300);
    let (min, max) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
    report(
        9,
        pass,
        &format!(
            "{within}/{total} clique numbers in [{lo}, {hi}] (observed range [{min}, {max}]), {elapsed:.2?} (budget 300s)"
        ),
    );
}

#[test]
fn criterion_10_appendix_sum_behavior() {
    let mut bad = Vec::new();
    let ladder = [1_000u64, 10_000, 100_000, 1_000_000];
    let log2 = |n: u64| (n as f64).log2();

    let devs: Vec<f64> = ladder
        .iter()
        .map(|&n| {
            let r = (1.5 * log2(n)).ceil() as u64;
            (s_sum(n, r, 0, 1, 0.5).unwrap() - 1.0).abs()
        })
        .collect();
    if !devs.windows(2).all(|w| w[1] < w[0]) {
        bad.push(format!("|s_sum - 1| not decreasing: {devs:?}"));
    }
    if devs[3] >= 1e-3 {
        bad.push(format!("|s_sum - 1| at n=1e6: {}", devs[3]));
    }

    for half in [false, true] {
        let qdevs: Vec<f64> = ladder
            .iter()
            .map(|&n| {
                let r = (2.0 * log2(n)).round() as u64;
                let j = if half { r / 2 } else { 0 };
                q_factor(n, r, j, 0.5).unwrap() - 1.0
            })
            .collect();
        if !qdevs.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0) {
            bad.push(format!("q_factor - 1 (j = {}) not decreasing toward 0: {qdevs:?}",
                if half { "r/2" } else { "0" }));
        }
    }
    report(
        10,
        bad.is_empty(),
        &format!(
            "|s_sum-1| ladder {devs:?}{}{}",
            if bad.is_empty() { "" } else { "; failed: " },
            bad.join("; ")
        ),
    );
}

#[test]
fn criterion_11_poissonization_error_bound_shape() {
    let mut max_ratio: f64 = 0.0;
    for p in [0.3f64, 0.5, 0.7] {
        let b = 1.0 / p;
        for n in [100u64, 1_000, 10_000, 100_000, 1_000_000] {
            let k = 2.0 * (n as f64).ln() / b.ln();
            let err = poissonization_error(n, k, p).unwrap();
            let p_k = (k * p.ln()).exp();
            let denom = n as f64 * p_k * p_k * (-(n as f64) * p_k).exp();
            max_ratio = max_ratio.max(err.abs() / denom);
        }
    }
    report(
        11,
        max_ratio <= 4.0,
        &format!("max |error| / (n p^2k exp(-n p^k)) = {max_ratio:.6} over 15 points (must be <= 4)"),
    );
}

#[test]
fn criterion_12_coupled_monotonicity() {
    let ps = [0.30, 0.40, 0.45, 0.50, 0.60];
    let violations = coupled_monotonicity_violations(30, 3, &ps, 10_000, 2026).unwrap();
    report(
        12,
        violations == 0,
        &format!("{violations} of 10000 coupled trials lost an existing dominating clique as p rose"),
    );
}
