//! The five subcommands, plus grid parsing and the clique-size selector
//! shared between them.

use std::time::Instant;

use domclique::analytic::{
    alpha, classify_phase, critical_r, expected_dominating_cliques, expected_maximal_cliques,
    r_from_rho, ratio_analytic, ratio_offset_asymptote, AnalyticContext, OffsetKind, PhaseClass,
};
use domclique::exact::ExhaustiveTally;
use domclique::montecarlo::{
    estimate_existence_probability, estimate_mean_ratio, run_trials_with_workers,
};

use crate::table::{self, Row};
use crate::{CliError, FigureArgs, FigureName, PointArgs};

const Z95: f64 = 1.959963984540054;

// ---- parameter grids ---------------------------------------------------------

fn parse_n_range(spec: &str) -> Result<Vec<u64>, CliError> {
    let usage = || {
        CliError::Usage(format!(
            "--n-range {spec:?} is not of the form A:B:STEP or A:B:STEP:geom"
        ))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let geometric = match parts.as_slice() {
        [_, _, _] => false,
        [_, _, _, tail] if *tail == "geom" => true,
        _ => return Err(usage()),
    };
    let a: u64 = parts[0].parse().map_err(|_| usage())?;
    let b: u64 = parts[1].parse().map_err(|_| usage())?;
    let step: u64 = parts[2].parse().map_err(|_| usage())?;
    if a > b {
        return Err(CliError::Usage(format!("--n-range {spec:?} is empty: {a} > {b}")));
    }
    if step < if geometric { 2 } else { 1 } {
        return Err(CliError::Usage(format!(
            "--n-range step {step} too small ({} minimum)",
            if geometric { "geometric factor 2" } else { "1" }
        )));
    }
    let mut ns = Vec::new();
    let mut n = a;
    while n <= b {
        ns.push(n);
        n = if geometric {
            match n.checked_mul(step) {
                Some(next) => next,
                None => break,
            }
        } else {
            match n.checked_add(step) {
                Some(next) => next,
                None => break,
            }
        };
    }
    Ok(ns)
}

fn n_grid(args: &PointArgs) -> Result<Option<Vec<u64>>, CliError> {
    match (&args.n, &args.n_range) {
        (Some(n), None) => Ok(Some(vec![*n])),
        (None, Some(spec)) => parse_n_range(spec).map(Some),
        (None, None) => Ok(None),
        (Some(_), Some(_)) => unreachable!("clap group forbids both"),
    }
}

fn require_n_grid(args: &PointArgs) -> Result<Vec<u64>, CliError> {
    n_grid(args)?.ok_or_else(|| CliError::Usage("missing --n or --n-range".into()))
}

fn p_grid(args: &PointArgs) -> Result<Vec<f64>, CliError> {
    match (&args.p, &args.p_list) {
        (Some(p), None) => Ok(vec![*p]),
        (None, Some(ps)) if !ps.is_empty() => Ok(ps.clone()),
        (None, Some(_)) => Err(CliError::Usage("--p-list is empty".into())),
        (None, None) => Err(CliError::Usage("missing --p or --p-list".into())),
        (Some(_), Some(_)) => unreachable!("clap group forbids both"),
    }
}

fn single_n(args: &PointArgs) -> Result<u64, CliError> {
    match (&args.n, &args.n_range) {
        (Some(n), None) => Ok(*n),
        _ => Err(CliError::Usage("simulate takes a single --n; sweep handles ranges".into())),
    }
}

fn single_p(args: &PointArgs) -> Result<f64, CliError> {
    match (&args.p, &args.p_list) {
        (Some(p), None) => Ok(*p),
        _ => Err(CliError::Usage("simulate takes a single --p; sweep handles lists".into())),
    }
}

fn resolve_workers(flag: Option<usize>) -> Result<usize, CliError> {
    let w = match flag {
        Some(w) => w,
        None => match std::env::var("DOMCLIQUE_WORKERS") {
            Ok(s) => s.trim().parse::<usize>().map_err(|_| {
                CliError::Usage(format!("DOMCLIQUE_WORKERS must be a positive integer, got {s:?}"))
            })?,
            Err(_) => 1,
        },
    };
    if w == 0 {
        return Err(CliError::Usage("worker count must be at least 1".into()));
    }
    Ok(w)
}

// ---- clique-size selector ------------------------------------------------------

enum RSelector {
    Fixed(u64),
    Rho(f64),
    Critical,
}

/// A selector applied at one (n, p) point: the value for the rho_or_r
/// column, the unrounded clique size for the analytic curves, and the
/// integer size actually counted or simulated. Emitting both sizes keeps
/// rounding-induced gaps visible in the output.
struct ResolvedR {
    column: f64,
    exact: f64,
    used: u64,
}

impl RSelector {
    fn from_args(args: &PointArgs) -> Option<RSelector> {
        if let Some(r) = args.r {
            Some(RSelector::Fixed(r))
        } else if let Some(rho) = args.rho {
            Some(RSelector::Rho(rho))
        } else if args.critical {
            Some(RSelector::Critical)
        } else {
            None
        }
    }

    fn require(args: &PointArgs) -> Result<RSelector, CliError> {
        RSelector::from_args(args)
            .ok_or_else(|| CliError::Usage("missing clique size: pass --r, --rho, or --critical".into()))
    }

    fn resolve(&self, n: u64, p: f64) -> Result<ResolvedR, CliError> {
        match self {
            RSelector::Fixed(r) => Ok(ResolvedR { column: *r as f64, exact: *r as f64, used: *r }),
            RSelector::Rho(rho) => {
                let exact = r_from_rho(n, *rho, p)?;
                Ok(ResolvedR { column: *rho, exact, used: round_size(exact) })
            }
            RSelector::Critical => {
                let exact = critical_r(n, p)?;
                Ok(ResolvedR { column: exact, exact, used: round_size(exact) })
            }
        }
    }
}

fn round_size(r: f64) -> u64 {
    (r.round() as u64).max(1)
}

fn phase_name(class: &PhaseClass) -> &'static str {
    match class {
        PhaseClass::AlmostSurelyDominating => "AlmostSurelyDominating",
        PhaseClass::AlmostSurelyNotDominating => "AlmostSurelyNotDominating",
        PhaseClass::Critical { .. } => "Critical",
    }
}

// ---- commands ------------------------------------------------------------------

pub fn analytic(args: &PointArgs) -> Result<(), CliError> {
    let ps = p_grid(args)?;
    let ns = n_grid(args)?;
    let selector = RSelector::from_args(args);
    if ns.is_some() && selector.is_none() {
        return Err(CliError::Usage(
            "analytic with --n/--n-range also needs --r, --rho, or --critical".into(),
        ));
    }
    if selector.is_some() && ns.is_none() {
        return Err(CliError::Usage(
            "analytic with a clique size also needs --n or --n-range".into(),
        ));
    }
    let mut rows = Vec::new();
    for &p in &ps {
        rows.push(Row {
            quantity: "alpha",
            p: Some(p),
            analytic_value: Some(alpha(p)?),
            ..Row::default()
        });
        let class = classify_phase(p, args.rho.unwrap_or(1.5))?;
        let rho_hat = match class {
            PhaseClass::Critical { rho_hat, .. } => Some(rho_hat),
            _ => None,
        };
        rows.push(Row {
            quantity: "phase",
            p: Some(p),
            rho_or_r: args.rho,
            analytic_value: rho_hat,
            phase: Some(phase_name(&class)),
            ..Row::default()
        });
        if let Some(delta) = args.delta {
            for (quantity, kind) in [
                ("ratio_limit_plus_delta", OffsetKind::PlusDelta),
                ("ratio_limit_minus_delta", OffsetKind::MinusDelta),
            ] {
                rows.push(Row {
                    quantity,
                    p: Some(p),
                    rho_or_r: Some(delta),
                    analytic_value: Some(ratio_offset_asymptote(p, delta, kind)?),
                    ..Row::default()
                });
            }
        }
        if let Some(lambda) = args.lambda {
            rows.push(Row {
                quantity: "ratio_limit_lambda",
                p: Some(p),
                rho_or_r: Some(lambda),
                analytic_value: Some(ratio_offset_asymptote(p, lambda, OffsetKind::ConstantLambda)?),
                ..Row::default()
            });
        }
        if let (Some(ns), Some(selector)) = (&ns, &selector) {
            for &n in ns {
                let sizes = selector.resolve(n, p)?;
                rows.push(Row {
                    quantity: "expected_dominating",
                    n: Some(n),
                    p: Some(p),
                    rho_or_r: Some(sizes.column),
                    r_used: Some(sizes.used),
                    analytic_value: Some(expected_dominating_cliques(n, sizes.used, p)?),
                    ..Row::default()
                });
                rows.push(Row {
                    quantity: "expected_maximal",
                    n: Some(n),
                    p: Some(p),
                    rho_or_r: Some(sizes.column),
                    r_used: Some(sizes.used),
                    analytic_value: Some(expected_maximal_cliques(n, sizes.used, p)?),
                    ..Row::default()
                });
                rows.push(Row {
                    quantity: "ratio_analytic",
                    n: Some(n),
                    p: Some(p),
                    rho_or_r: Some(sizes.column),
                    r_used: Some(sizes.used),
                    analytic_value: Some(ratio_analytic(n, sizes.exact, p)?),
                    ..Row::default()
                });
            }
        }
    }
    table::emit(&rows, args.out.as_deref())?;
    Ok(())
}

pub fn exact(args: &PointArgs) -> Result<(), CliError> {
    let ns = require_n_grid(args)?;
    let ps = p_grid(args)?;
    let selector = RSelector::require(args)?;
    let mut rows = Vec::new();
    let mut mismatch: Option<String> = None;
    for &n in &ns {
        let tally = ExhaustiveTally::new(n as usize)?;
        for &p in &ps {
            let sizes = selector.resolve(n, p)?;
            let r = sizes.used;
            let pairs = [
                ("exact_dominating_expectation", tally.expected_dominating(r as usize, p)?, {
                    expected_dominating_cliques(n, r, p)?
                }),
                ("exact_maximal_expectation", tally.expected_maximal(r as usize, p)?, {
                    expected_maximal_cliques(n, r, p)?
                }),
            ];
            for (quantity, oracle, formula) in pairs {
                let row = Row {
                    quantity,
                    n: Some(n),
                    p: Some(p),
                    rho_or_r: Some(sizes.column),
                    r_used: Some(r),
                    analytic_value: Some(formula),
                    empirical_point: Some(oracle),
                    ..Row::default()
                }
                .with_gaps();
                let bad = if formula == 0.0 {
                    oracle.abs() > 1e-12
                } else {
                    row.rel_gap.is_some_and(|g| g > 1e-9)
                };
                if bad && mismatch.is_none() {
                    mismatch = Some(format!(
                        "{quantity} at n={n} r={r} p={p}: oracle {oracle} vs formula {formula}"
                    ));
                }
                rows.push(row);
            }
        }
    }
    // the table is still written: the mismatch exit code gates pipelines,
    // and the offending row is the evidence
    table::emit(&rows, args.out.as_deref())?;
    match mismatch {
        Some(msg) => Err(CliError::OracleMismatch(msg)),
        None => Ok(()),
    }
}

pub fn simulate(args: &PointArgs) -> Result<(), CliError> {
    let n = single_n(args)?;
    let p = single_p(args)?;
    let selector = RSelector::require(args)?;
    let workers = resolve_workers(args.workers)?;
    let rows = point_rows(n, p, &selector, args.trials, args.seed, workers)?;
    table::emit(&rows, args.out.as_deref())?;
    Ok(())
}

pub fn sweep(args: &PointArgs) -> Result<(), CliError> {
    let ns = require_n_grid(args)?;
    let ps = p_grid(args)?;
    let selector = RSelector::require(args)?;
    let workers = resolve_workers(args.workers)?;
    let mut rows = Vec::new();
    for &p in &ps {
        for &n in &ns {
            rows.extend(point_rows(n, p, &selector, args.trials, args.seed, workers)?);
        }
    }
    table::emit(&rows, args.out.as_deref())?;
    Ok(())
}

/// Runs one Monte Carlo point and renders it as three rows: existence
/// probability, mean dominating-clique count, and the mean dominating/maximal
/// ratio against its analytic limit.
fn point_rows(
    n: u64,
    p: f64,
    selector: &RSelector,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<Row>, CliError> {
    let sizes = selector.resolve(n, p)?;
    let r = sizes.used;
    let started = Instant::now();
    let agg = run_trials_with_workers(n as usize, p, r as usize, trials, seed, workers)?;
    eprintln!(
        "n={n} p={p} r={r}: {trials} trials across {workers} worker(s) in {:.1?}",
        started.elapsed()
    );

    let base = |quantity| Row {
        quantity,
        n: Some(n),
        p: Some(p),
        rho_or_r: Some(sizes.column),
        r_used: Some(r),
        trials: Some(trials),
        seed: Some(seed),
        ..Row::default()
    };
    let mut rows = Vec::new();

    let existence = estimate_existence_probability(&agg);
    rows.push(Row {
        empirical_point: Some(existence.point),
        ci_low: Some(existence.ci_low),
        ci_high: Some(existence.ci_high),
        ..base("existence_probability")
    });

    let mean = agg.mean_x();
    let se = agg.mean_x_standard_error();
    rows.push(
        Row {
            analytic_value: Some(expected_dominating_cliques(n, r, p)?),
            empirical_point: Some(mean),
            ci_low: se.is_finite().then(|| mean - Z95 * se),
            ci_high: se.is_finite().then(|| mean + Z95 * se),
            ..base("mean_dominating_count")
        }
        .with_gaps(),
    );

    let ratio_limit = ratio_analytic(n, sizes.exact, p)?;
    let ratio_base = Row {
        analytic_value: Some(ratio_limit),
        excluded_trials: Some(agg.excluded_trials()),
        ..base("mean_ratio")
    };
    match estimate_mean_ratio(&agg) {
        Ok(est) => rows.push(
            Row {
                empirical_point: Some(est.point),
                ci_low: Some(est.ci_low),
                ci_high: Some(est.ci_high),
                ..ratio_base
            }
            .with_gaps(),
        ),
        // every trial lacked a maximal r-clique: report the analytic limit
        // with empty empirical cells rather than failing the whole sweep
        Err(domclique::Error::UndefinedEstimate(_)) => rows.push(ratio_base),
        Err(e) => return Err(e.into()),
    }
    Ok(rows)
}

pub fn figure(args: &FigureArgs) -> Result<(), CliError> {
    let mut rows = Vec::new();
    match args.name {
        FigureName::Alpha => {
            for i in 1..=99u32 {
                let p = f64::from(i) / 100.0;
                rows.push(Row {
                    quantity: "alpha",
                    p: Some(p),
                    analytic_value: Some(alpha(p)?),
                    ..Row::default()
                });
            }
        }
        FigureName::Ratio => {
            let p = 0.45;
            let rho_hat = AnalyticContext::new(p)?.rho_hat;
            for rho in [1.9, rho_hat, 1.05] {
                let mut n: u64 = 100;
                while n <= 10_000_000 {
                    let exact = r_from_rho(n, rho, p)?;
                    rows.push(Row {
                        quantity: "ratio_analytic",
                        n: Some(n),
                        p: Some(p),
                        rho_or_r: Some(rho),
                        analytic_value: Some(ratio_analytic(n, exact, p)?),
                        ..Row::default()
                    });
                    n *= 10;
                }
            }
        }
    }
    table::emit(&rows, args.out.as_deref())?;
    Ok(())
}
