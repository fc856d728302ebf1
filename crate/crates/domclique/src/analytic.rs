//! Closed-form and asymptotic quantities for dominating cliques in G(n,p),
//! evaluated in log space.
//!
//! Conventions used throughout: q = 1−p, b = 1/p, and α = ln(1−p)/ln(p), the
//! exchange rate satisfying (1−p)^r = p^(r·α). Binomial coefficients go
//! through log-gamma; brackets of the form 1−x near x=0 go through ln_1p.
//! Expectations of counts are returned as natural logs, with −∞ the honest
//! value when the count's expectation is exactly zero (r = 1).

use crate::error::{Error, Result};
use statrs::function::gamma::ln_gamma;

/// p at or below which dominating cliques almost surely do not exist:
/// the root of (1−p)² = p, namely (3−√5)/2 ≈ 0.38197.
pub fn lower_phase_boundary() -> f64 {
    (3.0 - 5.0_f64.sqrt()) / 2.0
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("p = {p} outside the open interval (0, 1)")));
    }
    Ok(())
}

/// ln C(n, r) via log-gamma.
fn ln_binomial(n: u64, r: u64) -> f64 {
    debug_assert!(r <= n);
    ln_gamma(n as f64 + 1.0) - ln_gamma(r as f64 + 1.0) - ln_gamma((n - r) as f64 + 1.0)
}

/// log Σ exp(terms), with the terms summed largest-first.
fn logsumexp(terms: &mut Vec<f64>) -> f64 {
    terms.sort_by(|a, b| b.partial_cmp(a).expect("log terms must not be NaN"));
    let Some(&top) = terms.first() else { return f64::NEG_INFINITY };
    if top == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln()
}

// ---- parameter bundle -------------------------------------------------------

/// Every constant derived from p alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticContext {
    pub p: f64,
    /// Logarithm base 1/p is the natural scale for clique sizes.
    pub b: f64,
    /// ln(1−p)/ln(p); governs the sign of 1 − ρα.
    pub alpha: f64,
    /// min{2/3, 2α}: exponent in the relative-variance bound.
    pub beta: f64,
    /// min{1, α}.
    pub nu: f64,
    /// 2 − ln(p)/ln(1−p) = 2 − 1/α.
    pub epsilon_hat: f64,
    /// 1/α: the critical clique-size exponent ρ̂.
    pub rho_hat: f64,
}

impl AnalyticContext {
    pub fn new(p: f64) -> Result<Self> {
        check_p(p)?;
        let a = alpha(p)?;
        Ok(AnalyticContext {
            p,
            b: 1.0 / p,
            alpha: a,
            beta: (2.0 * a).min(2.0 / 3.0),
            nu: a.min(1.0),
            epsilon_hat: 2.0 - 1.0 / a,
            rho_hat: 1.0 / a,
        })
    }
}

/// Which side of the critical exponent ρ̂ a given ρ falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalSide {
    /// ρ > ρ̂: the ratio tends to 1.
    DominatingSide,
    /// ρ < ρ̂: the ratio tends to 0.
    NotDominatingSide,
    /// ρ = ρ̂ exactly: the e⁻¹ point.
    AtThreshold,
}

/// Outcome of the three-way phase classification in p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseClass {
    /// p > 1/2: a dominating clique exists almost surely.
    AlmostSurelyDominating,
    /// p ≤ (3−√5)/2: almost surely none exists.
    AlmostSurelyNotDominating,
    /// (3−√5)/2 < p ≤ 1/2: threshold behavior at clique sizes ρ̂·log_b n.
    Critical { rho_hat: f64, side: CriticalSide },
}

// ---- basic exponents ---------------------------------------------------------

/// α(p) = ln(1−p)/ln(p), both logs negative so the value is positive.
pub fn alpha(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok((-p).ln_1p() / p.ln())
}

/// ε̂(p) = 2 − ln(p)/ln(1−p).
pub fn epsilon_hat(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(2.0 - p.ln() / (-p).ln_1p())
}

fn log_base_b(x: f64, ln_b: f64) -> f64 {
    x.ln() / ln_b
}

fn check_window_args(n: u64, p: f64) -> Result<f64> {
    check_p(p)?;
    if n < 3 {
        return Err(Error::domain(format!("n = {n} below the minimum of 3")));
    }
    let ln_b = -p.ln();
    let lbn = log_base_b(n as f64, ln_b);
    if lbn <= 1.0 {
        return Err(Error::domain(format!(
            "log base 1/p of n must exceed 1 (n = {n}, p = {p} gives {lbn})"
        )));
    }
    Ok(ln_b)
}

/// Lower end of the clique-number window:
/// log_b n − 2·log_b log_b n + log_b 2 + log_b log_b e, with b = 1/p.
pub fn r0(n: u64, p: f64) -> Result<f64> {
    let ln_b = check_window_args(n, p)?;
    let lbn = log_base_b(n as f64, ln_b);
    // log_b log_b e = −ln(ln b)/ln b
    Ok(lbn - 2.0 * (lbn.ln() / ln_b) + 2.0_f64.ln() / ln_b - ln_b.ln() / ln_b)
}

/// Upper end of the clique-number window:
/// 2·log_b n − 2·log_b log_b n + 2·log_b e + 1 − 2·log_b 2.
pub fn r1(n: u64, p: f64) -> Result<f64> {
    let ln_b = check_window_args(n, p)?;
    let lbn = log_base_b(n as f64, ln_b);
    Ok(2.0 * lbn - 2.0 * (lbn.ln() / ln_b) + 2.0 / ln_b + 1.0 - 2.0 * (2.0_f64.ln() / ln_b))
}

// ---- expectations of counts -----------------------------------------------

fn check_count_args(n: u64, r: u64, p: f64) -> Result<()> {
    check_p(p)?;
    if r < 1 || r > n {
        return Err(Error::domain(format!("r = {r} outside 1..={n}")));
    }
    Ok(())
}

/// ln E[number of dominating r-cliques] =
/// ln C(n,r) + C(r,2)·ln p + (n−r)·ln(1 − p^r − (1−p)^r).
///
/// Exact for every finite n. Returns −∞ at r = 1 with n > 1, where the
/// per-node bracket is identically zero.
pub fn expected_dominating_cliques_log(n: u64, r: u64, p: f64) -> Result<f64> {
    check_count_args(n, r, p)?;
    let outside = (n - r) as f64;
    let head = ln_binomial(n, r) + (r * (r - 1) / 2) as f64 * p.ln();
    if n == r {
        return Ok(head);
    }
    let miss = p.powi(r as i32) + (1.0 - p).powi(r as i32);
    debug_assert!(r == 1 || miss < 1.0, "bracket must be positive for r >= 2");
    Ok(head + outside * (-miss).ln_1p())
}

/// Linear-space variant of [`expected_dominating_cliques_log`].
pub fn expected_dominating_cliques(n: u64, r: u64, p: f64) -> Result<f64> {
    Ok(expected_dominating_cliques_log(n, r, p)?.exp())
}

/// ln E[number of maximal r-cliques] =
/// ln C(n,r) + C(r,2)·ln p + (n−r)·ln(1 − p^r). Exact for every finite n.
pub fn expected_maximal_cliques_log(n: u64, r: u64, p: f64) -> Result<f64> {
    check_count_args(n, r, p)?;
    let head = ln_binomial(n, r) + (r * (r - 1) / 2) as f64 * p.ln();
    if n == r {
        return Ok(head);
    }
    Ok(head + (n - r) as f64 * (-p.powi(r as i32)).ln_1p())
}

/// Linear-space variant of [`expected_maximal_cliques_log`].
pub fn expected_maximal_cliques(n: u64, r: u64, p: f64) -> Result<f64> {
    Ok(expected_maximal_cliques_log(n, r, p)?.exp())
}

// ---- the dominating/maximal ratio ---------------------------------------------

/// Leading term of the dominating-to-maximal ratio:
/// exp(−n(1−p)^r / (1−p^r)), with real-valued r allowed.
///
/// Evaluated as exp(−exp(ln n + r·ln(1−p) − ln(1−p^r))) so that huge inner
/// exponents underflow to 0 and tiny ones round to 1 without overflow.
pub fn ratio_analytic(n: u64, r: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(r >= 1.0) {
        return Err(Error::domain(format!("r = {r} must be at least 1")));
    }
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    // ln(1−p^r) = ln(−expm1(r ln p))
    let one_minus_p_r = -(r * p.ln()).exp_m1();
    let inner_log = (n as f64).ln() + r * (-p).ln_1p() - one_minus_p_r.ln();
    Ok((-inner_log.exp()).exp())
}

/// r = ρ·log_b n, the clique size probed at exponent ρ.
pub fn r_from_rho(n: u64, rho: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(1.0..=2.0).contains(&rho) {
        return Err(Error::domain(format!("rho = {rho} outside [1, 2]")));
    }
    if n < 2 {
        return Err(Error::domain(format!("n = {n} below the minimum of 2")));
    }
    Ok(rho * (n as f64).ln() / -p.ln())
}

/// Three-way phase classification, with the side of ρ̂ that `rho` falls on.
pub fn classify_phase(p: f64, rho: f64) -> Result<PhaseClass> {
    check_p(p)?;
    if !(1.0..=2.0).contains(&rho) {
        return Err(Error::domain(format!("rho = {rho} outside [1, 2]")));
    }
    if p > 0.5 {
        return Ok(PhaseClass::AlmostSurelyDominating);
    }
    if p <= lower_phase_boundary() {
        return Ok(PhaseClass::AlmostSurelyNotDominating);
    }
    let rho_hat = 1.0 / alpha(p)?;
    let side = if rho > rho_hat {
        CriticalSide::DominatingSide
    } else if rho < rho_hat {
        CriticalSide::NotDominatingSide
    } else {
        CriticalSide::AtThreshold
    };
    Ok(PhaseClass::Critical { rho_hat, side })
}

/// The threshold clique size in the critical band: ln n / ln(1/(1−p)),
/// which equals ρ̂·log_b n.
pub fn critical_r(n: u64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(p > lower_phase_boundary() && p <= 0.5) {
        return Err(Error::domain(format!(
            "p = {p} outside the critical band ((3−√5)/2, 1/2]"
        )));
    }
    if n < 2 {
        return Err(Error::domain(format!("n = {n} below the minimum of 2")));
    }
    Ok((n as f64).ln() / -(-p).ln_1p())
}

/// How the threshold clique size is shifted away from ρ̂·log_b n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffsetKind {
    /// r = critical + δ(n): the ratio's limit rises toward 1 with δ.
    PlusDelta,
    /// r = critical − δ(n): the limit falls toward 0.
    MinusDelta,
    /// r = critical + λ for a constant λ (any sign).
    ConstantLambda,
}

/// Limit of the ratio when r sits a fixed offset from the critical size:
/// exp(−(1−p)^offset) for PlusDelta/ConstantLambda, exp(−(1−p)^(−offset))
/// for MinusDelta. Offset 0 gives e⁻¹ in every case.
pub fn ratio_offset_asymptote(p: f64, offset: f64, kind: OffsetKind) -> Result<f64> {
    check_p(p)?;
    let exponent = match kind {
        OffsetKind::PlusDelta | OffsetKind::MinusDelta if offset < 0.0 => {
            return Err(Error::domain(format!("offset = {offset} must be nonnegative")));
        }
        OffsetKind::PlusDelta | OffsetKind::ConstantLambda => offset,
        OffsetKind::MinusDelta => -offset,
    };
    Ok((-(1.0 - p).powf(exponent)).exp())
}

/// Shape of the relative-variance bound, (ln n)³ / n^β. The hidden constant
/// is unknown, so consumers compare values across n rather than absolutely.
pub fn variance_bound_factor(n: u64, p: f64) -> Result<f64> {
    check_p(p)?;
    if n < 3 {
        return Err(Error::domain(format!("n = {n} below the minimum of 3")));
    }
    let ctx = AnalyticContext::new(p)?;
    let ln_n = (n as f64).ln();
    Ok(ln_n.powi(3) / (n as f64).powf(ctx.beta))
}

// ---- second-moment machinery ---------------------------------------------------

/// Q(p,r,j) = (1 − p^r − (1−p)^r)^(−2r+2j); exactly 1 at j = r.
pub fn q_factor(n: u64, r: u64, j: u64, p: f64) -> Result<f64> {
    check_p(p)?;
    if r < 2 || r > n {
        return Err(Error::domain(format!("r = {r} outside 2..={n}")));
    }
    if j > r {
        return Err(Error::domain(format!("j = {j} exceeds r = {r}")));
    }
    if j == r {
        return Ok(1.0);
    }
    let miss = p.powi(r as i32) + (1.0 - p).powi(r as i32);
    if miss >= 1.0 {
        return Err(Error::domain("bracket 1 − p^r − (1−p)^r is not positive"));
    }
    let ln_bracket = (-miss).ln_1p();
    Ok(((2.0 * j as f64 - 2.0 * r as f64) * ln_bracket).exp())
}

fn ln_s_term(n: u64, r: u64, j: u64, p: f64) -> f64 {
    -ln_binomial(n, r) + ln_binomial(r, j) + ln_binomial(n - r, r - j)
        + (j * j.saturating_sub(1) / 2) as f64 * -p.ln()
}

/// S(n,r,c,d) = Σ_{j=c}^{d} C(n,r)⁻¹ C(r,j) C(n−r,r−j) b^C(j,2), b = 1/p.
pub fn s_sum(n: u64, r: u64, c: u64, d: u64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(c <= d && d <= r && 2 * r <= n) {
        return Err(Error::domain(format!(
            "need c ≤ d ≤ r ≤ n/2, got c={c} d={d} r={r} n={n}"
        )));
    }
    let mut terms: Vec<f64> = (c..=d).map(|j| ln_s_term(n, r, j, p)).collect();
    Ok(logsumexp(&mut terms).exp())
}

/// ln of the second-moment upper bound:
/// 2·ln E(X_r) + ln Σ_j C(n,r)⁻¹ C(r,j) C(n−r,r−j) p^(−C(j,2)) Q(p,r,j).
pub fn second_moment_upper_log(n: u64, r: u64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(r >= 2 && 2 * r <= n) {
        return Err(Error::domain(format!("need 2 ≤ r ≤ n/2, got r={r} n={n}")));
    }
    let miss = p.powi(r as i32) + (1.0 - p).powi(r as i32);
    if miss >= 1.0 {
        return Err(Error::domain("bracket 1 − p^r − (1−p)^r is not positive"));
    }
    let ln_bracket = (-miss).ln_1p();
    let mut terms: Vec<f64> = (0..=r)
        .map(|j| ln_s_term(n, r, j, p) + (2.0 * j as f64 - 2.0 * r as f64) * ln_bracket)
        .collect();
    let ln_sum = logsumexp(&mut terms);
    Ok(2.0 * expected_dominating_cliques_log(n, r, p)? + ln_sum)
}

// ---- asymptotic side conditions ---------------------------------------------

/// r·ln(n·e·p^((r−1)/2) / r): Stirling form of ln [C(n,r) p^C(r,2)].
pub fn stirling_clique_term_log(n: u64, r: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(r >= 1.0 && r <= n as f64) {
        return Err(Error::domain(format!("r = {r} outside [1, {n}]")));
    }
    Ok(r * ((n as f64).ln() + 1.0 + (r - 1.0) / 2.0 * p.ln() - r.ln()))
}

/// (1−p^k)^n − exp(−n·p^k): the error of the Poissonization step. Callers
/// compare |error| against n·p^(2k)·exp(−n·p^k) times a small constant.
pub fn poissonization_error(n: u64, k: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    let p_k = (k * p.ln()).exp();
    if p_k >= 1.0 {
        return Err(Error::domain(format!("p^k must be below 1, got {p_k}")));
    }
    let lhs = ((n as f64) * (-p_k).ln_1p()).exp();
    let rhs = (-(n as f64) * p_k).exp();
    Ok(lhs - rhs)
}
