//! CSV assembly. Rows are buffered and written in one shot, so a failing run
//! never leaves partial output behind.

use std::fmt::Write as _;
use std::path::Path;

pub const HEADER: &str = "quantity,n,p,rho_or_r,r_used,analytic_value,empirical_point,\
    ci_low,ci_high,abs_gap,rel_gap,trials,excluded_trials,seed,phase";

/// One output record; unset fields print as empty cells. The same schema
/// serves analytic and empirical commands.
#[derive(Default)]
pub struct Row {
    pub quantity: &'static str,
    pub n: Option<u64>,
    pub p: Option<f64>,
    pub rho_or_r: Option<f64>,
    pub r_used: Option<u64>,
    pub analytic_value: Option<f64>,
    pub empirical_point: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub abs_gap: Option<f64>,
    pub rel_gap: Option<f64>,
    pub trials: Option<u64>,
    pub excluded_trials: Option<u64>,
    pub seed: Option<u64>,
    pub phase: Option<&'static str>,
}

impl Row {
    /// Fills the gap columns from the analytic/empirical pair when both are
    /// present; the relative gap stays empty when the analytic value is 0.
    pub fn with_gaps(mut self) -> Self {
        if let (Some(a), Some(e)) = (self.analytic_value, self.empirical_point) {
            let abs = (e - a).abs();
            self.abs_gap = Some(abs);
            if a != 0.0 {
                self.rel_gap = Some(abs / a.abs());
            }
        }
        self
    }
}

// full round-trip precision, shortest representation
fn float(x: f64) -> String {
    format!("{x:?}")
}

fn cell_u64(v: Option<u64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn cell_f64(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

pub fn render(rows: &[Row]) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.quantity,
            cell_u64(r.n),
            cell_f64(r.p),
            cell_f64(r.rho_or_r),
            cell_u64(r.r_used),
            cell_f64(r.analytic_value),
            cell_f64(r.empirical_point),
            cell_f64(r.ci_low),
            cell_f64(r.ci_high),
            cell_f64(r.abs_gap),
            cell_f64(r.rel_gap),
            cell_u64(r.trials),
            cell_u64(r.excluded_trials),
            cell_u64(r.seed),
            r.phase.unwrap_or(""),
        );
    }
    out
}

/// Writes the finished table to the chosen sink in a single call.
pub fn emit(rows: &[Row], out: Option<&Path>) -> std::io::Result<()> {
    let body = render(rows);
    match out {
        Some(path) => std::fs::write(path, body),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(body.as_bytes())
        }
    }
}
