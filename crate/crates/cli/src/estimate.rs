//! Estimator reports as CSV and aligned text.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;
use voterlab_core::stats::{EstimatorReport, ModelReport, StatisticTable};

#[derive(Debug, Serialize)]
struct EstimateRow<'a> {
    model_name: &'a str,
    p: f64,
    q: f64,
    convention: &'static str,
    statistic: &'static str,
    exponent: &'static str,
    estimator: &'static str,
    #[serde(rename = "L")]
    l: Option<usize>,
    #[serde(rename = "L2")]
    l2: Option<usize>,
    n: usize,
    mean: Option<f64>,
    mean_se: Option<f64>,
    estimate: Option<f64>,
    estimate_se: Option<f64>,
    intercept: Option<f64>,
}

/// One row per estimate. `hat` rows carry a delta-method standard error,
/// which is a diagnostic rather than part of the standard table.
pub fn write_report_csv<W: Write>(out: W, report: &EstimatorReport) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for m in &report.models {
        let base = |t: &StatisticTable, estimator| EstimateRow {
            model_name: &m.model_name,
            p: m.p,
            q: m.q,
            convention: m.convention.as_str(),
            statistic: t.statistic.column(),
            exponent: t.statistic.exponent(),
            estimator,
            l: None,
            l2: None,
            n: 0,
            mean: None,
            mean_se: None,
            estimate: None,
            estimate_se: None,
            intercept: None,
        };
        for t in &m.tables {
            for s in &t.per_size {
                w.serialize(EstimateRow {
                    l: Some(s.l),
                    n: s.n,
                    mean: Some(s.mean),
                    mean_se: Some(s.std_error),
                    estimate: s.tilde,
                    ..base(t, "tilde")
                })?;
            }
            for h in &t.hats {
                w.serialize(EstimateRow {
                    l: Some(h.l),
                    l2: Some(2 * h.l),
                    estimate: Some(h.hat),
                    estimate_se: Some(h.std_error),
                    ..base(t, "hat")
                })?;
            }
            if let Some(fit) = &t.ols {
                w.serialize(EstimateRow {
                    n: fit.n,
                    estimate: Some(fit.slope),
                    estimate_se: Some(fit.slope_se),
                    intercept: Some(fit.intercept),
                    ..base(t, "ols")
                })?;
            }
        }
        for &(l, frac) in &m.cuts_fraction {
            w.serialize(EstimateRow {
                model_name: &m.model_name,
                p: m.p,
                q: m.q,
                convention: m.convention.as_str(),
                statistic: "cuts_largest",
                exponent: "",
                estimator: "proportion",
                l: Some(l),
                l2: None,
                n: 0,
                mean: None,
                mean_se: None,
                estimate: Some(frac),
                estimate_se: None,
                intercept: None,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

fn model_text(out: &mut String, m: &ModelReport) {
    let _ = writeln!(
        out,
        "{} (p = {}, q = {}), {} convention",
        m.model_name,
        m.p,
        m.q,
        m.convention.as_str()
    );
    for t in &m.tables {
        if t.per_size.is_empty() {
            continue;
        }
        let _ = writeln!(
            out,
            "  {} ({})",
            t.statistic.column(),
            t.statistic.exponent()
        );
        let mut line = format!("    {:<10}", "L");
        for s in &t.per_size {
            let _ = write!(line, "{:>12}", s.l);
        }
        let _ = writeln!(out, "{line}");
        let mut cells = |label: &str, f: &dyn Fn(usize) -> Option<String>| {
            let mut line = format!("    {label:<10}");
            for k in 0..t.per_size.len() {
                let _ = write!(line, "{:>12}", f(k).unwrap_or_else(|| "-".into()));
            }
            let _ = writeln!(out, "{line}");
        };
        let num = |v: f64| format!("{v:.4}");
        cells("n", &|k| Some(t.per_size[k].n.to_string()));
        cells("mean", &|k| Some(num(t.per_size[k].mean)));
        cells("tilde", &|k| t.per_size[k].tilde.map(num));
        cells("hat", &|k| t.hat_at(t.per_size[k].l).map(|h| num(h.hat)));
        cells("hat se*", &|k| {
            t.hat_at(t.per_size[k].l).map(|h| num(h.std_error))
        });
        match &t.ols {
            Some(fit) => {
                let r = fit.residual_quantiles;
                let _ = writeln!(
                    out,
                    "    ols slope {:.4} (se {:.4}), intercept {:.4}, n {}",
                    fit.slope, fit.slope_se, fit.intercept, fit.n
                );
                let _ = writeln!(
                    out,
                    "    residuals min {:.4} q1 {:.4} median {:.4} q3 {:.4} max {:.4}",
                    r[0], r[1], r[2], r[3], r[4]
                );
            }
            None => {
                let _ = writeln!(out, "    ols -");
            }
        }
        if t.ols_excluded > 0 {
            let _ = writeln!(
                out,
                "    ({} non-positive samples left out of the fit)",
                t.ols_excluded
            );
        }
    }
    if !m.cuts_fraction.is_empty() {
        let mut line = format!("  {:<12}", "cuts largest");
        for (l, f) in &m.cuts_fraction {
            let _ = write!(line, "  L={l}: {f:.4}");
        }
        let _ = writeln!(out, "{line}");
    }
}

pub fn report_text(report: &EstimatorReport) -> String {
    let mut out = String::new();
    if report.models.is_empty() {
        out.push_str("no successful runs\n");
        return out;
    }
    for m in &report.models {
        model_text(&mut out, m);
        out.push('\n');
    }
    out.push_str("* delta-method standard error of hat, a diagnostic outside the usual table\n");
    out
}
