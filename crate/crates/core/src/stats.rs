//! Scaling-exponent estimators.
//!
//! For a statistic with mean `H(L) ~ L^d`:
//!
//! * tilde: `log(mean at L) / log(L)`
//! * hat: `log2(mean at 2L / mean at L)`
//! * OLS: slope of `log(value)` on `log(L)` over individual samples.
//!
//! Under the appendix convention, a nominal size `L` is simulated on a box of
//! side `L + 2` while all formulas keep using `L`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Exact,
    Appendix,
}

impl Convention {
    /// Side of the simulated box for nominal size `l`.
    pub fn box_side(self, l: usize) -> usize {
        match self {
            Convention::Exact => l,
            Convention::Appendix => l + 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Exact => "exact",
            Convention::Appendix => "appendix",
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Convention::Exact),
            "appendix" => Ok(Convention::Appendix),
            other => Err(Error::Domain(format!("unknown convention {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Runaway,
}

/// One replicate's observables. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_id: u64,
    pub model_name: String,
    pub p: f64,
    pub q: f64,
    #[serde(rename = "L")]
    pub l: usize,
    pub convention: Convention,
    pub replicate: u64,
    pub seed: u64,
    pub status: RunStatus,
    pub interface_length: Option<u64>,
    pub displacement_max: Option<f64>,
    pub class_origin_size: Option<u64>,
    pub class_max_size: Option<u64>,
    pub conn_origin_size: Option<u64>,
    pub conn_max_size: Option<u64>,
    pub cuts_largest: Option<u8>,
    pub events: u64,
    pub elapsed_ms: u64,
}

pub const CSV_COLUMNS: [&str; 18] = [
    "run_id",
    "model_name",
    "p",
    "q",
    "L",
    "convention",
    "replicate",
    "seed",
    "status",
    "interface_length",
    "displacement_max",
    "class_origin_size",
    "class_max_size",
    "conn_origin_size",
    "conn_max_size",
    "cuts_largest",
    "events",
    "elapsed_ms",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistic {
    InterfaceLength,
    DisplacementMax,
    ClassOrigin,
    ClassMax,
    ConnOrigin,
    ConnMax,
}

impl Statistic {
    pub const ALL: [Statistic; 6] = [
        Statistic::InterfaceLength,
        Statistic::ClassOrigin,
        Statistic::ClassMax,
        Statistic::ConnOrigin,
        Statistic::ConnMax,
        Statistic::DisplacementMax,
    ];

    pub fn column(self) -> &'static str {
        match self {
            Statistic::InterfaceLength => "interface_length",
            Statistic::DisplacementMax => "displacement_max",
            Statistic::ClassOrigin => "class_origin_size",
            Statistic::ClassMax => "class_max_size",
            Statistic::ConnOrigin => "conn_origin_size",
            Statistic::ConnMax => "conn_max_size",
        }
    }

    /// Conventional name of the exponent this statistic estimates.
    pub fn exponent(self) -> &'static str {
        match self {
            Statistic::InterfaceLength => "d",
            Statistic::DisplacementMax => "alpha",
            Statistic::ClassOrigin => "gamma",
            Statistic::ClassMax => "beta",
            Statistic::ConnOrigin => "gamma'",
            Statistic::ConnMax => "beta'",
        }
    }

    pub fn value(self, r: &RunRecord) -> Option<f64> {
        match self {
            Statistic::InterfaceLength => r.interface_length.map(|v| v as f64),
            Statistic::DisplacementMax => r.displacement_max,
            Statistic::ClassOrigin => r.class_origin_size.map(|v| v as f64),
            Statistic::ClassMax => r.class_max_size.map(|v| v as f64),
            Statistic::ConnOrigin => r.conn_origin_size.map(|v| v as f64),
            Statistic::ConnMax => r.conn_max_size.map(|v| v as f64),
        }
    }
}

pub fn tilde_exponent(mean: f64, l: usize) -> Result<f64> {
    if mean.is_nan() || mean <= 0.0 {
        return Err(Error::Domain(format!("mean {mean} must be positive")));
    }
    if l < 3 {
        return Err(Error::Domain(format!("L = {l} is below 3")));
    }
    Ok(mean.ln() / (l as f64).ln())
}

pub fn hat_exponent(mean_l: f64, mean_2l: f64) -> Result<f64> {
    if !(mean_l > 0.0 && mean_2l > 0.0) {
        return Err(Error::Domain(format!(
            "means {mean_l} and {mean_2l} must be positive"
        )));
    }
    Ok((mean_2l / mean_l).log2())
}

/// Delta-method standard error of [`hat_exponent`] from the standard errors
/// of the two means.
pub fn hat_standard_error(mean_l: f64, se_l: f64, mean_2l: f64, se_2l: f64) -> f64 {
    ((se_l / mean_l).powi(2) + (se_2l / mean_2l).powi(2)).sqrt() / std::f64::consts::LN_2
}

#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    pub intercept_se: f64,
    /// Residual standard error on `n - 2` degrees of freedom.
    pub residual_se: f64,
    pub n: usize,
    /// Min, first quartile, median, third quartile, max of the residuals.
    pub residual_quantiles: [f64; 5],
}

/// Least squares of `log(value)` on `log(L)`.
pub fn ols_loglog(points: &[(f64, f64)]) -> Result<OlsFit> {
    if points.len() < 3 {
        return Err(Error::Domain(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some((l, v)) = points.iter().find(|(l, v)| !(*l > 0.0 && *v > 0.0)) {
        return Err(Error::Domain(format!("point ({l}, {v}) is not positive")));
    }
    let xs: Vec<f64> = points.iter().map(|(l, _)| l.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, v)| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= f64::EPSILON * mx.abs().max(1.0) * n {
        return Err(Error::Rank("all L values coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;

    let mut residuals: Vec<f64> = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| y - (intercept + slope * x))
        .collect();
    // Residuals at the rounding level of the fitted logs are exact zeros.
    let scale = ys.iter().fold(1.0f64, |m, y| m.max(y.abs()));
    if residuals
        .iter()
        .all(|r| r.abs() <= 16.0 * f64::EPSILON * scale)
    {
        residuals.iter_mut().for_each(|r| *r = 0.0);
    }
    let rss: f64 = residuals.iter().map(|r| r * r).sum();
    let sigma2 = if points.len() > 2 {
        rss / (n - 2.0)
    } else {
        0.0
    };
    let slope_se = (sigma2 / sxx).sqrt();
    let intercept_se = (sigma2 * (1.0 / n + mx * mx / sxx)).sqrt();
    residuals.sort_by(f64::total_cmp);
    Ok(OlsFit {
        slope,
        intercept,
        slope_se,
        intercept_se,
        residual_se: sigma2.sqrt(),
        n: points.len(),
        residual_quantiles: [
            residuals[0],
            quantile(&residuals, 0.25),
            quantile(&residuals, 0.5),
            quantile(&residuals, 0.75),
            residuals[residuals.len() - 1],
        ],
    })
}

// Linear interpolation between order statistics (R's default type 7).
fn quantile(sorted: &[f64], prob: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * prob;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, PartialEq)]
pub struct SizeSummary {
    pub l: usize,
    pub n: usize,
    pub mean: f64,
    pub std_error: f64,
    pub tilde: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HatCell {
    /// Lower size of the `(L, 2L)` pair.
    pub l: usize,
    pub hat: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatisticTable {
    pub statistic: Statistic,
    pub per_size: Vec<SizeSummary>,
    /// One cell per `L` whose `2L` partner is present.
    pub hats: Vec<HatCell>,
    pub ols: Option<OlsFit>,
    /// Samples left out of the regression because their value was not positive.
    pub ols_excluded: usize,
}

impl StatisticTable {
    pub fn hat_at(&self, l: usize) -> Option<&HatCell> {
        self.hats.iter().find(|h| h.l == l)
    }

    pub fn summary_at(&self, l: usize) -> Option<&SizeSummary> {
        self.per_size.iter().find(|s| s.l == l)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelReport {
    pub model_name: String,
    pub p: f64,
    pub q: f64,
    pub convention: Convention,
    pub tables: Vec<StatisticTable>,
    /// Fraction of samples whose largest class is cut by the interface, per L.
    pub cuts_fraction: Vec<(usize, f64)>,
}

impl ModelReport {
    pub fn table(&self, stat: Statistic) -> Option<&StatisticTable> {
        self.tables.iter().find(|t| t.statistic == stat)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EstimatorReport {
    pub models: Vec<ModelReport>,
}

impl EstimatorReport {
    pub fn model(&self, name: &str) -> Option<&ModelReport> {
        self.models.iter().find(|m| m.model_name == name)
    }
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn table_for(stat: Statistic, records: &[&RunRecord]) -> StatisticTable {
    let mut by_size: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in records {
        if let Some(v) = stat.value(r) {
            by_size.entry(r.l).or_default().push(v);
        }
    }
    let per_size: Vec<SizeSummary> = by_size
        .iter()
        .map(|(&l, vals)| {
            let (mean, std_error) = mean_and_se(vals);
            SizeSummary {
                l,
                n: vals.len(),
                mean,
                std_error,
                tilde: tilde_exponent(mean, l).ok(),
            }
        })
        .collect();
    let hats = per_size
        .iter()
        .filter_map(|lo| {
            let hi = per_size.iter().find(|s| s.l == 2 * lo.l)?;
            let hat = hat_exponent(lo.mean, hi.mean).ok()?;
            Some(HatCell {
                l: lo.l,
                hat,
                std_error: hat_standard_error(lo.mean, lo.std_error, hi.mean, hi.std_error),
            })
        })
        .collect();
    let mut points = Vec::new();
    let mut ols_excluded = 0;
    for (&l, vals) in &by_size {
        for &v in vals {
            if v > 0.0 {
                points.push((l as f64, v));
            } else {
                ols_excluded += 1;
            }
        }
    }
    StatisticTable {
        statistic: stat,
        per_size,
        hats,
        ols: ols_loglog(&points).ok(),
        ols_excluded,
    }
}

/// Groups successful records by model and convention and fills every
/// estimator that the data supports.
pub fn summarize(records: &[RunRecord]) -> EstimatorReport {
    let mut groups: BTreeMap<(String, Convention), Vec<&RunRecord>> = BTreeMap::new();
    let mut order: Vec<(String, Convention)> = Vec::new();
    for r in records.iter().filter(|r| r.status == RunStatus::Ok) {
        let key = (r.model_name.clone(), r.convention);
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        groups.entry(key).or_default().push(r);
    }
    let models = order
        .into_iter()
        .map(|key| {
            let rows = &groups[&key];
            let mut cuts: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
            for r in rows {
                if let Some(c) = r.cuts_largest {
                    let e = cuts.entry(r.l).or_default();
                    e.0 += c as usize;
                    e.1 += 1;
                }
            }
            ModelReport {
                model_name: key.0.clone(),
                p: rows[0].p,
                q: rows[0].q,
                convention: key.1,
                tables: Statistic::ALL.iter().map(|s| table_for(*s, rows)).collect(),
                cuts_fraction: cuts
                    .into_iter()
                    .map(|(l, (hit, n))| (l, hit as f64 / n as f64))
                    .collect(),
            }
        })
        .collect();
    EstimatorReport { models }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn record(model: &str, l: usize, value: f64, rep: u64) -> RunRecord {
        RunRecord {
            run_id: rep,
            model_name: model.into(),
            p: 0.0,
            q: 0.0,
            l,
            convention: Convention::Exact,
            replicate: rep,
            seed: rep,
            status: RunStatus::Ok,
            interface_length: Some(value as u64),
            displacement_max: Some(value),
            class_origin_size: Some(value as u64),
            class_max_size: Some(value as u64),
            conn_origin_size: Some(value as u64),
            conn_max_size: Some(value as u64),
            cuts_largest: Some(1),
            events: 0,
            elapsed_ms: 0,
        }
    }

    #[test]
    fn tilde_examples() {
        let v = 100f64.powf(1.75);
        assert!((tilde_exponent(v, 100).unwrap() - 1.75).abs() < 1e-14);
        assert_eq!(tilde_exponent(1.0, 37).unwrap(), 0.0);
        assert!(tilde_exponent(0.0, 10).is_err());
        assert!(tilde_exponent(-1.0, 10).is_err());
    }

    #[test]
    fn hat_examples() {
        let h = hat_exponent(100.0, 100.0 * 2f64.powf(1.5)).unwrap();
        assert!((h - 1.5).abs() < 1e-14);
        assert_eq!(hat_exponent(7.0, 7.0).unwrap(), 0.0);
        assert!(hat_exponent(0.0, 1.0).is_err());
    }

    #[test]
    fn ols_exact_fit() {
        let fit = ols_loglog(&[(2.0, 4.0), (4.0, 16.0), (8.0, 64.0)]).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-14);
        assert!(fit.intercept.abs() < 1e-13);
        assert_eq!(fit.slope_se, 0.0);
    }

    #[test]
    fn ols_errors() {
        assert!(matches!(
            ols_loglog(&[(4.0, 1.0), (4.0, 2.0), (4.0, 3.0)]),
            Err(Error::Rank(_))
        ));
        assert!(ols_loglog(&[(2.0, 1.0), (4.0, 2.0)]).is_err());
        assert!(ols_loglog(&[(2.0, 1.0), (4.0, 0.0), (8.0, 2.0)]).is_err());
    }

    #[test]
    fn ols_matches_closed_form_se() {
        // y = 1 + 2x + e with residuals +-1 on x in {0,1,2,3} (in log space).
        let e = [1.0, -1.0, -1.0, 1.0];
        let pts: Vec<(f64, f64)> = (0..4)
            .map(|k| {
                let x = k as f64;
                (x.exp(), (1.0 + 2.0 * x + e[k]).exp())
            })
            .collect();
        let fit = ols_loglog(&pts).unwrap();
        // Sxx = 5, Sxy = 10, RSS = 4, sigma^2 = 2, se = sqrt(2/5).
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!((fit.slope_se - (0.4f64).sqrt()).abs() < 1e-12);
        assert!((fit.residual_se - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn summarize_empty_and_power_law() {
        assert_eq!(summarize(&[]), EstimatorReport::default());
        let mut recs = Vec::new();
        for l in [4usize, 8, 16, 32] {
            for rep in 0..3 {
                recs.push(record("sq", l, (l * l) as f64, rep));
            }
        }
        let rep = summarize(&recs);
        let t = rep
            .model("sq")
            .unwrap()
            .table(Statistic::InterfaceLength)
            .unwrap();
        for s in &t.per_size {
            assert!((s.tilde.unwrap() - 2.0).abs() < 1e-14);
        }
        assert_eq!(t.hats.len(), 3);
        for h in &t.hats {
            assert!((h.hat - 2.0).abs() < 1e-14);
            assert_eq!(h.std_error, 0.0);
        }
        let ols = t.ols.as_ref().unwrap();
        assert!((ols.slope - 2.0).abs() < 1e-13);
        assert_eq!(ols.slope_se, 0.0);
        assert!(t.hat_at(32).is_none());
        assert_eq!(
            rep.model("sq").unwrap().cuts_fraction,
            vec![(4, 1.0), (8, 1.0), (16, 1.0), (32, 1.0)]
        );
    }

    #[test]
    fn runaway_rows_are_skipped() {
        let mut r = record("m", 8, 5.0, 0);
        r.status = RunStatus::Runaway;
        assert!(summarize(&[r]).models.is_empty());
    }
}
