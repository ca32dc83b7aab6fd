//! Exact small-box values printed as CSV.

use std::fmt::Write as _;

use voterlab_core::oracle::{
    exact_stationary, expected_class_size_exact, harmonic_measure, joint_vote_cov_exact,
    pair_coalescence_prob,
};
use voterlab_core::{build_box, Site};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OracleKind {
    /// Exit probability onto the 1-arc for every site.
    Harmonic,
    /// Probability that the walks from x and y meet inside the box.
    Pair,
    /// Expected size of the coalescing class of x.
    Classsize,
    /// Full invariant law over all interior configurations.
    Stationary,
    /// Covariance of the votes at x and y.
    Cov,
}

/// Parses `i,j`.
pub fn parse_site(s: &str) -> Result<Site, String> {
    let (i, j) = s
        .split_once(',')
        .ok_or_else(|| format!("expected i,j but got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok(Site::new(parse(i)?, parse(j)?))
}

pub fn run_oracle(
    kind: OracleKind,
    l: usize,
    x: Option<Site>,
    y: Option<Site>,
) -> CliResult<String> {
    let g = build_box(l)?;
    let need = |s: Option<Site>, flag: &str| {
        s.ok_or_else(|| CliError::Config(format!("oracle {kind:?} needs --{flag}").to_lowercase()))
    };
    let mut out = String::new();
    match kind {
        OracleKind::Harmonic => {
            let mut buf = Vec::new();
            harmonic_measure(&g)?
                .write_csv(&mut buf)
                .map_err(anyhow::Error::from)?;
            out = String::from_utf8(buf).map_err(anyhow::Error::from)?;
        }
        OracleKind::Pair => {
            let (x, y) = (need(x, "x")?, need(y, "y")?);
            let v = pair_coalescence_prob(&g, x, y)?;
            let _ = writeln!(out, "x,y,coalescence_prob\n\"{x}\",\"{y}\",{v}");
        }
        OracleKind::Classsize => {
            let x = x.unwrap_or_else(|| g.center());
            let v = expected_class_size_exact(&g, x)?;
            let _ = writeln!(out, "x,expected_class_size\n\"{x}\",{v}");
        }
        OracleKind::Cov => {
            let (x, y) = (need(x, "x")?, need(y, "y")?);
            let v = joint_vote_cov_exact(&g, x, y)?;
            let _ = writeln!(out, "x,y,covariance\n\"{x}\",\"{y}\",{v}");
        }
        OracleKind::Stationary => {
            let law = exact_stationary(&g)?;
            let sites: Vec<String> = law.sites().iter().map(|s| format!("\"{s}\"")).collect();
            let _ = writeln!(out, "{},probability", sites.join(","));
            for (mask, p) in law.probabilities().iter().enumerate() {
                for k in 0..sites.len() {
                    let _ = write!(out, "{},", mask >> k & 1);
                }
                let _ = writeln!(out, "{p}");
            }
        }
    }
    Ok(out)
}
