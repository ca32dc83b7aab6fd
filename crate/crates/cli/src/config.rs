//! Experiment configuration: a flat TOML file, overridden by flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use voterlab_core::stats::Convention;
use voterlab_core::ModelParams;

use crate::error::{CliError, CliResult};
use crate::seed::{MAX_MODELS, MAX_REPLICATES, MAX_SIDE};

#[derive(Debug, Clone, PartialEq)]
pub struct NamedModel {
    pub name: String,
    pub params: ModelParams,
}

impl NamedModel {
    /// Accepts `voter`, `cow`, `harmonic`, `percolation` or `name:p:q`.
    pub fn parse(spec: &str) -> CliResult<Self> {
        let spec = spec.trim();
        let params = match spec {
            "voter" => Some(ModelParams::VOTER),
            "cow" => Some(ModelParams::COW),
            "harmonic" => Some(ModelParams::HARMONIC),
            "percolation" => Some(ModelParams::PERCOLATION),
            _ => None,
        };
        if let Some(params) = params {
            return Ok(NamedModel {
                name: spec.to_string(),
                params,
            });
        }
        let parts: Vec<&str> = spec.split(':').collect();
        let bad = || {
            CliError::Config(format!(
                "bad model {spec:?}; expected a known name or name:p:q"
            ))
        };
        if parts.len() != 3 || parts[0].is_empty() {
            return Err(bad());
        }
        let p: f64 = parts[1].parse().map_err(|_| bad())?;
        let q: f64 = parts[2].parse().map_err(|_| bad())?;
        Ok(NamedModel {
            name: parts[0].to_string(),
            params: ModelParams::new(p, q)?,
        })
    }
}

/// Keys accepted in a config file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub models: Option<Vec<String>>,
    #[serde(rename = "L")]
    pub l: Option<Vec<usize>>,
    pub m: Option<u64>,
    pub seed: Option<u64>,
    pub convention: Option<String>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub top_k: Option<usize>,
    pub event_cap: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Flag values win over file values.
    pub fn overlay(self, flags: FileConfig) -> FileConfig {
        FileConfig {
            models: flags.models.or(self.models),
            l: flags.l.or(self.l),
            m: flags.m.or(self.m),
            seed: flags.seed.or(self.seed),
            convention: flags.convention.or(self.convention),
            threads: flags.threads.or(self.threads),
            out: flags.out.or(self.out),
            top_k: flags.top_k.or(self.top_k),
            event_cap: flags.event_cap.or(self.event_cap),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub models: Vec<NamedModel>,
    pub l_list: Vec<usize>,
    pub m: u64,
    pub master_seed: u64,
    pub convention: Convention,
    /// `None` lets the pool pick one worker per core.
    pub threads: Option<usize>,
    pub out: PathBuf,
    pub top_k: usize,
    pub event_cap: u64,
    /// Record wall-clock time per replicate. Off by default so output files
    /// stay byte-identical between runs.
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn from_file_config(fc: FileConfig) -> CliResult<Self> {
        let models = fc
            .models
            .unwrap_or_else(|| vec!["voter".to_string()])
            .iter()
            .map(|s| NamedModel::parse(s))
            .collect::<CliResult<Vec<_>>>()?;
        let convention = match fc.convention.as_deref() {
            None => Convention::Appendix,
            Some(s) => s.parse().map_err(|_| {
                CliError::Config(format!("convention must be exact or appendix, got {s:?}"))
            })?,
        };
        let cfg = ExperimentConfig {
            models,
            l_list: fc
                .l
                .ok_or_else(|| CliError::Config("no L values given".into()))?,
            m: fc.m.unwrap_or(100),
            master_seed: fc.seed.unwrap_or(0),
            convention,
            threads: fc.threads,
            out: fc.out.unwrap_or_else(|| PathBuf::from("runs.csv")),
            top_k: fc.top_k.unwrap_or(5),
            event_cap: fc
                .event_cap
                .unwrap_or(voterlab_core::engine::DEFAULT_EVENT_CAP),
            timing: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        let err = |msg: String| Err(CliError::Config(msg));
        if self.models.is_empty() {
            return err("no models given".into());
        }
        if self.models.len() > MAX_MODELS {
            return err(format!("at most {MAX_MODELS} models per run"));
        }
        for (k, a) in self.models.iter().enumerate() {
            if self.models[..k].iter().any(|b| b.name == a.name) {
                return err(format!("model name {:?} appears twice", a.name));
            }
        }
        if self.l_list.is_empty() {
            return err("no L values given".into());
        }
        for &l in &self.l_list {
            if l < 3 || self.convention.box_side(l) >= MAX_SIDE {
                return err(format!("L = {l} is outside [3, {MAX_SIDE})"));
            }
        }
        if self.m == 0 || self.m >= MAX_REPLICATES {
            return err(format!("m = {} is outside [1, 2^36)", self.m));
        }
        if self.threads == Some(0) {
            return err("threads must be at least 1".into());
        }
        if self.event_cap == 0 {
            return err("event_cap must be at least 1".into());
        }
        Ok(())
    }
}
