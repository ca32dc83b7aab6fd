//! Parallel replicate execution and the run table.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use anyhow::Context;
use rayon::prelude::*;
use voterlab_core::classes::class_report;
use voterlab_core::interface::{max_displacement, side_partition, trace_interface};
use voterlab_core::oracle::{harmonic_measure, HarmonicField};
use voterlab_core::stats::{RunRecord, RunStatus, CSV_COLUMNS};
use voterlab_core::{
    build_box, sample_with, Error, HatlessWalks, ModelParams, SampleOutcome, SamplerOptions,
};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::seed::mix_seed;

/// Harmonic fields for the box sides that need them, shared by all workers.
#[derive(Debug, Default, Clone)]
pub struct FieldCache {
    fields: HashMap<usize, Arc<HarmonicField>>,
}

impl FieldCache {
    pub fn get_or_solve(&mut self, side: usize) -> CliResult<Arc<HarmonicField>> {
        if let Some(f) = self.fields.get(&side) {
            return Ok(f.clone());
        }
        let field = Arc::new(harmonic_measure(&build_box(side)?)?);
        self.fields.insert(side, field.clone());
        Ok(field)
    }

    pub fn get(&self, side: usize) -> Option<Arc<HarmonicField>> {
        self.fields.get(&side).cloned()
    }
}

/// Sampler options used by every command, so that a `(model, box, seed)`
/// triple always produces the same sample.
pub fn sampler_options(
    params: ModelParams,
    field: Option<Arc<HarmonicField>>,
    event_cap: u64,
) -> SamplerOptions {
    let hatless = match field {
        Some(f) if params.q > 0.0 => HatlessWalks::Resolve(f),
        _ => HatlessWalks::Simulate,
    };
    SamplerOptions { event_cap, hatless }
}

pub fn draw_sample(
    params: ModelParams,
    side: usize,
    seed: u64,
    cache: &mut FieldCache,
    event_cap: u64,
) -> CliResult<SampleOutcome> {
    let field = if params.q > 0.0 {
        Some(cache.get_or_solve(side)?)
    } else {
        None
    };
    let g = build_box(side)?;
    Ok(sample_with(
        g,
        params,
        seed,
        sampler_options(params, field, event_cap),
    )?)
}

#[derive(Debug, Clone, Copy)]
struct Task {
    model: usize,
    l_pos: usize,
    replicate: u64,
}

/// Observables of one finished sample.
pub fn observe(outcome: &SampleOutcome, top_k: usize) -> anyhow::Result<Observables> {
    let cfg = outcome.configuration();
    let path = trace_interface(cfg).context("tracing interface")?;
    let sides = side_partition(cfg, &path).context("splitting sides")?;
    let report = class_report(outcome, &sides, top_k).context("class statistics")?;
    Ok(Observables {
        interface_length: path.len() as u64,
        displacement_max: max_displacement(&path),
        class_origin_size: report.class_origin_size as u64,
        class_max_size: report.class_max_size as u64,
        conn_origin_size: report.conn_origin_size as u64,
        conn_max_size: report.conn_max_size as u64,
        cuts_largest: report.cuts_largest,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observables {
    pub interface_length: u64,
    pub displacement_max: f64,
    pub class_origin_size: u64,
    pub class_max_size: u64,
    pub conn_origin_size: u64,
    pub conn_max_size: u64,
    pub cuts_largest: bool,
}

fn run_task(cfg: &ExperimentConfig, cache: &FieldCache, task: Task) -> anyhow::Result<RunRecord> {
    let model = &cfg.models[task.model];
    let l = cfg.l_list[task.l_pos];
    let side = cfg.convention.box_side(l);
    let seed = mix_seed(cfg.master_seed, task.model, l, task.replicate);
    let start = Instant::now();
    let options = sampler_options(model.params, cache.get(side), cfg.event_cap);
    let g = build_box(side)?;
    let mut record = RunRecord {
        run_id: 0,
        model_name: model.name.clone(),
        p: model.params.p,
        q: model.params.q,
        l,
        convention: cfg.convention,
        replicate: task.replicate,
        seed,
        status: RunStatus::Ok,
        interface_length: None,
        displacement_max: None,
        class_origin_size: None,
        class_max_size: None,
        conn_origin_size: None,
        conn_max_size: None,
        cuts_largest: None,
        events: 0,
        elapsed_ms: 0,
    };
    match sample_with(g, model.params, seed, options) {
        Ok(outcome) => {
            let obs = observe(&outcome, cfg.top_k).with_context(|| {
                format!("model {} L {l} replicate {}", model.name, task.replicate)
            })?;
            record.events = outcome.events();
            record.interface_length = Some(obs.interface_length);
            record.displacement_max = Some(obs.displacement_max);
            record.class_origin_size = Some(obs.class_origin_size);
            record.class_max_size = Some(obs.class_max_size);
            record.conn_origin_size = Some(obs.conn_origin_size);
            record.conn_max_size = Some(obs.conn_max_size);
            record.cuts_largest = Some(obs.cuts_largest as u8);
        }
        Err(Error::Runaway { cap }) => {
            record.status = RunStatus::Runaway;
            record.events = cap;
        }
        Err(e) => return Err(e.into()),
    }
    if cfg.timing {
        record.elapsed_ms = start.elapsed().as_millis() as u64;
    }
    Ok(record)
}

/// Runs every `(model, L, replicate)` task and returns the rows sorted by
/// model, L and replicate, with `run_id` numbering that order.
pub fn run_experiment(cfg: &ExperimentConfig) -> CliResult<Vec<RunRecord>> {
    cfg.validate()?;
    let mut cache = FieldCache::default();
    if cfg.models.iter().any(|m| m.params.q > 0.0) {
        for &l in &cfg.l_list {
            cache.get_or_solve(cfg.convention.box_side(l))?;
        }
    }
    let mut tasks = Vec::new();
    for model in 0..cfg.models.len() {
        for l_pos in 0..cfg.l_list.len() {
            for replicate in 0..cfg.m {
                tasks.push(Task {
                    model,
                    l_pos,
                    replicate,
                });
            }
        }
    }
    let mut seeds: Vec<u64> = tasks
        .iter()
        .map(|t| mix_seed(cfg.master_seed, t.model, cfg.l_list[t.l_pos], t.replicate))
        .collect();
    seeds.sort_unstable();
    if seeds.windows(2).any(|w| w[0] == w[1]) {
        return Err(CliError::Runtime(anyhow::anyhow!(
            "duplicate replicate seeds"
        )));
    }

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().context("starting worker pool")?;
    let results: Vec<anyhow::Result<(Task, RunRecord)>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&t| run_task(cfg, &cache, t).map(|r| (t, r)))
            .collect()
    });
    let mut rows = results.into_iter().collect::<anyhow::Result<Vec<_>>>()?;
    rows.sort_by_key(|(t, _)| (t.model, t.l_pos, t.replicate));
    Ok(rows
        .into_iter()
        .enumerate()
        .map(|(id, (_, mut r))| {
            r.run_id = id as u64;
            r
        })
        .collect())
}

pub fn write_records<W: Write>(out: W, records: &[RunRecord]) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    if records.is_empty() {
        w.write_record(CSV_COLUMNS)?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_records_to(path: &Path, records: &[RunRecord]) -> CliResult<()> {
    let file =
        std::fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    write_records(std::io::BufWriter::new(file), records)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Reads a run table, checking the header column by column.
pub fn read_records(path: &Path) -> CliResult<Vec<RunRecord>> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::Config(format!("cannot open {}: {e}", path.display())))?;
    read_records_from(file).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn read_records_from<R: std::io::Read>(input: R) -> CliResult<Vec<RunRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr
        .headers()
        .map_err(|e| CliError::Config(format!("unreadable header: {e}")))?
        .clone();
    for (k, expected) in CSV_COLUMNS.iter().enumerate() {
        match headers.get(k) {
            Some(found) if found == *expected => {}
            Some(found) => {
                return Err(CliError::Config(format!(
                    "column {} is {found:?}, expected {expected:?}",
                    k + 1
                )))
            }
            None => return Err(CliError::Config(format!("missing column {expected:?}"))),
        }
    }
    if headers.len() > CSV_COLUMNS.len() {
        return Err(CliError::Config(format!(
            "unexpected extra column {:?}",
            &headers[CSV_COLUMNS.len()]
        )));
    }
    let mut records = Vec::new();
    for (k, row) in rdr.deserialize::<RunRecord>().enumerate() {
        let row = row.map_err(|e| {
            let column = match e.kind() {
                csv::ErrorKind::Deserialize { err, .. } => err
                    .field()
                    .and_then(|f| CSV_COLUMNS.get(f as usize))
                    .map(|c| format!(", column {c:?}"))
                    .unwrap_or_default(),
                _ => String::new(),
            };
            CliError::Config(format!("data row {}{column}: {e}", k + 1))
        })?;
        records.push(row);
    }
    Ok(records)
}
