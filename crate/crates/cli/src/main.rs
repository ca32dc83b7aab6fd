use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use voterlab_cli::config::{ExperimentConfig, FileConfig, NamedModel};
use voterlab_cli::error::{CliError, CliResult};
use voterlab_cli::estimate::{report_text, write_report_csv};
use voterlab_cli::oracle_cmd::{parse_site, run_oracle, OracleKind};
use voterlab_cli::render::render_svg;
use voterlab_cli::simulate::{
    draw_sample, read_records, run_experiment, write_records_to, FieldCache,
};
use voterlab_core::stats::summarize;
use voterlab_core::Site;

#[derive(Parser)]
#[command(
    name = "voterlab",
    version,
    about = "Stationary voter model interfaces and coalescing classes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run replicates and write one CSV row per sample.
    Simulate(SimulateArgs),
    /// Compute exponent estimates from a run table.
    Estimate(EstimateArgs),
    /// Print exact values for a small box.
    Oracle(OracleArgs),
    /// Draw one sample as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// TOML file with any of: models, L, m, seed, convention, threads, out, top_k, event_cap.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated models: voter, cow, harmonic, percolation or name:p:q.
    #[arg(long, value_delimiter = ',')]
    models: Option<Vec<String>>,
    /// Comma-separated nominal side lengths.
    #[arg(long = "L", value_delimiter = ',')]
    l: Option<Vec<usize>>,
    /// Replicates per (model, L).
    #[arg(long)]
    m: Option<u64>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// exact: box side L; appendix: box side L+2.
    #[arg(long, value_parser = ["exact", "appendix"])]
    convention: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    top_k: Option<usize>,
    /// Abort a replicate after this many walker events and mark it runaway.
    #[arg(long)]
    event_cap: Option<u64>,
    /// Fill elapsed_ms; makes the output depend on the machine.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct EstimateArgs {
    /// Run table written by `simulate`.
    csv: PathBuf,
    /// Directory for estimates.csv and estimates.txt; the text report always goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(value_enum)]
    kind: OracleKind,
    /// Box side.
    #[arg(long = "L")]
    l: usize,
    /// First site as i,j.
    #[arg(long, value_parser = parse_site)]
    x: Option<Site>,
    /// Second site as i,j.
    #[arg(long, value_parser = parse_site)]
    y: Option<Site>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// Take model, L, convention and seed from a run table row.
    #[arg(long, requires = "run_id")]
    csv: Option<PathBuf>,
    #[arg(long)]
    run_id: Option<u64>,
    /// Model when not reading from a run table.
    #[arg(long, default_value = "voter")]
    models: String,
    /// Nominal side length when not reading from a run table.
    #[arg(long = "L")]
    l: Option<usize>,
    #[arg(long, value_parser = ["exact", "appendix"], default_value = "appendix")]
    convention: String,
    /// Sample seed when not reading from a run table.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    top_k: usize,
    #[arg(long, default_value_t = voterlab_core::engine::DEFAULT_EVENT_CAP)]
    event_cap: u64,
    #[arg(long, default_value = "sample.svg")]
    out: PathBuf,
}

fn simulate(args: SimulateArgs) -> CliResult<()> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let flags = FileConfig {
        models: args.models,
        l: args.l,
        m: args.m,
        seed: args.seed,
        convention: args.convention,
        threads: args.threads,
        out: args.out,
        top_k: args.top_k,
        event_cap: args.event_cap,
    };
    let mut cfg = ExperimentConfig::from_file_config(file.overlay(flags))?;
    cfg.timing = args.timing;
    let records = run_experiment(&cfg)?;
    write_records_to(&cfg.out, &records)?;
    let runaway = records
        .iter()
        .filter(|r| r.status != voterlab_core::stats::RunStatus::Ok)
        .count();
    eprintln!(
        "wrote {} rows to {} ({runaway} runaway)",
        records.len(),
        cfg.out.display()
    );
    Ok(())
}

fn estimate(args: EstimateArgs) -> CliResult<()> {
    let records = read_records(&args.csv)?;
    let report = summarize(&records);
    let text = report_text(&report);
    print!("{text}");
    if let Some(dir) = args.out {
        std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        let file =
            std::fs::File::create(dir.join("estimates.csv")).context("creating estimates.csv")?;
        write_report_csv(std::io::BufWriter::new(file), &report)?;
        std::fs::write(dir.join("estimates.txt"), &text).context("writing estimates.txt")?;
    }
    Ok(())
}

fn oracle(args: OracleArgs) -> CliResult<()> {
    let text = run_oracle(args.kind, args.l, args.x, args.y)?;
    match args.out {
        Some(path) => {
            std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn render(args: RenderArgs) -> CliResult<()> {
    let (params, side, seed) = match (&args.csv, args.run_id) {
        (Some(path), Some(id)) => {
            let records = read_records(path)?;
            let r = records
                .iter()
                .find(|r| r.run_id == id)
                .ok_or_else(|| CliError::Config(format!("no run_id {id} in {}", path.display())))?;
            let params = voterlab_core::ModelParams::new(r.p, r.q)?;
            (params, r.convention.box_side(r.l), r.seed)
        }
        _ => {
            let model = NamedModel::parse(&args.models)?;
            let l = args
                .l
                .ok_or_else(|| CliError::Config("render needs --L or --csv".into()))?;
            let convention: voterlab_core::stats::Convention = args.convention.parse()?;
            (model.params, convention.box_side(l), args.seed)
        }
    };
    let outcome = draw_sample(
        params,
        side,
        seed,
        &mut FieldCache::default(),
        args.event_cap,
    )?;
    let svg = render_svg(&outcome, args.top_k)?;
    std::fs::write(&args.out, svg).with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!("wrote {}", args.out.display());
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Estimate(a) => estimate(a),
        Command::Oracle(a) => oracle(a),
        Command::Render(a) => render(a),
    };
    if let Err(e) = result {
        eprintln!("voterlab: {e:#}");
        std::process::exit(e.exit_code());
    }
}
