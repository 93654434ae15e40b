//! The `posesynth` command-line front end.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage or config error.

mod config;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::dataset::{
    compute_mean_from_manifest, generate_dataset, ingest_real_frames, manifest_dir, read_manifest, validate_splits,
    write_manifest, DatasetLayout, MeanImage, Split, CONFIG_ECHO_FILE, MEAN_FILE,
};
use crate::error::{Error, Result};
use crate::eval::{evaluate, format_report, knn_predict, KnnIndex, DEFAULT_DESCRIPTOR_SIZE};
use crate::renderer::Image;

pub use config::{
    CameraConfig, GenerationConfig, GridConfig, OrientationConfig, ProceduralScene, RenderConfig, CONFIG_HELP,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_RUNTIME: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "posesynth", version, about = "Pose-labeled image datasets from point clouds")]
pub struct Cli {
    /// Worker threads for rendering and image loading (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,

    /// Only print warnings and errors.
    #[arg(long, short, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a pose sweep over a point cloud into a split dataset.
    #[command(after_long_help = CONFIG_HELP)]
    Generate(GenerateArgs),
    /// Copy externally posed real frames into testA or train.
    Ingest(IngestArgs),
    /// Check that test splits share no image or pose with train.
    Validate(ValidateArgs),
    /// Compute the per-pixel mean of a manifest's images.
    Mean(MeanArgs),
    /// Predict poses by nearest-neighbor retrieval against a train split.
    Baseline(BaselineArgs),
    /// Score predictions against ground truth.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// JSON generation config.
    pub config: PathBuf,
    /// Overrides the config's output root.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Directory of real frames.
    #[arg(long)]
    pub frames: PathBuf,
    /// Manifest of frame poses, image paths relative to the frames directory.
    #[arg(long)]
    pub poses: PathBuf,
    /// Dataset root.
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value = "testA")]
    pub split: Split,
    #[arg(long, default_value_t = 224)]
    pub width: u32,
    #[arg(long, default_value_t = 224)]
    pub height: u32,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Dataset root.
    pub root: PathBuf,
}

#[derive(Debug, Args)]
pub struct MeanArgs {
    pub manifest: PathBuf,
    /// Defaults to mean.psmean next to the manifest.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub query: PathBuf,
    /// Predictions CSV.
    #[arg(long)]
    pub output: PathBuf,
    /// Mean image; defaults to mean.psmean next to the train manifest, or
    /// the train mean computed on the fly.
    #[arg(long)]
    pub mean: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_DESCRIPTOR_SIZE)]
    pub descriptor_size: u32,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub predictions: PathBuf,
    pub ground_truth: PathBuf,
    /// Row label; defaults to the ground-truth file stem.
    #[arg(long)]
    pub label: Option<String>,
    /// Also write the report to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } | Error::Manifest { .. } => EXIT_USAGE,
        _ => EXIT_RUNTIME,
    }
}

/// Entry point of the binary: parses `std::env::args`, sets up logging, runs.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let level = if cli.quiet { "warn" } else { "info" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
    ExitCode::from(execute(&cli))
}

/// Parses `args` (including the program name) and runs; for embedding and tests.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            }
        }
    }
}

/// Runs a parsed command on a pool sized by `--threads`.
pub fn execute(cli: &Cli) -> u8 {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        builder = builder.num_threads(n as usize);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            log::error!("cannot start worker threads: {e}");
            return EXIT_RUNTIME;
        }
    };
    match pool.install(|| dispatch(cli)) {
        Ok(code) => code,
        Err(e) => {
            log::error!("{e}");
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Ingest(a) => cmd_ingest(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Mean(a) => cmd_mean(a),
        Command::Baseline(a) => cmd_baseline(a),
        Command::Eval(a) => cmd_eval(a),
    }
}

fn print(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes());
    let _ = out.flush();
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<u8> {
    let start = Instant::now();
    let mut cfg = GenerationConfig::load(&a.config)?;
    if let Some(o) = &a.output {
        cfg.output = Some(o.clone());
    }
    let out_root = cfg.output.clone().expect("validated");
    let cloud = cfg.load_cloud()?;
    log::info!("{} points", cloud.len());
    let req = cfg.request(&cloud)?;
    std::fs::create_dir_all(&out_root).map_err(|e| Error::io(&out_root, e))?;
    let summary = generate_dataset(&cloud, &req, &out_root)?;
    let echo = out_root.join(CONFIG_ECHO_FILE);
    std::fs::write(&echo, cfg.echo()).map_err(|e| Error::io(echo, e))?;
    let mut s = String::new();
    writeln!(s, "poses: {}", summary.poses).unwrap();
    writeln!(s, "train: {}", summary.train).unwrap();
    writeln!(s, "testB: {}", summary.test_b).unwrap();
    writeln!(s, "elapsed: {:.2}s", start.elapsed().as_secs_f64()).unwrap();
    print(&s);
    Ok(EXIT_OK)
}

pub fn cmd_ingest(a: &IngestArgs) -> Result<u8> {
    let s = ingest_real_frames(&a.frames, &a.poses, a.width, a.height, &a.output, a.split)?;
    print(&format!(
        "{}: {} frames ingested, {} unlisted frames ignored\n",
        s.split, s.ingested, s.unlisted_frames
    ));
    Ok(EXIT_OK)
}

pub fn cmd_validate(a: &ValidateArgs) -> Result<u8> {
    let layout = DatasetLayout::open(&a.root)?;
    let report = validate_splits(&layout);
    print(&format!("{report}\n"));
    Ok(if report.passed() { EXIT_OK } else { EXIT_RUNTIME })
}

pub fn cmd_mean(a: &MeanArgs) -> Result<u8> {
    let mean = compute_mean_from_manifest(&a.manifest)?;
    let out = a.output.clone().unwrap_or_else(|| manifest_dir(&a.manifest).join(MEAN_FILE));
    mean.write(&out)?;
    print(&format!("{}x{} mean written to {}\n", mean.width, mean.height, out.display()));
    Ok(EXIT_OK)
}

fn baseline_mean(a: &BaselineArgs) -> Result<Option<MeanImage>> {
    if let Some(p) = &a.mean {
        return MeanImage::read(p).map(Some);
    }
    let beside = manifest_dir(&a.train).join(MEAN_FILE);
    if beside.is_file() {
        return MeanImage::read(beside).map(Some);
    }
    Ok(None)
}

pub fn cmd_baseline(a: &BaselineArgs) -> Result<u8> {
    let queries = read_manifest(&a.query)?;
    if queries.is_empty() {
        log::warn!("{}: no queries, writing an empty predictions file", a.query.display());
        write_manifest(&[], &a.output)?;
        return Ok(EXIT_OK);
    }
    let train = read_manifest(&a.train)?;
    let index = KnnIndex::build(&train, &manifest_dir(&a.train), baseline_mean(a)?, a.descriptor_size)?;
    let root = manifest_dir(&a.query);
    let mut preds = Vec::with_capacity(queries.len());
    let step = (queries.len() / 10).max(1);
    for (i, q) in queries.iter().enumerate() {
        let img = Image::load(root.join(&q.image_path))?;
        preds.push(crate::dataset::ManifestRecord::new(q.image_path.clone(), knn_predict(&index, &img)?));
        if (i + 1) % step == 0 || i + 1 == queries.len() {
            log::info!("baseline: {}/{} queries", i + 1, queries.len());
        }
    }
    write_manifest(&preds, &a.output)?;
    Ok(EXIT_OK)
}

pub fn cmd_eval(a: &EvalArgs) -> Result<u8> {
    let preds = read_manifest(&a.predictions)?;
    let gt = read_manifest(&a.ground_truth)?;
    let metrics = evaluate(&preds, &gt)?;
    let label = a.label.clone().unwrap_or_else(|| stem(&a.ground_truth));
    let report = format_report(&[(label, metrics)]);
    print(&report);
    if let Some(p) = &a.report {
        std::fs::write(p, &report).map_err(|e| Error::io(p, e))?;
    }
    Ok(EXIT_OK)
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}
