use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use vsi_stereo::bench::run_bench;
use vsi_stereo::config::{MagnitudeName, NoiseViews, PipelineConfig, TemplateName, ThresholdModeName};
use vsi_stereo::core::eval::{error_overlay, mismatch_rate};
use vsi_stereo::core::pipeline::{match_pair_observed, Algorithm};
use vsi_stereo::core::RgbImage;
use vsi_stereo::imgio::{load_disparity, load_ground_truth, load_image, load_mask, save_disparity, save_rgb};
use vsi_stereo::timing::StageTimer;
use vsi_stereo::{dump, report, thread_cap, Error, Result};

#[derive(Parser)]
#[command(
    name = "stereo",
    version,
    about = "Dense stereo matching, evaluation and benchmarking"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a disparity map for a rectified pair.
    Match(MatchArgs),
    /// Score a disparity map against ground truth.
    Eval(EvalArgs),
    /// Run both algorithms over a dataset at several noise levels.
    Bench(BenchArgs),
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long)]
    left: PathBuf,
    #[arg(long)]
    right: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the left-view initial cost volume ("H W D\n" + LE f32).
    #[arg(long)]
    dump_cost: Option<PathBuf>,
    /// Write arm lengths as <prefix>_{left,right,up,down}.pgm (vsi only).
    #[arg(long)]
    dump_arms: Option<PathBuf>,
    /// Write gradient magnitude and direction as <prefix>_{mag,theta}.pgm (vsi only).
    #[arg(long)]
    dump_gradient: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    gt: PathBuf,
    /// Ground-truth scale (disparity = gray / scale).
    #[arg(long)]
    scale: f64,
    /// Scale of the predicted map; defaults to --scale.
    #[arg(long)]
    pred_scale: Option<f64>,
    /// Non-occluded mask (nonzero = evaluate).
    #[arg(long)]
    mask: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    bad_thresh: f64,
    /// Write a PPM with bad pixels in red.
    #[arg(long)]
    overlay: Option<PathBuf>,
    /// Background image for the overlay; defaults to the ground truth.
    #[arg(long)]
    base: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// Noise levels in percent, e.g. 0,2,5,10,15.
    #[arg(long, value_delimiter = ',')]
    noise: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    overlay_dir: Option<PathBuf>,
    /// Algorithms to run (default: both).
    #[arg(long, value_enum, value_delimiter = ',')]
    algos: Option<Vec<AlgoArg>>,
    /// Override an image's ground-truth scale, NAME=SCALE (repeatable).
    #[arg(long = "gt-scale-for", value_parser = parse_named_scale)]
    scales: Vec<(String, f64)>,
    #[arg(long, value_enum)]
    noise_views: Option<NoiseViewsArg>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum NoiseViewsArg {
    Both,
    Left,
}

fn parse_named_scale(s: &str) -> std::result::Result<(String, f64), String> {
    let (name, v) = s.split_once('=').ok_or("expected NAME=SCALE")?;
    let v: f64 = v.parse().map_err(|e| format!("{e}"))?;
    Ok((name.to_string(), v))
}

/// Flags shared by `match` and `bench`; each overrides the config file.
#[derive(Args)]
struct CommonArgs {
    /// Key-value (TOML) config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the effective config and continue.
    #[arg(long)]
    dump_config: Option<PathBuf>,
    #[arg(long, value_enum)]
    algo: Option<AlgoArg>,
    #[arg(long)]
    max_disp: Option<usize>,
    /// Disparity-to-gray scale for written maps.
    #[arg(long)]
    gt_scale: Option<f64>,
    #[arg(long)]
    census_radius: Option<usize>,
    #[arg(long)]
    lambda_s: Option<f64>,
    #[arg(long)]
    lambda_g: Option<f64>,
    #[arg(long)]
    gate_t: Option<f64>,
    #[arg(long)]
    penalty: Option<f64>,
    #[arg(long, value_enum)]
    template: Option<TemplateArg>,
    #[arg(long, value_enum)]
    magnitude: Option<MagnitudeArg>,
    #[arg(long)]
    l1: Option<usize>,
    #[arg(long)]
    l2: Option<usize>,
    #[arg(long)]
    tau1: Option<f64>,
    #[arg(long)]
    tau2: Option<f64>,
    #[arg(long)]
    tau3: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, value_enum)]
    threshold_mode: Option<ThresholdArg>,
    #[arg(long)]
    agg_passes: Option<usize>,
    #[arg(long)]
    box_radius: Option<usize>,
    #[arg(long)]
    t_lr: Option<f64>,
    #[arg(long)]
    bad_thresh: Option<f64>,
    /// Enable or disable the final 3×3 median filter.
    #[arg(long)]
    median_filter: Option<bool>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum AlgoArg {
    Vsi,
    Census,
}

impl AlgoArg {
    fn algorithm(self) -> Algorithm {
        match self {
            AlgoArg::Vsi => Algorithm::Vsi,
            AlgoArg::Census => Algorithm::Census,
        }
    }
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum TemplateArg {
    Sobel,
    Prewitt,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum MagnitudeArg {
    Euclidean,
    AbsSum,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ThresholdArg {
    Relax,
    Tighten,
}

macro_rules! apply {
    ($cfg:ident, $args:ident: $($field:ident),*) => {
        $(if let Some(v) = $args.$field { $cfg.$field = v; })*
    };
}

impl CommonArgs {
    fn resolve(&self) -> Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(p) => PipelineConfig::load(p)?,
            None => PipelineConfig::default(),
        };
        let a = self;
        apply!(cfg, a: max_disp, gt_scale, census_radius, lambda_s, lambda_g, gate_t, penalty,
            l1, l2, tau1, tau2, tau3, alpha, agg_passes, box_radius, t_lr, bad_thresh, median_filter);
        if let Some(v) = a.algo {
            cfg.algorithm = v.algorithm().into();
        }
        if let Some(v) = a.template {
            cfg.template = match v {
                TemplateArg::Sobel => TemplateName::Sobel,
                TemplateArg::Prewitt => TemplateName::Prewitt,
            };
        }
        if let Some(v) = a.magnitude {
            cfg.magnitude = match v {
                MagnitudeArg::Euclidean => MagnitudeName::Euclidean,
                MagnitudeArg::AbsSum => MagnitudeName::AbsSum,
            };
        }
        if let Some(v) = a.threshold_mode {
            cfg.threshold_mode = match v {
                ThresholdArg::Relax => ThresholdModeName::Relax,
                ThresholdArg::Tighten => ThresholdModeName::Tighten,
            };
        }
        Ok(cfg)
    }
}

fn finish_config(cfg: &PipelineConfig, dump_to: Option<&Path>) -> Result<()> {
    cfg.validate()?;
    if let Some(p) = dump_to {
        std::fs::write(p, cfg.to_toml()?).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        })?;
    }
    Ok(())
}

fn with_stage(stage: &str) -> impl FnOnce(Error) -> Error + '_ {
    move |e| Error::Config(format!("{stage} stage failed: {e}"))
}

fn run_match(args: MatchArgs) -> Result<ExitCode> {
    let mut cfg = args.common.resolve()?;
    if args.out.is_some() {
        cfg.out = args.out.clone();
    }
    finish_config(&cfg, args.common.dump_config.as_deref())?;
    let t0 = Instant::now();
    let left = load_image(&args.left).map_err(with_stage("load"))?;
    let right = load_image(&args.right).map_err(with_stage("load"))?;
    let load_ms = t0.elapsed().as_secs_f64() * 1e3;

    let mut timer =
        StageTimer::new(args.dump_cost.is_some() || args.dump_arms.is_some() || args.dump_gradient.is_some());
    let params = cfg.match_params();
    let out = match_pair_observed(&left, &right, &params, &mut timer)?;

    eprintln!("{:>5} {:<12} {:>9.2} ms", "", "load", load_ms);
    eprint!("{}", timer.report());

    if let Some(p) = &args.dump_cost {
        if let Some(vol) = &timer.left_cost {
            dump::save_cost_volume(vol, p)?;
        }
    }
    if let (Some(p), Some(arms)) = (&args.dump_arms, &timer.left_arms) {
        dump::save_arms(arms, p)?;
    }
    if let (Some(p), Some(g)) = (&args.dump_gradient, &timer.left_gradient) {
        dump::save_gradient(g, p)?;
    }
    let t1 = Instant::now();
    match &cfg.out {
        Some(p) => save_disparity(&out.disparity, cfg.gt_scale, p).map_err(with_stage("save"))?,
        None => eprintln!("no --out given; disparity map not written"),
    }
    eprintln!("{:>5} {:<12} {:>9.2} ms", "", "save", t1.elapsed().as_secs_f64() * 1e3);
    Ok(ExitCode::SUCCESS)
}

fn run_eval(args: EvalArgs) -> Result<ExitCode> {
    let gt = load_ground_truth(&args.gt, args.scale)?;
    let pred = load_disparity(&args.pred, args.pred_scale.unwrap_or(args.scale), 256)?;
    let mask = args.mask.as_ref().map(load_mask).transpose()?;
    let stats = mismatch_rate(&pred, &gt, mask.as_ref(), args.bad_thresh)?;
    println!(
        "evaluated {} bad {} percent {:.4}",
        stats.evaluated, stats.bad, stats.percent
    );
    if let Some(p) = &args.overlay {
        let base = match &args.base {
            Some(b) => load_image(b)?,
            None => load_image(&args.gt)?,
        };
        let overlay: RgbImage = error_overlay(&pred, &gt, &base, mask.as_ref(), args.bad_thresh)?;
        save_rgb(&overlay, p)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run_bench_cmd(args: BenchArgs) -> Result<ExitCode> {
    let mut cfg = args.common.resolve()?;
    if let Some(levels) = args.noise {
        cfg.noise_levels = levels;
    }
    if cfg.noise_levels.is_empty() {
        cfg.noise_levels = vec![0.0];
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if args.report.is_some() {
        cfg.report = args.report;
    }
    if args.overlay_dir.is_some() {
        cfg.overlay_dir = args.overlay_dir;
    }
    if let Some(v) = args.noise_views {
        cfg.noise_views = match v {
            NoiseViewsArg::Both => NoiseViews::Both,
            NoiseViewsArg::Left => NoiseViews::Left,
        };
    }
    for (name, scale) in args.scales {
        match cfg.images.get_mut(&name) {
            Some(img) => img.scale = scale,
            None => return Err(Error::Config(format!("--gt-scale-for: unknown image `{name}`"))),
        }
    }
    finish_config(&cfg, args.common.dump_config.as_deref())?;
    let algorithms: Vec<Algorithm> = match args.algos {
        Some(a) => a.into_iter().map(AlgoArg::algorithm).collect(),
        None => Algorithm::ALL.to_vec(),
    };
    let t0 = Instant::now();
    let report = run_bench(&cfg, &args.dataset, &algorithms)?;
    eprintln!("bench finished in {:.2} ms", t0.elapsed().as_secs_f64() * 1e3);
    match &cfg.report {
        Some(p) => report::save_csv(&report, p)?,
        None => report::write_csv(&report, std::io::stdout().lock())?,
    }
    print!("{}", report::summary(&report));
    Ok(if report.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = thread_cap() {
        let n = n.min(std::thread::available_parallelism().map_or(n, |p| p.get()));
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let result = match cli.command {
        Command::Match(a) => run_match(a),
        Command::Eval(a) => run_eval(a),
        Command::Bench(a) => run_bench_cmd(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
