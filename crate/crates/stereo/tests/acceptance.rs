//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Criteria 4 and 5 need the four Middlebury 2.0 pairs (cones, teddy,
//! tsukuba, venus) laid out as `<dir>/<name>/{left,right,gt,nonocc}.pgm`.
//! The directory comes from `STEREO_MIDDLEBURY_DIR`, falling back to
//! `data/middlebury` at the workspace root. When the variable is unset and
//! the default directory is empty, those two criteria print FAIL but do not
//! fail the run; any failure on data that is present always does.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vsi_stereo::bench::{load_dataset, noise_sweep, report_from_cells, run_bench};
use vsi_stereo::config::PipelineConfig;
use vsi_stereo::core::aggregation::{aggregate, Arms, CrossArms};
use vsi_stereo::core::cost::{census_transform, map_cost, CostVolume};
use vsi_stereo::core::disparity::{left_right_check, winner_take_all, DisparityMap};
use vsi_stereo::core::eval::{mismatch_rate, EvalReport};
use vsi_stereo::core::pipeline::{match_pair, Algorithm, MatchParams};
use vsi_stereo::core::{GroundTruth, Image, Mask};
use vsi_stereo::report::write_csv;

enum Failure {
    /// The data a criterion needs is not on disk.
    Unavailable(String),
    Failed(String),
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Failed(s)
    }
}

type Outcome = Result<String, Failure>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(Failure::Failed(format!($($msg)+)));
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(f)
}

fn synthetic_exactness() -> Outcome {
    let (w, h, shift, max_disp) = (128, 128, 7, 16);
    let mut rng = rng(1);
    let wide: Vec<f64> = (0..(w + shift) * h)
        .map(|_| f64::from(rng.random_range(0u8..=255)))
        .collect();
    let left = Image::from_fn(w, h, |x, y| wide[y * (w + shift) + x]);
    let right = Image::from_fn(w, h, |x, y| wide[y * (w + shift) + x + shift]);
    // Interior: clear of the image border and of the band where x < max_disp.
    let margin = 4;
    let mut details = Vec::new();
    for algorithm in [Algorithm::Vsi, Algorithm::Census] {
        let params = MatchParams {
            algorithm,
            cost: vsi_stereo::core::cost::CostParams {
                max_disp,
                ..Default::default()
            },
            ..Default::default()
        };
        let t0 = Instant::now();
        let out = match_pair(&left, &right, &params).map_err(|e| e.to_string())?;
        let elapsed = t0.elapsed();
        let mut bad = 0;
        let mut total = 0;
        for y in margin..h - margin {
            for x in max_disp + margin..w - margin {
                total += 1;
                if out.disparity.get(x, y) != shift as f64 {
                    bad += 1;
                }
            }
        }
        ensure!(bad == 0, "{algorithm}: {bad}/{total} interior pixels wrong");
        ensure!(elapsed < Duration::from_secs(5), "{algorithm}: took {elapsed:?}");
        details.push(format!("{algorithm} 0/{total} in {:.2}s", elapsed.as_secs_f64()));
    }
    Ok(details.join(", "))
}

fn support_region(arms: &CrossArms, x: usize, y: usize) -> Vec<(usize, usize)> {
    let a = arms.get(x, y);
    let mut region = Vec::new();
    for qy in y - a.up as usize..=y + a.down as usize {
        let b = arms.get(x, qy);
        for qx in x - b.left as usize..=x + b.right as usize {
            region.push((qx, qy));
        }
    }
    region
}

fn random_arms(rng: &mut ChaCha8Rng, w: usize, h: usize) -> CrossArms {
    let mut arms = CrossArms::zero(w, h);
    for y in 0..h {
        for x in 0..w {
            arms.arms[y * w + x] = Arms {
                left: rng.random_range(0..=x) as u32,
                right: rng.random_range(0..=w - 1 - x) as u32,
                up: rng.random_range(0..=y) as u32,
                down: rng.random_range(0..=h - 1 - y) as u32,
            };
        }
    }
    arms
}

fn aggregation_oracle() -> Outcome {
    let mut rng = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let (w, h, d) = (
            rng.random_range(1..=11),
            rng.random_range(1..=11),
            rng.random_range(1..=8),
        );
        let cost: Vec<f32> = (0..w * h * d).map(|_| rng.random_range(0.0f32..10.0)).collect();
        let vol = CostVolume::new(w, h, d, cost).map_err(|e| e.to_string())?;
        let arms = random_arms(&mut rng, w, h);
        let out = aggregate(&vol, &arms).map_err(|e| e.to_string())?;
        for y in 0..h {
            for x in 0..w {
                let region = support_region(&arms, x, y);
                for dd in 0..d {
                    let sum: f64 = region.iter().map(|&(qx, qy)| f64::from(vol.get(qx, qy, dd))).sum();
                    let diff = (sum / region.len() as f64 - f64::from(out.get(x, y, dd))).abs();
                    worst = worst.max(diff);
                }
            }
        }
    }
    ensure!(worst < 1e-5, "max abs diff {worst:e}");
    Ok(format!("200 volumes, max abs diff {worst:.2e}"))
}

fn evaluation_oracle() -> Outcome {
    let mut rng = rng(3);
    let (w, h) = (16, 16);
    for case in 0..100 {
        let stored: Vec<u16> = (0..w * h)
            .map(|_| {
                if rng.random_bool(0.2) {
                    0
                } else {
                    rng.random_range(1..=255)
                }
            })
            .collect();
        let scale = [1.0, 4.0, 8.0][case % 3];
        let gt = GroundTruth::from_stored(w, h, &stored, scale).map_err(|e| e.to_string())?;
        let pred_vals: Vec<f64> = (0..w * h)
            .map(|_| f64::from(rng.random_range(0u16..=64)) * 0.5)
            .collect();
        let pred = DisparityMap::new(w, h, 64, pred_vals.clone()).map_err(|e| e.to_string())?;
        let mask_vals: Vec<bool> = (0..w * h).map(|_| rng.random_bool(0.7)).collect();
        let mask = Mask::new(w, h, mask_vals.clone()).map_err(|e| e.to_string())?;
        let thresh = [0.5, 1.0, 2.0][case % 3];
        let (mut evaluated, mut bad) = (0usize, 0usize);
        for y in 0..h {
            for x in 0..w {
                let i = y * w + x;
                if stored[i] == 0 || !mask_vals[i] {
                    continue;
                }
                evaluated += 1;
                if (pred_vals[i] - f64::from(stored[i]) / scale).abs() > thresh {
                    bad += 1;
                }
            }
        }
        match mismatch_rate(&pred, &gt, Some(&mask), thresh) {
            Ok(s) => {
                ensure!(
                    s.evaluated == evaluated && s.bad == bad && s.percent == 100.0 * bad as f64 / evaluated as f64,
                    "case {case}: got {s:?}, expected {bad}/{evaluated}"
                );
            }
            Err(e) => ensure!(evaluated == 0, "case {case}: {e}"),
        }
    }
    Ok("100 cases exact".into())
}

fn dataset_dir() -> PathBuf {
    std::env::var_os("STEREO_MIDDLEBURY_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/middlebury"))
}

const PAIRS: [&str; 4] = ["cones", "teddy", "tsukuba", "venus"];

fn check_dataset(dir: &Path) -> Result<(), Failure> {
    let missing: Vec<&str> = PAIRS.iter().copied().filter(|n| !dir.join(n).is_dir()).collect();
    if missing.is_empty() {
        return Ok(());
    }
    Err(Failure::Unavailable(format!(
        "dataset not found: {} missing under {}",
        missing.join(", "),
        dir.display()
    )))
}

fn standard_bench(levels: &[f64]) -> Result<EvalReport, Failure> {
    let dir = dataset_dir();
    check_dataset(&dir)?;
    let cfg = PipelineConfig {
        noise_levels: levels.to_vec(),
        ..Default::default()
    };
    let report = run_bench(&cfg, &dir, &Algorithm::ALL).map_err(|e| e.to_string())?;
    if let Some(f) = report.failures.first() {
        return Err(format!("{} ({}): {}", f.name, f.algorithm, f.message).into());
    }
    Ok(report)
}

fn standard_pairs() -> Outcome {
    let dir = dataset_dir();
    check_dataset(&dir)?;
    let cfg = PipelineConfig::default();
    let pairs = load_dataset(&dir, &cfg);
    let mut slowest = Duration::ZERO;
    for (name, pair) in &pairs {
        let pair = pair.as_ref().map_err(|e| e.to_string())?;
        for algorithm in Algorithm::ALL {
            let params = cfg.match_params_for(algorithm, pair.max_disp);
            let t0 = Instant::now();
            single_threaded(|| match_pair(&pair.left, &pair.right, &params)).map_err(|e| e.to_string())?;
            let t = t0.elapsed();
            ensure!(t < Duration::from_secs(60), "{name} {algorithm}: {t:?} single-threaded");
            slowest = slowest.max(t);
        }
    }
    let report = standard_bench(&[0.0])?;
    let vsi = report.average(Algorithm::Vsi, 0.0).unwrap_or(f64::NAN);
    let census = report.average(Algorithm::Census, 0.0).unwrap_or(f64::NAN);
    let mut per_image = Vec::new();
    for name in PAIRS {
        let v = report.entry(name, Algorithm::Vsi, 0.0).map_or(f64::NAN, |e| e.percent);
        let c = report
            .entry(name, Algorithm::Census, 0.0)
            .map_or(f64::NAN, |e| e.percent);
        per_image.push(format!("{name} {v:.2}/{c:.2}"));
        ensure!(v < c, "vsi {v:.2}% does not beat census {c:.2}% on {name}");
    }
    ensure!(vsi <= 10.0, "vsi average {vsi:.2}% > 10%");
    ensure!(
        (17.0..=33.0).contains(&census),
        "census average {census:.2}% outside [17, 33]"
    );
    Ok(format!(
        "vsi avg {vsi:.2}%, census avg {census:.2}% ({}), slowest pair {:.1}s",
        per_image.join(", "),
        slowest.as_secs_f64()
    ))
}

fn noise_robustness() -> Outcome {
    let levels = [0.0, 2.0, 5.0, 10.0, 15.0];
    let report = standard_bench(&levels)?;
    let avg = |a: Algorithm, l: f64| report.average(a, l).unwrap_or(f64::NAN);
    let vsi: Vec<f64> = levels.iter().map(|&l| avg(Algorithm::Vsi, l)).collect();
    ensure!(
        vsi.windows(2).all(|p| p[0] < p[1]),
        "vsi averages not strictly increasing: {vsi:.2?}"
    );
    let vsi_rise = vsi[2] - vsi[0];
    let census_rise = avg(Algorithm::Census, 5.0) - avg(Algorithm::Census, 0.0);
    ensure!(
        vsi_rise < census_rise,
        "0→5% rise vsi {vsi_rise:.2} ≥ census {census_rise:.2}"
    );
    Ok(format!(
        "vsi {vsi:.2?}, 0→5% rise vsi {vsi_rise:.2} vs census {census_rise:.2}"
    ))
}

fn bench_bytes(dir: &Path, cfg: &PipelineConfig, threads: usize) -> Result<Vec<Vec<u8>>, String> {
    let overlays = dir.join(format!("overlays-{threads}"));
    let cfg = PipelineConfig {
        overlay_dir: Some(overlays.clone()),
        ..cfg.clone()
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let report = pool
        .install(|| run_bench(&cfg, dir, &Algorithm::ALL))
        .map_err(|e| e.to_string())?;
    let mut csv = Vec::new();
    write_csv(&report, &mut csv).map_err(|e| e.to_string())?;
    let mut files: Vec<PathBuf> = std::fs::read_dir(&overlays)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    let mut out = vec![csv];
    for f in files {
        out.push(f.file_name().unwrap().to_string_lossy().as_bytes().to_vec());
        out.push(std::fs::read(&f).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

fn property_suites() -> Outcome {
    // mapCost bounds and monotonicity.
    for lambda in [0.5, 8.0, 25.0] {
        let vals: Vec<f64> = (0..100).map(|i| map_cost(f64::from(i), lambda)).collect();
        ensure!(
            vals.iter().all(|v| (0.0..1.0).contains(v)),
            "mapCost out of [0, 1) for λ={lambda}"
        );
        ensure!(
            vals.windows(2).all(|p| p[0] <= p[1]),
            "mapCost not monotone for λ={lambda}"
        );
    }
    let mut rng = rng(6);
    // Census ignores a constant intensity offset.
    for _ in 0..20 {
        let img = Image::from_fn(12, 10, |_, _| f64::from(rng.random_range(0u8..=200)));
        let offset = f64::from(rng.random_range(1u8..=55));
        let shifted = Image::from_fn(12, 10, |x, y| img.get(x, y) + offset);
        ensure!(
            census_transform(&img, 2).unwrap() == census_transform(&shifted, 2).unwrap(),
            "census changed under offset {offset}"
        );
    }
    // WTA on every cost vector of length 4 over {0, 1, 2}.
    for code in 0..81u32 {
        let costs: Vec<f32> = (0..4).map(|i| (code / 3u32.pow(i) % 3) as f32).collect();
        let m = winner_take_all(&CostVolume::new(1, 1, 4, costs.clone()).unwrap());
        let min = costs.iter().cloned().fold(f32::INFINITY, f32::min);
        ensure!(
            costs.iter().position(|&c| c == min) == Some(m.disp[0] as usize),
            "WTA wrong on {costs:?}"
        );
    }
    // Aggregated costs stay within the support region's range.
    for _ in 0..50 {
        let (w, h, d) = (
            rng.random_range(1..=9),
            rng.random_range(1..=9),
            rng.random_range(1..=4),
        );
        let vol = CostVolume::new(
            w,
            h,
            d,
            (0..w * h * d).map(|_| rng.random_range(0.0f32..10.0)).collect(),
        )
        .unwrap();
        let arms = random_arms(&mut rng, w, h);
        let out = aggregate(&vol, &arms).unwrap();
        for y in 0..h {
            for x in 0..w {
                for dd in 0..d {
                    let vals: Vec<f32> = support_region(&arms, x, y)
                        .iter()
                        .map(|&(qx, qy)| vol.get(qx, qy, dd))
                        .collect();
                    let lo = vals.iter().cloned().fold(f32::INFINITY, f32::min);
                    let hi = vals.iter().cloned().fold(f32::NEG_INFINITY, f32::max);
                    let v = out.get(x, y, dd);
                    ensure!(v >= lo - 1e-4 && v <= hi + 1e-4, "aggregate {v} outside [{lo}, {hi}]");
                }
            }
        }
    }
    // An unbounded LR tolerance only rejects matches that leave the frame.
    for _ in 0..20 {
        let (w, h) = (12, 4);
        let dl: Vec<f64> = (0..w * h).map(|_| f64::from(rng.random_range(0u8..16))).collect();
        let dr: Vec<f64> = (0..w * h).map(|_| f64::from(rng.random_range(0u8..16))).collect();
        let l = DisparityMap::new(w, h, 16, dl.clone()).unwrap();
        let r = DisparityMap::new(w, h, 16, dr).unwrap();
        let out = left_right_check(&l, &r, f64::INFINITY).unwrap();
        for (i, d) in dl.iter().enumerate() {
            ensure!(
                out.is_valid(i % w, i / w) == (*d <= (i % w) as f64),
                "LR check wrong at {i}"
            );
        }
    }
    // Bench output is byte-identical with 1 and N threads.
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut cfg = common::synthetic_dataset(dir.path(), &["a", "b", "c"], 48, 32);
    cfg.noise_levels = vec![0.0, 5.0];
    cfg.seed = 17;
    let n = std::thread::available_parallelism().map_or(4, |n| n.get()).max(2);
    let one = bench_bytes(dir.path(), &cfg, 1)?;
    let many = bench_bytes(dir.path(), &cfg, n)?;
    ensure!(one == many, "bench output differs between 1 and {n} threads");
    // Sanity: the sweep really produced cells for every pair.
    let cells = noise_sweep(
        &load_dataset(dir.path(), &cfg),
        &cfg.noise_levels,
        &Algorithm::ALL,
        &cfg,
        cfg.seed,
    );
    ensure!(
        report_from_cells(&cells, 1.0).entries.len() == 12,
        "expected 12 bench cells"
    );
    Ok(format!(
        "all suites hold; bench identical with 1 and {n} threads ({} files)",
        one.len() / 2
    ))
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("1 synthetic exactness", synthetic_exactness),
        ("2 aggregation oracle", aggregation_oracle),
        ("3 evaluation oracle", evaluation_oracle),
        ("4 standard pairs, default parameters", standard_pairs),
        ("5 noise robustness", noise_robustness),
        ("6 property suites and determinism", property_suites),
    ];
    let required = std::env::var_os("STEREO_MIDDLEBURY_DIR").is_some();
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(Failure::Failed(format!("panicked: {msg}")))
        });
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(Failure::Failed(detail)) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
            Err(Failure::Unavailable(detail)) => {
                failed += usize::from(required);
                println!("FAIL  criterion {name}: {detail} (set STEREO_MIDDLEBURY_DIR)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
