//! Dataset loading and the noise-robustness sweep.
//!
//! A dataset directory holds one subdirectory per image pair:
//!
//! ```text
//! <dataset>/<name>/left.{pgm,ppm}
//! <dataset>/<name>/right.{pgm,ppm}
//! <dataset>/<name>/gt.pgm
//! <dataset>/<name>/nonocc.{pgm,ppm}   (optional evaluation mask)
//! ```

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use vsi_stereo_core::disparity::DisparityMap;
use vsi_stereo_core::eval::{error_overlay, mismatch_rate, CellFailure, EvalEntry, EvalReport, MismatchStats};
use vsi_stereo_core::pipeline::{match_pair, Algorithm};
use vsi_stereo_core::{GroundTruth, Image, Mask, RgbImage};

use crate::config::{NoiseViews, PipelineConfig};
use crate::error::{Error, Result};
use crate::imgio::{load_ground_truth, load_image, load_mask, save_rgb};
use crate::noise::{add_gaussian_noise, derive_seed};

#[derive(Debug, Clone)]
pub struct StereoPair {
    pub name: String,
    pub left: Image,
    pub right: Image,
    pub gt: GroundTruth,
    pub mask: Option<Mask>,
    pub max_disp: usize,
}

const EXTENSIONS: [&str; 3] = ["pgm", "ppm", "pnm"];

fn find(dir: &Path, stem: &str) -> Option<PathBuf> {
    EXTENSIONS
        .iter()
        .map(|ext| dir.join(format!("{stem}.{ext}")))
        .find(|p| p.is_file())
}

/// Loads one `<dataset>/<name>` entry.
pub fn load_pair(dataset: &Path, name: &str, max_disp: usize, scale: f64) -> Result<StereoPair> {
    let dir = dataset.join(name);
    let entry_err = |reason: String| Error::Dataset {
        name: name.to_string(),
        reason,
    };
    if !dir.is_dir() {
        return Err(entry_err(format!("missing directory {}", dir.display())));
    }
    let need =
        |stem: &str| find(&dir, stem).ok_or_else(|| entry_err(format!("missing {stem}.pgm/.ppm in {}", dir.display())));
    let wrap = |e: Error| entry_err(e.to_string());
    let left = load_image(need("left")?).map_err(wrap)?;
    let right = load_image(need("right")?).map_err(wrap)?;
    let gt = load_ground_truth(need("gt")?, scale).map_err(wrap)?;
    let mask = find(&dir, "nonocc").map(load_mask).transpose().map_err(wrap)?;
    if left.dims() != right.dims() || left.dims() != gt.dims() {
        return Err(entry_err(format!(
            "size mismatch: left {:?}, right {:?}, gt {:?}",
            left.dims(),
            right.dims(),
            gt.dims()
        )));
    }
    if let Some(m) = &mask {
        if (m.width, m.height) != left.dims() {
            return Err(entry_err("nonocc mask size differs from the images".into()));
        }
    }
    Ok(StereoPair {
        name: name.to_string(),
        left,
        right,
        gt,
        mask,
        max_disp,
    })
}

/// Loads every configured image; failures are kept per entry.
pub fn load_dataset(dataset: &Path, cfg: &PipelineConfig) -> Vec<(String, Result<StereoPair>)> {
    cfg.images
        .iter()
        .map(|(name, spec)| (name.clone(), load_pair(dataset, name, spec.max_disp, spec.scale)))
        .collect()
}

#[derive(Debug, Clone)]
pub struct CellOutput {
    pub stats: MismatchStats,
    pub disparity: DisparityMap,
    pub overlay: RgbImage,
}

#[derive(Debug, Clone)]
pub struct Cell {
    pub name: String,
    pub algorithm: Algorithm,
    pub noise: f64,
    pub result: std::result::Result<CellOutput, String>,
}

/// Runs one pair at one noise level through one algorithm.
pub fn run_cell(
    pair: &StereoPair,
    algorithm: Algorithm,
    level: f64,
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<CellOutput> {
    let left = add_gaussian_noise(&pair.left, level, derive_seed(seed, &pair.name, level, 0))?;
    let right = match cfg.noise_views {
        NoiseViews::Both => add_gaussian_noise(&pair.right, level, derive_seed(seed, &pair.name, level, 1))?,
        NoiseViews::Left => pair.right.clone(),
    };
    let params = cfg.match_params_for(algorithm, pair.max_disp);
    let out = match_pair(&left, &right, &params)?;
    let mask = pair.mask.as_ref();
    let stats = mismatch_rate(&out.disparity, &pair.gt, mask, cfg.bad_thresh)?;
    let overlay = error_overlay(&out.disparity, &pair.gt, &pair.left, mask, cfg.bad_thresh)?;
    Ok(CellOutput {
        stats,
        disparity: out.disparity,
        overlay,
    })
}

/// Evaluates every (algorithm, level, pair) cell. Cells run in parallel;
/// the returned order is algorithm-major, then level, then pair, and does
/// not depend on scheduling. An empty level list means `[0]`.
pub fn noise_sweep(
    pairs: &[(String, Result<StereoPair>)],
    levels: &[f64],
    algorithms: &[Algorithm],
    cfg: &PipelineConfig,
    seed: u64,
) -> Vec<Cell> {
    let levels: &[f64] = if levels.is_empty() { &[0.0] } else { levels };
    let jobs: Vec<(Algorithm, f64, usize)> = algorithms
        .iter()
        .flat_map(|&a| {
            levels
                .iter()
                .flat_map(move |&l| (0..pairs.len()).map(move |i| (a, l, i)))
        })
        .collect();
    jobs.into_par_iter()
        .map(|(algorithm, noise, i)| {
            let (name, pair) = &pairs[i];
            let result = match pair {
                Ok(pair) => run_cell(pair, algorithm, noise, cfg, seed).map_err(|e| e.to_string()),
                Err(e) => Err(e.to_string()),
            };
            Cell {
                name: name.clone(),
                algorithm,
                noise,
                result,
            }
        })
        .collect()
}

pub fn report_from_cells(cells: &[Cell], bad_thresh: f64) -> EvalReport {
    let mut report = EvalReport::new(bad_thresh);
    for c in cells {
        match &c.result {
            Ok(out) => report.entries.push(EvalEntry {
                name: c.name.clone(),
                algorithm: c.algorithm,
                noise: c.noise,
                evaluated: out.stats.evaluated,
                bad: out.stats.bad,
                percent: out.stats.percent,
            }),
            Err(message) => report.failures.push(CellFailure {
                name: c.name.clone(),
                algorithm: c.algorithm,
                noise: c.noise,
                message: message.clone(),
            }),
        }
    }
    report
}

pub fn overlay_path(dir: &Path, cell: &Cell) -> PathBuf {
    dir.join(format!("{}_{}_{}.ppm", cell.name, cell.algorithm, cell.noise))
}

/// Full benchmark: load the dataset, sweep, write overlays if configured.
pub fn run_bench(cfg: &PipelineConfig, dataset: &Path, algorithms: &[Algorithm]) -> Result<EvalReport> {
    let pairs = load_dataset(dataset, cfg);
    let cells = noise_sweep(&pairs, &cfg.noise_levels, algorithms, cfg, cfg.seed);
    if let Some(dir) = &cfg.overlay_dir {
        std::fs::create_dir_all(dir).map_err(Error::io(dir))?;
        for cell in &cells {
            if let Ok(out) = &cell.result {
                save_rgb(&out.overlay, overlay_path(dir, cell))?;
            }
        }
    }
    Ok(report_from_cells(&cells, cfg.bad_thresh))
}
