//! Pipeline configuration: defaults, key-value file format and validation.
//!
//! Precedence is CLI flags over config-file values over built-in defaults.
//! Every field is dumped by [`PipelineConfig::to_toml`] and re-parses to an
//! equal config.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vsi_stereo_core::aggregation::{CrossParams, ThresholdMode};
use vsi_stereo_core::cost::CostParams;
use vsi_stereo_core::gradient::{GradientOptions, Kernel, MagnitudeMode};
use vsi_stereo_core::pipeline::{Algorithm, MatchParams};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmName {
    Vsi,
    Census,
}

impl From<AlgorithmName> for Algorithm {
    fn from(a: AlgorithmName) -> Self {
        match a {
            AlgorithmName::Vsi => Algorithm::Vsi,
            AlgorithmName::Census => Algorithm::Census,
        }
    }
}

impl From<Algorithm> for AlgorithmName {
    fn from(a: Algorithm) -> Self {
        match a {
            Algorithm::Vsi => AlgorithmName::Vsi,
            Algorithm::Census => AlgorithmName::Census,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TemplateName {
    Sobel,
    Prewitt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MagnitudeName {
    Euclidean,
    AbsSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdModeName {
    Relax,
    Tighten,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseViews {
    Both,
    Left,
}

/// Search range and ground-truth scale of one benchmark image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchImage {
    pub max_disp: usize,
    pub scale: f64,
}

/// Standard benchmark pairs with their search ranges and scales.
pub fn standard_images() -> BTreeMap<String, BenchImage> {
    [
        ("cones", 60, 4.0),
        ("teddy", 60, 4.0),
        ("tsukuba", 16, 16.0),
        ("venus", 20, 8.0),
    ]
    .into_iter()
    .map(|(n, max_disp, scale)| (n.to_string(), BenchImage { max_disp, scale }))
    .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub algorithm: AlgorithmName,
    pub max_disp: usize,
    pub gt_scale: f64,

    pub census_radius: usize,
    pub lambda_s: f64,
    pub lambda_g: f64,
    pub gate_t: f64,
    pub penalty: f64,

    pub template: TemplateName,
    pub magnitude: MagnitudeName,

    pub l1: usize,
    pub l2: usize,
    pub tau1: f64,
    pub tau2: f64,
    pub tau3: f64,
    pub alpha: f64,
    pub threshold_mode: ThresholdModeName,
    pub agg_passes: usize,
    pub box_radius: usize,

    pub t_lr: f64,
    pub median_filter: bool,
    pub bad_thresh: f64,

    pub noise_levels: Vec<f64>,
    pub noise_views: NoiseViews,
    pub seed: u64,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overlay_dir: Option<PathBuf>,

    pub images: BTreeMap<String, BenchImage>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let m = MatchParams::default();
        PipelineConfig {
            algorithm: AlgorithmName::Vsi,
            max_disp: m.cost.max_disp,
            gt_scale: 4.0,
            census_radius: m.cost.census_radius,
            lambda_s: m.cost.lambda_s,
            lambda_g: m.cost.lambda_g,
            gate_t: m.cost.gate_t,
            penalty: m.cost.penalty,
            template: TemplateName::Sobel,
            magnitude: MagnitudeName::Euclidean,
            l1: m.cross.l1,
            l2: m.cross.l2,
            tau1: m.cross.tau1,
            tau2: m.cross.tau2,
            tau3: m.cross.tau3,
            alpha: m.cross.alpha,
            threshold_mode: ThresholdModeName::Relax,
            agg_passes: m.agg_passes,
            box_radius: m.box_radius,
            t_lr: m.t_lr,
            median_filter: m.median,
            bad_thresh: 1.0,
            noise_levels: vec![0.0],
            noise_views: NoiseViews::Both,
            seed: 0,
            out: None,
            report: None,
            overlay_dir: None,
            images: standard_images(),
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: PipelineConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Matcher parameters for `algorithm` with search range `max_disp`.
    pub fn match_params_for(&self, algorithm: Algorithm, max_disp: usize) -> MatchParams {
        let (hx, hy) = match self.template {
            TemplateName::Sobel => (Kernel::SOBEL_X, Kernel::SOBEL_Y),
            TemplateName::Prewitt => (Kernel::PREWITT_X, Kernel::PREWITT_Y),
        };
        MatchParams {
            algorithm,
            cost: CostParams {
                census_radius: self.census_radius,
                max_disp,
                lambda_s: self.lambda_s,
                lambda_g: self.lambda_g,
                gate_t: self.gate_t,
                penalty: self.penalty,
            },
            cross: CrossParams {
                l1: self.l1,
                l2: self.l2,
                tau1: self.tau1,
                tau2: self.tau2,
                tau3: self.tau3,
                alpha: self.alpha,
                mode: match self.threshold_mode {
                    ThresholdModeName::Relax => ThresholdMode::Relax,
                    ThresholdModeName::Tighten => ThresholdMode::Tighten,
                },
            },
            gradient: GradientOptions {
                hx,
                hy,
                magnitude: match self.magnitude {
                    MagnitudeName::Euclidean => MagnitudeMode::Euclidean,
                    MagnitudeName::AbsSum => MagnitudeMode::AbsSum,
                },
            },
            agg_passes: self.agg_passes,
            box_radius: self.box_radius,
            t_lr: self.t_lr,
            median: self.median_filter,
        }
    }

    pub fn match_params(&self) -> MatchParams {
        self.match_params_for(self.algorithm.into(), self.max_disp)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |field: &str, why: &str| Err(Error::Config(format!("invalid `{field}`: {why}")));
        self.match_params()
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        if !(self.gt_scale > 0.0 && self.gt_scale.is_finite()) {
            return invalid("gt_scale", "must be positive");
        }
        if !(self.bad_thresh > 0.0) {
            return invalid("bad_thresh", "must be positive");
        }
        if let Some(l) = self.noise_levels.iter().find(|l| !(**l >= 0.0 && l.is_finite())) {
            return invalid("noise_levels", &format!("{l} is not a non-negative percentage"));
        }
        for (name, img) in &self.images {
            if img.max_disp == 0 {
                return invalid(&format!("images.{name}.max_disp"), "must be at least 1");
            }
            if !(img.scale > 0.0 && img.scale.is_finite()) {
                return invalid(&format!("images.{name}.scale"), "must be positive");
            }
        }
        Ok(())
    }
}
