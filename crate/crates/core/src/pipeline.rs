//! End-to-end matcher: gradient → cost → aggregation → winner-take-all for
//! both views, then left–right check, hole filling and optional median.
//!
//! The right-view map is computed by mirroring both images, swapping them,
//! running the same left-reference matcher and mirroring the result back.

use alloc::boxed::Box;
use core::fmt;
use core::str::FromStr;

use crate::aggregation::{aggregate_fixed, aggregate_passes, grow_arms, CrossArms, CrossParams};
use crate::cost::{census_cost_volume, vsi_cost_volume, CostParams, CostVolume};
use crate::disparity::{fill_invalid, left_right_check, median_filter_3x3, winner_take_all, DisparityMap};
use crate::gradient::{gradient_field_with, GradientField, GradientOptions};
use crate::{Error, Image, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Gradient-gated census cost with direction-guided cross aggregation.
    Vsi,
    /// Plain census cost with fixed-window aggregation.
    Census,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Census, Algorithm::Vsi];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Vsi => "vsi",
            Algorithm::Census => "census",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vsi" => Ok(Algorithm::Vsi),
            "census" => Ok(Algorithm::Census),
            _ => Err(Error::param("algorithm", "expected `vsi` or `census`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Gradient,
    Cost,
    Aggregation,
    Selection,
    Consistency,
    Fill,
    Median,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Gradient => "gradient",
            Stage::Cost => "cost",
            Stage::Aggregation => "aggregation",
            Stage::Selection => "selection",
            Stage::Consistency => "consistency",
            Stage::Fill => "fill",
            Stage::Median => "median",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum View {
    Left,
    Right,
}

/// Receives stage boundaries and intermediate products. All methods default
/// to no-ops. Right-view products are in mirrored coordinates.
pub trait Observer {
    fn begin(&mut self, _view: View, _stage: Stage) {}
    fn end(&mut self, _view: View, _stage: Stage) {}
    fn gradient(&mut self, _view: View, _field: &GradientField) {}
    fn cost(&mut self, _view: View, _vol: &CostVolume) {}
    fn arms(&mut self, _view: View, _arms: &CrossArms) {}
}

impl Observer for () {}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchParams {
    pub algorithm: Algorithm,
    pub cost: CostParams,
    pub cross: CrossParams,
    pub gradient: GradientOptions,
    /// Cross aggregation passes.
    pub agg_passes: usize,
    /// Box radius of the census baseline's fixed window.
    pub box_radius: usize,
    pub t_lr: f64,
    pub median: bool,
}

impl Default for MatchParams {
    fn default() -> Self {
        MatchParams {
            algorithm: Algorithm::Vsi,
            cost: CostParams::default(),
            cross: CrossParams::default(),
            gradient: GradientOptions::default(),
            agg_passes: 2,
            box_radius: 2,
            t_lr: 1.0,
            median: true,
        }
    }
}

impl MatchParams {
    pub fn validate(&self) -> Result<()> {
        self.cost.validate()?;
        self.cross.validate()?;
        if !(self.t_lr >= 0.0) {
            return Err(Error::param("t_lr", "must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchOutput {
    /// Winner-take-all left-view map before refinement.
    pub left_raw: DisparityMap,
    /// Winner-take-all right-view map, in normal (unmirrored) coordinates.
    pub right_raw: DisparityMap,
    /// Left map after the consistency check (invalid pixels marked).
    pub checked: DisparityMap,
    /// Final map: filled and optionally median-filtered.
    pub disparity: DisparityMap,
}

fn staged<T>(obs: &mut dyn Observer, view: View, stage: Stage, f: impl FnOnce() -> Result<T>) -> Result<T> {
    obs.begin(view, stage);
    let out = f().map_err(|e| Error::InStage {
        stage: stage.as_str(),
        source: Box::new(e),
    });
    obs.end(view, stage);
    out
}

/// Left-reference disparity selection (no refinement).
pub fn select_disparity(
    reference: &Image,
    target: &Image,
    params: &MatchParams,
    view: View,
    obs: &mut dyn Observer,
) -> Result<DisparityMap> {
    params.validate()?;
    Error::check_dims(reference.dims(), target.dims())?;
    let aggregated = match params.algorithm {
        Algorithm::Vsi => {
            let (gr, gt) = staged(obs, view, Stage::Gradient, || {
                Ok((
                    gradient_field_with(reference, &params.gradient)?,
                    gradient_field_with(target, &params.gradient)?,
                ))
            })?;
            obs.gradient(view, &gr);
            let vol = staged(obs, view, Stage::Cost, || {
                vsi_cost_volume(reference, target, &gr, &gt, &params.cost)
            })?;
            obs.cost(view, &vol);
            let arms = staged(obs, view, Stage::Aggregation, || {
                grow_arms(reference, &gr, &params.cross)
            })?;
            obs.arms(view, &arms);
            staged(obs, view, Stage::Aggregation, || {
                aggregate_passes(&vol, &arms, params.agg_passes)
            })?
        }
        Algorithm::Census => {
            let vol = staged(obs, view, Stage::Cost, || {
                census_cost_volume(reference, target, &params.cost)
            })?;
            obs.cost(view, &vol);
            staged(obs, view, Stage::Aggregation, || {
                Ok(aggregate_fixed(&vol, params.box_radius))
            })?
        }
    };
    staged(obs, view, Stage::Selection, || Ok(winner_take_all(&aggregated)))
}

/// Runs the full two-view pipeline.
pub fn match_pair(left: &Image, right: &Image, params: &MatchParams) -> Result<MatchOutput> {
    match_pair_observed(left, right, params, &mut ())
}

pub fn match_pair_observed(
    left: &Image,
    right: &Image,
    params: &MatchParams,
    obs: &mut dyn Observer,
) -> Result<MatchOutput> {
    params.validate()?;
    Error::check_dims(left.dims(), right.dims())?;
    let left_raw = select_disparity(left, right, params, View::Left, obs)?;
    let right_raw = select_disparity(
        &right.flip_horizontal(),
        &left.flip_horizontal(),
        params,
        View::Right,
        obs,
    )?
    .flip_horizontal();
    let checked = staged(obs, View::Left, Stage::Consistency, || {
        left_right_check(&left_raw, &right_raw, params.t_lr)
    })?;
    let filled = staged(obs, View::Left, Stage::Fill, || Ok(fill_invalid(&checked)))?;
    let disparity = if params.median {
        staged(obs, View::Left, Stage::Median, || Ok(median_filter_3x3(&filled)))?
    } else {
        filled
    };
    Ok(MatchOutput {
        left_raw,
        right_raw,
        checked,
        disparity,
    })
}
