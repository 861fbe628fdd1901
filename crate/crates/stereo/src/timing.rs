use std::time::{Duration, Instant};

use vsi_stereo_core::aggregation::CrossArms;
use vsi_stereo_core::cost::CostVolume;
use vsi_stereo_core::gradient::GradientField;
use vsi_stereo_core::pipeline::{Observer, Stage, View};

/// Accumulates wall time per (view, stage) and keeps the left-view
/// intermediates for optional dumps.
#[derive(Default)]
pub struct StageTimer {
    started: Option<Instant>,
    pub totals: Vec<(View, Stage, Duration)>,
    pub keep_intermediates: bool,
    pub left_cost: Option<CostVolume>,
    pub left_arms: Option<CrossArms>,
    pub left_gradient: Option<GradientField>,
}

impl StageTimer {
    pub fn new(keep_intermediates: bool) -> Self {
        StageTimer {
            keep_intermediates,
            ..Default::default()
        }
    }

    pub fn report(&self) -> String {
        let mut s = String::new();
        for (view, stage, d) in &self.totals {
            let view = match view {
                View::Left => "left",
                View::Right => "right",
            };
            s += &format!("{view:>5} {:<12} {:>9.2} ms\n", stage.as_str(), d.as_secs_f64() * 1e3);
        }
        s
    }
}

impl Observer for StageTimer {
    fn begin(&mut self, _view: View, _stage: Stage) {
        self.started = Some(Instant::now());
    }

    fn end(&mut self, view: View, stage: Stage) {
        let Some(t0) = self.started.take() else { return };
        let dt = t0.elapsed();
        match self.totals.iter_mut().find(|(v, s, _)| *v == view && *s == stage) {
            Some((_, _, total)) => *total += dt,
            None => self.totals.push((view, stage, dt)),
        }
    }

    fn gradient(&mut self, view: View, field: &GradientField) {
        if self.keep_intermediates && view == View::Left {
            self.left_gradient = Some(field.clone());
        }
    }

    fn cost(&mut self, view: View, vol: &CostVolume) {
        if self.keep_intermediates && view == View::Left {
            self.left_cost = Some(vol.clone());
        }
    }

    fn arms(&mut self, view: View, arms: &CrossArms) {
        if self.keep_intermediates && view == View::Left {
            self.left_arms = Some(arms.clone());
        }
    }
}
