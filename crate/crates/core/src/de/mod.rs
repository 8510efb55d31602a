//! Density evolution for the GLDPC ensemble (product codes) and the spatially
//! coupled GLDPC ensemble with coupling width 2 (staircase codes) under iBDD-SR.

mod gldpc;
mod profile;
mod sc;
mod threshold;
mod transition;

pub use gldpc::{de_step_gldpc, run_gldpc, DeState, GldpcConfig};
pub use profile::{f1, f2, ComponentProfile, SumRange};
pub use sc::{de_step_sc, run_sc, RightBoundary, ScConfig, ScSlide, ScStep};
pub use threshold::{bisect_threshold, gldpc_threshold, sc_threshold};
pub use transition::{
    cn_half_step, message_update, minimizing_weight, scaling_factor, DeChannel, Transitions,
    Weight, WeightFlag, WeightRule, WEIGHT_CAP,
};

use serde::{Deserialize, Serialize};

use crate::bch::BchCode;
use crate::error::{Error, Result};

/// Rate used for the noise variance in DE: every bit takes part in two component
/// codes, so the ensemble rate is `1 - 2 (n - k) / n`.
pub fn design_rate(n: usize, k: usize) -> f64 {
    1.0 - 2.0 * (n - k) as f64 / n as f64
}

/// Builds the transition tables for `code`, using the exact weight enumerator when the
/// code is small enough to enumerate and the binomial approximation otherwise.
pub fn profile_for(code: &BchCode, range: SumRange) -> Result<ComponentProfile> {
    let a = if code.n() < 63 {
        crate::bch::WeightEnumerator::exact(&code.weight_enumerator_exact()?)
    } else {
        code.weight_enumerator_approx()
    };
    ComponentProfile::with_range(code.t(), &a, range)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ensemble {
    Gldpc,
    Sc,
}

/// Result of one DE run, serialisable for schedule consumers and plotting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeProfile {
    pub ensemble: Ensemble,
    pub n: usize,
    pub t: usize,
    pub ebn0_db: f64,
    pub rate: f64,
    pub sigma: f64,
    pub p_ch: f64,
    /// Row/column weights per iteration (GLDPC only).
    pub weights_row: Vec<f64>,
    pub weights_col: Vec<f64>,
    /// Row/column error probabilities per iteration (GLDPC only).
    pub trajectory: Vec<DeState>,
    /// Per-slide window traces (SC only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub slides: Vec<ScSlide>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    /// First slide after which the window schedule no longer changes (SC only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    pub converged: bool,
    pub final_error: f64,
    /// Number of half-steps whose weight hit the degenerate `f^c = 0` case.
    pub degenerate_weights: usize,
    pub threshold: Option<f64>,
}

impl DeProfile {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Whether the schedule may be used by a finite-length decoder: the error
    /// probability must not grow over the iterations and must end below `p_ch`.
    pub fn check_available(&self) -> Result<()> {
        let fail = |reason: String| {
            Err(Error::ScheduleUnavailable {
                ebn0_db: self.ebn0_db,
                reason,
            })
        };
        match self.ensemble {
            Ensemble::Gldpc => {
                let mut prev = self.p_ch;
                for (l, s) in self.trajectory.iter().enumerate() {
                    let hi = prev * (1.0 + 1e-12);
                    if s.x_row > hi || s.x_col > s.x_row * (1.0 + 1e-12) {
                        return fail(format!("error probability increases at iteration {}", l + 1));
                    }
                    prev = s.x_col;
                }
            }
            Ensemble::Sc => {
                if let Some((s, sl)) = self
                    .slides
                    .iter()
                    .enumerate()
                    .find(|(_, sl)| !(sl.exit_error < self.p_ch))
                {
                    return fail(format!(
                        "emitted position error {:.3e} not below p_ch at slide {s}",
                        sl.exit_error
                    ));
                }
            }
        }
        if !(self.final_error < self.p_ch) {
            return fail(format!(
                "final error {:.3e} not below p_ch {:.3e}",
                self.final_error, self.p_ch
            ));
        }
        Ok(())
    }
}
