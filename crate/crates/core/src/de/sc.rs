//! Window DE for the coupled ensemble with coupling width 2.
//!
//! Variable-node position `a` is connected to check-node positions `a` and `a+1`;
//! check node `a` therefore sees the average of the messages from positions `a-1`
//! and `a`. Positions outside the decoding window contribute error probability 0.

use serde::{Deserialize, Serialize};

use super::profile::ComponentProfile;
use super::transition::{cn_half_step, DeChannel, Weight, WeightFlag, WeightRule, WEIGHT_CAP};
use super::{DeProfile, Ensemble};
use crate::channel::ChannelParams;

/// Treatment of the check node just past the newest in-window position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RightBoundary {
    /// Not yet received: it sends nothing, so the newest position keeps its channel value there.
    #[default]
    Open,
    /// Decoded like any other check node, with the outside neighbour frozen at 0.
    Frozen,
}

/// Output of one window iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct ScStep {
    /// Updated error probabilities (unchanged outside the window).
    pub x: Vec<f64>,
    /// Weight of check node `a` (between positions `a-1` and `a`), `a = 0..=len`;
    /// `None` where the check node was not decoded.
    pub cn_weights: Vec<Option<Weight>>,
}

/// One parallel (Jacobi) update of all in-window positions.
pub fn de_step_sc(
    profile: &ComponentProfile,
    x: &[f64],
    in_window: &[bool],
    boundary: RightBoundary,
    ch: DeChannel,
    cap: f64,
    rule: WeightRule,
) -> ScStep {
    assert_eq!(x.len(), in_window.len(), "window mask length");
    let len = x.len();
    let xt = |a: isize| -> f64 {
        if a < 0 || a as usize >= len || !in_window[a as usize] {
            0.0
        } else {
            x[a as usize]
        }
    };
    let last_in = in_window.iter().rposition(|&b| b);
    let mut g = vec![ch.p_ch; len + 1];
    let mut cn_weights = vec![None; len + 1];
    for c in 0..=len {
        let left = c.checked_sub(1).is_some_and(|a| in_window[a]);
        let right = c < len && in_window[c];
        if !left && !right {
            continue;
        }
        if boundary == RightBoundary::Open && !right && Some(c - 1) == last_in {
            continue;
        }
        let input = (xt(c as isize - 1) + xt(c as isize)) / 2.0;
        let (out, w) = cn_half_step(profile, input, ch, cap, rule);
        g[c] = out;
        cn_weights[c] = Some(w);
    }
    let mut next = x.to_vec();
    for a in 0..len {
        if in_window[a] {
            next[a] = (g[a] + g[a + 1]) / 2.0;
        }
    }
    ScStep {
        x: next,
        cn_weights,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScConfig {
    /// Number of coupled positions inside the window.
    pub window: usize,
    /// Iterations per window position before sliding.
    pub iterations: usize,
    pub slides: usize,
    pub boundary: RightBoundary,
    pub cap: f64,
    pub rule: WeightRule,
    /// Success when every position leaving the window after warm-up is below this.
    pub target: f64,
    /// Absolute tolerance for declaring the window schedule slide-invariant.
    pub schedule_tol: f64,
}

impl Default for ScConfig {
    fn default() -> Self {
        Self {
            window: 6,
            iterations: 20,
            slides: 18,
            boundary: RightBoundary::Open,
            cap: WEIGHT_CAP,
            rule: WeightRule::ErasureLlr,
            target: 1e-9,
            schedule_tol: 1e-6,
        }
    }
}

/// Trace of one window position before sliding.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScSlide {
    /// `weights[a][l]`: weight of check position `a` (pairing in-window positions
    /// `a-1` and `a`, with `-1` the frozen one) in iteration `l`.
    pub weights: Vec<Vec<f64>>,
    /// Error probability of the oldest position when it leaves the window.
    pub exit_error: f64,
    /// Error probabilities at the end of the slide.
    pub x: Vec<f64>,
    /// Largest weight change relative to the previous slide.
    pub delta: Option<f64>,
}

/// Sliding-window DE: starts with all positions at `p_ch`, runs `iterations`
/// updates, emits the oldest position and appends a fresh one.
pub fn run_sc(profile: &ComponentProfile, params: &ChannelParams, cfg: &ScConfig) -> DeProfile {
    let ch = DeChannel::from(params);
    let wlen = cfg.window;
    let mask = vec![true; wlen];
    let mut x = vec![ch.p_ch; wlen];
    let mut slides: Vec<ScSlide> = Vec::with_capacity(cfg.slides);
    let mut degenerate = 0;
    for _ in 0..cfg.slides {
        let mut weights = vec![Vec::with_capacity(cfg.iterations); wlen];
        for _ in 0..cfg.iterations {
            let step = de_step_sc(profile, &x, &mask, cfg.boundary, ch, cfg.cap, cfg.rule);
            for (a, w) in step.cn_weights.iter().take(wlen).enumerate() {
                let w = w.expect("in-window check node");
                if w.flag == WeightFlag::Degenerate {
                    degenerate += 1;
                }
                weights[a].push(w.w);
            }
            x = step.x;
        }
        let delta = slides.last().map(|prev| {
            prev.weights
                .iter()
                .flatten()
                .zip(weights.iter().flatten())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        });
        slides.push(ScSlide {
            weights,
            exit_error: x[0],
            x: x.clone(),
            delta,
        });
        x.remove(0);
        x.push(ch.p_ch);
    }
    let horizon = (1..=slides.len()).find(|&s| {
        slides[s..]
            .iter()
            .all(|sl| sl.delta.is_some_and(|d| d < cfg.schedule_tol))
            && s < slides.len()
    });
    let steady = slides.iter().skip(wlen.saturating_sub(1).max(1));
    let final_error = steady.clone().map(|s| s.exit_error).fold(0.0, f64::max);
    let converged = slides.len() > wlen && steady.clone().all(|s| s.exit_error < cfg.target);
    DeProfile {
        ensemble: Ensemble::Sc,
        n: profile.n,
        t: profile.t,
        ebn0_db: params.ebn0_db,
        rate: params.rate,
        sigma: ch.sigma,
        p_ch: ch.p_ch,
        weights_row: Vec::new(),
        weights_col: Vec::new(),
        trajectory: Vec::new(),
        slides,
        window: Some(wlen),
        horizon,
        converged,
        final_error,
        degenerate_weights: degenerate,
        threshold: None,
    }
}
