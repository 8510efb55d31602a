use serde::{Deserialize, Serialize};

use super::profile::ComponentProfile;
use super::transition::{cn_half_step, message_update, DeChannel, WeightFlag, WeightRule, WEIGHT_CAP};
use super::{DeProfile, Ensemble};
use crate::channel::ChannelParams;

/// Message error probabilities after the row and column half of one iteration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeState {
    pub x_row: f64,
    pub x_col: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GldpcConfig {
    pub iterations: usize,
    pub cap: f64,
    pub rule: WeightRule,
    /// Success when the column error probability drops below this value.
    pub target: f64,
}

impl Default for GldpcConfig {
    fn default() -> Self {
        Self {
            iterations: 20,
            cap: WEIGHT_CAP,
            rule: WeightRule::ErasureLlr,
            target: 1e-9,
        }
    }
}

/// One full iteration with given weights, starting from the previous column output.
pub fn de_step_gldpc(
    profile: &ComponentProfile,
    x_col_prev: f64,
    w_row: f64,
    w_col: f64,
    ch: DeChannel,
) -> DeState {
    let x_row = message_update(&profile.transitions(x_col_prev, ch.p_ch), ch, w_row);
    let x_col = message_update(&profile.transitions(x_row, ch.p_ch), ch, w_col);
    DeState { x_row, x_col }
}

/// Runs DE with weights recomputed from the incoming error probability before every half-iteration.
pub fn run_gldpc(profile: &ComponentProfile, params: &ChannelParams, cfg: &GldpcConfig) -> DeProfile {
    let ch = DeChannel::from(params);
    let mut x = ch.p_ch;
    let mut out = DeProfile {
        ensemble: Ensemble::Gldpc,
        n: profile.n,
        t: profile.t,
        ebn0_db: params.ebn0_db,
        rate: params.rate,
        sigma: ch.sigma,
        p_ch: ch.p_ch,
        weights_row: Vec::with_capacity(cfg.iterations),
        weights_col: Vec::with_capacity(cfg.iterations),
        trajectory: Vec::with_capacity(cfg.iterations),
        slides: Vec::new(),
        window: None,
        horizon: None,
        converged: false,
        final_error: x,
        degenerate_weights: 0,
        threshold: None,
    };
    for _ in 0..cfg.iterations {
        let (x_row, wr) = cn_half_step(profile, x, ch, cfg.cap, cfg.rule);
        let (x_col, wc) = cn_half_step(profile, x_row, ch, cfg.cap, cfg.rule);
        for w in [wr, wc] {
            if w.flag == WeightFlag::Degenerate {
                out.degenerate_weights += 1;
            }
        }
        out.weights_row.push(wr.w);
        out.weights_col.push(wc.w);
        out.trajectory.push(DeState { x_row, x_col });
        x = x_col;
    }
    out.final_error = x;
    out.converged = x < cfg.target;
    out
}
