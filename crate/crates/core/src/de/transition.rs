//! Aggregate transition functions, the check-node message update and the scaling factors.

use super::profile::ComponentProfile;
use crate::math::q_function;

/// Default cap on scaling factors.
pub const WEIGHT_CAP: f64 = 64.0;

/// Transition probabilities averaged over the binomial distribution of errors
/// among the other `n-1` positions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transitions {
    pub f_e: f64,
    pub f_c: f64,
    pub f_eps: f64,
    /// Probability a correct bit is decoded wrong.
    pub f_qe: f64,
    /// Probability a wrong bit is decoded right.
    pub f_pc: f64,
}

impl ComponentProfile {
    /// Transition functions for input message error probability `x` and channel crossover `p_ch`.
    pub fn transitions(&self, x: f64, p_ch: f64) -> Transitions {
        let n = self.n;
        let mut acc = [0.0f64; 6];
        let mut add = |i: usize, b: f64| {
            acc[0] += b * self.p_e[i];
            acc[1] += b * self.p_c[i];
            acc[2] += b * self.p_eps[i];
            acc[3] += b * self.q_e[i];
            acc[4] += b * self.q_c[i];
            acc[5] += b * self.q_eps[i];
        };
        if x <= 0.0 {
            add(0, 1.0);
        } else if x >= 1.0 {
            add(n - 1, 1.0);
        } else {
            let (lx, l1x) = (x.ln(), (-x).ln_1p());
            let lb = self.ln_binom();
            for i in 0..n {
                let b = (lb[i] + i as f64 * lx + (n - 1 - i) as f64 * l1x).exp();
                if b != 0.0 {
                    add(i, b);
                }
            }
        }
        let [pe, pc, peps, qe, qc, qeps] = acc;
        Transitions {
            f_e: p_ch * pe + (1.0 - p_ch) * qe,
            f_c: p_ch * pc + (1.0 - p_ch) * qc,
            f_eps: p_ch * peps + (1.0 - p_ch) * qeps,
            f_qe: qe,
            f_pc: pc,
        }
    }
}

/// Channel quantities the recursions need.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeChannel {
    pub sigma: f64,
    pub p_ch: f64,
}

impl DeChannel {
    pub fn new(sigma: f64) -> Self {
        Self {
            sigma,
            p_ch: q_function(1.0 / sigma),
        }
    }
}

impl From<&crate::channel::ChannelParams> for DeChannel {
    fn from(p: &crate::channel::ChannelParams) -> Self {
        Self::new(p.sigma())
    }
}

/// Outgoing message error probability of a check node given its transitions and weight `w`.
pub fn message_update(tr: &Transitions, ch: DeChannel, w: f64) -> f64 {
    let (s, p) = (ch.sigma, ch.p_ch);
    let x = tr.f_qe * (q_function(1.0 / s - s * w / 2.0) - p)
        + tr.f_pc * q_function(1.0 / s + s * w / 2.0)
        + (1.0 - tr.f_pc) * p;
    x.clamp(0.0, 1.0)
}

/// How a scaling factor was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightFlag {
    Normal,
    /// Hit the cap (including `f^e` underflowing to zero).
    Capped,
    /// `f^c = 0`; the weight was set to zero.
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Weight {
    pub w: f64,
    pub flag: WeightFlag,
}

/// Rule used to pick the scaling factor in each half-iteration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightRule {
    /// LLR of the binary error-and-erasure channel seen by the BDD output.
    #[default]
    ErasureLlr,
    /// Numerically minimise the outgoing message error probability over `[0, cap]`.
    Minimize,
}

/// `log(f^c / f^e)` clamped to `[0, cap]`.
pub fn scaling_factor(tr: &Transitions, cap: f64) -> Weight {
    if tr.f_c <= 0.0 {
        return Weight {
            w: 0.0,
            flag: WeightFlag::Degenerate,
        };
    }
    if tr.f_e <= 0.0 {
        return Weight {
            w: cap,
            flag: WeightFlag::Capped,
        };
    }
    let w = (tr.f_c / tr.f_e).ln();
    if w >= cap {
        Weight {
            w: cap,
            flag: WeightFlag::Capped,
        }
    } else {
        Weight {
            w: w.max(0.0),
            flag: WeightFlag::Normal,
        }
    }
}

/// Golden-section search for the weight minimising [`message_update`].
pub fn minimizing_weight(tr: &Transitions, ch: DeChannel, cap: f64) -> Weight {
    let f = |w: f64| message_update(tr, ch, w);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, cap);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if b - a < 1e-12 {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let w = (a + b) / 2.0;
    Weight {
        w,
        flag: if cap - w < 1e-6 {
            WeightFlag::Capped
        } else {
            WeightFlag::Normal
        },
    }
}

/// One check-node half-step: weight from the input, then the updated error probability.
pub fn cn_half_step(
    profile: &ComponentProfile,
    x_in: f64,
    ch: DeChannel,
    cap: f64,
    rule: WeightRule,
) -> (f64, Weight) {
    let tr = profile.transitions(x_in, ch.p_ch);
    let w = match rule {
        WeightRule::ErasureLlr => scaling_factor(&tr, cap),
        WeightRule::Minimize => minimizing_weight(&tr, ch, cap),
    };
    (message_update(&tr, ch, w.w), w)
}
