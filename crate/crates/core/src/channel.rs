//! Binary-input AWGN channel and the LLR / hard-decision mappings.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{BitMatrix, LlrMatrix};
pub use crate::math::q_function;

/// Operating point of the bi-AWGN channel for a code of rate `rate`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ChannelParams {
    pub ebn0_db: f64,
    pub rate: f64,
    /// Noise variance `1 / (2 R Eb/N0)`.
    pub sigma2: f64,
}

impl ChannelParams {
    pub fn new(ebn0_db: f64, rate: f64) -> Result<Self> {
        if !ebn0_db.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Eb/N0 must be finite, got {ebn0_db}"
            )));
        }
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "code rate must lie in (0, 1], got {rate}"
            )));
        }
        let sigma2 = 1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0));
        Ok(Self {
            ebn0_db,
            rate,
            sigma2,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }

    /// Hard-decision crossover probability `Q(1/sigma)`.
    pub fn p_ch(&self) -> f64 {
        q_function(1.0 / self.sigma())
    }

    /// LLR of a channel output `y` (positive favours bit 0).
    #[inline]
    pub fn llr(&self, y: f64) -> f64 {
        2.0 * y / self.sigma2
    }
}

/// Sends `bits` through the channel with unit-variance Gaussian samples drawn from `noise`.
///
/// `y = (-1)^c + sigma * z`, `L = 2 y / sigma^2`.
pub fn transmit_with(
    bits: &BitMatrix,
    params: &ChannelParams,
    mut noise: impl FnMut() -> f64,
) -> LlrMatrix {
    let sigma = params.sigma();
    bits.map(|&c| {
        let x = if c == 0 { 1.0 } else { -1.0 };
        params.llr(x + sigma * noise())
    })
}

pub fn transmit<R: Rng + ?Sized>(bits: &BitMatrix, params: &ChannelParams, rng: &mut R) -> LlrMatrix {
    transmit_with(bits, params, || rng.sample::<f64, _>(StandardNormal))
}

/// Fills `out` with the LLRs of `bits` (same layout), reusing its allocation.
pub fn transmit_slice<R: Rng + ?Sized>(
    bits: &[u8],
    params: &ChannelParams,
    rng: &mut R,
    out: &mut [f64],
) {
    let sigma = params.sigma();
    for (o, &c) in out.iter_mut().zip(bits) {
        let x = if c == 0 { 1.0 } else { -1.0 };
        let z: f64 = rng.sample(StandardNormal);
        *o = params.llr(x + sigma * z);
    }
}

/// The mapping `B(L)`: `0` for `L >= 0` (ties resolve to 0), `1` for `L < 0`.
#[inline]
pub fn hard_bit(l: f64) -> u8 {
    (l < 0.0) as u8
}

pub fn harden(llr: &LlrMatrix) -> BitMatrix {
    llr.map(|&l| hard_bit(l))
}
