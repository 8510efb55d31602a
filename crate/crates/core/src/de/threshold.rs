use super::gldpc::{run_gldpc, GldpcConfig};
use super::profile::ComponentProfile;
use super::sc::{run_sc, ScConfig};
use crate::channel::ChannelParams;
use crate::error::{Error, Result};

/// Bisection on Eb/N0 (dB) for the boundary of a monotone success predicate.
///
/// `lo_db` must fail and `hi_db` must succeed. Returns the midpoint once the
/// bracket is at most `tol_db` wide.
pub fn bisect_threshold<F>(lo_db: f64, hi_db: f64, tol_db: f64, mut success: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<bool>,
{
    if !(tol_db > 0.0) || !(lo_db < hi_db) {
        return Err(Error::InvalidParameter(format!(
            "need lo < hi and tol > 0, got [{lo_db}, {hi_db}], tol {tol_db}"
        )));
    }
    let (s_lo, s_hi) = (success(lo_db)?, success(hi_db)?);
    if s_lo || !s_hi {
        return Err(Error::Bracket {
            lo_db,
            hi_db,
            detail: format!("success at lo: {s_lo}, success at hi: {s_hi}"),
        });
    }
    let (mut lo, mut hi) = (lo_db, hi_db);
    while hi - lo > tol_db {
        let mid = 0.5 * (lo + hi);
        if success(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Threshold of the GLDPC ensemble with the given component tables.
pub fn gldpc_threshold(
    profile: &ComponentProfile,
    rate: f64,
    cfg: &GldpcConfig,
    bracket: (f64, f64),
    tol_db: f64,
) -> Result<f64> {
    bisect_threshold(bracket.0, bracket.1, tol_db, |db| {
        Ok(run_gldpc(profile, &ChannelParams::new(db, rate)?, cfg).converged)
    })
}

/// Threshold of the coupled ensemble under sliding-window DE.
pub fn sc_threshold(
    profile: &ComponentProfile,
    rate: f64,
    cfg: &ScConfig,
    bracket: (f64, f64),
    tol_db: f64,
) -> Result<f64> {
    bisect_threshold(bracket.0, bracket.1, tol_db, |db| {
        Ok(run_sc(profile, &ChannelParams::new(db, rate)?, cfg).converged)
    })
}
