//! Decoder-transition probabilities of one bounded-distance component decoder.
//!
//! For a randomly selected bit of a length-`n` component word with `i` errors among
//! the other `n-1` positions, the tables give the probability that BDD leaves the
//! bit wrong (`e`), makes it right (`c`) or fails (`eps`), separately for a bit
//! that was initially in error (`P`) or initially correct (`Q`).

use crate::bch::WeightEnumerator;
use crate::error::{Error, Result};
use crate::math::ln_binomial;

/// `C(h, h-j) C(n-h-1, delta-j) / C(n-1, i)`; binomials with out-of-range entries are zero.
pub fn f1(n: usize, h: i64, j: i64, delta: i64, i: usize) -> f64 {
    ratio_ln(n, h, j, delta - j, i).exp()
}

/// `C(h, h-j) C(n-h-1, delta-j-1) / C(n-1, i)`.
pub fn f2(n: usize, h: i64, j: i64, delta: i64, i: usize) -> f64 {
    ratio_ln(n, h, j, delta - j - 1, i).exp()
}

fn ratio_ln(n: usize, h: i64, j: i64, outside: i64, i: usize) -> f64 {
    let n = n as i64;
    ln_binomial(h, h - j) + ln_binomial(n - h - 1, outside) - ln_binomial(n - 1, i as i64)
}

/// Which distance terms enter the miscorrection sums.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SumRange {
    /// Distances `0..=t`: also counts the event that the received word is itself a
    /// codeword, which makes the tables exact.
    #[default]
    Exact,
    /// Distances `1..=t` only.
    FromOne,
}

/// Precomputed `P^e, P^c, P^eps, Q^e, Q^c, Q^eps` for `i = 0..n-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentProfile {
    pub n: usize,
    pub t: usize,
    pub p_e: Vec<f64>,
    pub p_c: Vec<f64>,
    pub p_eps: Vec<f64>,
    pub q_e: Vec<f64>,
    pub q_c: Vec<f64>,
    pub q_eps: Vec<f64>,
    ln_binom: Vec<f64>,
}

impl ComponentProfile {
    pub fn new(t: usize, enumerator: &WeightEnumerator) -> Result<Self> {
        Self::with_range(t, enumerator, SumRange::Exact)
    }

    pub fn with_range(t: usize, enumerator: &WeightEnumerator, range: SumRange) -> Result<Self> {
        let n = enumerator.n();
        if let WeightEnumerator::Exact(a) = enumerator {
            if let Some(bad) = a.iter().find(|v| !v.is_finite() || **v < 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "weight enumerator entry {bad} is negative or not finite"
                )));
            }
        }
        if t == 0 || 2 * t + 2 > n {
            return Err(Error::InvalidParameter(format!(
                "component parameters n={n}, t={t} out of range"
            )));
        }
        let ln_a: Vec<f64> = (0..=n).map(|h| enumerator.ln_a(h)).collect();
        let first_delta: i64 = match range {
            SumRange::Exact => 0,
            SumRange::FromOne => 1,
        };
        let (ti, ni) = (t as i64, n as i64);
        let lnn = (n as f64).ln();
        // ln( weight_factor / n * A_w )
        let term = |w: i64, factor: i64| -> f64 {
            if w < 0 || w > ni || factor <= 0 {
                f64::NEG_INFINITY
            } else {
                (factor as f64).ln() - lnn + ln_a[w as usize]
            }
        };

        let mut p = Tables::new(n);
        let mut q = Tables::new(n);
        for i in 0..n {
            let ii = i as i64;
            // bit initially in error
            if ii <= ti - 1 {
                p.c[i] = 1.0;
            } else if ii <= ni - ti - 2 {
                let (mut se, mut sc) = (0.0, 0.0);
                for delta in first_delta..=ti {
                    for j in 0..=delta {
                        let h = ii - delta + 2 * j;
                        se += (term(h + 1, h + 1) + ratio_ln(n, h, j, delta - j, i)).exp();
                    }
                    for j in 0..delta {
                        let h = ii - delta + 2 * j + 1;
                        sc += (term(h, ni - h) + ratio_ln(n, h, j, delta - j - 1, i)).exp();
                    }
                }
                p.e[i] = se;
                p.c[i] = sc;
            } else {
                p.e[i] = 1.0;
            }
            // bit initially correct
            if ii <= ti {
                q.c[i] = 1.0;
            } else if ii <= ni - ti - 1 {
                let (mut se, mut sc) = (0.0, 0.0);
                for delta in first_delta..=ti {
                    for j in 0..=delta {
                        let h = ii - delta + 2 * j;
                        sc += (term(h, ni - h) + ratio_ln(n, h, j, delta - j, i)).exp();
                    }
                    for j in 0..delta {
                        let h = ii - delta + 2 * j + 1;
                        se += (term(h + 1, h + 1) + ratio_ln(n, h, j, delta - j - 1, i)).exp();
                    }
                }
                q.e[i] = se;
                q.c[i] = sc;
            } else {
                q.e[i] = 1.0;
            }
            p.eps[i] = 1.0 - p.e[i] - p.c[i];
            q.eps[i] = 1.0 - q.e[i] - q.c[i];
        }
        Ok(Self {
            n,
            t,
            p_e: p.e,
            p_c: p.c,
            p_eps: p.eps,
            q_e: q.e,
            q_c: q.c,
            q_eps: q.eps,
            ln_binom: (0..n).map(|i| ln_binomial(ni - 1, i as i64)).collect(),
        })
    }
}

impl ComponentProfile {
    /// `ln C(n-1, i)` for `i = 0..n-1`.
    pub(crate) fn ln_binom(&self) -> &[f64] {
        &self.ln_binom
    }
}

struct Tables {
    e: Vec<f64>,
    c: Vec<f64>,
    eps: Vec<f64>,
}

impl Tables {
    fn new(n: usize) -> Self {
        Self {
            e: vec![0.0; n],
            c: vec![0.0; n],
            eps: vec![0.0; n],
        }
    }
}
