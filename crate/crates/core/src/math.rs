//! Small numeric helpers shared by the analysis and simulation code.

use std::sync::OnceLock;

const LN_FACT_TABLE: usize = 4096;

fn ln_factorials() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACT_TABLE);
        let mut acc = 0.0f64;
        t.push(0.0);
        for i in 1..LN_FACT_TABLE {
            acc += (i as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln(x!)`.
pub fn ln_factorial(x: usize) -> f64 {
    let t = ln_factorials();
    if x < t.len() {
        t[x]
    } else {
        libm::lgamma(x as f64 + 1.0)
    }
}

/// `ln C(n, k)`; `-inf` whenever the binomial vanishes (`k < 0`, `k > n` or `n < 0`).
pub fn ln_binomial(n: i64, k: i64) -> f64 {
    if n < 0 || k < 0 || k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n as usize) - ln_factorial(k as usize) - ln_factorial((n - k) as usize)
}

/// `C(n, k)` in floating point.
pub fn binomial(n: i64, k: i64) -> f64 {
    if n < 0 || k < 0 || k > n {
        return 0.0;
    }
    if n <= 60 {
        // exact in u128, then a single rounding
        let k = k.min(n - k) as u128;
        let mut r: u128 = 1;
        for i in 0..k {
            r = r * (n as u128 - i) / (i + 1);
        }
        return r as f64;
    }
    ln_binomial(n, k).exp()
}

/// Gaussian tail `Q(x) = erfc(x / sqrt 2) / 2`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Binomial probability masses `C(n, i) x^i (1-x)^(n-i)` for `i = 0..=n`, computed in log space.
pub fn binomial_pmf(n: usize, x: f64, out: &mut Vec<f64>) {
    out.clear();
    out.resize(n + 1, 0.0);
    if x <= 0.0 {
        out[0] = 1.0;
        return;
    }
    if x >= 1.0 {
        out[n] = 1.0;
        return;
    }
    let lx = x.ln();
    let l1x = (-x).ln_1p();
    for (i, o) in out.iter_mut().enumerate() {
        *o = (ln_binomial(n as i64, i as i64) + i as f64 * lx + (n - i) as f64 * l1x).exp();
    }
}
