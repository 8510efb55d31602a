//! Binary narrow-sense BCH codes with bounded-distance decoding.
//!
//! Bit layout: a transmitted word of the (possibly shortened) code has length `n`;
//! index `j` carries the coefficient of `x^(n-1-j)`. The first `k` indices are the
//! information bits, the last `n-k` the parity. Shortening removes the leading
//! (highest-degree) information positions of the parent code.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::GaloisField;

/// Largest dimension for which [`BchCode::weight_enumerator_exact`] will enumerate the codebook.
pub const MAX_ENUMERATION_K: usize = 24;

/// Text descriptor of a component code: `m,t,shorten,primitive_poly(hex)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BchSpec {
    pub m: u32,
    pub t: usize,
    pub shorten: usize,
    /// `None` selects the default primitive polynomial for `m`.
    pub primitive_poly: Option<u32>,
}

impl BchSpec {
    pub fn new(m: u32, t: usize, shorten: usize) -> Self {
        Self {
            m,
            t,
            shorten,
            primitive_poly: None,
        }
    }

    pub fn build(&self) -> Result<BchCode> {
        let field = GaloisField::new(self.m, self.primitive_poly)?;
        BchCode::with_field(Arc::new(field), self.t, self.shorten)
    }
}

impl fmt::Display for BchSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.primitive_poly {
            Some(p) => write!(f, "{},{},{},{:x}", self.m, self.t, self.shorten, p),
            None => write!(f, "{},{},{},", self.m, self.t, self.shorten),
        }
    }
}

impl FromStr for BchSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(',').map(str::trim).collect();
        if parts.len() < 3 || parts.len() > 4 {
            return Err(Error::Parse(format!(
                "code descriptor `{s}`: expected m,t,shorten[,poly_hex]"
            )));
        }
        let num = |p: &str, what: &str| -> Result<usize> {
            p.parse::<usize>()
                .map_err(|_| Error::Parse(format!("code descriptor `{s}`: bad {what} `{p}`")))
        };
        let m = num(parts[0], "m")? as u32;
        let t = num(parts[1], "t")?;
        let shorten = num(parts[2], "shorten")?;
        let primitive_poly = match parts.get(3) {
            None | Some(&"") => None,
            Some(h) => {
                let h = h.trim_start_matches("0x").trim_start_matches("0X");
                Some(u32::from_str_radix(h, 16).map_err(|_| {
                    Error::Parse(format!("code descriptor `{s}`: bad polynomial `{h}`"))
                })?)
            }
        };
        Ok(Self {
            m,
            t,
            shorten,
            primitive_poly,
        })
    }
}

/// Result of bounded-distance decoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BddOutcome {
    /// A codeword within distance `t` of the input (possibly a miscorrection).
    Decoded(Vec<u8>),
    /// No codeword within distance `t`.
    Failure,
}

impl BddOutcome {
    pub fn is_failure(&self) -> bool {
        matches!(self, BddOutcome::Failure)
    }

    /// Ternary BDD message for bit `j`: `+1` for a decoded 0, `-1` for a decoded 1, `0` on failure.
    pub fn ternary(&self, j: usize) -> i8 {
        match self {
            BddOutcome::Decoded(w) => 1 - 2 * w[j] as i8,
            BddOutcome::Failure => 0,
        }
    }

    pub fn to_ternary(&self, n: usize) -> Vec<i8> {
        (0..n).map(|j| self.ternary(j)).collect()
    }
}

/// Reusable buffers for the syndrome / Berlekamp-Massey / Chien pipeline.
#[derive(Clone, Debug, Default)]
pub struct BddScratch {
    syndromes: Vec<u16>,
    lambda: Vec<u16>,
    prev: Vec<u16>,
    tmp: Vec<u16>,
    terms: Vec<u16>,
    /// Error indices found by the last successful call to [`BchCode::locate_errors`].
    pub errors: Vec<usize>,
}

/// A binary BCH code of length `n = 2^m - 1 - shorten` correcting `t` errors.
#[derive(Clone, Debug)]
pub struct BchCode {
    field: Arc<GaloisField>,
    t: usize,
    shorten: usize,
    n_parent: usize,
    n: usize,
    k: usize,
    /// Coefficients of g(x), index = degree.
    generator: Vec<u8>,
    /// Row `i`: parity bits contributed by information bit `i`, packed LSB-first.
    parity_rows: Vec<Vec<u64>>,
    /// `syndrome_table[j * t + s] = alpha^((2s+1) * (n-1-j))`.
    syndrome_table: Vec<u16>,
}

impl BchCode {
    /// Narrow-sense primitive BCH code over GF(2^m) with the default primitive polynomial.
    pub fn new(m: u32, t: usize, shorten: usize) -> Result<Self> {
        BchSpec::new(m, t, shorten).build()
    }

    pub fn with_field(field: Arc<GaloisField>, t: usize, shorten: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidParameter("t must be at least 1".into()));
        }
        let n_parent = field.order();
        if 2 * t >= n_parent {
            return Err(Error::InvalidParameter(format!(
                "t={t} too large for length {n_parent}"
            )));
        }
        // g(x) = lcm of the minimal polynomials of alpha, alpha^3, ..., alpha^(2t-1)
        let mut generator: Vec<u8> = vec![1];
        let mut covered = vec![false; n_parent];
        for e in (1..2 * t).step_by(2) {
            if covered[e] {
                continue;
            }
            for c in field.cyclotomic_coset(e) {
                covered[c] = true;
            }
            let mp = field.minimal_polynomial(e);
            let mp_bits: Vec<u8> = (0..=63 - mp.leading_zeros() as usize)
                .map(|i| (mp >> i & 1) as u8)
                .collect();
            generator = gf2_poly_mul(&generator, &mp_bits);
        }
        let n_minus_k = generator.len() - 1;
        if n_minus_k >= n_parent {
            return Err(Error::InvalidParameter(format!(
                "t={t} leaves no information bits (n-k={n_minus_k})"
            )));
        }
        let k_parent = n_parent - n_minus_k;
        if shorten >= k_parent {
            return Err(Error::InvalidParameter(format!(
                "shorten={shorten} must be smaller than k={k_parent}"
            )));
        }
        let n = n_parent - shorten;
        let k = k_parent - shorten;

        // x^d mod g(x) for d = n-k .. n-1; info bit i sits at degree n-1-i.
        let words = n_minus_k.div_ceil(64).max(1);
        let mut rem: Vec<u8> = generator[..n_minus_k].to_vec(); // x^(n-k) mod g
        let mut by_degree = Vec::with_capacity(k);
        for _ in 0..k {
            by_degree.push(rem.clone());
            // multiply by x and reduce
            let carry = rem[n_minus_k - 1];
            for d in (1..n_minus_k).rev() {
                rem[d] = rem[d - 1];
            }
            rem[0] = 0;
            if carry == 1 {
                for d in 0..n_minus_k {
                    rem[d] ^= generator[d];
                }
            }
        }
        // parity index p (0..n-k) carries degree n-k-1-p
        let parity_rows = (0..k)
            .map(|i| {
                let r = &by_degree[k - 1 - i];
                let mut packed = vec![0u64; words];
                for p in 0..n_minus_k {
                    if r[n_minus_k - 1 - p] == 1 {
                        packed[p / 64] |= 1 << (p % 64);
                    }
                }
                packed
            })
            .collect();

        let mut syndrome_table = vec![0u16; n * t];
        for j in 0..n {
            let deg = (n - 1 - j) as i64;
            for s in 0..t {
                syndrome_table[j * t + s] = field.exp((2 * s as i64 + 1) * deg);
            }
        }

        Ok(Self {
            field,
            t,
            shorten,
            n_parent,
            n,
            k,
            generator,
            parity_rows,
            syndrome_table,
        })
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }
    pub fn m(&self) -> u32 {
        self.field.m()
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn t(&self) -> usize {
        self.t
    }
    pub fn n_parent(&self) -> usize {
        self.n_parent
    }
    pub fn shorten(&self) -> usize {
        self.shorten
    }
    pub fn design_distance(&self) -> usize {
        2 * self.t + 1
    }
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
    /// Generator polynomial coefficients, index = degree.
    pub fn generator(&self) -> &[u8] {
        &self.generator
    }

    pub fn spec(&self) -> BchSpec {
        BchSpec {
            m: self.m(),
            t: self.t,
            shorten: self.shorten,
            primitive_poly: Some(self.field.primitive_poly()),
        }
    }

    /// Systematic encoding: `info` followed by the `n-k` parity bits.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                actual: info.len(),
            });
        }
        let mut out = vec![0u8; self.n];
        self.encode_into(info, &mut out);
        Ok(out)
    }

    /// Encodes `info` (length `k`) into `out` (length `n`) without allocating.
    pub fn encode_into(&self, info: &[u8], out: &mut [u8]) {
        debug_assert_eq!(info.len(), self.k);
        debug_assert_eq!(out.len(), self.n);
        let words = self.parity_rows.first().map_or(1, Vec::len);
        let mut acc = [0u64; 8];
        let mut heap;
        let parity: &mut [u64] = if words <= acc.len() {
            &mut acc[..words]
        } else {
            heap = vec![0u64; words];
            &mut heap
        };
        for (i, &b) in info.iter().enumerate() {
            if b & 1 == 1 {
                for (p, r) in parity.iter_mut().zip(&self.parity_rows[i]) {
                    *p ^= r;
                }
            }
        }
        out[..self.k].copy_from_slice(info);
        for p in 0..self.n - self.k {
            out[self.k + p] = (parity[p / 64] >> (p % 64) & 1) as u8;
        }
    }

    /// Odd-indexed syndromes `S_1, S_3, ..., S_(2t-1)` written into `out`.
    fn odd_syndromes(&self, r: &[u8], out: &mut [u16]) {
        out.iter_mut().for_each(|s| *s = 0);
        let t = self.t;
        for (j, &b) in r.iter().enumerate() {
            if b & 1 == 1 {
                let col = &self.syndrome_table[j * t..(j + 1) * t];
                for (s, c) in out.iter_mut().zip(col) {
                    *s ^= c;
                }
            }
        }
    }

    /// True when `r` has an all-zero syndrome.
    pub fn is_codeword(&self, r: &[u8]) -> bool {
        debug_assert_eq!(r.len(), self.n);
        let mut s = [0u16; 16];
        if self.t <= s.len() {
            self.odd_syndromes(r, &mut s[..self.t]);
            s[..self.t].iter().all(|&x| x == 0)
        } else {
            let mut v = vec![0u16; self.t];
            self.odd_syndromes(r, &mut v);
            v.iter().all(|&x| x == 0)
        }
    }

    /// Full syndrome vector `S_1..S_2t`.
    pub fn syndromes(&self, r: &[u8]) -> Result<Vec<u16>> {
        self.check_len(r)?;
        let mut scratch = BddScratch::default();
        self.fill_syndromes(r, &mut scratch);
        Ok(scratch.syndromes)
    }

    fn fill_syndromes(&self, r: &[u8], scratch: &mut BddScratch) -> bool {
        let t = self.t;
        scratch.syndromes.clear();
        scratch.syndromes.resize(2 * t, 0);
        let mut odd = [0u16; 16];
        let mut odd_heap;
        let odd: &mut [u16] = if t <= odd.len() {
            &mut odd[..t]
        } else {
            odd_heap = vec![0u16; t];
            &mut odd_heap
        };
        self.odd_syndromes(r, odd);
        let mut nonzero = false;
        let s = &mut scratch.syndromes;
        for i in 0..t {
            s[2 * i] = odd[i];
            nonzero |= odd[i] != 0;
        }
        // S_(2j) = S_j^2 for binary codes
        for j in (2..=2 * t).step_by(2) {
            let half = s[j / 2 - 1];
            s[j - 1] = self.field.mul(half, half);
        }
        nonzero
    }

    /// Locates the error positions of `r` by Berlekamp-Massey and Chien search.
    ///
    /// On success the positions (transmitted indices, ascending) are in `scratch.errors`
    /// and `true` is returned; `false` signals a decoding failure.
    pub fn locate_errors(&self, r: &[u8], scratch: &mut BddScratch) -> bool {
        debug_assert_eq!(r.len(), self.n);
        scratch.errors.clear();
        if !self.fill_syndromes(r, scratch) {
            return true;
        }
        let f = &*self.field;
        let two_t = 2 * self.t;
        let BddScratch {
            syndromes: s,
            lambda,
            prev,
            tmp,
            terms,
            errors,
        } = scratch;

        lambda.clear();
        lambda.resize(two_t + 1, 0);
        lambda[0] = 1;
        prev.clear();
        prev.resize(two_t + 1, 0);
        prev[0] = 1;
        let mut l = 0usize;
        let mut shift = 1usize;
        let mut b = 1u16;
        for step in 0..two_t {
            let mut d = s[step];
            for i in 1..=l {
                d ^= f.mul(lambda[i], s[step - i]);
            }
            if d == 0 {
                shift += 1;
                continue;
            }
            let coef = f.div(d, b).expect("nonzero discrepancy base");
            if 2 * l <= step {
                tmp.clear();
                tmp.extend_from_slice(lambda);
                for i in 0..(two_t + 1).saturating_sub(shift) {
                    lambda[i + shift] ^= f.mul(coef, prev[i]);
                }
                l = step + 1 - l;
                std::mem::swap(prev, tmp);
                b = d;
                shift = 1;
            } else {
                for i in 0..(two_t + 1).saturating_sub(shift) {
                    lambda[i + shift] ^= f.mul(coef, prev[i]);
                }
                shift += 1;
            }
        }
        let degree = lambda.iter().rposition(|&c| c != 0).unwrap_or(0);
        if l > self.t || degree != l {
            return false;
        }

        // Chien search over every nonzero element of the parent field:
        // Lambda(alpha^(-e)) = 0  <=>  error at degree e.
        terms.clear();
        terms.extend_from_slice(&lambda[..=degree]);
        let steps: Vec<u16> = (0..=degree).map(|i| f.exp(-(i as i64))).collect();
        let mut found = 0usize;
        for e in 0..self.n_parent {
            let mut acc = 0u16;
            for c in terms.iter() {
                acc ^= c;
            }
            if acc == 0 {
                if e >= self.n {
                    // root in a shortened position
                    return false;
                }
                errors.push(self.n - 1 - e);
                found += 1;
                if found == degree {
                    break;
                }
            }
            for (c, st) in terms.iter_mut().zip(&steps).skip(1) {
                *c = f.mul(*c, *st);
            }
        }
        if found != degree {
            return false;
        }
        errors.sort_unstable();
        true
    }

    /// Bounded-distance decoding with the exact correct / miscorrect / fail semantics.
    pub fn bdd_decode(&self, r: &[u8]) -> Result<BddOutcome> {
        self.check_len(r)?;
        let mut scratch = BddScratch::default();
        Ok(self.bdd_decode_with(r, &mut scratch))
    }

    pub fn bdd_decode_with(&self, r: &[u8], scratch: &mut BddScratch) -> BddOutcome {
        if self.locate_errors(r, scratch) {
            let mut w = r.to_vec();
            for &e in &scratch.errors {
                w[e] ^= 1;
            }
            BddOutcome::Decoded(w)
        } else {
            BddOutcome::Failure
        }
    }

    /// Genie-aided decoding that never miscorrects.
    pub fn ideal_bdd_decode(&self, r: &[u8], transmitted: &[u8]) -> Result<BddOutcome> {
        self.check_len(r)?;
        self.check_len(transmitted)?;
        Ok(if hamming_distance(r, transmitted) <= self.t {
            BddOutcome::Decoded(transmitted.to_vec())
        } else {
            BddOutcome::Failure
        })
    }

    /// Exact weight distribution `A_0..A_n` by enumerating all `2^k` codewords.
    pub fn weight_enumerator_exact(&self) -> Result<Vec<u64>> {
        if self.k > MAX_ENUMERATION_K {
            return Err(Error::EnumerationBudget {
                k: self.k,
                max: MAX_ENUMERATION_K,
            });
        }
        let words = self.n.div_ceil(64);
        let basis: Vec<Vec<u64>> = (0..self.k)
            .map(|i| {
                let mut info = vec![0u8; self.k];
                info[i] = 1;
                let mut cw = vec![0u8; self.n];
                self.encode_into(&info, &mut cw);
                pack(&cw, words)
            })
            .collect();
        let mut counts = vec![0u64; self.n + 1];
        let mut cur = vec![0u64; words];
        counts[0] += 1;
        // Gray-code walk: step g flips basis vector trailing_zeros(g).
        for g in 1u64..(1u64 << self.k) {
            let flip = g.trailing_zeros() as usize;
            for (c, b) in cur.iter_mut().zip(&basis[flip]) {
                *c ^= b;
            }
            let w: u32 = cur.iter().map(|x| x.count_ones()).sum();
            counts[w as usize] += 1;
        }
        Ok(counts)
    }

    /// The binomial approximation `A_h ~ 2^(-m t) C(n, h)` of long BCH weight spectra.
    pub fn weight_enumerator_approx(&self) -> WeightEnumerator {
        WeightEnumerator::Approx {
            n: self.n,
            m: self.m(),
            t: self.t,
        }
    }

    fn check_len(&self, r: &[u8]) -> Result<()> {
        if r.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: r.len(),
            });
        }
        Ok(())
    }
}

/// Weight spectrum of a component code, exact or approximated.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightEnumerator {
    Exact(Vec<f64>),
    Approx { n: usize, m: u32, t: usize },
}

impl WeightEnumerator {
    pub fn exact(counts: &[u64]) -> Self {
        WeightEnumerator::Exact(counts.iter().map(|&c| c as f64).collect())
    }

    pub fn n(&self) -> usize {
        match self {
            WeightEnumerator::Exact(a) => a.len() - 1,
            WeightEnumerator::Approx { n, .. } => *n,
        }
    }

    /// `ln A_h`, `-inf` when `A_h = 0`.
    pub fn ln_a(&self, h: usize) -> f64 {
        match self {
            WeightEnumerator::Exact(a) => match a.get(h) {
                Some(&v) if v > 0.0 => v.ln(),
                _ => f64::NEG_INFINITY,
            },
            WeightEnumerator::Approx { n, m, t } => {
                let (n, t) = (*n, *t);
                if h == 0 || h == n {
                    0.0
                } else if h >= 2 * t + 1 && h + 2 * t + 1 <= n {
                    -((*m as usize * t) as f64) * std::f64::consts::LN_2
                        + crate::math::ln_binomial(n as i64, h as i64)
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    pub fn a(&self, h: usize) -> f64 {
        self.ln_a(h).exp()
    }
}

fn gf2_poly_mul(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 1 {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] ^= y;
            }
        }
    }
    out
}

fn pack(bits: &[u8], words: usize) -> Vec<u64> {
    let mut out = vec![0u64; words];
    for (i, &b) in bits.iter().enumerate() {
        out[i / 64] |= ((b & 1) as u64) << (i % 64);
    }
    out
}

pub fn hamming_distance(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

pub fn hamming_weight(a: &[u8]) -> usize {
    a.iter().filter(|&&x| x != 0).count()
}
