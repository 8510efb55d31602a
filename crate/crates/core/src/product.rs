//! Product codes with identical BCH row and column codes, and their iterative
//! BDD-based decoders (iBDD, iBDD-SR and genie-aided ideal iBDD).

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bch::{BchCode, BddScratch};
use crate::channel::{hard_bit, harden};
use crate::de::DeProfile;
use crate::error::{Error, Result};
use crate::matrix::{BitMatrix, LlrMatrix};

/// Decision kernel of iBDD-SR in comparison form.
///
/// `mu` is the ternary BDD message (`+1` decoded 0, `-1` decoded 1, `0` failure).
/// The BDD bit wins only if `w` strictly exceeds the channel reliability `|l|`.
#[inline]
pub fn combine_decision(mu: i8, w: f64, l: f64) -> u8 {
    if mu == 0 || w <= l.abs() {
        hard_bit(l)
    } else {
        (mu < 0) as u8
    }
}

/// Per-iteration weights for the row and column half-iterations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingSchedule {
    pub w_row: Vec<f64>,
    pub w_col: Vec<f64>,
}

impl ScalingSchedule {
    pub fn new(w_row: Vec<f64>, w_col: Vec<f64>) -> Result<Self> {
        if w_row.len() != w_col.len() {
            return Err(Error::LengthMismatch {
                expected: w_row.len(),
                actual: w_col.len(),
            });
        }
        if let Some(w) = w_row.iter().chain(&w_col).find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "scaling factors must be finite and nonnegative, got {w}"
            )));
        }
        Ok(Self { w_row, w_col })
    }

    /// The same weight in every half-iteration.
    pub fn constant(w: f64, iters: usize) -> Result<Self> {
        Self::new(vec![w; iters], vec![w; iters])
    }

    /// First `sr_iters` iterations of a GLDPC DE run.
    pub fn from_de(de: &DeProfile, sr_iters: usize) -> Result<Self> {
        de.check_available()?;
        if de.weights_row.len() < sr_iters {
            return Err(Error::ScheduleUnavailable {
                ebn0_db: de.ebn0_db,
                reason: format!(
                    "DE ran {} iterations, {sr_iters} needed",
                    de.weights_row.len()
                ),
            });
        }
        Self::new(
            de.weights_row[..sr_iters].to_vec(),
            de.weights_col[..sr_iters].to_vec(),
        )
    }

    pub fn len(&self) -> usize {
        self.w_row.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w_row.is_empty()
    }
}

/// How a component word is replaced after BDD.
#[derive(Clone, Copy, Debug)]
pub(crate) enum LineRule<'a> {
    /// Take the BDD output when decoding succeeds, keep the input otherwise.
    Plain,
    /// Combine the ternary BDD output with the channel LLRs.
    Scaled { w: f64, llr: &'a [f64] },
    /// Jump to the transmitted word whenever it lies within distance `t`.
    Ideal { transmitted: &'a [u8] },
}

/// Decodes `r` in place; returns `false` on a BDD failure.
pub(crate) fn decode_line(
    code: &BchCode,
    scratch: &mut BddScratch,
    r: &mut [u8],
    rule: LineRule<'_>,
) -> bool {
    match rule {
        LineRule::Ideal { transmitted } => {
            let d = r.iter().zip(transmitted).filter(|(a, b)| a != b).count();
            if d <= code.t() {
                r.copy_from_slice(transmitted);
                true
            } else {
                false
            }
        }
        LineRule::Plain => {
            if code.locate_errors(r, scratch) {
                for &e in &scratch.errors {
                    r[e] ^= 1;
                }
                true
            } else {
                false
            }
        }
        LineRule::Scaled { w, llr } => {
            if code.locate_errors(r, scratch) {
                let mut next_err = scratch.errors.iter().copied().peekable();
                for (j, (b, &l)) in r.iter_mut().zip(llr).enumerate() {
                    let mut bit = *b;
                    if next_err.peek() == Some(&j) {
                        bit ^= 1;
                        next_err.next();
                    }
                    let mu = 1 - 2 * bit as i8;
                    *b = combine_decision(mu, w, l);
                }
                true
            } else {
                for (b, &l) in r.iter_mut().zip(llr) {
                    *b = hard_bit(l);
                }
                false
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Half {
    Row,
    Col,
}

impl std::fmt::Display for Half {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Half::Row => "row",
            Half::Col => "col",
        })
    }
}

/// State handed to a trace observer after every half-iteration.
#[derive(Debug)]
pub struct HalfIteration<'a> {
    /// 1-based iteration index over the scaled and plain iterations combined.
    pub iter: usize,
    pub half: Half,
    pub scaled: bool,
    pub decisions: &'a BitMatrix,
    /// Component words whose BDD failed in this half-iteration.
    pub failures: usize,
}

/// Collects `iter,half,errors_remaining` rows against a known transmitted array.
#[derive(Clone, Debug)]
pub struct ErrorTrace {
    transmitted: BitMatrix,
    pub rows: Vec<(usize, Half, usize)>,
}

impl ErrorTrace {
    pub fn new(transmitted: BitMatrix) -> Self {
        Self {
            transmitted,
            rows: Vec::new(),
        }
    }

    pub fn observe(&mut self, h: &HalfIteration<'_>) {
        let e = h.decisions.hamming_distance(&self.transmitted);
        self.rows.push((h.iter, h.half, e));
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("iter,half,errors_remaining\n");
        for (i, h, e) in &self.rows {
            let _ = writeln!(s, "{i},{h},{e}");
        }
        s
    }
}

/// Decoder selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderMode {
    Ibdd,
    IbddSr,
    Ideal,
}

impl DecoderMode {
    pub const ALL: [DecoderMode; 3] = [DecoderMode::Ibdd, DecoderMode::IbddSr, DecoderMode::Ideal];

    pub fn name(self) -> &'static str {
        match self {
            DecoderMode::Ibdd => "ibdd",
            DecoderMode::IbddSr => "ibdd_sr",
            DecoderMode::Ideal => "ideal",
        }
    }
}

impl std::fmt::Display for DecoderMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for DecoderMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "ibdd" => Ok(DecoderMode::Ibdd),
            "ibdd_sr" | "sr" => Ok(DecoderMode::IbddSr),
            "ideal" | "ideal_ibdd" => Ok(DecoderMode::Ideal),
            other => Err(Error::Parse(format!("unknown decoder mode '{other}'"))),
        }
    }
}

/// A product code whose rows and columns all belong to the same BCH code.
#[derive(Clone, Debug)]
pub struct ProductCode {
    component: Arc<BchCode>,
}

impl ProductCode {
    pub fn new(component: BchCode) -> Self {
        Self {
            component: Arc::new(component),
        }
    }

    pub fn from_arc(component: Arc<BchCode>) -> Self {
        Self { component }
    }

    pub fn component(&self) -> &BchCode {
        &self.component
    }

    pub fn n(&self) -> usize {
        self.component.n()
    }

    pub fn k(&self) -> usize {
        self.component.k()
    }

    pub fn rate(&self) -> f64 {
        let r = self.component.rate();
        r * r
    }

    fn check(&self, rows: usize, cols: usize, expect: usize) -> Result<()> {
        if rows != expect || cols != expect {
            return Err(Error::DimensionMismatch {
                expected_rows: expect,
                expected_cols: expect,
                rows,
                cols,
            });
        }
        Ok(())
    }

    /// Encodes a `k x k` information array: rows first, then all `n` columns.
    pub fn encode(&self, info: &BitMatrix) -> Result<BitMatrix> {
        let (n, k) = (self.n(), self.k());
        self.check(info.rows(), info.cols(), k)?;
        let c = &*self.component;
        let mut x = BitMatrix::zeros(n, n);
        for i in 0..k {
            c.encode_into(info.row(i), x.row_mut(i));
        }
        let mut col = vec![0u8; n];
        for j in 0..n {
            let head: Vec<u8> = (0..k).map(|i| x.get(i, j)).collect();
            c.encode_into(&head, &mut col);
            x.set_column(j, &col);
        }
        Ok(x)
    }

    /// Encodes columns first, then rows; equal to [`encode`](Self::encode) by linearity.
    pub fn encode_columns_first(&self, info: &BitMatrix) -> Result<BitMatrix> {
        let t = info.transpose();
        Ok(self.encode(&t)?.transpose())
    }

    pub fn is_codeword(&self, x: &BitMatrix) -> bool {
        let c = &*self.component;
        if (0..x.rows()).any(|i| !c.is_codeword(x.row(i))) {
            return false;
        }
        let mut col = Vec::with_capacity(x.rows());
        (0..x.cols()).all(|j| {
            x.column_into(j, &mut col);
            c.is_codeword(&col)
        })
    }

    /// Runs one half-iteration over all rows (`Half::Row`) or columns of `psi`.
    fn half_pass(
        &self,
        psi: &mut BitMatrix,
        half: Half,
        llr: Option<&LlrMatrix>,
        w: Option<f64>,
        transmitted: Option<&BitMatrix>,
        bufs: &mut Buffers,
    ) -> usize {
        let c = &*self.component;
        let n = self.n();
        let mut failures = 0;
        for idx in 0..n {
            match half {
                Half::Row => bufs.line.copy_from_slice(psi.row(idx)),
                Half::Col => psi.column_into(idx, &mut bufs.line),
            }
            let rule = if let Some(tx) = transmitted {
                match half {
                    Half::Row => bufs.aux_bits.copy_from_slice(tx.row(idx)),
                    Half::Col => tx.column_into(idx, &mut bufs.aux_bits),
                }
                LineRule::Ideal {
                    transmitted: &bufs.aux_bits,
                }
            } else if let (Some(l), Some(w)) = (llr, w) {
                match half {
                    Half::Row => bufs.aux_llr.copy_from_slice(l.row(idx)),
                    Half::Col => l.column_into(idx, &mut bufs.aux_llr),
                }
                LineRule::Scaled {
                    w,
                    llr: &bufs.aux_llr,
                }
            } else {
                LineRule::Plain
            };
            if !decode_line(c, &mut bufs.scratch, &mut bufs.line, rule) {
                failures += 1;
            }
            match half {
                Half::Row => psi.row_mut(idx).copy_from_slice(&bufs.line),
                Half::Col => psi.set_column(idx, &bufs.line),
            }
        }
        failures
    }

    fn run(
        &self,
        mut psi: BitMatrix,
        llr: Option<&LlrMatrix>,
        schedule: Option<&ScalingSchedule>,
        sr_iters: usize,
        plain_iters: usize,
        transmitted: Option<&BitMatrix>,
        observer: &mut dyn FnMut(&HalfIteration<'_>),
    ) -> BitMatrix {
        let n = self.n();
        let mut bufs = Buffers {
            line: vec![0; n],
            aux_bits: vec![0; n],
            aux_llr: vec![0.0; n],
            scratch: BddScratch::default(),
        };
        for it in 0..sr_iters + plain_iters {
            let scaled = it < sr_iters;
            for half in [Half::Row, Half::Col] {
                let w = match (scaled, schedule) {
                    (true, Some(s)) => Some(match half {
                        Half::Row => s.w_row[it],
                        Half::Col => s.w_col[it],
                    }),
                    _ => None,
                };
                let llr = if scaled { llr } else { None };
                let failures = self.half_pass(&mut psi, half, llr, w, transmitted, &mut bufs);
                observer(&HalfIteration {
                    iter: it + 1,
                    half,
                    scaled,
                    decisions: &psi,
                    failures,
                });
            }
            if self.is_codeword(&psi) {
                break;
            }
        }
        psi
    }

    /// iBDD-SR: `sr_iters` scaled iterations followed by `plain_iters` iBDD iterations.
    pub fn ibdd_sr_decode(
        &self,
        llr: &LlrMatrix,
        schedule: &ScalingSchedule,
        sr_iters: usize,
        plain_iters: usize,
    ) -> Result<BitMatrix> {
        self.ibdd_sr_decode_traced(llr, schedule, sr_iters, plain_iters, &mut |_| {})
    }

    pub fn ibdd_sr_decode_traced(
        &self,
        llr: &LlrMatrix,
        schedule: &ScalingSchedule,
        sr_iters: usize,
        plain_iters: usize,
        observer: &mut dyn FnMut(&HalfIteration<'_>),
    ) -> Result<BitMatrix> {
        self.check(llr.rows(), llr.cols(), self.n())?;
        if schedule.len() < sr_iters {
            return Err(Error::LengthMismatch {
                expected: sr_iters,
                actual: schedule.len(),
            });
        }
        Ok(self.run(
            harden(llr),
            Some(llr),
            Some(schedule),
            sr_iters,
            plain_iters,
            None,
            observer,
        ))
    }

    /// Conventional iBDD on hard decisions.
    pub fn ibdd_decode(&self, r: &BitMatrix, iters: usize) -> Result<BitMatrix> {
        self.ibdd_decode_traced(r, iters, &mut |_| {})
    }

    pub fn ibdd_decode_traced(
        &self,
        r: &BitMatrix,
        iters: usize,
        observer: &mut dyn FnMut(&HalfIteration<'_>),
    ) -> Result<BitMatrix> {
        self.check(r.rows(), r.cols(), self.n())?;
        Ok(self.run(r.clone(), None, None, 0, iters, None, observer))
    }

    /// iBDD with a genie component decoder that never miscorrects.
    pub fn ideal_ibdd_decode(
        &self,
        r: &BitMatrix,
        transmitted: &BitMatrix,
        iters: usize,
    ) -> Result<BitMatrix> {
        self.check(r.rows(), r.cols(), self.n())?;
        self.check(transmitted.rows(), transmitted.cols(), self.n())?;
        Ok(self.run(r.clone(), None, None, 0, iters, Some(transmitted), &mut |_| {}))
    }
}

struct Buffers {
    line: Vec<u8>,
    aux_bits: Vec<u8>,
    aux_llr: Vec<f64>,
    scratch: BddScratch,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pc(m: u32, t: usize) -> ProductCode {
        ProductCode::new(BchCode::new(m, t, 0).unwrap())
    }

    fn random_info(k: usize, rng: &mut impl Rng) -> BitMatrix {
        BitMatrix::from_fn(k, k, |_, _| rng.random_range(0..2u8))
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(combine_decision(1, 2.0, -1.5), 0);
        assert_eq!(combine_decision(0, 5.0, -0.3), 1);
        assert_eq!(combine_decision(-1, 1.0, 3.0), 0);
        assert_eq!(combine_decision(-1, 4.0, 3.0), 1);
        // ties go to the channel
        assert_eq!(combine_decision(1, 1.5, -1.5), 1);
        assert_eq!(combine_decision(-1, 1.5, 1.5), 0);
    }

    #[test]
    fn kernel_matches_algebraic_form() {
        for mu in [-1i8, 0, 1] {
            for wi in 0..=40 {
                for li in -40..=40 {
                    let (w, l) = (wi as f64 * 0.25, li as f64 * 0.25);
                    let got = combine_decision(mu, w, l);
                    let s = w * mu as f64 + l;
                    if mu != 0 && w == l.abs() {
                        assert_eq!(got, hard_bit(l));
                    } else {
                        assert_eq!(got, (s < 0.0) as u8, "mu={mu} w={w} l={l}");
                    }
                }
            }
        }
    }

    #[test]
    fn zero_info_gives_zero_array() {
        let p = pc(4, 1);
        let x = p.encode(&BitMatrix::zeros(11, 11)).unwrap();
        assert_eq!(x.count_ones(), 0);
    }

    #[test]
    fn encoding_orders_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (m, t) in [(4, 1), (4, 2), (5, 2)] {
            let p = pc(m, t);
            for _ in 0..20 {
                let info = random_info(p.k(), &mut rng);
                let a = p.encode(&info).unwrap();
                assert_eq!(a, p.encode_columns_first(&info).unwrap());
                assert!(p.is_codeword(&a));
            }
        }
    }

    #[test]
    fn wrong_shapes_rejected() {
        let p = pc(4, 1);
        assert!(p.encode(&BitMatrix::zeros(10, 11)).is_err());
        assert!(p.ibdd_decode(&BitMatrix::zeros(15, 14), 1).is_err());
        let sched = ScalingSchedule::constant(1.0, 2).unwrap();
        assert!(p.ibdd_sr_decode(&LlrMatrix::zeros(15, 15), &sched, 3, 0).is_err());
        assert!(ScalingSchedule::new(vec![1.0], vec![-1.0]).is_err());
        assert!(ScalingSchedule::new(vec![1.0], vec![]).is_err());
    }

    #[test]
    fn single_error_corrected() {
        let p = pc(4, 1);
        let mut r = BitMatrix::zeros(15, 15);
        r.set(4, 9, 1);
        assert_eq!(p.ibdd_decode(&r, 1).unwrap().count_ones(), 0);
        let mut llr = LlrMatrix::from_fn(15, 15, |_, _| 8.0);
        llr.set(4, 9, -0.5);
        let sched = ScalingSchedule::constant(4.0, 1).unwrap();
        assert_eq!(p.ibdd_sr_decode(&llr, &sched, 1, 0).unwrap().count_ones(), 0);
    }

    #[test]
    fn noiseless_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = pc(4, 2);
        let x = p.encode(&random_info(p.k(), &mut rng)).unwrap();
        assert_eq!(p.ibdd_decode(&x, 4).unwrap(), x);
        assert_eq!(p.ideal_ibdd_decode(&x, &x, 4).unwrap(), x);
        let llr = x.map(|&b| if b == 1 { -8.0 } else { 8.0 });
        let sched = ScalingSchedule::constant(3.0, 4).unwrap();
        let mut halves = 0;
        let out = p
            .ibdd_sr_decode_traced(&llr, &sched, 4, 2, &mut |_| halves += 1)
            .unwrap();
        assert_eq!(out, x);
        assert_eq!(halves, 2);
    }

    #[test]
    fn corner_pattern_stalls() {
        // Support S of t+1 = 3 positions whose weight-3 pattern makes BDD fail; errors on
        // S x S give every affected row and column that same pattern.
        let p = pc(4, 2);
        let c = p.component();
        let word = |s: &[usize]| {
            let mut v = vec![0u8; 15];
            s.iter().for_each(|&j| v[j] = 1);
            v
        };
        let support = (0..15)
            .flat_map(|a| (a + 1..15).flat_map(move |b| (b + 1..15).map(move |d| [a, b, d])))
            .find(|s| c.bdd_decode(&word(s)).unwrap().is_failure())
            .expect("a weight-3 pattern outside all decoding spheres");
        let mut r = BitMatrix::zeros(15, 15);
        for &i in &support {
            for &j in &support {
                r.set(i, j, 1);
            }
        }
        for &i in &support {
            assert!(c.bdd_decode(r.row(i)).unwrap().is_failure());
            assert!(c.bdd_decode(&r.column(i)).unwrap().is_failure());
        }
        assert_eq!(p.ibdd_decode(&r, 10).unwrap(), r);
    }

    #[test]
    fn zero_weights_output_channel_decisions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = pc(4, 1);
        let sched = ScalingSchedule::constant(0.0, 6).unwrap();
        for _ in 0..50 {
            let llr = LlrMatrix::from_fn(15, 15, |_, _| rng.random_range(-1.0..6.0));
            let mut ok = true;
            p.ibdd_sr_decode_traced(&llr, &sched, 6, 0, &mut |h| {
                ok &= *h.decisions == harden(&llr);
            })
            .unwrap();
            assert!(ok);
        }
    }

    #[test]
    fn error_trace_csv() {
        let p = pc(4, 1);
        let mut r = BitMatrix::zeros(15, 15);
        r.set(0, 0, 1);
        r.set(7, 3, 1);
        let mut tr = ErrorTrace::new(BitMatrix::zeros(15, 15));
        p.ibdd_decode_traced(&r, 3, &mut |h| tr.observe(h)).unwrap();
        assert_eq!(tr.to_csv(), "iter,half,errors_remaining\n1,row,0\n1,col,0\n");
    }

    #[test]
    fn mode_names_roundtrip() {
        for m in DecoderMode::ALL {
            assert_eq!(m.name().parse::<DecoderMode>().unwrap(), m);
        }
        assert!("chase".parse::<DecoderMode>().is_err());
    }

    proptest! {
        #[test]
        fn encoded_arrays_are_codewords(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = pc(4, 1);
            let x = p.encode(&random_info(11, &mut rng)).unwrap();
            prop_assert!(p.is_codeword(&x));
        }

        #[test]
        fn ideal_never_adds_errors(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = pc(4, 2);
            let x = p.encode(&random_info(p.k(), &mut rng)).unwrap();
            let r = x.map(|&b| b ^ (rng.random_range(0..100) < 12) as u8);
            let out = p.ideal_ibdd_decode(&r, &x, 8).unwrap();
            for i in 0..15 {
                for j in 0..15 {
                    if out.get(i, j) != x.get(i, j) {
                        prop_assert!(r.get(i, j) != x.get(i, j));
                    }
                }
            }
        }
    }
}
