//! Staircase codes and their sliding-window iterative decoders.
//!
//! Blocks `B_1, B_2, ...` are `(n/2) x (n/2)` arrays with `B_0 = 0`, and every row of
//! `[B_{i-1}^T, B_i]` is a codeword of the component code.

use std::collections::VecDeque;
use std::io::{Read, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bch::{BchCode, BddScratch};
use crate::channel::harden;
use crate::de::{DeProfile, Ensemble};
use crate::error::{Error, Result};
use crate::matrix::{BitMatrix, LlrMatrix};
use crate::product::{decode_line, DecoderMode, LineRule};

pub const BLOCK_MAGIC: [u8; 4] = *b"STCB";

#[derive(Clone, Debug)]
pub struct StaircaseCode {
    component: Arc<BchCode>,
    half: usize,
}

impl StaircaseCode {
    pub fn new(component: BchCode) -> Result<Self> {
        Self::from_arc(Arc::new(component))
    }

    pub fn from_arc(component: Arc<BchCode>) -> Result<Self> {
        let n = component.n();
        if n % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "staircase component length must be even, got {n}"
            )));
        }
        if component.k() <= n / 2 {
            return Err(Error::InvalidParameter(format!(
                "component ({n}, {}) leaves no information columns",
                component.k()
            )));
        }
        Ok(Self {
            component,
            half: n / 2,
        })
    }

    pub fn component(&self) -> &BchCode {
        &self.component
    }

    /// Block side length `n/2`.
    pub fn block_size(&self) -> usize {
        self.half
    }

    /// Information columns per block, `k - n/2`.
    pub fn info_cols(&self) -> usize {
        self.component.k() - self.half
    }

    pub fn info_bits_per_block(&self) -> usize {
        self.half * self.info_cols()
    }

    pub fn rate(&self) -> f64 {
        let (n, k) = (self.component.n(), self.component.k());
        1.0 - 2.0 * (n - k) as f64 / n as f64
    }

    /// Next block given the previous one and `(n/2) x (k - n/2)` information bits.
    pub fn encode_block(&self, prev: &BitMatrix, info: &BitMatrix) -> Result<BitMatrix> {
        let h = self.half;
        prev.check_shape(h, h)?;
        info.check_shape(h, self.info_cols())?;
        let n = self.component.n();
        let mut msg = vec![0u8; self.component.k()];
        let mut word = vec![0u8; n];
        let mut b = BitMatrix::zeros(h, h);
        for r in 0..h {
            for (c, m) in msg[..h].iter_mut().enumerate() {
                *m = prev.get(c, r);
            }
            msg[h..].copy_from_slice(info.row(r));
            self.component.encode_into(&msg, &mut word);
            b.row_mut(r).copy_from_slice(&word[h..]);
        }
        Ok(b)
    }

    /// Encodes a sequence of information blocks; the result starts with `B_0 = 0`.
    pub fn encode_stream(&self, info: &[BitMatrix]) -> Result<Vec<BitMatrix>> {
        let mut blocks = Vec::with_capacity(info.len() + 1);
        blocks.push(BitMatrix::zeros(self.half, self.half));
        for u in info {
            let b = self.encode_block(blocks.last().expect("B_0"), u)?;
            blocks.push(b);
        }
        Ok(blocks)
    }

    /// True when every row of `[prev^T, b]` is a component codeword.
    pub fn is_consistent(&self, prev: &BitMatrix, b: &BitMatrix) -> bool {
        let h = self.half;
        let mut word = vec![0u8; 2 * h];
        (0..h).all(|r| {
            gather(prev, b, r, &mut word);
            self.component.is_codeword(&word)
        })
    }
}

/// Component word `r`: column `r` of `left` followed by row `r` of `right`.
fn gather<T: Copy>(left: &crate::matrix::Matrix<T>, right: &crate::matrix::Matrix<T>, r: usize, out: &mut [T]) {
    let h = left.rows();
    for c in 0..h {
        out[c] = left.get(c, r);
    }
    out[h..].copy_from_slice(right.row(r));
}

/// Per-slide, per-pair, per-iteration weights.
///
/// `slides[s][a][l]` is used in the `s`-th window for block pair `a` (pair 0 joins
/// the frozen block and the oldest active block); windows past the stored slides
/// use `steady`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowSchedule {
    pub slides: Vec<Vec<Vec<f64>>>,
    pub steady: Vec<Vec<f64>>,
}

impl WindowSchedule {
    pub fn new(slides: Vec<Vec<Vec<f64>>>, steady: Vec<Vec<f64>>) -> Result<Self> {
        let pairs = steady.len();
        let iters = steady.first().map_or(0, Vec::len);
        for table in slides.iter().chain(std::iter::once(&steady)) {
            if table.len() != pairs || table.iter().any(|w| w.len() != iters) {
                return Err(Error::InvalidParameter(
                    "window schedule tables have inconsistent dimensions".into(),
                ));
            }
            if let Some(w) = table.iter().flatten().find(|w| !(w.is_finite() && **w >= 0.0)) {
                return Err(Error::InvalidParameter(format!(
                    "scaling factors must be finite and nonnegative, got {w}"
                )));
            }
        }
        Ok(Self { slides, steady })
    }

    /// The same weight everywhere.
    pub fn constant(w: f64, pairs: usize, iters: usize) -> Self {
        Self {
            slides: Vec::new(),
            steady: vec![vec![w; iters]; pairs],
        }
    }

    pub fn pairs(&self) -> usize {
        self.steady.len()
    }

    pub fn iters(&self) -> usize {
        self.steady.first().map_or(0, Vec::len)
    }

    pub fn weight(&self, slide: usize, pair: usize, iter: usize) -> f64 {
        let table = self.slides.get(slide).unwrap_or(&self.steady);
        table[pair][iter]
    }
}

/// Maps a coupled-ensemble DE run onto a window of `window_blocks` staircase blocks.
///
/// The window holds one frozen block and `window_blocks - 1` active blocks, whose
/// `window_blocks - 1` block pairs correspond one-to-one to the DE check positions.
pub fn schedule_for_window(de: &DeProfile, window_blocks: usize, sr_iters: usize) -> Result<WindowSchedule> {
    let positions = window_blocks.checked_sub(1).filter(|&p| p >= 1).ok_or_else(|| {
        Error::InvalidParameter(format!("window must hold at least 2 blocks, got {window_blocks}"))
    })?;
    if de.ensemble != Ensemble::Sc || de.window != Some(positions) {
        return Err(Error::InvalidParameter(format!(
            "need a coupled-ensemble DE run with a window of {positions} positions"
        )));
    }
    de.check_available()?;
    let unavailable = |reason: String| Error::ScheduleUnavailable {
        ebn0_db: de.ebn0_db,
        reason,
    };
    let iters = de.slides.first().map_or(0, |s| s.weights[0].len());
    if iters < sr_iters {
        return Err(unavailable(format!("DE ran {iters} iterations per slide, {sr_iters} needed")));
    }
    if de.slides.is_empty() {
        return Err(unavailable("DE produced no window slides".into()));
    }
    let last = de.slides.len() - 1;
    let h = de.horizon.unwrap_or(positions).min(last);
    let cut = |s: usize| -> Vec<Vec<f64>> {
        de.slides[s].weights.iter().map(|w| w[..sr_iters].to_vec()).collect()
    };
    WindowSchedule::new((0..h).map(cut).collect(), cut(h))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowConfig {
    /// Blocks in the window, counting the frozen one.
    pub window_blocks: usize,
    pub sr_iters: usize,
    pub plain_iters: usize,
    pub schedule: Option<WindowSchedule>,
}

impl WindowConfig {
    pub fn new(window_blocks: usize, sr_iters: usize, plain_iters: usize, schedule: Option<WindowSchedule>) -> Result<Self> {
        if window_blocks < 2 {
            return Err(Error::InvalidParameter(format!(
                "window must hold at least 2 blocks, got {window_blocks}"
            )));
        }
        if let Some(s) = &schedule {
            if s.pairs() != window_blocks - 1 || s.iters() < sr_iters {
                return Err(Error::InvalidParameter(format!(
                    "schedule is {}x{}, window needs {}x{sr_iters}",
                    s.pairs(),
                    s.iters(),
                    window_blocks - 1
                )));
            }
        }
        Ok(Self {
            window_blocks,
            sr_iters,
            plain_iters,
            schedule,
        })
    }
}

struct Slot {
    dec: BitMatrix,
    llr: LlrMatrix,
    tx: Option<BitMatrix>,
}

/// Streaming window decoder: push received blocks, collect final decisions.
pub struct WindowDecoder {
    code: StaircaseCode,
    cfg: WindowConfig,
    mode: DecoderMode,
    frozen: BitMatrix,
    frozen_tx: BitMatrix,
    active: VecDeque<Slot>,
    slide: usize,
    scratch: BddScratch,
    word: Vec<u8>,
    word_llr: Vec<f64>,
    word_tx: Vec<u8>,
}

impl WindowDecoder {
    pub fn new(code: StaircaseCode, cfg: WindowConfig, mode: DecoderMode) -> Result<Self> {
        if mode == DecoderMode::IbddSr && cfg.schedule.is_none() {
            return Err(Error::InvalidParameter("iBDD-SR needs a window schedule".into()));
        }
        let h = code.half;
        Ok(Self {
            frozen: BitMatrix::zeros(h, h),
            frozen_tx: BitMatrix::zeros(h, h),
            active: VecDeque::with_capacity(cfg.window_blocks),
            slide: 0,
            scratch: BddScratch::default(),
            word: vec![0; 2 * h],
            word_llr: vec![0.0; 2 * h],
            word_tx: vec![0; 2 * h],
            code,
            cfg,
            mode,
        })
    }

    /// Adds the next received block; returns the block leaving the window, if any.
    /// `transmitted` is required in ideal mode.
    pub fn push(&mut self, llr: LlrMatrix, transmitted: Option<BitMatrix>) -> Result<Option<BitMatrix>> {
        let h = self.code.half;
        llr.check_shape(h, h)?;
        if self.mode == DecoderMode::Ideal && transmitted.is_none() {
            return Err(Error::InvalidParameter("ideal mode needs the transmitted block".into()));
        }
        self.active.push_back(Slot {
            dec: harden(&llr),
            llr,
            tx: transmitted,
        });
        if self.active.len() < self.cfg.window_blocks - 1 {
            return Ok(None);
        }
        Ok(Some(self.decode_and_emit()))
    }

    /// Drains the window at the end of the stream.
    pub fn finish(&mut self) -> Vec<BitMatrix> {
        let mut out = Vec::with_capacity(self.active.len());
        while !self.active.is_empty() {
            out.push(self.decode_and_emit());
        }
        out
    }

    fn decode_and_emit(&mut self) -> BitMatrix {
        let total = self.cfg.sr_iters + self.cfg.plain_iters;
        for it in 0..total {
            for pair in 0..self.active.len() {
                self.decode_pair(pair, it);
            }
        }
        let slot = self.active.pop_front().expect("nonempty window");
        self.frozen = slot.dec.clone();
        if let Some(tx) = slot.tx {
            self.frozen_tx = tx;
        }
        self.slide += 1;
        slot.dec
    }

    /// Decodes the `h` component words spanning pair `pair` (pair 0 = frozen, oldest active).
    fn decode_pair(&mut self, pair: usize, it: usize) {
        let h = self.code.half;
        let scaled = self.mode == DecoderMode::IbddSr && it < self.cfg.sr_iters;
        let w = if scaled {
            self.cfg
                .schedule
                .as_ref()
                .map(|s| s.weight(self.slide, pair, it))
        } else {
            None
        };
        for r in 0..h {
            let (left, right) = if pair == 0 {
                (&self.frozen, &self.active[0].dec)
            } else {
                (&self.active[pair - 1].dec, &self.active[pair].dec)
            };
            gather(left, right, r, &mut self.word);
            let rule = match (self.mode, w) {
                (DecoderMode::Ideal, _) => {
                    let (lt, rt) = if pair == 0 {
                        (&self.frozen_tx, self.active[0].tx.as_ref())
                    } else {
                        (
                            self.active[pair - 1].tx.as_ref().expect("genie block"),
                            self.active[pair].tx.as_ref(),
                        )
                    };
                    gather(lt, rt.expect("genie block"), r, &mut self.word_tx);
                    LineRule::Ideal {
                        transmitted: &self.word_tx,
                    }
                }
                (_, Some(w)) => {
                    let rl = &self.active[pair].llr;
                    if pair == 0 {
                        self.word_llr[..h].fill(0.0);
                    } else {
                        let ll = &self.active[pair - 1].llr;
                        for c in 0..h {
                            self.word_llr[c] = ll.get(c, r);
                        }
                    }
                    self.word_llr[h..].copy_from_slice(rl.row(r));
                    LineRule::Scaled {
                        w,
                        llr: &self.word_llr,
                    }
                }
                _ => LineRule::Plain,
            };
            decode_line(&self.code.component, &mut self.scratch, &mut self.word, rule);
            // scatter back; the frozen block never changes
            if pair > 0 {
                let l = &mut self.active[pair - 1].dec;
                for c in 0..h {
                    l.set(c, r, self.word[c]);
                }
            }
            self.active[pair].dec.row_mut(r).copy_from_slice(&self.word[h..]);
        }
    }
}

/// Decodes a whole received stream `B_1, B_2, ...` and returns one decision per block.
pub fn window_decode(
    code: &StaircaseCode,
    llr_blocks: &[LlrMatrix],
    cfg: &WindowConfig,
    mode: DecoderMode,
    transmitted: Option<&[BitMatrix]>,
) -> Result<Vec<BitMatrix>> {
    if let Some(tx) = transmitted {
        if tx.len() != llr_blocks.len() {
            return Err(Error::LengthMismatch {
                expected: llr_blocks.len(),
                actual: tx.len(),
            });
        }
    }
    let mut dec = WindowDecoder::new(code.clone(), cfg.clone(), mode)?;
    let mut out = Vec::with_capacity(llr_blocks.len());
    for (i, l) in llr_blocks.iter().enumerate() {
        if let Some(b) = dec.push(l.clone(), transmitted.map(|t| t[i].clone()))? {
            out.push(b);
        }
    }
    out.extend(dec.finish());
    Ok(out)
}

/// Writes one block: `"STCB"`, `n` (u32 LE), `block_index` (u64 LE), then the bits
/// row-major, packed MSB-first.
pub fn write_block<W: Write>(w: &mut W, n: u32, block_index: u64, block: &BitMatrix) -> Result<()> {
    let mut header = [0u8; 16];
    header[..4].copy_from_slice(&BLOCK_MAGIC);
    header[4..8].copy_from_slice(&n.to_le_bytes());
    header[8..].copy_from_slice(&block_index.to_le_bytes());
    w.write_all(&header)?;
    let mut packed = vec![0u8; block.as_slice().len().div_ceil(8)];
    for (i, &b) in block.as_slice().iter().enumerate() {
        packed[i / 8] |= (b & 1) << (7 - i % 8);
    }
    w.write_all(&packed)?;
    Ok(())
}

/// Reads one block written by [`write_block`]; returns `(n, block_index, block)`.
pub fn read_block<R: Read>(r: &mut R) -> Result<(u32, u64, BitMatrix)> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header)?;
    if header[..4] != BLOCK_MAGIC {
        return Err(Error::Parse("bad block magic".into()));
    }
    let n = u32::from_le_bytes(header[4..8].try_into().expect("4 bytes"));
    let idx = u64::from_le_bytes(header[8..].try_into().expect("8 bytes"));
    if n == 0 || n % 2 != 0 {
        return Err(Error::Parse(format!("invalid component length {n} in block header")));
    }
    let h = n as usize / 2;
    let mut packed = vec![0u8; (h * h).div_ceil(8)];
    r.read_exact(&mut packed)?;
    let bits = (0..h * h).map(|i| packed[i / 8] >> (7 - i % 8) & 1).collect();
    Ok((n, idx, BitMatrix::from_vec(h, h, bits)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{transmit, ChannelParams};
    use crate::de::{design_rate, profile_for, run_sc, scaling_factor, cn_half_step, DeChannel, ScConfig, SumRange, WeightRule, WEIGHT_CAP};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn toy() -> StaircaseCode {
        StaircaseCode::new(BchCode::new(5, 2, 1).unwrap()).unwrap()
    }

    fn random_info(sc: &StaircaseCode, rng: &mut impl Rng) -> BitMatrix {
        BitMatrix::from_fn(sc.block_size(), sc.info_cols(), |_, _| rng.random_range(0..2u8))
    }

    #[test]
    fn dimensions() {
        let sc = StaircaseCode::new(BchCode::new(8, 3, 1).unwrap()).unwrap();
        assert_eq!(sc.block_size(), 127);
        assert_eq!(sc.info_cols(), 103);
        assert!((sc.rate() - 0.811).abs() < 5e-4);
        // rate bookkeeping: info bits per block over block bits
        let r = sc.info_bits_per_block() as f64 / (127.0 * 127.0);
        assert!((r - sc.rate()).abs() < 1e-12);
        assert!(StaircaseCode::new(BchCode::new(8, 3, 0).unwrap()).is_err());
        let t = toy();
        assert_eq!((t.block_size(), t.info_cols()), (15, 5));
    }

    #[test]
    fn zero_in_zero_out() {
        let sc = toy();
        let b = sc.encode_block(&BitMatrix::zeros(15, 15), &BitMatrix::zeros(15, 5)).unwrap();
        assert_eq!(b.count_ones(), 0);
        assert!(sc.encode_block(&BitMatrix::zeros(15, 14), &BitMatrix::zeros(15, 5)).is_err());
    }

    #[test]
    fn stream_is_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sc = toy();
        let info: Vec<_> = (0..6).map(|_| random_info(&sc, &mut rng)).collect();
        let s = sc.encode_stream(&info).unwrap();
        assert_eq!(s[0].count_ones(), 0);
        for w in s.windows(2) {
            assert!(sc.is_consistent(&w[0], &w[1]));
        }
    }

    #[test]
    fn framing_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let b = BitMatrix::from_fn(15, 15, |_, _| rng.random_range(0..2u8));
        let mut buf = Vec::new();
        write_block(&mut buf, 30, 42, &b).unwrap();
        assert_eq!(buf.len(), 16 + 29);
        assert_eq!(&buf[..4], b"STCB");
        let (n, i, back) = read_block(&mut buf.as_slice()).unwrap();
        assert_eq!((n, i), (30, 42));
        assert_eq!(back, b);
        buf[0] = b'X';
        assert!(read_block(&mut buf.as_slice()).is_err());
    }

    fn plain_cfg() -> WindowConfig {
        WindowConfig::new(7, 0, 6, None).unwrap()
    }

    #[test]
    fn noiseless_stream_decodes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let sc = toy();
        let info: Vec<_> = (0..10).map(|_| random_info(&sc, &mut rng)).collect();
        let tx = sc.encode_stream(&info).unwrap();
        let llr: Vec<_> = tx[1..].iter().map(|b| b.map(|&x| if x == 1 { -5.0 } else { 5.0 })).collect();
        let sched = WindowSchedule::constant(2.0, 6, 4);
        let sr = WindowConfig::new(7, 4, 2, Some(sched)).unwrap();
        for (cfg, mode) in [(plain_cfg(), DecoderMode::Ibdd), (sr, DecoderMode::IbddSr), (plain_cfg(), DecoderMode::Ideal)] {
            let out = window_decode(&sc, &llr, &cfg, mode, Some(&tx[1..])).unwrap();
            assert_eq!(out, tx[1..].to_vec());
        }
    }

    #[test]
    fn few_errors_in_a_row_corrected() {
        let sc = toy();
        let tx = sc.encode_stream(&vec![BitMatrix::zeros(15, 5); 8]).unwrap();
        let mut llr: Vec<_> = tx[1..].iter().map(|b| b.map(|_| 4.0)).collect();
        llr[2].set(3, 1, -1.0);
        llr[2].set(3, 9, -1.0);
        let out = window_decode(&sc, &llr, &plain_cfg(), DecoderMode::Ibdd, None).unwrap();
        assert!(out.iter().all(|b| b.count_ones() == 0));
    }

    #[test]
    fn zero_weights_keep_channel_decisions() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let sc = toy();
        let llr: Vec<_> = (0..9).map(|_| LlrMatrix::from_fn(15, 15, |_, _| rng.random_range(-1.0..5.0))).collect();
        let cfg = WindowConfig::new(4, 3, 0, Some(WindowSchedule::constant(0.0, 3, 3))).unwrap();
        let out = window_decode(&sc, &llr, &cfg, DecoderMode::IbddSr, None).unwrap();
        for (o, l) in out.iter().zip(&llr) {
            assert_eq!(*o, harden(l));
        }
    }

    #[test]
    fn emitted_blocks_are_final() {
        // Full-memory reference: record every block's decisions after each window and
        // check nothing changes once a block is emitted.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let sc = toy();
        let params = ChannelParams::new(2.5, sc.rate()).unwrap();
        let info: Vec<_> = (0..12).map(|_| random_info(&sc, &mut rng)).collect();
        let tx = sc.encode_stream(&info).unwrap();
        let llr: Vec<_> = tx[1..].iter().map(|b| transmit(b, &params, &mut rng)).collect();
        let mut dec = WindowDecoder::new(sc.clone(), plain_cfg(), DecoderMode::Ibdd).unwrap();
        let mut emitted: Vec<BitMatrix> = Vec::new();
        for l in &llr {
            if let Some(b) = dec.push(l.clone(), None).unwrap() {
                emitted.push(b);
            }
            assert_eq!(dec.frozen, emitted.last().cloned().unwrap_or(BitMatrix::zeros(15, 15)));
        }
        emitted.extend(dec.finish());
        let again = window_decode(&sc, &llr, &plain_cfg(), DecoderMode::Ibdd, None).unwrap();
        assert_eq!(emitted, again);
    }

    #[test]
    fn ideal_never_miscorrects() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let sc = toy();
        let params = ChannelParams::new(2.0, sc.rate()).unwrap();
        let info: Vec<_> = (0..15).map(|_| random_info(&sc, &mut rng)).collect();
        let tx = sc.encode_stream(&info).unwrap();
        let llr: Vec<_> = tx[1..].iter().map(|b| transmit(b, &params, &mut rng)).collect();
        let out = window_decode(&sc, &llr, &plain_cfg(), DecoderMode::Ideal, Some(&tx[1..])).unwrap();
        for ((o, l), t) in out.iter().zip(&llr).zip(&tx[1..]) {
            let r = harden(l);
            for (i, (&ob, &tb)) in o.as_slice().iter().zip(t.as_slice()).enumerate() {
                if ob != tb {
                    assert_ne!(r.as_slice()[i], tb);
                }
            }
        }
    }

    #[test]
    fn schedule_maps_window_positions() {
        let code = BchCode::new(8, 3, 0).unwrap();
        let prof = profile_for(&code, SumRange::Exact).unwrap();
        let params = ChannelParams::new(4.3, design_rate(255, 231)).unwrap();
        let de = run_sc(&prof, &params, &ScConfig::default());
        let s = schedule_for_window(&de, 7, 10).unwrap();
        assert_eq!(s.pairs(), 6);
        assert_eq!(s.iters(), 10);
        let h = de.horizon.unwrap();
        assert_eq!(s.slides.len(), h);
        for slide in h..de.slides.len() {
            for a in 0..6 {
                for l in 0..10 {
                    assert!((s.weight(slide, a, l) - de.slides[slide].weights[a][l]).abs() < 1e-6);
                }
            }
        }
        assert!(schedule_for_window(&de, 6, 10).is_err());
        assert!(schedule_for_window(&de, 7, 30).is_err());
    }

    #[test]
    fn two_block_window_schedule() {
        // One active position: its check sees (x + 0) / 2 and the open side keeps p_ch.
        let code = BchCode::new(8, 3, 0).unwrap();
        let prof = profile_for(&code, SumRange::Exact).unwrap();
        let params = ChannelParams::new(4.3, design_rate(255, 231)).unwrap();
        let cfg = ScConfig {
            window: 1,
            slides: 3,
            ..Default::default()
        };
        let de = run_sc(&prof, &params, &cfg);
        let s = schedule_for_window(&de, 2, 20).unwrap();
        let ch = DeChannel::from(&params);
        let mut x = ch.p_ch;
        for l in 0..20 {
            let tr = prof.transitions(x / 2.0, ch.p_ch);
            assert_eq!(s.weight(0, 0, l), scaling_factor(&tr, WEIGHT_CAP).w);
            let (g, _) = cn_half_step(&prof, x / 2.0, ch, WEIGHT_CAP, WeightRule::ErasureLlr);
            x = (g + ch.p_ch) / 2.0;
        }
    }

    #[test]
    fn config_validation() {
        assert!(WindowConfig::new(1, 0, 1, None).is_err());
        assert!(WindowConfig::new(7, 5, 1, Some(WindowSchedule::constant(1.0, 6, 4))).is_err());
        assert!(WindowConfig::new(7, 5, 1, Some(WindowSchedule::constant(1.0, 5, 5))).is_err());
        assert!(WindowDecoder::new(toy(), plain_cfg(), DecoderMode::IbddSr).is_err());
        assert!(WindowSchedule::new(vec![], vec![vec![1.0, f64::NAN]]).is_err());
    }
}
