//! Paired-noise Monte-Carlo BER/FER estimation.
//!
//! Every frame draws its noise from its own ChaCha8 stream `(point seed, frame index)`,
//! so results do not depend on how frames are spread over worker threads, and all
//! decoder modes at a point see exactly the same channel outputs.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bch::{BchCode, BchSpec};
use crate::channel::{harden, transmit, ChannelParams};
use crate::de::{self, DeProfile, GldpcConfig, ScConfig, SumRange};
use crate::error::{Error, Result};
use crate::matrix::BitMatrix;
use crate::product::{DecoderMode, ProductCode, ScalingSchedule};
use crate::staircase::{schedule_for_window, window_decode, StaircaseCode, WindowConfig, WindowSchedule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Pc,
    Staircase,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Pc => "pc",
            Scheme::Staircase => "staircase",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pc" | "product" => Ok(Scheme::Pc),
            "staircase" | "sc" => Ok(Scheme::Staircase),
            other => Err(Error::Parse(format!("unknown scheme '{other}'"))),
        }
    }
}

/// Where the iBDD-SR weights come from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleSource {
    /// Density evolution at the simulated Eb/N0.
    DeAtOperatingSnr,
    /// One weight for every half-iteration and window position.
    Fixed { w: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub scheme: Scheme,
    pub component: BchSpec,
    pub modes: Vec<DecoderMode>,
    pub ebn0_grid: Vec<f64>,
    pub schedule: ScheduleSource,
    pub sr_iters: usize,
    pub plain_iters: usize,
    /// Staircase window size in blocks (frozen block included).
    pub window_blocks: usize,
    /// Staircase blocks counted per frame; warm-up and flush blocks are added around them.
    pub stream_blocks: usize,
    pub min_frame_errors: u64,
    /// Mode whose frame-error count drives the stopping rule; `None` waits for the slowest.
    #[serde(default)]
    pub stop_mode: Option<DecoderMode>,
    pub max_frames: u64,
    /// Frames simulated between two checks of the stopping rule.
    pub batch: u64,
    pub seed: u64,
    /// Worker threads; 0 uses the global rayon pool.
    pub workers: usize,
    pub random_info: bool,
    /// Modes whose BER drops below this are not simulated at higher SNRs.
    pub ber_floor: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::Pc,
            component: BchSpec::new(4, 1, 0),
            modes: DecoderMode::ALL.to_vec(),
            ebn0_grid: Vec::new(),
            schedule: ScheduleSource::DeAtOperatingSnr,
            sr_iters: 10,
            plain_iters: 2,
            window_blocks: 7,
            stream_blocks: 10,
            min_frame_errors: 50,
            stop_mode: None,
            max_frames: 1_000_000,
            batch: 64,
            seed: 1,
            workers: 0,
            random_info: false,
            ber_floor: 1e-7,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if self.modes.is_empty() {
            return bad("no decoder modes selected");
        }
        if self.ebn0_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("Eb/N0 grid must be strictly ascending");
        }
        if self.min_frame_errors == 0 || self.max_frames == 0 || self.batch == 0 {
            return bad("error target, frame budget and batch size must be positive");
        }
        if self.scheme == Scheme::Staircase && (self.window_blocks < 2 || self.stream_blocks == 0) {
            return bad("staircase needs window_blocks >= 2 and stream_blocks >= 1");
        }
        if let ScheduleSource::Fixed { w } = self.schedule {
            if !(w.is_finite() && w >= 0.0) {
                return bad("fixed scaling factor must be finite and nonnegative");
            }
        }
        Ok(())
    }

    fn warmup(&self) -> usize {
        self.window_blocks - 1
    }

    fn total_blocks(&self) -> usize {
        self.stream_blocks + 2 * self.warmup()
    }
}

/// Statistics of one decoder mode at one Eb/N0 point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    pub ebn0_db: f64,
    pub mode: DecoderMode,
    pub frames: u64,
    pub frame_errors: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub fer: f64,
    /// Wilson 95 % interval on the FER.
    pub fer_ci: (f64, f64),
    /// Bootstrap 95 % interval on the BER over frames.
    pub ber_ci: (f64, f64),
    pub wall_s: f64,
}

/// Outcome of one grid point across all simulated modes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub ebn0_db: f64,
    pub points: Vec<BerPoint>,
    /// Modes that could not be run, with the reason.
    pub skipped: Vec<(DecoderMode, String)>,
    pub bits_per_frame: u64,
    /// Per-frame bit errors, indexed like `points`.
    #[serde(skip)]
    pub frame_bit_errors: Vec<Vec<u32>>,
}

/// Difference in BER between two modes on the same frames.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairedGap {
    pub better: DecoderMode,
    pub worse: DecoderMode,
    /// `BER(worse) - BER(better)`.
    pub gap: f64,
    pub ci: (f64, f64),
}

impl PairedGap {
    pub fn excludes_zero(&self) -> bool {
        self.ci.0 > 0.0 || self.ci.1 < 0.0
    }
}

impl PointResult {
    pub fn point(&self, mode: DecoderMode) -> Option<&BerPoint> {
        self.points.iter().find(|p| p.mode == mode)
    }

    /// Paired bootstrap interval on the per-frame BER difference between two modes.
    pub fn paired_gap(&self, better: DecoderMode, worse: DecoderMode, resamples: usize, seed: u64) -> Option<PairedGap> {
        let ia = self.points.iter().position(|p| p.mode == better)?;
        let ib = self.points.iter().position(|p| p.mode == worse)?;
        let (a, b) = (&self.frame_bit_errors[ia], &self.frame_bit_errors[ib]);
        let bpf = self.bits_per_frame as f64;
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| (*y as f64 - *x as f64) / bpf).collect();
        let gap = d.iter().sum::<f64>() / d.len().max(1) as f64;
        let ci = bootstrap_mean_ci(&d, resamples, seed);
        Some(PairedGap {
            better,
            worse,
            gap,
            ci,
        })
    }
}

/// Wilson score interval at 95 % for `k` successes in `n` trials.
pub fn wilson_ci95(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let (nf, p) = (n as f64, k as f64 / n as f64);
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Percentile bootstrap 95 % interval of the mean of `x`.
pub fn bootstrap_mean_ci(x: &[f64], resamples: usize, seed: u64) -> (f64, f64) {
    if x.is_empty() {
        return (0.0, 0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = x.len();
    let mut means: Vec<f64> = (0..resamples.max(1))
        .map(|_| (0..n).map(|_| x[rng.random_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let q = |f: f64| means[((means.len() - 1) as f64 * f).round() as usize];
    (q(0.025), q(0.975))
}

/// Eb/N0 at which a curve crosses `target_ber`, by log-linear interpolation.
pub fn interpolate_ebn0(curve: &[(f64, f64)], target_ber: f64) -> Option<f64> {
    curve.windows(2).find_map(|w| {
        let ((s0, b0), (s1, b1)) = (w[0], w[1]);
        if b0 >= target_ber && b1 <= target_ber && b0 > 0.0 && b1 > 0.0 && b0 != b1 {
            let (l0, l1, lt) = (b0.log10(), b1.log10(), target_ber.log10());
            Some(s0 + (lt - l0) / (l1 - l0) * (s1 - s0))
        } else if b0 == target_ber {
            Some(s0)
        } else {
            None
        }
    })
}

/// SNR gain (dB) of `candidate` over `reference` at `target_ber`; curves are `(ebn0_db, ber)`.
pub fn paired_gain_estimate(reference: &[(f64, f64)], candidate: &[(f64, f64)], target_ber: f64) -> Result<f64> {
    let miss = |which: &str| Error::InvalidParameter(format!("{which} curve does not bracket BER {target_ber:e}"));
    let r = interpolate_ebn0(reference, target_ber).ok_or_else(|| miss("reference"))?;
    let c = interpolate_ebn0(candidate, target_ber).ok_or_else(|| miss("candidate"))?;
    Ok(r - c)
}

pub fn csv_header() -> &'static str {
    "scheme,component,mode,ebn0_db,frames,frame_errors,bits,bit_errors,ber,fer,ci_lo,ci_hi,seed,wall_s"
}

pub fn component_label(spec: &BchSpec) -> String {
    match spec.build() {
        Ok(c) => format!("bch_{}_{}_t{}", c.n(), c.k(), c.t()),
        Err(_) => format!("bch_m{}_t{}_s{}", spec.m, spec.t, spec.shorten),
    }
}

impl BerPoint {
    pub fn csv_row(&self, cfg: &SimConfig) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{:e},{:e},{:e},{:e},{},{:.3}",
            cfg.scheme.name(),
            component_label(&cfg.component),
            self.mode,
            self.ebn0_db,
            self.frames,
            self.frame_errors,
            self.bits,
            self.bit_errors,
            self.ber,
            self.fer,
            self.ber_ci.0,
            self.ber_ci.1,
            cfg.seed,
            self.wall_s
        )
    }
}

/// All points of a curve as CSV, header included.
pub fn to_csv(cfg: &SimConfig, results: &[PointResult]) -> String {
    let mut s = String::from(csv_header());
    s.push('\n');
    for r in results {
        for p in &r.points {
            s.push_str(&p.csv_row(cfg));
            s.push('\n');
        }
    }
    s
}

/// JSON mirror of a curve with the configuration embedded.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveReport {
    pub config: SimConfig,
    pub points: Vec<PointResult>,
    pub warnings: Vec<String>,
}

/// Schedule handed to the decoders at one point.
#[derive(Clone, Debug)]
enum Resolved {
    Pc(ScalingSchedule),
    Window(WindowSchedule),
}

/// Everything a frame needs, built once per point.
struct Setup {
    component: Arc<BchCode>,
    params: ChannelParams,
    modes: Vec<DecoderMode>,
    schedule: Option<Resolved>,
    window: Option<WindowConfig>,
}

/// DE run used for the iBDD-SR weights at the operating point.
pub fn operating_point_de(cfg: &SimConfig, component: &BchCode, params: &ChannelParams) -> Result<DeProfile> {
    let prof = de::profile_for(component, SumRange::Exact)?;
    Ok(match cfg.scheme {
        Scheme::Pc => de::run_gldpc(
            &prof,
            params,
            &GldpcConfig {
                iterations: cfg.sr_iters,
                ..Default::default()
            },
        ),
        Scheme::Staircase => {
            let w = cfg.window_blocks - 1;
            de::run_sc(
                &prof,
                params,
                &ScConfig {
                    window: w,
                    iterations: cfg.sr_iters,
                    slides: 3 * w + 2,
                    ..Default::default()
                },
            )
        }
    })
}

fn resolve_schedule(cfg: &SimConfig, component: &BchCode, params: &ChannelParams) -> Result<Resolved> {
    let pairs = cfg.window_blocks - 1;
    match (cfg.schedule, cfg.scheme) {
        (ScheduleSource::Fixed { w }, Scheme::Pc) => Ok(Resolved::Pc(ScalingSchedule::constant(w, cfg.sr_iters)?)),
        (ScheduleSource::Fixed { w }, Scheme::Staircase) => {
            Ok(Resolved::Window(WindowSchedule::constant(w, pairs, cfg.sr_iters)))
        }
        (ScheduleSource::DeAtOperatingSnr, _) => {
            let de = operating_point_de(cfg, component, params)?;
            match cfg.scheme {
                Scheme::Pc => Ok(Resolved::Pc(ScalingSchedule::from_de(&de, cfg.sr_iters)?)),
                Scheme::Staircase => Ok(Resolved::Window(schedule_for_window(&de, cfg.window_blocks, cfg.sr_iters)?)),
            }
        }
    }
}

fn point_seed(seed: u64, ebn0_db: f64) -> u64 {
    // splitmix64 finaliser over (seed, SNR bits)
    let mut z = seed ^ ebn0_db.to_bits().rotate_left(17) ^ 0x9E37_79B9_7F4A_7C15;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The noise/info generator of frame `index` at a point.
pub fn frame_rng(seed: u64, ebn0_db: f64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(point_seed(seed, ebn0_db));
    rng.set_stream(index);
    rng
}

fn simulate_frame(cfg: &SimConfig, setup: &Setup, seed: u64, ebn0_db: f64, index: u64) -> Result<Vec<u32>> {
    let mut rng = frame_rng(seed, ebn0_db, index);
    match cfg.scheme {
        Scheme::Pc => {
            let pc = ProductCode::from_arc(setup.component.clone());
            let (n, k) = (pc.n(), pc.k());
            let tx = if cfg.random_info {
                let info = BitMatrix::from_fn(k, k, |_, _| rng.random_range(0..2u8));
                pc.encode(&info)?
            } else {
                BitMatrix::zeros(n, n)
            };
            let llr = transmit(&tx, &setup.params, &mut rng);
            let iters = cfg.sr_iters + cfg.plain_iters;
            setup
                .modes
                .iter()
                .map(|&m| {
                    let out = match m {
                        DecoderMode::Ibdd => pc.ibdd_decode(&harden(&llr), iters)?,
                        DecoderMode::Ideal => pc.ideal_ibdd_decode(&harden(&llr), &tx, iters)?,
                        DecoderMode::IbddSr => {
                            let Some(Resolved::Pc(s)) = &setup.schedule else {
                                unreachable!("iBDD-SR runs only with a resolved schedule")
                            };
                            pc.ibdd_sr_decode(&llr, s, cfg.sr_iters, cfg.plain_iters)?
                        }
                    };
                    Ok(out.hamming_distance(&tx) as u32)
                })
                .collect()
        }
        Scheme::Staircase => {
            let sc = StaircaseCode::from_arc(setup.component.clone())?;
            let total = cfg.total_blocks();
            let info: Vec<BitMatrix> = (0..total)
                .map(|_| {
                    if cfg.random_info {
                        BitMatrix::from_fn(sc.block_size(), sc.info_cols(), |_, _| rng.random_range(0..2u8))
                    } else {
                        BitMatrix::zeros(sc.block_size(), sc.info_cols())
                    }
                })
                .collect();
            let stream = sc.encode_stream(&info)?;
            let tx = &stream[1..];
            let llr: Vec<_> = tx.iter().map(|b| transmit(b, &setup.params, &mut rng)).collect();
            let counted = cfg.warmup()..cfg.warmup() + cfg.stream_blocks;
            let window = setup.window.as_ref().expect("staircase window config");
            setup
                .modes
                .iter()
                .map(|&m| {
                    let out = match m {
                        DecoderMode::IbddSr => {
                            let Some(Resolved::Window(s)) = &setup.schedule else {
                                unreachable!("iBDD-SR runs only with a resolved schedule")
                            };
                            let mut w = window.clone();
                            w.schedule = Some(s.clone());
                            window_decode(&sc, &llr, &w, m, None)?
                        }
                        DecoderMode::Ideal => window_decode(&sc, &llr, window, m, Some(tx))?,
                        DecoderMode::Ibdd => window_decode(&sc, &llr, window, m, None)?,
                    };
                    Ok(counted.clone().map(|i| out[i].hamming_distance(&tx[i]) as u32).sum())
                })
                .collect()
        }
    }
}

/// Runs one Eb/N0 point for `modes` on paired noise.
pub fn run_point_modes(cfg: &SimConfig, ebn0_db: f64, modes: &[DecoderMode]) -> Result<PointResult> {
    cfg.validate()?;
    let start = Instant::now();
    let component = Arc::new(cfg.component.build()?);
    let rate = match cfg.scheme {
        Scheme::Pc => ProductCode::from_arc(component.clone()).rate(),
        Scheme::Staircase => StaircaseCode::from_arc(component.clone())?.rate(),
    };
    let params = ChannelParams::new(ebn0_db, rate)?;
    let mut skipped = Vec::new();
    let mut schedule = None;
    let mut run_modes: Vec<DecoderMode> = Vec::new();
    for &m in modes {
        if m == DecoderMode::IbddSr {
            match resolve_schedule(cfg, &component, &params) {
                Ok(s) => schedule = Some(s),
                Err(e) => {
                    skipped.push((m, e.to_string()));
                    continue;
                }
            }
        }
        if !run_modes.contains(&m) {
            run_modes.push(m);
        }
    }
    let bits_per_frame = match cfg.scheme {
        Scheme::Pc => (component.n() * component.n()) as u64,
        Scheme::Staircase => (cfg.stream_blocks * (component.n() / 2).pow(2)) as u64,
    };
    let window = match cfg.scheme {
        Scheme::Pc => None,
        Scheme::Staircase => Some(WindowConfig::new(cfg.window_blocks, cfg.sr_iters, cfg.plain_iters, None)?),
    };
    let setup = Setup {
        component,
        params,
        modes: run_modes.clone(),
        schedule,
        window,
    };
    let pool = if cfg.workers > 0 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.workers)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };
    let mut per_frame: Vec<Vec<u32>> = vec![Vec::new(); run_modes.len()];
    let mut frame_errors = vec![0u64; run_modes.len()];
    let mut frames = 0u64;
    while !run_modes.is_empty() && frames < cfg.max_frames {
        let end = (frames + cfg.batch).min(cfg.max_frames);
        let work = || -> Result<Vec<Vec<u32>>> {
            (frames..end)
                .into_par_iter()
                .map(|i| simulate_frame(cfg, &setup, cfg.seed, ebn0_db, i))
                .collect()
        };
        let batch = match &pool {
            Some(p) => p.install(work)?,
            None => work()?,
        };
        for errs in batch {
            for (m, e) in errs.into_iter().enumerate() {
                per_frame[m].push(e);
                frame_errors[m] += (e > 0) as u64;
            }
        }
        frames = end;
        let driver = cfg.stop_mode.and_then(|m| run_modes.iter().position(|&x| x == m));
        let done = match driver {
            Some(i) => frame_errors[i] >= cfg.min_frame_errors,
            None => frame_errors.iter().all(|&e| e >= cfg.min_frame_errors),
        };
        if done {
            break;
        }
    }
    let wall = start.elapsed().as_secs_f64();
    let points = run_modes
        .iter()
        .enumerate()
        .map(|(m, &mode)| {
            let bit_errors: u64 = per_frame[m].iter().map(|&e| e as u64).sum();
            let bits = frames * bits_per_frame;
            let ber = bit_errors as f64 / bits as f64;
            let per_frame_ber: Vec<f64> = per_frame[m].iter().map(|&e| e as f64 / bits_per_frame as f64).collect();
            let (lo, hi) = bootstrap_mean_ci(&per_frame_ber, 1000, point_seed(cfg.seed, ebn0_db) ^ m as u64);
            BerPoint {
                ebn0_db,
                mode,
                frames,
                frame_errors: frame_errors[m],
                bits,
                bit_errors,
                ber,
                fer: frame_errors[m] as f64 / frames as f64,
                fer_ci: wilson_ci95(frame_errors[m], frames),
                ber_ci: (lo.min(ber), hi.max(ber)),
                wall_s: wall,
            }
        })
        .collect();
    Ok(PointResult {
        ebn0_db,
        points,
        skipped,
        bits_per_frame,
        frame_bit_errors: per_frame,
    })
}

pub fn run_point(cfg: &SimConfig, ebn0_db: f64) -> Result<PointResult> {
    run_point_modes(cfg, ebn0_db, &cfg.modes)
}

/// Runs the whole grid, calling `on_point` as each point finishes.
pub fn run_curve(cfg: &SimConfig, mut on_point: impl FnMut(&PointResult)) -> Result<CurveReport> {
    cfg.validate()?;
    let mut active = cfg.modes.clone();
    let mut points: Vec<PointResult> = Vec::new();
    let mut warnings = Vec::new();
    for &db in &cfg.ebn0_grid {
        if active.is_empty() {
            break;
        }
        let r = run_point_modes(cfg, db, &active)?;
        for (m, why) in &r.skipped {
            warnings.push(format!("{db} dB: {m} skipped: {why}"));
        }
        if let Some(prev) = points.last() {
            for p in &r.points {
                if let Some(q) = prev.point(p.mode) {
                    if p.ber_ci.0 > q.ber_ci.1 {
                        warnings.push(format!(
                            "{}: BER rises from {:.3e} at {} dB to {:.3e} at {} dB",
                            p.mode, q.ber, q.ebn0_db, p.ber, p.ebn0_db
                        ));
                    }
                }
            }
        }
        active.retain(|m| r.point(*m).is_none_or(|p| p.ber >= cfg.ber_floor));
        on_point(&r);
        points.push(r);
    }
    Ok(CurveReport {
        config: cfg.clone(),
        points,
        warnings,
    })
}

impl CurveReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_csv(&self) -> String {
        to_csv(&self.config, &self.points)
    }

    /// `(ebn0_db, ber)` pairs of one mode.
    pub fn curve(&self, mode: DecoderMode) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter_map(|r| r.point(mode).map(|p| (p.ebn0_db, p.ber)))
            .collect()
    }

    pub fn warning_rows(&self) -> String {
        let mut s = String::new();
        for w in &self.warnings {
            let _ = writeln!(s, "# warning: {w}");
        }
        s
    }
}
