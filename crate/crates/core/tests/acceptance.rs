//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits non-zero if any fail.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ibdd_core::bch::BddOutcome;
use ibdd_core::channel::{harden, transmit};
use ibdd_core::de::{
    design_rate, gldpc_threshold, run_gldpc, run_sc, sc_threshold, ComponentProfile, GldpcConfig, ScConfig,
    WEIGHT_CAP,
};
use ibdd_core::product::HalfIteration;
use ibdd_core::sim::{run_point, PointResult, Scheme, SimConfig};
use ibdd_core::staircase::window_decode;
use ibdd_core::{
    BchCode, BchSpec, BitMatrix, ChannelParams, DecoderMode, ProductCode, ScalingSchedule, StaircaseCode,
    WeightEnumerator, WindowConfig, WindowSchedule,
};

struct Report {
    failed: usize,
}

impl Report {
    fn check(&mut self, name: &str, f: impl FnOnce() -> Result<String, String>) {
        let t0 = Instant::now();
        let r = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let dt = t0.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("PASS  {name}: {msg} [{dt:.1} s]"),
            Err(msg) => {
                self.failed += 1;
                println!("FAIL  {name}: {msg} [{dt:.1} s]");
            }
        }
    }
}

fn ensure(ok: bool, msg: String) -> Result<String, String> {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn prof255() -> ComponentProfile {
    let c = BchCode::new(8, 3, 0).unwrap();
    ComponentProfile::new(3, &c.weight_enumerator_approx()).unwrap()
}

fn rate255() -> f64 {
    design_rate(255, 231)
}

const BRACKET: (f64, f64) = (3.8, 4.6);
const TOL_DB: f64 = 0.002;

fn gldpc_threshold_criterion() -> Result<String, String> {
    let t0 = Instant::now();
    let t = gldpc_threshold(&prof255(), rate255(), &GldpcConfig::default(), BRACKET, TOL_DB)
        .map_err(|e| e.to_string())?;
    let dt = t0.elapsed().as_secs_f64();
    ensure(
        (t - 4.18).abs() <= 0.02 && dt < 60.0,
        format!("threshold {t:.4} dB (target 4.18 +- 0.02), {dt:.2} s"),
    )
}

fn sc_threshold_criterion() -> Result<String, String> {
    let t0 = Instant::now();
    let t = sc_threshold(&prof255(), rate255(), &ScConfig::default(), BRACKET, TOL_DB).map_err(|e| e.to_string())?;
    let dt = t0.elapsed().as_secs_f64();
    ensure(
        (t - 4.05).abs() <= 0.02 && dt < 600.0,
        format!("threshold {t:.4} dB (target 4.05 +- 0.02), {dt:.2} s"),
    )
}

fn monotone_weights() -> Result<String, String> {
    let p = prof255();
    let t = gldpc_threshold(&p, rate255(), &GldpcConfig::default(), BRACKET, TOL_DB).map_err(|e| e.to_string())?;
    let de = run_gldpc(&p, &ChannelParams::new(t, rate255()).unwrap(), &GldpcConfig::default());
    let w: Vec<f64> = de
        .weights_row
        .iter()
        .zip(&de.weights_col)
        .flat_map(|(r, c)| [*r, *c])
        .take(20)
        .collect();
    ensure(
        w.len() == 20 && w.windows(2).all(|p| p[1] > p[0]),
        format!("at {t:.3} dB: w1 = {:.3}, w20 = {:.3}", w[0], w[w.len() - 1]),
    )
}

fn sc_schedule_convergence() -> Result<String, String> {
    let p = prof255();
    let cfg = ScConfig::default();
    let u_minus_1 = cfg.window;
    let de = run_sc(&p, &ChannelParams::new(4.3, rate255()).unwrap(), &cfg);
    let t = sc_threshold(&p, rate255(), &cfg, BRACKET, TOL_DB).map_err(|e| e.to_string())?;
    let at_t = run_sc(&p, &ChannelParams::new(t, rate255()).unwrap(), &cfg);
    let h_at_t = at_t.horizon.map_or("none".into(), |h| h.to_string());
    match de.horizon {
        Some(h) => ensure(
            h <= u_minus_1 && de.converged,
            format!("4.3 dB horizon {h} slides (limit {u_minus_1}); at threshold {t:.3} dB horizon {h_at_t}"),
        ),
        None => Err(format!("4.3 dB schedule never settles; at threshold horizon {h_at_t}")),
    }
}

/// Fraction of BDD outcomes for position 0 over all error placements on the other positions.
fn exhaustive_tables(code: &BchCode) -> [Vec<f64>; 6] {
    let n = code.n();
    let mut counts = vec![[0u64; 6]; n];
    let mut totals = vec![0u64; n];
    let mut r = vec![0u8; n];
    for mask in 0u32..(1 << (n - 1)) {
        let i = mask.count_ones() as usize;
        totals[i] += 1;
        for first in [1u8, 0] {
            r[0] = first;
            for j in 1..n {
                r[j] = (mask >> (j - 1) & 1) as u8;
            }
            let base = if first == 1 { 0 } else { 3 };
            let slot = match code.bdd_decode(&r).unwrap() {
                BddOutcome::Failure => 2,
                BddOutcome::Decoded(c) => usize::from(c[0] == 0),
            };
            counts[i][base + slot] += 1;
        }
    }
    std::array::from_fn(|col| (0..n).map(|i| counts[i][col] as f64 / totals[i] as f64).collect())
}

fn combinatorics_oracle() -> Result<String, String> {
    let mut worst = 0.0f64;
    for t in [1, 2] {
        let code = BchCode::new(4, t, 0).unwrap();
        let a = WeightEnumerator::exact(&code.weight_enumerator_exact().unwrap());
        let prof = ComponentProfile::new(t, &a).unwrap();
        let oracle = exhaustive_tables(&code);
        let model = [&prof.p_e, &prof.p_c, &prof.p_eps, &prof.q_e, &prof.q_c, &prof.q_eps];
        for (m, o) in model.iter().zip(&oracle) {
            for i in 0..code.n() {
                worst = worst.max((m[i] - o[i]).abs());
            }
        }
    }
    ensure(worst <= 1e-12, format!("(15,11) and (15,7): max deviation {worst:.2e}"))
}

fn bdd_exactness() -> Result<String, String> {
    let mut checked = 0u64;
    for t in [1, 2] {
        let code = BchCode::new(4, t, 0).unwrap();
        let (n, k) = (code.n(), code.k());
        let to_mask = |v: &[u8]| v.iter().enumerate().fold(0u32, |m, (j, &b)| m | (u32::from(b) << j));
        let codebook: Vec<u32> = (0u32..1 << k)
            .map(|u| {
                let info: Vec<u8> = (0..k).map(|j| (u >> j & 1) as u8).collect();
                to_mask(&code.encode(&info).unwrap())
            })
            .collect();
        let mut r = vec![0u8; n];
        for word in 0u32..1 << n {
            for (j, b) in r.iter_mut().enumerate() {
                *b = (word >> j & 1) as u8;
            }
            let near: Vec<u32> = codebook
                .iter()
                .copied()
                .filter(|c| (c ^ word).count_ones() as usize <= t)
                .collect();
            let got = code.bdd_decode(&r).map_err(|e| e.to_string())?;
            let ok = match (&got, near.as_slice()) {
                (BddOutcome::Failure, []) => true,
                (BddOutcome::Decoded(c), [only]) => to_mask(c) == *only,
                _ => false,
            };
            if !ok {
                return Err(format!("({n},{k}) input {word:#06x}: decoder {got:?}, oracle {near:?}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} inputs agree with the radius-t nearest-codeword oracle"))
}

fn toy_pc_cfg(seed: u64) -> SimConfig {
    SimConfig {
        scheme: Scheme::Pc,
        component: BchSpec::new(4, 1, 0),
        min_frame_errors: 100,
        max_frames: 200_000,
        seed,
        ..Default::default()
    }
}

fn toy_staircase_cfg(seed: u64) -> SimConfig {
    SimConfig {
        scheme: Scheme::Staircase,
        component: BchSpec::new(5, 2, 1),
        min_frame_errors: 100,
        max_frames: 20_000,
        stream_blocks: 6,
        batch: 16,
        seed,
        ..Default::default()
    }
}

fn ci((lo, hi): (f64, f64)) -> String {
    format!("[{lo:.2e}, {hi:.2e}]")
}

fn ordering(r: &PointResult) -> Result<String, String> {
    let ber = |m| r.point(m).map(|p| p.ber).ok_or(format!("{m} missing"));
    let fe = |m| r.point(m).map_or(0, |p| p.frame_errors);
    let (plain, sr, ideal) = (ber(DecoderMode::Ibdd)?, ber(DecoderMode::IbddSr)?, ber(DecoderMode::Ideal)?);
    let g1 = r.paired_gap(DecoderMode::IbddSr, DecoderMode::Ibdd, 1000, 11).unwrap();
    let g2 = r.paired_gap(DecoderMode::Ideal, DecoderMode::IbddSr, 1000, 12).unwrap();
    let enough = DecoderMode::ALL.iter().all(|&m| fe(m) >= 100);
    ensure(
        enough && ideal <= sr && sr <= plain && g1.excludes_zero() && g2.excludes_zero() && g1.gap > 0.0 && g2.gap > 0.0,
        format!(
            "{:.2} dB BER ibdd {plain:.3e} >= sr {sr:.3e} >= ideal {ideal:.3e}; gaps {:.2e} {}, {:.2e} {}; frame errors {}/{}/{}",
            r.ebn0_db,
            g1.gap,
            ci(g1.ci),
            g2.gap,
            ci(g2.ci),
            fe(DecoderMode::Ibdd),
            fe(DecoderMode::IbddSr),
            fe(DecoderMode::Ideal)
        ),
    )
}

fn toy_pc_ordering() -> Result<String, String> {
    let r = run_point(&toy_pc_cfg(21), 5.0).map_err(|e| e.to_string())?;
    ordering(&r)
}

fn toy_staircase_ordering() -> Result<String, String> {
    let r = run_point(&toy_staircase_cfg(22), 4.25).map_err(|e| e.to_string())?;
    ordering(&r)
}

fn random_info_agreement() -> Result<String, String> {
    let cfg = toy_pc_cfg(23);
    let zero = run_point(&cfg, 5.0).map_err(|e| e.to_string())?;
    let rand = run_point(&SimConfig { random_info: true, ..cfg }, 5.0).map_err(|e| e.to_string())?;
    let mut msg = Vec::new();
    let mut ok = true;
    for m in DecoderMode::ALL {
        let (a, b) = (zero.point(m).unwrap(), rand.point(m).unwrap());
        ok &= a.ber_ci.0 <= b.ber_ci.1 && b.ber_ci.0 <= a.ber_ci.1;
        msg.push(format!("{m} {:.2e}/{:.2e}", a.ber, b.ber));
    }
    ensure(ok, format!("all-zero/random BER at 5 dB: {}", msg.join(", ")))
}

fn spot_check_255() -> Result<String, String> {
    let cfg = SimConfig {
        scheme: Scheme::Pc,
        component: BchSpec::new(8, 3, 0),
        modes: vec![DecoderMode::Ibdd, DecoderMode::IbddSr],
        min_frame_errors: 100,
        stop_mode: Some(DecoderMode::Ibdd),
        max_frames: 20_000,
        seed: 24,
        ..Default::default()
    };
    let r = run_point(&cfg, 4.5).map_err(|e| e.to_string())?;
    let (plain, sr) = (r.point(DecoderMode::Ibdd).unwrap(), r.point(DecoderMode::IbddSr).unwrap());
    let g = r.paired_gap(DecoderMode::IbddSr, DecoderMode::Ibdd, 1000, 13).unwrap();
    ensure(
        plain.frame_errors >= 100 && sr.ber < plain.ber && g.excludes_zero(),
        format!(
            "(255,231)^2 at 4.5 dB over {} frames: BER ibdd {:.3e} ({} frame errors), sr {:.3e}; gap CI {}",
            plain.frames,
            plain.ber,
            plain.frame_errors,
            sr.ber,
            ci(g.ci)
        ),
    )
}

fn random_llrs(pc: &ProductCode, params: &ChannelParams, rng: &mut ChaCha8Rng) -> (BitMatrix, ibdd_core::LlrMatrix) {
    let k = pc.k();
    let info = BitMatrix::from_fn(k, k, |_, _| rng.random_range(0..2u8));
    let tx = pc.encode(&info).unwrap();
    let llr = transmit(&tx, params, rng);
    (tx, llr)
}

fn zero_weight_equivalence() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let pc = ProductCode::new(BchCode::new(4, 1, 0).unwrap());
    let params = ChannelParams::new(3.5, pc.rate()).unwrap();
    let mut halves = 0;
    for _ in 0..200 {
        let (_, llr) = random_llrs(&pc, &params, &mut rng);
        let hard = harden(&llr);
        for iters in [1, 3, 8] {
            let s = ScalingSchedule::constant(0.0, iters).unwrap();
            let mut same = true;
            let out = pc
                .ibdd_sr_decode_traced(&llr, &s, iters, 0, &mut |h: &HalfIteration<'_>| {
                    same &= *h.decisions == hard;
                    halves += 1;
                })
                .unwrap();
            if !same || out != hard {
                return Err(format!("product code drifted from the channel after {iters} iterations"));
            }
        }
    }
    let sc = StaircaseCode::new(BchCode::new(5, 2, 1).unwrap()).unwrap();
    let sparams = ChannelParams::new(3.5, sc.rate()).unwrap();
    let wcfg = WindowConfig::new(4, 3, 0, Some(WindowSchedule::constant(0.0, 3, 3))).unwrap();
    let mut blocks = 0;
    for _ in 0..20 {
        let info: Vec<BitMatrix> = (0..8)
            .map(|_| BitMatrix::from_fn(sc.block_size(), sc.info_cols(), |_, _| rng.random_range(0..2u8)))
            .collect();
        let stream = sc.encode_stream(&info).unwrap();
        let llr: Vec<_> = stream[1..].iter().map(|b| transmit(b, &sparams, &mut rng)).collect();
        let out = window_decode(&sc, &llr, &wcfg, DecoderMode::IbddSr, None).unwrap();
        for (o, l) in out.iter().zip(&llr) {
            if *o != harden(l) {
                return Err("staircase block drifted from the channel".into());
            }
            blocks += 1;
        }
    }
    Ok(format!("{halves} product half-iterations and {blocks} staircase blocks equal harden(L)"))
}

fn large_weight_equivalence() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    // a perfect code never fails, so use the t = 2 code to reach the failure branch
    let pc = ProductCode::new(BchCode::new(4, 2, 0).unwrap());
    let params = ChannelParams::new(6.0, pc.rate()).unwrap();
    let iters = 6;
    let s = ScalingSchedule::constant(WEIGHT_CAP, iters).unwrap();
    let (mut compared, mut clean, mut skipped) = (0usize, 0usize, 0usize);
    for f in 0..1000 {
        let (_, llr) = random_llrs(&pc, &params, &mut rng);
        if llr.as_slice().iter().any(|l| l.abs() >= WEIGHT_CAP) {
            skipped += 1;
            continue;
        }
        let mut sr: Vec<(BitMatrix, usize)> = Vec::new();
        let mut plain: Vec<(BitMatrix, usize)> = Vec::new();
        pc.ibdd_sr_decode_traced(&llr, &s, iters, 0, &mut |h| sr.push((h.decisions.clone(), h.failures)))
            .unwrap();
        pc.ibdd_decode_traced(&harden(&llr), iters, &mut |h| plain.push((h.decisions.clone(), h.failures)))
            .unwrap();
        let first_fail = sr.iter().position(|(_, fails)| *fails > 0);
        let upto = first_fail.unwrap_or(sr.len());
        if first_fail.is_none() && sr.len() != plain.len() {
            return Err(format!("frame {f}: {} vs {} half-iterations", sr.len(), plain.len()));
        }
        for h in 0..upto {
            if sr[h] != plain[h] {
                return Err(format!("frame {f}: decisions differ at half-iteration {}", h + 1));
            }
            compared += 1;
        }
        clean += usize::from(first_fail.is_none());
    }
    ensure(
        skipped < 1000 && clean < 1000 - skipped,
        format!("{compared} half-iterations identical over {} frames ({clean} without any BDD failure, {skipped} skipped for |L| >= cap)", 1000 - skipped),
    )
}

fn reproducibility() -> Result<String, String> {
    let strip = |mut r: PointResult| {
        for p in &mut r.points {
            p.wall_s = 0.0;
        }
        r
    };
    let mut runs = 0;
    for base in [
        SimConfig {
            min_frame_errors: 30,
            ..toy_pc_cfg(41)
        },
        SimConfig {
            min_frame_errors: 10,
            max_frames: 48,
            ..toy_staircase_cfg(42)
        },
    ] {
        let reference = strip(run_point(&base, 4.5).map_err(|e| e.to_string())?);
        for workers in [1, 1, 2, 4] {
            let r = strip(run_point(&SimConfig { workers, ..base.clone() }, 4.5).map_err(|e| e.to_string())?);
            if r != reference {
                return Err(format!("{:?} with {workers} workers differs", base.scheme));
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} reruns with 1, 2 and 4 workers match bit for bit"))
}

fn main() -> ExitCode {
    let mut rep = Report { failed: 0 };
    rep.check("gldpc threshold (255,231,3)", gldpc_threshold_criterion);
    rep.check("sc-gldpc threshold (255,231,3), W=6", sc_threshold_criterion);
    rep.check("weights increase over the first 20 half-iterations", monotone_weights);
    rep.check("sc schedule settles within U-1 slides", sc_schedule_convergence);
    rep.check("transition tables match exhaustive bdd", combinatorics_oracle);
    rep.check("bdd matches nearest-codeword oracle", bdd_exactness);
    rep.check("toy product code: ideal <= sr <= ibdd", toy_pc_ordering);
    rep.check("toy staircase code: ideal <= sr <= ibdd", toy_staircase_ordering);
    rep.check("random info agrees with all-zero", random_info_agreement);
    rep.check("(255,231)^2 spot check: sr gain", spot_check_255);
    rep.check("zero weights reproduce the channel", zero_weight_equivalence);
    rep.check("cap weights reproduce ibdd", large_weight_equivalence);
    rep.check("reproducibility across runs and workers", reproducibility);
    println!("{} criteria failed", rep.failed);
    if rep.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
