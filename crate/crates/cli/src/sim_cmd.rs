use std::io::Write;
use std::path::{Path, PathBuf};

use ibdd_core::sim::{csv_header, run_curve, CurveReport, ScheduleSource, SimConfig};
use ibdd_core::DecoderMode;

use crate::args::SimArgs;
use crate::de_cmd::parse_poly;
use crate::manifest::{json_with_manifest, RunManifest};
use crate::{CliResult, Failure};

pub const WORKERS_ENV: &str = "IBDD_WORKERS";

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// `4.0,4.5,5` or `start:step:stop` (inclusive).
pub fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    let num = |p: &str| {
        p.trim()
            .parse::<f64>()
            .map_err(|_| usage(format!("bad Eb/N0 value `{p}`")))
    };
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, step, b] = parts[..] else {
            return Err(usage(format!("Eb/N0 range `{s}`: expected start:step:stop")));
        };
        let (a, step, b) = (num(a)?, num(step)?, num(b)?);
        if !(step > 0.0) || b < a {
            return Err(usage(format!("Eb/N0 range `{s}` is empty")));
        }
        let count = ((b - a) / step + 1e-9).floor() as usize + 1;
        // round away accumulated float noise so grid points print cleanly
        Ok((0..count).map(|i| ((a + i as f64 * step) * 1e9).round() / 1e9).collect())
    } else if s.trim().is_empty() {
        Ok(Vec::new())
    } else {
        s.split(',').map(num).collect()
    }
}

fn parse_schedule(s: &str) -> CliResult<ScheduleSource> {
    match s.trim() {
        "de" => Ok(ScheduleSource::DeAtOperatingSnr),
        other => match other.strip_prefix("fixed:") {
            Some(w) => w
                .parse()
                .map(|w| ScheduleSource::Fixed { w })
                .map_err(|_| usage(format!("bad fixed weight `{w}`"))),
            None => Err(usage(format!("schedule `{other}`: expected `de` or `fixed:W`"))),
        },
    }
}

fn env_workers() -> CliResult<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{WORKERS_ENV}=`{v}` is not a worker count"))),
        Err(_) => Ok(0),
    }
}

/// Flags over config file over defaults; the worker default comes from the environment.
pub fn resolve_config(a: &SimArgs) -> CliResult<SimConfig> {
    let mut cfg = SimConfig {
        workers: env_workers()?,
        ..Default::default()
    };
    if let Some(path) = &a.config {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let raw: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let from_file: SimConfig =
            serde_json::from_value(raw.clone()).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let env = cfg.workers;
        cfg = from_file;
        if raw.get("workers").is_none() {
            cfg.workers = env;
        }
    }
    if let Some(s) = &a.scheme {
        cfg.scheme = s.parse()?;
    }
    if let Some(m) = a.m {
        cfg.component.m = m;
    }
    if let Some(t) = a.t {
        cfg.component.t = t;
    }
    if let Some(s) = a.shorten {
        cfg.component.shorten = s;
    }
    if a.poly.is_some() {
        cfg.component.primitive_poly = parse_poly(&a.poly)?;
    }
    if let Some(m) = &a.modes {
        cfg.modes = m.split(',').map(str::parse).collect::<Result<Vec<DecoderMode>, _>>()?;
    }
    if let Some(g) = &a.ebn0 {
        cfg.ebn0_grid = parse_grid(g)?;
    }
    if let Some(s) = &a.schedule {
        cfg.schedule = parse_schedule(s)?;
    }
    if let Some(m) = &a.stop_mode {
        cfg.stop_mode = Some(m.parse()?);
    }
    macro_rules! set {
        ($($flag:ident => $field:ident),*) => {
            $(if let Some(v) = a.$flag { cfg.$field = v; })*
        };
    }
    set!(min_errors => min_frame_errors, max_frames => max_frames, seed => seed, workers => workers,
         sr_iters => sr_iters, plain_iters => plain_iters, window_blocks => window_blocks,
         stream_blocks => stream_blocks, batch => batch, ber_floor => ber_floor);
    if a.random_info {
        cfg.random_info = true;
    }
    cfg.validate()?;
    cfg.component.build()?;
    Ok(cfg)
}

fn is_json(p: &Path) -> bool {
    p.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn write_report(report: &CurveReport, out: &Path, manifest_for: &Path) -> CliResult {
    let text = if is_json(out) {
        json_with_manifest(report, manifest_for)?
    } else {
        let name = RunManifest::path_for(manifest_for);
        let name = name.file_name().map_or(name.clone(), PathBuf::from);
        format!(
            "{}{}# manifest: {}\n",
            report.to_csv(),
            report.warning_rows(),
            name.display()
        )
    };
    std::fs::write(out, text)?;
    Ok(())
}

pub fn run(a: &SimArgs) -> CliResult {
    let cfg = resolve_config(a)?;
    if cfg.min_frame_errors < 50 {
        eprintln!("warning: fewer than 50 frame errors per point gives loose intervals");
    }
    let manifest = RunManifest::start("sim", serde_json::to_value(&cfg)?, Some(cfg.seed));
    let stdout = std::io::stdout();
    if !a.quiet {
        writeln!(stdout.lock(), "{}", csv_header())?;
    }
    let report = run_curve(&cfg, |r| {
        if !a.quiet {
            let mut lock = stdout.lock();
            for p in &r.points {
                let _ = writeln!(lock, "{}", p.csv_row(&cfg));
            }
            let _ = lock.flush();
        }
    })?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let outputs: Vec<PathBuf> = a.out.iter().chain(a.json.iter()).cloned().collect();
    if let Some(first) = outputs.first() {
        for o in &outputs {
            write_report(&report, o, first)?;
        }
    }
    manifest.finish(outputs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        assert_eq!(parse_grid("4,4.5").unwrap(), vec![4.0, 4.5]);
        assert_eq!(parse_grid("4:0.1:4.3").unwrap(), vec![4.0, 4.1, 4.2, 4.3]);
        assert!(parse_grid("").unwrap().is_empty());
        assert!(parse_grid("4:0:5").is_err());
        assert!(parse_grid("a,b").is_err());
    }

    #[test]
    fn schedule_forms() {
        assert_eq!(parse_schedule("de").unwrap(), ScheduleSource::DeAtOperatingSnr);
        assert_eq!(parse_schedule("fixed:2.5").unwrap(), ScheduleSource::Fixed { w: 2.5 });
        assert!(parse_schedule("fixed:x").is_err());
        assert!(parse_schedule("magic").is_err());
    }
}
