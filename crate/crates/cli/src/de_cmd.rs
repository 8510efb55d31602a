use ibdd_core::de::{
    self, design_rate, gldpc_threshold, run_gldpc, run_sc, sc_threshold, ComponentProfile, DeProfile, GldpcConfig,
    RightBoundary, ScConfig, SumRange, WeightRule,
};
use ibdd_core::{BchCode, BchSpec, ChannelParams};

use crate::args::{BoundaryArg, CodeArgs, DeArgs, DeScheduleArgs, DeThresholdArgs, EnsembleArg, RuleArg};
use crate::manifest::{json_with_manifest, RunManifest};
use crate::{CliResult, Failure};

pub fn parse_poly(p: &Option<String>) -> CliResult<Option<u32>> {
    p.as_deref()
        .map(|h| {
            let h = h.trim_start_matches("0x").trim_start_matches("0X");
            u32::from_str_radix(h, 16).map_err(|_| Failure::Usage(format!("bad primitive polynomial `{h}`")))
        })
        .transpose()
}

pub fn build_code(c: &CodeArgs) -> CliResult<BchCode> {
    let spec = BchSpec {
        primitive_poly: parse_poly(&c.poly)?,
        ..BchSpec::new(c.m, c.t, c.shorten)
    };
    Ok(spec.build()?)
}

struct Setup {
    profile: ComponentProfile,
    rate: f64,
    gldpc: GldpcConfig,
    sc: ScConfig,
}

fn setup(a: &DeArgs) -> CliResult<Setup> {
    let code = build_code(&a.code)?;
    let range = if a.literal_sums {
        SumRange::FromOne
    } else {
        SumRange::Exact
    };
    let profile = de::profile_for(&code, range)?;
    let rate = a.rate.unwrap_or_else(|| design_rate(code.n(), code.k()));
    let rule = match a.rule {
        RuleArg::ErasureLlr => WeightRule::ErasureLlr,
        RuleArg::Minimize => WeightRule::Minimize,
    };
    if a.iters == 0 || a.window == 0 {
        return Err(Failure::Usage("--iters and --window must be positive".into()));
    }
    let gldpc = GldpcConfig {
        iterations: a.iters,
        rule,
        target: a.target,
        ..Default::default()
    };
    let sc = ScConfig {
        window: a.window,
        iterations: a.iters,
        slides: a.slides.unwrap_or(3 * a.window),
        boundary: match a.boundary {
            BoundaryArg::Open => RightBoundary::Open,
            BoundaryArg::Frozen => RightBoundary::Frozen,
        },
        rule,
        target: a.target,
        ..Default::default()
    };
    Ok(Setup {
        profile,
        rate,
        gldpc,
        sc,
    })
}

fn run_at(s: &Setup, ensemble: EnsembleArg, ebn0_db: f64) -> CliResult<DeProfile> {
    let params = ChannelParams::new(ebn0_db, s.rate)?;
    Ok(match ensemble {
        EnsembleArg::Gldpc => run_gldpc(&s.profile, &params, &s.gldpc),
        EnsembleArg::Sc => run_sc(&s.profile, &params, &s.sc),
    })
}

fn echo(a: &DeArgs, s: &Setup) -> serde_json::Value {
    serde_json::json!({
        "ensemble": format!("{:?}", a.ensemble).to_lowercase(),
        "m": a.code.m,
        "t": a.code.t,
        "shorten": a.code.shorten,
        "poly": a.code.poly,
        "rate": s.rate,
        "gldpc": s.gldpc,
        "sc": s.sc,
        "literal_sums": a.literal_sums,
    })
}

pub fn threshold(a: &DeThresholdArgs) -> CliResult {
    let s = setup(&a.de)?;
    let mut config = echo(&a.de, &s);
    config["bracket_db"] = serde_json::json!([a.lo, a.hi]);
    config["tol_db"] = serde_json::json!(a.tol_db);
    let manifest = RunManifest::start("de-threshold", config, None);
    let t = match a.de.ensemble {
        EnsembleArg::Gldpc => gldpc_threshold(&s.profile, s.rate, &s.gldpc, (a.lo, a.hi), a.tol_db)?,
        EnsembleArg::Sc => sc_threshold(&s.profile, s.rate, &s.sc, (a.lo, a.hi), a.tol_db)?,
    };
    println!("threshold: {t:.4} dB");
    if let Some(out) = &a.out {
        let mut de = run_at(&s, a.de.ensemble, t)?;
        de.threshold = Some(t);
        std::fs::write(out, json_with_manifest(&de, out)?)?;
        manifest.finish(vec![out.clone()])?;
    }
    Ok(())
}

pub fn schedule(a: &DeScheduleArgs) -> CliResult {
    let s = setup(&a.de)?;
    let mut config = echo(&a.de, &s);
    config["ebn0_db"] = serde_json::json!(a.ebn0_db);
    let manifest = RunManifest::start("de-schedule", config, None);
    let de = run_at(&s, a.de.ensemble, a.ebn0_db)?;
    if !de.converged {
        eprintln!("warning: DE does not converge at {} dB", a.ebn0_db);
    }
    match &a.out {
        Some(out) => {
            std::fs::write(out, json_with_manifest(&de, out)?)?;
            manifest.finish(vec![out.clone()])?;
        }
        None => println!("{}", de.to_json()?),
    }
    Ok(())
}
