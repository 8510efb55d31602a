use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;

use ibdd_core::sim::paired_gain_estimate;

use crate::args::PlotArgs;
use crate::{CliResult, Failure};

#[derive(Debug, Deserialize)]
struct Row {
    scheme: String,
    component: String,
    mode: String,
    ebn0_db: f64,
    ber: f64,
    fer: f64,
    ci_lo: f64,
    ci_hi: f64,
}

type Curves = BTreeMap<(String, String), BTreeMap<String, Vec<Row>>>;

fn read_curves(text: &str) -> CliResult<Curves> {
    let mut rd = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut curves = Curves::new();
    for row in rd.deserialize::<Row>() {
        let row = row.map_err(|e| Failure::Usage(format!("results CSV: {e}")))?;
        curves
            .entry((row.scheme.clone(), row.component.clone()))
            .or_default()
            .entry(row.mode.clone())
            .or_default()
            .push(row);
    }
    for modes in curves.values_mut() {
        for rows in modes.values_mut() {
            rows.sort_by(|a, b| a.ebn0_db.total_cmp(&b.ebn0_db));
        }
    }
    Ok(curves)
}

/// Plot blocks (gnuplot `index` separated) followed by a gain table.
pub fn render(text: &str, target_ber: f64, reference: &str) -> CliResult<String> {
    let curves = read_curves(text)?;
    let mut out = String::new();
    for ((scheme, comp), modes) in &curves {
        for (mode, rows) in modes {
            let _ = writeln!(out, "# {scheme} {comp} {mode}");
            let _ = writeln!(out, "# ebn0_db ber ci_lo ci_hi fer");
            for r in rows {
                let _ = writeln!(out, "{} {:e} {:e} {:e} {:e}", r.ebn0_db, r.ber, r.ci_lo, r.ci_hi, r.fer);
            }
            out.push_str("\n\n");
        }
    }
    let _ = writeln!(out, "# gain over {reference} at BER {target_ber:e} in dB, NaN when a curve misses the target");
    let _ = writeln!(out, "# scheme component mode gain_db");
    for ((scheme, comp), modes) in &curves {
        let Some(refc) = modes.get(reference) else {
            continue;
        };
        let pts = |rows: &[Row]| rows.iter().map(|r| (r.ebn0_db, r.ber)).collect::<Vec<_>>();
        let refc = pts(refc);
        for (mode, rows) in modes.iter().filter(|(m, _)| *m != reference) {
            let g = paired_gain_estimate(&refc, &pts(rows), target_ber).unwrap_or(f64::NAN);
            let _ = writeln!(out, "{scheme} {comp} {mode} {g:.4}");
        }
    }
    Ok(out)
}

pub fn run(a: &PlotArgs) -> CliResult {
    let text = std::fs::read_to_string(&a.input).map_err(|e| Failure::Usage(format!("{}: {e}", a.input.display())))?;
    if !(a.target_ber > 0.0 && a.target_ber < 1.0) {
        return Err(Failure::Usage("--target-ber must lie in (0, 1)".into()));
    }
    let out = render(&text, a.target_ber, &a.reference)?;
    match &a.out {
        Some(p) => std::fs::write(p, out)?,
        None => print!("{out}"),
    }
    Ok(())
}
