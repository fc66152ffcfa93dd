//! A reduced sweep over a few `μ` values: failures, then the tightest
//! relative slack per check family.

use std::collections::BTreeMap;

use mubarg::inequality_lab::{scan, SweepSpec};

fn main() -> mubarg::Result<()> {
    let mu: Vec<f64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let sweep = SweepSpec {
        mu: if mu.is_empty() { vec![0.0, 0.5] } else { mu },
        ..SweepSpec::default()
    };
    let start = std::time::Instant::now();
    let report = scan(&sweep)?;
    for cell in report.failures() {
        println!(
            "FAIL {} lhs {:e} rhs {:e} {}",
            cell.key,
            cell.report.lhs,
            cell.report.rhs,
            cell.report.note.as_deref().unwrap_or("")
        );
    }
    let mut families: BTreeMap<&str, (usize, f64)> = BTreeMap::new();
    for cell in &report.cells {
        let r = &cell.report;
        let entry = families.entry(r.name.as_str()).or_insert((0, f64::INFINITY));
        entry.0 += 1;
        if r.lhs.is_finite() && r.rhs.is_finite() {
            entry.1 = entry.1.min(r.slack / r.lhs.abs().max(r.rhs.abs()).max(1.0));
        }
    }
    for (name, (count, slack)) in families {
        println!("{name:28} {count:5} cells, tightest relative slack {slack:.3e}");
    }
    println!(
        "{} cells, {} failed, {:.1} s",
        report.cells.len(),
        report.failures().count(),
        start.elapsed().as_secs_f64()
    );
    Ok(())
}
