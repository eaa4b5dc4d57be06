//! Quick sizing probe for census bounds. Not part of the test suite.

use std::sync::Arc;
use std::time::Instant;

use curveconf::census::{run_census, CensusBounds, Checker};
use curveconf::Lattice;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let k: usize = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(2);
    let mv: usize = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(4);
    let mm: i64 = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(3);
    let cb: i64 = args.get(4).map(|s| s.parse().unwrap()).unwrap_or(2);
    let jobs: usize = args.get(5).map(|s| s.parse().unwrap()).unwrap_or(4);
    let _with_checkers = args.get(6).map(|s| s == "check").unwrap_or(false);

    let bounds = CensusBounds::new(Arc::new(Lattice::cp2_blowup(k)), mv, mm, cb).unwrap();
    let checkers: &[Checker] = match args.get(6).map(String::as_str) {
        Some("check") => &Checker::ALL,
        Some("moves") => &[Checker::Moves],
        Some("genus") => &[Checker::GenusBound],
        _ => &[],
    };
    let t = Instant::now();
    let report = run_census(&bounds, checkers, jobs).unwrap();
    println!(
        "k={k} mv={mv} mm={mm} cb={cb} jobs={jobs} checkers={} | classes={} stages={:?} violations={} wall={:?}",
        args.get(6).cloned().unwrap_or_default(),
        report.candidate_classes,
        report.stages,
        report.violations.len(),
        t.elapsed()
    );
    for v in report.violations.iter().take(5) {
        println!("  violation[{}]: {} :: {:?}", v.checker, v.detail, v.vertices);
    }
}
