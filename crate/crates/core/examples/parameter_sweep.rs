// Sweeps the default grid in parallel and writes the CSV report to stdout.

use gcseq::analysis::{
    b_invariance_violations, corollary_violations, sweep, write_csv, Grid, SweepOptions,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let report = sweep(&Grid::default(), &SweepOptions::default())?;
    write_csv(&report.records[..6], std::io::stdout())?;
    let s = &report.summary;
    println!(
        "... {} cells: {} pass, {} fail",
        s.cells, s.passed, s.failed
    );
    assert!(report.passed());
    assert!(b_invariance_violations(&report.records).is_empty());
    assert!(corollary_violations(&report.records).is_empty());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("parameter_sweep");
}
