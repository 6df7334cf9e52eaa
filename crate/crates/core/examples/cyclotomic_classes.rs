// Generalized cyclotomic classes modulo `p^j` and `2p^j`, and the
// partitions they form.

use gcseq::cyclotomy::{build_all_tables, verify_partitions, ModulusKind};
use gcseq::PrimePowerCtx;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = PrimePowerCtx::new(5, 2, 2)?;
    println!("p=5 n=2 f=2: e={} g={}", ctx.e, ctx.g);
    for table in build_all_tables(&ctx)? {
        for kind in [ModulusKind::PrimePower, ModulusKind::TwicePrimePower] {
            for (i, class) in table.classes(kind).iter().enumerate() {
                println!("  D^({})_{i} = {class:?}", table.modulus_of(kind));
            }
        }
    }
    for m in 1..=ctx.n {
        let report = verify_partitions(&ctx, m)?;
        println!(
            "  level {m}: Z_{} and Z_{} covered exactly once: {}",
            report.pm_size,
            report.two_pm_size,
            report.passed()
        );
        assert!(report.passed());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("cyclotomic_classes");
}
