// The Wieferich prime 1093: `2^(p-1) = 1 (mod p^2)`, so the level `wn` is 2
// and predictions use `m = min(n, wn)`. Only `n = 1` is measured here.

use gcseq::analysis::{predict, verify_point, wieferich_data, Verdict};
use gcseq::{PrimePowerCtx, SequenceParams, Variant};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = PrimePowerCtx::new(1093, 1, 2)?;
    let w = wieferich_data(&ctx)?;
    println!("p=1093: wn={} m={} z={} v={}", w.wn, w.m, w.z, w.v);

    let plain = SequenceParams::new(ctx.clone(), 0, Variant::Plain)?;
    let record = verify_point(&plain)?;
    println!(
        "plain n=1: predicted {}, measured {:?}",
        record.predicted, record.measured_bm
    );
    assert_eq!(record.verdicts.prediction, Verdict::Pass);

    let tilde = verify_point(&plain.with_variant(Variant::Tilde))?;
    println!(
        "tilde n=1: {} ({}), measured {:?}",
        tilde.predicted,
        tilde.predicted.note.as_deref().unwrap_or(""),
        tilde.measured_bm
    );

    for n in [2, 3] {
        let params = SequenceParams::new(PrimePowerCtx::new(1093, n, 2)?, 0, Variant::Plain)?;
        println!(
            "plain n={n}: predicted {} (not measured)",
            predict(&params)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("wieferich");
}
