// Predicted against measured linear complexity, including a bounded case
// where only the residue structure `2p^n - r ord_p(2)` is known.

use gcseq::analysis::{predict, verify_point, PredictionKind};
use gcseq::{PrimePowerCtx, SequenceParams, Variant};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (p, n, f, variant) in [
        (17, 1, 4, Variant::Plain),
        (17, 2, 4, Variant::Plain),
        (7, 2, 2, Variant::Tilde),
        (7, 1, 6, Variant::Plain),
    ] {
        let params = SequenceParams::new(PrimePowerCtx::new(p, n, f)?, 0, variant)?;
        let prediction = predict(&params)?;
        let record = verify_point(&params)?;
        println!(
            "p={p} n={n} f={f} {variant:>5} v={}: predicted {} [{}], measured {:?}",
            params.ctx.v, prediction, prediction.clause, record.measured_bm
        );
        if prediction.kind == PredictionKind::Bounded {
            println!("    allowed values: {:?}", prediction.allowed_values());
        }
        assert!(record.passed());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("predictions");
}
