// For `p = 73`, `f = 4` the older conjecture predicts `L(s~) = 56`; every
// shift measures 38, the corrected value `2p - 3(p-1)/2`.

use gcseq::analysis::{check_conjecture, Support};
use gcseq::{PrimePowerCtx, SequenceParams, Variant};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = PrimePowerCtx::new(73, 1, 4)?;
    for b in 0..ctx.d(1) {
        let record = check_conjecture(&SequenceParams::new(ctx.clone(), b, Variant::Tilde)?)?;
        println!(
            "b={b}: original {}, corrected {}, measured {} -> {:?}",
            record.original, record.corrected, record.measured, record.supports
        );
        assert_eq!(record.supports, Support::Corrected);
    }

    // The part about the plain sequence stands: p = 17, f = 4.
    for n in [1, 2] {
        let params = SequenceParams::new(PrimePowerCtx::new(17, n, 4)?, 0, Variant::Plain)?;
        let record = check_conjecture(&params)?;
        println!(
            "p=17 n={n} plain: conjectured {}, measured {}",
            record.original, record.measured
        );
        assert_eq!(record.supports, Support::Both);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("conjecture_correction");
}
