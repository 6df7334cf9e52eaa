// One period of `s` and `s~` for a few small parameter sets, in ASCII and
// hex.

use gcseq::{generate, PrimePowerCtx, SequenceParams, Variant};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (p, n, f) in [(3, 1, 2), (5, 1, 4), (7, 2, 2)] {
        let ctx = PrimePowerCtx::new(p, n, f)?;
        for variant in Variant::ALL {
            let seq = generate(&SequenceParams::new(ctx.clone(), 0, variant)?)?;
            assert_eq!(seq.weight() as u64, ctx.pn(), "balanced");
            let bits = seq.bits();
            if bits.len() <= 64 {
                println!(
                    "p={p} n={n} f={f} g={} {variant:>5}: {}",
                    ctx.g,
                    bits.to_ascii()
                );
            } else {
                println!(
                    "p={p} n={n} f={f} g={} {variant:>5}: {} (hex)",
                    ctx.g,
                    bits.to_hex()
                );
            }
        }
    }
    let s = generate(&SequenceParams::new(
        PrimePowerCtx::new(3, 1, 2)?,
        0,
        Variant::Plain,
    )?)?;
    assert_eq!(s.bits().to_ascii(), "111000");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("generate_sequence");
}
