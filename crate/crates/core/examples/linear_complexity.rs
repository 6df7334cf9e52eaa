// Linear complexity by Berlekamp-Massey and by `gcd(x^N - 1, S(x))`, with
// the shortest LFSR that generates the period.

use gcseq::{
    berlekamp_massey, generate, linear_complexity_gcd, Bits, PrimePowerCtx, SequenceParams, Variant,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = PrimePowerCtx::new(3, 1, 2)?;
    for variant in Variant::ALL {
        let seq = generate(&SequenceParams::new(ctx.clone(), 0, variant)?)?;
        let lfsr = berlekamp_massey(seq.bits());
        let by_gcd = linear_complexity_gcd(seq.bits());
        println!(
            "{variant:>5} {}: L = {} (gcd {by_gcd}), minimal polynomial {}",
            seq.bits().to_ascii(),
            lfsr.linear_complexity,
            lfsr.minimal_polynomial()
        );
        assert_eq!(lfsr.linear_complexity, by_gcd);
        assert!(lfsr.annihilates(seq.bits(), 3));
    }

    // Any periodic sequence works, not only the cyclotomic ones.
    let m_sequence = Bits::parse_ascii("1110100").expect("ascii bits");
    let lfsr = berlekamp_massey(&m_sequence);
    println!("m-sequence 1110100: L = {}", lfsr.linear_complexity);
    assert_eq!(lfsr.linear_complexity, 3);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("linear_complexity");
}
