// Evaluates `S(x)` and the class sums at `p^n`-th roots of unity in
// `GF(2^m)` and checks the identities relating them.

use gcseq::cyclotomy::build_all_tables;
use gcseq::gf2ext::{
    build_field, count_h_pair_values, verify_lemma1, verify_prop1, verify_prop2,
    verify_simple_roots,
};
use gcseq::sequence::generate_with;
use gcseq::{PrimePowerCtx, SequenceParams, Variant};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = PrimePowerCtx::new(5, 2, 2)?;
    let field = build_field(5, 2)?;
    let tables = build_all_tables(&ctx)?;
    println!("GF(2^{}) = GF(2)[x]/({})", field.m, field.modulus());

    for check in verify_lemma1(&ctx, &field, &tables) {
        println!(
            "  {:<40} {}/{} failed",
            check.name, check.failed, check.checked
        );
        assert!(check.passed());
    }
    for variant in Variant::ALL {
        let seq = generate_with(&SequenceParams::new(ctx.clone(), 1, variant)?, &tables)?;
        let mut checks = verify_prop1(&field, &tables, &seq);
        checks.push(verify_prop2(&field, &seq));
        for check in &checks {
            println!(
                "  {:<40} {}/{} failed",
                check.name, check.failed, check.checked
            );
            assert!(check.passed());
        }
        let roots = verify_simple_roots(&seq, Some(&field), &tables)?;
        println!(
            "  {variant}: {} roots among p^n-th roots of unity, {} repeated",
            roots.roots, roots.repeated_roots
        );
        assert!(roots.passed());
    }

    let h = count_h_pair_values(17, 4, PrimePowerCtx::new(17, 1, 4)?.u)?;
    println!(
        "  p=17 f=4 v={}: H_k + H_(k+u) is 0 for {} k, 1 for {} k",
        h.v, h.count0, h.count1
    );
    assert!(h.matches_table());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("field_identities");
}
