//! Generalized cyclotomic classes modulo `p^j` and `2p^j`.
//!
//! At level `j` there are `d_j = p^(j-1) f` classes, each a coset
//! `g^i <g^(d_j)>` of the order-`e` subgroup of units.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ntheory::{mul_mod, pow_mod, PrimePowerCtx};

const NO_CLASS: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusKind {
    /// Residues modulo `p^j`.
    PrimePower,
    /// Residues modulo `2p^j`.
    TwicePrimePower,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTable {
    pub level: u32,
    pub d: u64,
    pub e: u64,
    pub modulus: u64,
    /// `D^(p^j)_i`, each sorted.
    pub classes_pj: Vec<Vec<u64>>,
    /// `D^(2p^j)_i`, each sorted.
    pub classes_2pj: Vec<Vec<u64>>,
    #[serde(skip)]
    index_pj: Vec<u32>,
    #[serde(skip)]
    index_2pj: Vec<u32>,
}

fn cosets(g: u64, d: u64, e: u64, modulus: u64) -> Vec<Vec<u64>> {
    let step = pow_mod(g, d, modulus);
    let mut base = Vec::with_capacity(e as usize);
    let mut x = 1 % modulus;
    for _ in 0..e {
        base.push(x);
        x = mul_mod(x, step, modulus);
    }
    let mut out = Vec::with_capacity(d as usize);
    let mut gi = 1 % modulus;
    for _ in 0..d {
        let mut class: Vec<u64> = base.iter().map(|&y| mul_mod(gi, y, modulus)).collect();
        class.sort_unstable();
        out.push(class);
        gi = mul_mod(gi, g, modulus);
    }
    out
}

fn inverse_index(classes: &[Vec<u64>], modulus: u64) -> Vec<u32> {
    let mut index = vec![NO_CLASS; modulus as usize];
    for (i, class) in classes.iter().enumerate() {
        for &x in class {
            index[x as usize] = i as u32;
        }
    }
    index
}

/// All `d_j` classes at level `j`, modulo `p^j` and modulo `2p^j`.
pub fn build_class_table(ctx: &PrimePowerCtx, level: u32) -> Result<ClassTable> {
    if level == 0 || level > ctx.n {
        return Err(Error::BadLevel { level, n: ctx.n });
    }
    let modulus = ctx.p_pow(level);
    let d = ctx.d(level);
    // The 2p^j classes are g^i times the 2p^j base subgroup, not the p^j one.
    let classes_pj = cosets(ctx.g, d, ctx.e, modulus);
    let classes_2pj = cosets(ctx.g, d, ctx.e, 2 * modulus);
    let index_pj = inverse_index(&classes_pj, modulus);
    let index_2pj = inverse_index(&classes_2pj, 2 * modulus);
    Ok(ClassTable {
        level,
        d,
        e: ctx.e,
        modulus,
        classes_pj,
        classes_2pj,
        index_pj,
        index_2pj,
    })
}

/// Tables for every level `1..=n`, indexed by `level - 1`.
pub fn build_all_tables(ctx: &PrimePowerCtx) -> Result<Vec<ClassTable>> {
    (1..=ctx.n).map(|j| build_class_table(ctx, j)).collect()
}

impl ClassTable {
    pub fn classes(&self, kind: ModulusKind) -> &[Vec<u64>] {
        match kind {
            ModulusKind::PrimePower => &self.classes_pj,
            ModulusKind::TwicePrimePower => &self.classes_2pj,
        }
    }

    pub fn modulus_of(&self, kind: ModulusKind) -> u64 {
        match kind {
            ModulusKind::PrimePower => self.modulus,
            ModulusKind::TwicePrimePower => 2 * self.modulus,
        }
    }

    /// Class `i` with the subscript reduced modulo `d_j`.
    pub fn class(&self, kind: ModulusKind, i: u64) -> &[u64] {
        &self.classes(kind)[(i % self.d) as usize]
    }

    /// The unique `i` with `x` in `D_i`.
    pub fn class_index_of(&self, x: u64, kind: ModulusKind) -> Result<u64> {
        let modulus = self.modulus_of(kind);
        let index = match kind {
            ModulusKind::PrimePower => &self.index_pj,
            ModulusKind::TwicePrimePower => &self.index_2pj,
        };
        match index[(x % modulus) as usize] {
            NO_CLASS => Err(Error::NotAUnit { x, modulus }),
            i => Ok(i as u64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub level: u32,
    /// Size of `Z_(p^m)` and how many residues were covered exactly once.
    pub pm_size: u64,
    pub pm_covered_once: u64,
    pub two_pm_size: u64,
    pub two_pm_covered_once: u64,
    pub class_sizes_ok: bool,
    pub violations: Vec<String>,
}

impl PartitionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const MAX_REPORTED_VIOLATIONS: usize = 16;

fn collect_violations(counts: &[u32], label: &str, out: &mut Vec<String>) -> u64 {
    let mut once = 0;
    for (x, &c) in counts.iter().enumerate() {
        if c == 1 {
            once += 1;
        } else if out.len() < MAX_REPORTED_VIOLATIONS {
            out.push(format!("{x} covered {c} times in {label}"));
        }
    }
    once
}

/// Checks that the scaled classes of levels `1..=m`, together with `{0}`
/// (and `{p^m}` for the doubled modulus), cover `Z_(p^m)` and `Z_(2p^m)`
/// with every residue hit exactly once.
pub fn verify_partitions(ctx: &PrimePowerCtx, m: u32) -> Result<PartitionReport> {
    if m == 0 || m > ctx.n {
        return Err(Error::BadLevel { level: m, n: ctx.n });
    }
    let pm = ctx.p_pow(m);
    let mut cover_pm = vec![0u32; pm as usize];
    let mut cover_2pm = vec![0u32; 2 * pm as usize];
    let mut class_sizes_ok = true;

    cover_pm[0] += 1;
    cover_2pm[0] += 1;
    cover_2pm[pm as usize] += 1;
    for j in 1..=m {
        let table = build_class_table(ctx, j)?;
        let scale = ctx.p_pow(m - j);
        for class in &table.classes_pj {
            class_sizes_ok &= class.len() as u64 == ctx.e;
            for &x in class {
                cover_pm[(scale * x % pm) as usize] += 1;
            }
        }
        for class in &table.classes_2pj {
            class_sizes_ok &= class.len() as u64 == ctx.e;
            for &x in class {
                cover_2pm[(scale * x % (2 * pm)) as usize] += 1;
                cover_2pm[(scale * 2 * x % (2 * pm)) as usize] += 1;
            }
        }
    }

    let mut violations = Vec::new();
    if !class_sizes_ok {
        violations.push(format!(
            "some class does not have exactly e = {} elements",
            ctx.e
        ));
    }
    let pm_covered_once = collect_violations(&cover_pm, "Z_(p^m)", &mut violations);
    let two_pm_covered_once = collect_violations(&cover_2pm, "Z_(2p^m)", &mut violations);
    Ok(PartitionReport {
        level: m,
        pm_size: pm,
        pm_covered_once,
        two_pm_size: 2 * pm,
        two_pm_covered_once,
        class_sizes_ok,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntheory::gcd;

    #[test]
    fn classes_mod_5_and_10() {
        let ctx = PrimePowerCtx::with_generator(5, 1, 2, Some(7)).unwrap();
        let t = build_class_table(&ctx, 1).unwrap();
        assert_eq!(t.classes_pj, vec![vec![1, 4], vec![2, 3]]);
        assert_eq!(t.classes_2pj, vec![vec![1, 9], vec![3, 7]]);
        assert_eq!(t.class_index_of(2, ModulusKind::PrimePower).unwrap(), 1);
        assert_eq!(
            t.class_index_of(9, ModulusKind::TwicePrimePower).unwrap(),
            0
        );
        assert_eq!(t.class_index_of(1, ModulusKind::PrimePower).unwrap(), 0);
        assert_eq!(
            t.class_index_of(1, ModulusKind::TwicePrimePower).unwrap(),
            0
        );
    }

    #[test]
    fn singleton_classes_for_p3() {
        let ctx = PrimePowerCtx::new(3, 1, 2).unwrap();
        let t = build_class_table(&ctx, 1).unwrap();
        assert_eq!(t.classes_pj, vec![vec![1], vec![2]]);
        assert_eq!(t.classes_2pj, vec![vec![1], vec![5]]);
    }

    #[test]
    fn non_units_are_rejected() {
        let ctx = PrimePowerCtx::new(5, 2, 2).unwrap();
        let t = build_class_table(&ctx, 2).unwrap();
        assert_eq!(
            t.class_index_of(10, ModulusKind::PrimePower),
            Err(Error::NotAUnit { x: 10, modulus: 25 })
        );
        assert!(t.class_index_of(4, ModulusKind::TwicePrimePower).is_err());
        assert!(t.class_index_of(4, ModulusKind::PrimePower).is_ok());
        assert!(build_class_table(&ctx, 0).is_err());
        assert!(build_class_table(&ctx, 3).is_err());
    }

    #[test]
    fn class_structure() {
        for (p, n, f) in [(5u64, 2u32, 4u64), (7, 2, 6), (13, 1, 4), (17, 2, 8)] {
            let ctx = PrimePowerCtx::new(p, n, f).unwrap();
            for table in build_all_tables(&ctx).unwrap() {
                for kind in [ModulusKind::PrimePower, ModulusKind::TwicePrimePower] {
                    let modulus = table.modulus_of(kind);
                    let g = ctx.g % modulus;
                    let shift = pow_mod(ctx.g, table.d, modulus);
                    for (i, class) in table.classes(kind).iter().enumerate() {
                        assert_eq!(class.len() as u64, ctx.e);
                        // D_i = g^i D_0, and g^(d_j) fixes every class.
                        let gi = pow_mod(g, i as u64, modulus);
                        let mut expect: Vec<u64> = table.classes(kind)[0]
                            .iter()
                            .map(|&x| mul_mod(x, gi, modulus))
                            .collect();
                        expect.sort_unstable();
                        assert_eq!(class, &expect);
                        let mut shifted: Vec<u64> =
                            class.iter().map(|&x| mul_mod(x, shift, modulus)).collect();
                        shifted.sort_unstable();
                        assert_eq!(class, &shifted);
                        for &x in class {
                            assert_eq!(gcd(x, modulus), 1);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn coset_product_rule() {
        let ctx = PrimePowerCtx::new(7, 2, 6).unwrap();
        let t = build_class_table(&ctx, 2).unwrap();
        for kind in [ModulusKind::PrimePower, ModulusKind::TwicePrimePower] {
            let modulus = t.modulus_of(kind);
            for x in (1..modulus).filter(|&x| gcd(x, modulus) == 1) {
                for y in (1..modulus).filter(|&y| gcd(y, modulus) == 1).step_by(5) {
                    let i = t.class_index_of(x, kind).unwrap();
                    let k = t.class_index_of(y, kind).unwrap();
                    let ik = t.class_index_of(mul_mod(x, y, modulus), kind).unwrap();
                    assert_eq!(ik, (i + k) % t.d);
                }
            }
        }
    }

    #[test]
    fn partition_small_cases() {
        let ctx = PrimePowerCtx::new(3, 1, 2).unwrap();
        let r = verify_partitions(&ctx, 1).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.two_pm_covered_once, 6);

        let ctx = PrimePowerCtx::new(5, 2, 2).unwrap();
        let r = verify_partitions(&ctx, 2).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!((r.pm_covered_once, r.two_pm_covered_once), (25, 50));
        assert!(verify_partitions(&ctx, 3).is_err());
    }
}
