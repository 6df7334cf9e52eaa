//! Support sets and one period of the plain (`s`) and tilde (`s~`) sequences.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::cyclotomy::{build_all_tables, ClassTable, ModulusKind};
use crate::error::{Error, Result};
use crate::ntheory::{mul_mod, PrimePowerCtx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `s`: both `D` and `2D` of the lower half-window carry ones.
    Plain,
    /// `s~`: `D` of the lower half-window and `2D` of the upper one carry ones.
    Tilde,
}

impl Variant {
    pub const ALL: [Variant; 2] = [Variant::Plain, Variant::Tilde];
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Plain => "s",
            Variant::Tilde => "tilde",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "s" | "plain" => Ok(Variant::Plain),
            "t" | "tilde" | "s~" => Ok(Variant::Tilde),
            other => Err(format!("unknown variant `{other}` (expected s or tilde)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceParams {
    pub ctx: PrimePowerCtx,
    /// Class shift, `0 <= b < p^(n-1) f`.
    pub b: u64,
    pub variant: Variant,
}

impl SequenceParams {
    pub fn new(ctx: PrimePowerCtx, b: u64, variant: Variant) -> Result<Self> {
        let limit = ctx.d(ctx.n);
        if b >= limit {
            return Err(Error::BadShift { b, limit });
        }
        Ok(Self { ctx, b, variant })
    }

    /// Same instance with the other sequence family.
    pub fn with_variant(&self, variant: Variant) -> Self {
        Self {
            variant,
            ..self.clone()
        }
    }
}

/// Positions carrying 0 and 1 within one period, both sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportSets {
    pub zeros: Vec<u64>,
    pub ones: Vec<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Half {
    Lower,
    Upper,
}

/// Pushes `p^(n-j) * factor * x mod 2p^n` for every `x` in the classes
/// `D^(2p^j)_((i+b) mod d_j)` with `i` ranging over one half-window.
fn push_half(
    params: &SequenceParams,
    table: &ClassTable,
    half: Half,
    factor: u64,
    out: &mut Vec<u64>,
) {
    let ctx = &params.ctx;
    let period = ctx.period();
    let scale = ctx.p_pow(ctx.n - table.level) * factor;
    let half_d = table.d / 2;
    let range = match half {
        Half::Lower => 0..half_d,
        Half::Upper => half_d..table.d,
    };
    for i in range {
        for &x in table.class(ModulusKind::TwicePrimePower, i + params.b) {
            out.push(mul_mod(scale, x, period));
        }
    }
}

pub fn build_support_sets(params: &SequenceParams) -> Result<SupportSets> {
    let tables = build_all_tables(&params.ctx)?;
    build_support_sets_with(params, &tables)
}

/// Builds the one-positions and the zero-positions independently from their
/// own unions and checks that they partition `Z_(2p^n)`.
pub fn build_support_sets_with(
    params: &SequenceParams,
    tables: &[ClassTable],
) -> Result<SupportSets> {
    let pn = params.ctx.pn();
    let mut ones = vec![0];
    let mut zeros = vec![pn];
    for table in tables {
        let (lower_factor_ones, upper_factor_ones): (&[u64], &[u64]) = match params.variant {
            Variant::Plain => (&[1, 2], &[]),
            Variant::Tilde => (&[1], &[2]),
        };
        let (lower_factor_zeros, upper_factor_zeros): (&[u64], &[u64]) = match params.variant {
            Variant::Plain => (&[], &[1, 2]),
            Variant::Tilde => (&[2], &[1]),
        };
        for &k in lower_factor_ones {
            push_half(params, table, Half::Lower, k, &mut ones);
        }
        for &k in upper_factor_ones {
            push_half(params, table, Half::Upper, k, &mut ones);
        }
        for &k in lower_factor_zeros {
            push_half(params, table, Half::Lower, k, &mut zeros);
        }
        for &k in upper_factor_zeros {
            push_half(params, table, Half::Upper, k, &mut zeros);
        }
    }
    ones.sort_unstable();
    zeros.sort_unstable();

    let period = params.ctx.period() as usize;
    let mut seen = vec![0u8; period];
    for &x in ones.iter().chain(&zeros) {
        seen[x as usize] += 1;
    }
    if let Some(x) = seen.iter().position(|&c| c != 1) {
        return Err(Error::Internal(format!(
            "support sets do not partition Z_{period}: {x} covered {} times",
            seen[x]
        )));
    }
    if ones.len() as u64 != pn {
        return Err(Error::Internal(format!(
            "support has {} elements, expected {pn}",
            ones.len()
        )));
    }
    Ok(SupportSets { zeros, ones })
}

/// One period of `s` or `s~`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinarySequence {
    pub params: SequenceParams,
    bits: Bits,
    support: Vec<u64>,
}

impl BinarySequence {
    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    /// Sorted positions holding a one.
    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    /// Bit `i` of the infinite periodic sequence.
    pub fn at(&self, i: u64) -> bool {
        self.bits.get((i % self.bits.len() as u64) as usize)
    }
}

pub fn generate(params: &SequenceParams) -> Result<BinarySequence> {
    let tables = build_all_tables(&params.ctx)?;
    generate_with(params, &tables)
}

pub fn generate_with(params: &SequenceParams, tables: &[ClassTable]) -> Result<BinarySequence> {
    let sets = build_support_sets_with(params, tables)?;
    let bits = Bits::from_positions(params.ctx.period() as usize, sets.ones.iter().copied());
    Ok(BinarySequence {
        params: params.clone(),
        bits,
        support: sets.ones,
    })
}

/// Outcome of comparing `support(b + 1)` with `g * support(b) mod 2p^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftCheck {
    pub b: u64,
    pub holds: bool,
    /// Positions in one set but not the other.
    pub mismatches: usize,
}

/// Tests whether advancing `b` by one acts on the support as multiplication
/// by `g`. The shift wraps from `d_n - 1` back to 0.
pub fn check_shift_action(params: &SequenceParams, tables: &[ClassTable]) -> Result<ShiftCheck> {
    let ctx = &params.ctx;
    let period = ctx.period();
    let next_b = (params.b + 1) % ctx.d(ctx.n);
    let current = build_support_sets_with(params, tables)?.ones;
    let next = build_support_sets_with(
        &SequenceParams {
            b: next_b,
            ..params.clone()
        },
        tables,
    )?
    .ones;
    let mut moved: Vec<u64> = current.iter().map(|&x| mul_mod(x, ctx.g, period)).collect();
    moved.sort_unstable();
    let mismatches = moved.iter().zip(&next).filter(|(a, b)| a != b).count();
    Ok(ShiftCheck {
        b: params.b,
        holds: mismatches == 0,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u64, n: u32, f: u64, b: u64, variant: Variant) -> SequenceParams {
        SequenceParams::new(PrimePowerCtx::new(p, n, f).unwrap(), b, variant).unwrap()
    }

    #[test]
    fn p3_support_sets() {
        let s = build_support_sets(&params(3, 1, 2, 0, Variant::Plain)).unwrap();
        assert_eq!(s.ones, vec![0, 1, 2]);
        assert_eq!(s.zeros, vec![3, 4, 5]);
        let t = build_support_sets(&params(3, 1, 2, 0, Variant::Tilde)).unwrap();
        assert_eq!(t.ones, vec![0, 1, 4]);
        assert_eq!(t.zeros, vec![2, 3, 5]);
    }

    #[test]
    fn p3_periods() {
        let s = generate(&params(3, 1, 2, 0, Variant::Plain)).unwrap();
        assert_eq!(s.bits().to_ascii(), "111000");
        let t = generate(&params(3, 1, 2, 0, Variant::Tilde)).unwrap();
        assert_eq!(t.bits().to_ascii(), "110010");
        assert!(t.at(6) && t.at(10) && !t.at(11));
    }

    #[test]
    fn balanced_with_fixed_endpoints() {
        for (p, n, f) in [(5u64, 2u32, 4u64), (7, 2, 6), (11, 1, 10), (13, 2, 4)] {
            let ctx = PrimePowerCtx::new(p, n, f).unwrap();
            let tables = build_all_tables(&ctx).unwrap();
            for b in 0..ctx.d(n).min(12) {
                for v in Variant::ALL {
                    let seq =
                        generate_with(&SequenceParams::new(ctx.clone(), b, v).unwrap(), &tables)
                            .unwrap();
                    assert_eq!(seq.len() as u64, 2 * ctx.pn());
                    assert_eq!(seq.weight() as u64, ctx.pn());
                    assert!(seq.bits().get(0));
                    assert!(!seq.bits().get(ctx.pn() as usize));
                }
            }
        }
    }

    #[test]
    fn shift_by_one_multiplies_by_g() {
        for (p, n, f) in [(5u64, 2u32, 2u64), (7, 2, 6), (13, 1, 12)] {
            let ctx = PrimePowerCtx::new(p, n, f).unwrap();
            let tables = build_all_tables(&ctx).unwrap();
            for b in 0..ctx.d(n) {
                for v in Variant::ALL {
                    let params = SequenceParams::new(ctx.clone(), b, v).unwrap();
                    let check = check_shift_action(&params, &tables).unwrap();
                    assert!(check.holds, "p={p} n={n} f={f} b={b} {v}: {check:?}");
                }
            }
        }
    }

    #[test]
    fn shift_out_of_range() {
        let ctx = PrimePowerCtx::new(5, 2, 2).unwrap();
        assert_eq!(
            SequenceParams::new(ctx, 10, Variant::Plain),
            Err(Error::BadShift { b: 10, limit: 10 })
        );
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("s".parse::<Variant>().unwrap(), Variant::Plain);
        assert_eq!("tilde".parse::<Variant>().unwrap(), Variant::Tilde);
        assert!("x".parse::<Variant>().is_err());
        assert_eq!(Variant::Tilde.to_string(), "tilde");
    }
}
