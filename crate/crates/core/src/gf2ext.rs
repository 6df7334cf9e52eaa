//! `GF(2^m)` with a primitive `p^n`-th root of unity `alpha`, where
//! `m = ord_(p^n)(2)`, plus evaluation of the class sums
//!
//! ```text
//! E^(p^j)_i(x) = sum_(t in D^(p^j)_i) x^t
//! H^(p^j)_k(x) = sum_(i=0..d_j/2-1) E^(p^j)_(i+k)(x)
//! T^(p^m)_k(x) = sum_(j=1..m) H^(p^j)_k(x^(p^(m-j)))
//! ```
//!
//! and exhaustive checks of the identities relating them to `S(x)`.

use serde::{Deserialize, Serialize};

use crate::cyclotomy::{build_class_table, ClassTable, ModulusKind};
use crate::error::{Error, Result};
use crate::gf2poly::Gf2Poly;
use crate::ntheory::{factorize, gcd, multiplicative_order, PrimePowerCtx};
use crate::sequence::{BinarySequence, Variant};

pub const MAX_EXTENSION_DEGREE: u64 = 64;

/// Root-power tables are kept only up to this many entries.
const POWER_TABLE_LIMIT: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    /// Polynomial-basis coordinates, bit `i` for `x^i`.
    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1
    }
}

// Addition in characteristic 2 is XOR.
#[allow(clippy::suspicious_arithmetic_impl)]
impl std::ops::Add for FieldElement {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl std::ops::AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: Self) {
        self.0 ^= rhs.0;
    }
}

/// Carry-less 64x64 -> 128 bit product.
fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let mut b = b;
    while b != 0 {
        let i = b.trailing_zeros();
        acc ^= (a as u128) << i;
        b &= b - 1;
    }
    acc
}

/// Product modulo `x^m + low`.
fn mul_reduce(a: u64, b: u64, m: u32, low: u64) -> u64 {
    let mut prod = clmul(a, b);
    let mut top = 127 - prod.leading_zeros() as i32;
    while top >= m as i32 {
        prod ^= 1u128 << top;
        prod ^= (low as u128) << (top as u32 - m);
        top = 127 - prod.leading_zeros() as i32;
    }
    prod as u64
}

fn pow_reduce(mut base: u64, mut exp: u64, m: u32, low: u64) -> u64 {
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_reduce(acc, base, m, low);
        }
        base = mul_reduce(base, base, m, low);
        exp >>= 1;
    }
    acc
}

fn modulus_poly(m: u32, low: u64) -> Gf2Poly {
    if m == 64 {
        Gf2Poly::from_words(vec![low, 1])
    } else {
        Gf2Poly::from_word(low | (1 << m))
    }
}

/// Rabin's test: `x^(2^m) = x` and `gcd(x^(2^(m/q)) - x, f) = 1` for each
/// prime `q | m`.
fn is_irreducible(m: u32, low: u64) -> bool {
    if low & 1 == 0 {
        return false;
    }
    let x = 2u64;
    let mut frob = vec![x];
    let mut y = x;
    for _ in 0..m {
        y = mul_reduce(y, y, m, low);
        frob.push(y);
    }
    if frob[m as usize] != x {
        return false;
    }
    let f = modulus_poly(m, low);
    factorize(m as u64).iter().all(|&(q, _)| {
        let h = Gf2Poly::from_word(frob[(m as u64 / q) as usize] ^ x);
        h.gcd(&f).map(|g| g.degree() == Some(0)).unwrap_or(false)
    })
}

#[derive(Debug, Clone)]
pub struct FieldCtx {
    pub p: u64,
    pub n: u32,
    /// Extension degree `ord_(p^n)(2)`.
    pub m: u32,
    /// Low part of the modulus `x^m + modulus_low`.
    modulus_low: u64,
    alpha: FieldElement,
    /// `alpha_levels[j - 1]` has order `p^j`.
    alpha_levels: Vec<FieldElement>,
    pn: u64,
    powers: Option<Vec<FieldElement>>,
}

/// The smallest-modulus field containing a primitive `p^n`-th root of unity.
pub fn build_field(p: u64, n: u32) -> Result<FieldCtx> {
    let pn = p.checked_pow(n).ok_or(Error::ModulusTooLarge { p, n })?;
    let m = multiplicative_order(2, pn)?;
    if m > MAX_EXTENSION_DEGREE {
        return Err(Error::FieldTooLarge { m });
    }
    let m = m as u32;
    let modulus_low = (1u64..)
        .step_by(2)
        .find(|&low| is_irreducible(m, low))
        .expect("an irreducible polynomial exists in every degree");

    let field_order_minus_one = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    if field_order_minus_one % pn != 0 {
        return Err(Error::Internal(format!("{pn} does not divide 2^{m} - 1")));
    }
    let cofactor = field_order_minus_one / pn;
    let sub_order = pn / p;
    let alpha = (2u64..=field_order_minus_one)
        .map(|beta| pow_reduce(beta, cofactor, m, modulus_low))
        .find(|&gamma| pow_reduce(gamma, sub_order, m, modulus_low) != 1)
        .ok_or_else(|| Error::Internal(format!("no element of order {pn}")))?;

    let alpha_levels = (1..=n)
        .map(|j| FieldElement(pow_reduce(alpha, p.pow(n - j), m, modulus_low)))
        .collect();
    let mut ctx = FieldCtx {
        p,
        n,
        m,
        modulus_low,
        alpha: FieldElement(alpha),
        alpha_levels,
        pn,
        powers: None,
    };
    if pn <= POWER_TABLE_LIMIT {
        let mut table = Vec::with_capacity(pn as usize);
        let mut x = FieldElement::ONE;
        for _ in 0..pn {
            table.push(x);
            x = ctx.mul(x, ctx.alpha);
        }
        if !x.is_one() {
            return Err(Error::Internal("alpha^(p^n) != 1".into()));
        }
        ctx.powers = Some(table);
    }
    Ok(ctx)
}

impl FieldCtx {
    /// The modulus polynomial.
    pub fn modulus(&self) -> Gf2Poly {
        modulus_poly(self.m, self.modulus_low)
    }

    /// Wraps a reduced coordinate vector.
    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if self.m < 64 && value >> self.m != 0 {
            return Err(Error::ForeignElement(value));
        }
        Ok(FieldElement(value))
    }

    fn check(&self, x: FieldElement) -> Result<FieldElement> {
        self.element(x.0)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(mul_reduce(a.0, b.0, self.m, self.modulus_low))
    }

    pub fn pow(&self, a: FieldElement, exp: u64) -> FieldElement {
        FieldElement(pow_reduce(a.0, exp, self.m, self.modulus_low))
    }

    /// `alpha_n`, of multiplicative order exactly `p^n`.
    pub fn alpha(&self) -> FieldElement {
        self.alpha
    }

    /// `alpha_j = alpha_n^(p^(n-j))`.
    pub fn alpha_level(&self, j: u32) -> FieldElement {
        self.alpha_levels[j as usize - 1]
    }

    /// `p^n`.
    pub fn root_order(&self) -> u64 {
        self.pn
    }

    /// `alpha_n^exp`.
    pub fn root(&self, exp: u64) -> FieldElement {
        let exp = exp % self.pn;
        match &self.powers {
            Some(table) => table[exp as usize],
            None => self.pow(self.alpha, exp),
        }
    }
}

/// Horner evaluation of `poly` at `point`.
pub fn eval_poly(field: &FieldCtx, poly: &Gf2Poly, point: FieldElement) -> Result<FieldElement> {
    let point = field.check(point)?;
    let Some(deg) = poly.degree() else {
        return Ok(FieldElement::ZERO);
    };
    let mut acc = FieldElement::ZERO;
    for i in (0..=deg).rev() {
        acc = field.mul(acc, point);
        if poly.coeff(i) {
            acc += FieldElement::ONE;
        }
    }
    Ok(acc)
}

/// `poly(alpha_n^exp)` as a sum of root powers.
pub fn eval_at_root(field: &FieldCtx, poly: &Gf2Poly, exp: u64) -> FieldElement {
    let pn = field.root_order();
    let exp = exp % pn;
    let mut acc = FieldElement::ZERO;
    for t in poly.exponents() {
        acc += field.root(((t as u128 * exp as u128) % pn as u128) as u64);
    }
    acc
}

/// `E^(p^j)_i(point)`, the class sum at an arbitrary field element.
pub fn eval_e(
    field: &FieldCtx,
    table: &ClassTable,
    i: u64,
    point: FieldElement,
) -> Result<FieldElement> {
    let point = field.check(point)?;
    let mut acc = FieldElement::ZERO;
    for &t in table.class(ModulusKind::PrimePower, i) {
        acc += field.pow(point, t);
    }
    Ok(acc)
}

/// `H^(p^j)_k(point)`.
pub fn eval_h(
    field: &FieldCtx,
    table: &ClassTable,
    k: u64,
    point: FieldElement,
) -> Result<FieldElement> {
    let mut acc = FieldElement::ZERO;
    for i in 0..table.d / 2 {
        acc += eval_e(field, table, k + i, point)?;
    }
    Ok(acc)
}

/// `T^(p^m)_k(point)`; `tables[j - 1]` must be the level-`j` table.
pub fn eval_t(
    field: &FieldCtx,
    tables: &[ClassTable],
    k: u64,
    m_level: u32,
    point: FieldElement,
) -> Result<FieldElement> {
    if m_level == 0 || m_level as usize > tables.len() {
        return Err(Error::BadLevel {
            level: m_level,
            n: tables.len() as u32,
        });
    }
    let mut acc = FieldElement::ZERO;
    for j in 1..=m_level {
        let x = field.pow(point, field.p.pow(m_level - j));
        acc += eval_h(field, &tables[j as usize - 1], k, x)?;
    }
    Ok(acc)
}

/// Evaluates the class sums at powers of `alpha_n`, working with exponents.
/// Each `exp` argument stands for the point `alpha_n^exp`.
#[derive(Clone, Copy)]
pub struct RootEvaluator<'a> {
    field: &'a FieldCtx,
    tables: &'a [ClassTable],
}

impl<'a> RootEvaluator<'a> {
    pub fn new(field: &'a FieldCtx, tables: &'a [ClassTable]) -> Self {
        Self { field, tables }
    }

    pub fn field(&self) -> &'a FieldCtx {
        self.field
    }

    fn mul_exp(&self, a: u64, b: u64) -> u64 {
        let pn = self.field.root_order();
        ((a as u128 * b as u128) % pn as u128) as u64
    }

    pub fn e(&self, level: u32, i: u64, exp: u64) -> FieldElement {
        let table = &self.tables[level as usize - 1];
        let mut acc = FieldElement::ZERO;
        for &t in table.class(ModulusKind::PrimePower, i) {
            acc += self.field.root(self.mul_exp(exp, t));
        }
        acc
    }

    pub fn h(&self, level: u32, k: u64, exp: u64) -> FieldElement {
        let d = self.tables[level as usize - 1].d;
        (0..d / 2).fold(FieldElement::ZERO, |acc, i| acc + self.e(level, k + i, exp))
    }

    pub fn t(&self, m_level: u32, k: u64, exp: u64) -> FieldElement {
        let p = self.field.p;
        (1..=m_level).fold(FieldElement::ZERO, |acc, j| {
            acc + self.h(j, k, self.mul_exp(exp, p.pow(m_level - j)))
        })
    }

    /// Exponent of `alpha_m^a` relative to `alpha_n`.
    pub fn level_exp(&self, m_level: u32, a: u64) -> u64 {
        self.mul_exp(a, self.field.p.pow(self.field.n - m_level))
    }
}

/// Pass/fail tally for one identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub checked: u64,
    pub failed: u64,
    /// False when the identity's hypotheses do not hold for these parameters.
    pub applicable: bool,
    pub note: Option<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            checked: 0,
            failed: 0,
            applicable: true,
            note: None,
        }
    }

    fn record(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
        }
    }

    fn not_applicable(name: &str, note: &str) -> Self {
        Self {
            applicable: false,
            note: Some(note.to_string()),
            ..Self::new(name)
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(Check::passed)
}

/// Parts (i)-(iv) of the lift/pairing/non-degeneracy identities for `T`.
///
/// (i)   `T^(p^m)_i(alpha_m^(p^l a)) = T^(p^(m-l))_(i+k)(alpha_(m-l)) + (p^l - 1)/2`
///       for every unit `a` in class `k` modulo `p^(m-l)`. Both this form and
///       the one without the `(p^l - 1)/2` term are checked: the levels
///       `j <= l` contribute `(p^l - 1)/2`, and the level `l + 1` half-window
///       wraps the level-1 classes `(p^l - 1)/2` more times, so the offsets
///       cancel and only the offset-free form holds when `(p^l - 1)/2` is odd;
/// (ii)  `T^(p^m)_i(alpha_m^a) + T^(p^m)_(i+d_m/2)(alpha_m^a) = 1` for `a != 0`;
/// (iii) `T^(p^m)_i(alpha_m)` is neither 0 nor 1 for `m > 1`;
/// (iv)  `T^(p^m)_i(alpha_m) + T^(p^m)_(i+f/2)(alpha_m) != 1` for `m > 1`.
///
/// Parts (iii) and (iv) are only claimed for non-Wieferich `p`.
pub fn verify_lemma1(ctx: &PrimePowerCtx, field: &FieldCtx, tables: &[ClassTable]) -> Vec<Check> {
    let ev = RootEvaluator::new(field, tables);
    let p = ctx.p;

    let mut lift = Check::new("lemma1.i lift with offset (p^l-1)/2");
    let mut lift_net = Check::new("lemma1.i lift without offset");
    let mut pairing = Check::new("lemma1.ii pairing");
    for m in 1..=ctx.n {
        let dm = ctx.d(m);
        for l in 0..m {
            let low = m - l;
            let modulus = ctx.p_pow(low);
            let parity = (p.pow(l) - 1) / 2 % 2 == 1;
            let low_table = &tables[low as usize - 1];
            for a in (1..modulus).filter(|&a| gcd(a, p) == 1) {
                let k = low_table
                    .class_index_of(a, ModulusKind::PrimePower)
                    .expect("a is a unit");
                let lhs_exp = ev.level_exp(m, p.pow(l) * a);
                let rhs_exp = ev.level_exp(low, 1);
                for i in 0..dm {
                    let lhs = ev.t(m, i, lhs_exp);
                    let rhs = ev.t(low, i + k, rhs_exp);
                    let offset = if parity {
                        FieldElement::ONE
                    } else {
                        FieldElement::ZERO
                    };
                    lift.record(lhs == rhs + offset);
                    lift_net.record(lhs == rhs);
                }
            }
        }
        for a in 1..ctx.p_pow(m) {
            let exp = ev.level_exp(m, a);
            for i in 0..dm {
                let sum = ev.t(m, i, exp) + ev.t(m, i + dm / 2, exp);
                pairing.record(sum.is_one());
            }
        }
    }

    let (nondegenerate, half_shift) = if ctx.n < 2 {
        let note = "requires a level m > 1";
        (
            Check::not_applicable("lemma1.iii T(alpha_m) not in {0,1}", note),
            Check::not_applicable("lemma1.iv T_i + T_(i+f/2) != 1", note),
        )
    } else if ctx.is_wieferich() {
        let note = "claimed only for non-Wieferich p";
        (
            Check::not_applicable("lemma1.iii T(alpha_m) not in {0,1}", note),
            Check::not_applicable("lemma1.iv T_i + T_(i+f/2) != 1", note),
        )
    } else {
        let mut iii = Check::new("lemma1.iii T(alpha_m) not in {0,1}");
        let mut iv = Check::new("lemma1.iv T_i + T_(i+f/2) != 1");
        for m in 2..=ctx.n {
            let exp = ev.level_exp(m, 1);
            for i in 0..ctx.d(m) {
                let t = ev.t(m, i, exp);
                iii.record(!t.is_zero() && !t.is_one());
                iv.record(!(t + ev.t(m, i + ctx.f / 2, exp)).is_one());
            }
        }
        (iii, iv)
    };

    vec![lift, lift_net, pairing, nondegenerate, half_shift]
}

/// Compares `S(alpha^a)`, evaluated directly by Horner's rule, against its
/// expression through `T`, for every `a` in `Z_(p^n)`:
///
/// * plain: `S(alpha^a) = 1 + T_b(alpha^a) + T_(b+u)(alpha^a)`;
/// * tilde: `S~(alpha^a) = 1 + T_b(alpha^a) + T_(b+u+d_n/2)(alpha^a)`, which
///   collapses to `T_b + T_(b+u)` for `a != 0`.
pub fn verify_prop1(field: &FieldCtx, tables: &[ClassTable], seq: &BinarySequence) -> Vec<Check> {
    let ctx = &seq.params.ctx;
    let ev = RootEvaluator::new(field, tables);
    let s = Gf2Poly::from_bits(seq.bits());
    let (b, u, n) = (seq.params.b, ctx.u, ctx.n);
    let half = ctx.d(n) / 2;

    let mut checks = Vec::new();
    match seq.params.variant {
        Variant::Plain => {
            let mut c = Check::new("prop1 S = 1 + T_b + T_(b+u)");
            for a in 0..ctx.pn() {
                let direct = eval_poly(field, &s, field.root(a)).expect("root lies in the field");
                let via_t = FieldElement::ONE + ev.t(n, b, a) + ev.t(n, b + u, a);
                c.record(direct == via_t);
            }
            checks.push(c);
        }
        Variant::Tilde => {
            let mut full = Check::new("prop1 S~ = 1 + T_b + T_(b+u+d_n/2)");
            let mut reduced = Check::new("prop1 S~ = T_b + T_(b+u), a != 0");
            reduced.note = Some("at a = 0 the pairing identity does not apply".into());
            for a in 0..ctx.pn() {
                let direct = eval_poly(field, &s, field.root(a)).expect("root lies in the field");
                let tb = ev.t(n, b, a);
                full.record(direct == FieldElement::ONE + tb + ev.t(n, b + u + half, a));
                if a != 0 {
                    reduced.record(direct == tb + ev.t(n, b + u, a));
                }
            }
            checks.push(full);
            checks.push(reduced);
        }
    }
    checks
}

/// `S(alpha^i) != 0` for every `i` in `Z_(p^n)` outside `p^(n-1) Z_p`.
pub fn verify_prop2(field: &FieldCtx, seq: &BinarySequence) -> Check {
    let ctx = &seq.params.ctx;
    let name = format!("prop2 {} nonzero off p^(n-1)Z_p", seq.params.variant);
    if ctx.is_wieferich() {
        return Check::not_applicable(&name, "claimed only for non-Wieferich p");
    }
    let mut c = Check::new(&name);
    if ctx.n == 1 {
        c.note = Some("vacuous: the excluded set covers all of Z_p".into());
        return c;
    }
    let s = Gf2Poly::from_bits(seq.bits());
    let stride = ctx.p_pow(ctx.n - 1);
    for i in (0..ctx.pn()).filter(|i| i % stride != 0) {
        c.record(!eval_at_root(field, &s, i).is_zero());
    }
    c
}

/// Counts of `k` in `Z_f` with `H_k(alpha_1) + H_(k+u)(alpha_1)` equal to
/// 0 and to 1, with the case table's expected counts where it makes a claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPairCounts {
    pub p: u64,
    pub f: u64,
    pub u: u64,
    pub v: u64,
    pub count0: u64,
    pub count1: u64,
    pub expected0: Option<u64>,
    pub expected1: Option<u64>,
}

impl HPairCounts {
    pub fn matches_table(&self) -> bool {
        self.expected0.is_none_or(|e| e == self.count0)
            && self.expected1.is_none_or(|e| e == self.count1)
    }
}

/// Expected `(count0, count1)` from the case table. `v = f` and `v = f/2`
/// take precedence over the clauses they overlap with at `f = 2`.
pub fn h_pair_expected(v: u64, f: u64) -> (Option<u64>, Option<u64>) {
    let half = f / 2;
    let count0 = if v == f {
        Some(f)
    } else if half.is_multiple_of(v) || v == 2 {
        Some(0)
    } else {
        None
    };
    let count1 = if v == half {
        Some(f)
    } else if v == 1 || v == f || half.is_multiple_of(2 * v) {
        Some(0)
    } else {
        None
    };
    (count0, count1)
}

pub fn count_h_pair_values(p: u64, f: u64, u: u64) -> Result<HPairCounts> {
    let ctx = PrimePowerCtx::new(p, 1, f)?;
    let field = build_field(p, 1)?;
    let tables = vec![build_class_table(&ctx, 1)?];
    let ev = RootEvaluator::new(&field, &tables);
    let (mut count0, mut count1) = (0, 0);
    for k in 0..f {
        let x = ev.h(1, k, 1) + ev.h(1, k + u, 1);
        if x.is_zero() {
            count0 += 1;
        } else if x.is_one() {
            count1 += 1;
        }
    }
    let v = gcd(u, f);
    let (expected0, expected1) = h_pair_expected(v, f);
    Ok(HPairCounts {
        p,
        f,
        u,
        v,
        count0,
        count1,
        expected0,
        expected1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootRoute {
    /// Pointwise evaluation in `GF(2^m)`.
    Extension,
    /// `gcd` computations in `GF(2)[x]`, used when `m` exceeds the guard.
    Polynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleRootReport {
    pub variant: Variant,
    pub route: RootRoute,
    /// Points where `alpha^i S'(alpha^i) = T_b(alpha^i)` was checked / failed.
    pub identity_checked: u64,
    pub identity_failed: u64,
    /// Distinct `p^n`-th roots of unity that are zeros of `S`.
    pub roots: u64,
    /// Those that are also zeros of `S'`.
    pub repeated_roots: u64,
    /// `i` in `1..p^n` with `T_b(alpha^i) = 0`.
    pub t_zero_count: u64,
    /// `(p - 1)/2` for the tilde variant when `v = f`.
    pub t_zero_expected: Option<u64>,
}

impl SimpleRootReport {
    /// `deg gcd((x^(p^n) - 1)^2, S)`: each root counted with multiplicity
    /// capped at two.
    pub fn multiplicity_total(&self) -> u64 {
        self.roots + self.repeated_roots
    }

    pub fn passed(&self) -> bool {
        let shape_ok = match self.variant {
            Variant::Plain => self.repeated_roots == 0,
            Variant::Tilde => self.t_zero_expected.is_none_or(|e| e == self.t_zero_count),
        };
        self.identity_failed == 0 && shape_ok
    }
}

/// Locates the `p^n`-th-root-of-unity zeros of `S` and of `S'`, and checks
/// `x S'(x) = T_b(x)` at every such point when the field is available.
pub fn verify_simple_roots(
    seq: &BinarySequence,
    field: Option<&FieldCtx>,
    tables: &[ClassTable],
) -> Result<SimpleRootReport> {
    let ctx = &seq.params.ctx;
    let s = Gf2Poly::from_bits(seq.bits());
    let ds = s.formal_derivative();
    let t_zero_expected =
        (seq.params.variant == Variant::Tilde && ctx.v == ctx.f).then_some((ctx.p - 1) / 2);

    let mut report = SimpleRootReport {
        variant: seq.params.variant,
        route: RootRoute::Polynomial,
        identity_checked: 0,
        identity_failed: 0,
        roots: 0,
        repeated_roots: 0,
        t_zero_count: 0,
        t_zero_expected,
    };

    match field {
        Some(field) => {
            let ev = RootEvaluator::new(field, tables);
            report.route = RootRoute::Extension;
            for i in 0..ctx.pn() {
                let sv = eval_at_root(field, &s, i);
                let dv = eval_at_root(field, &ds, i);
                let tb = ev.t(ctx.n, seq.params.b, i);
                report.identity_checked += 1;
                if field.mul(field.root(i), dv) != tb {
                    report.identity_failed += 1;
                }
                if sv.is_zero() {
                    report.roots += 1;
                    if dv.is_zero() {
                        report.repeated_roots += 1;
                    }
                }
                if i != 0 && tb.is_zero() {
                    report.t_zero_count += 1;
                }
            }
        }
        None => {
            let cyc = Gf2Poly::x_pow_minus_one(ctx.pn() as usize);
            let common = cyc.gcd(&s)?;
            report.roots = common.degree().unwrap_or(0) as u64;
            report.repeated_roots = if ds.is_zero() {
                report.roots
            } else {
                common.gcd(&ds)?.degree().unwrap_or(0) as u64
            };
            // T_b(alpha^i) = alpha^i S'(alpha^i), so its zeros are those of S'.
            let deriv_roots = if ds.is_zero() {
                ctx.pn()
            } else {
                cyc.gcd(&ds)?.degree().unwrap_or(0) as u64
            };
            let zero_at_one = ds.weight().is_multiple_of(2);
            report.t_zero_count = deriv_roots - u64::from(zero_at_one);
        }
    }
    Ok(report)
}
