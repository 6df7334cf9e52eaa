//! Linear-complexity predictions, the conjecture adjudication, single-cell
//! verification and parallel parameter sweeps.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomy::build_all_tables;
use crate::error::{Error, Result};
use crate::gf2poly::{berlekamp_massey, linear_complexity_gcd};
use crate::ntheory::{
    discrete_log, find_odd_primitive_root, gcd, is_prime, pow_mod, PrimePowerCtx,
};
use crate::sequence::{generate_with, SequenceParams, Variant};

/// Which statement produced a prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// Plain, `v = f/2`: `2p^n - p + 1`.
    PlainHalf,
    /// Plain, `v = 1`, `2v | f/2` or `v = f`: `2p^n`.
    PlainFull,
    /// Plain, no exact clause: `2p^n - r ord_p(2)`.
    PlainBounded,
    /// Tilde, `v = f`: `2p^n - 3(p-1)/2`.
    TildeFull,
    /// Tilde, `v | f/2` or `v = 2 != f`: `2p^n`.
    TildeMax,
    /// Tilde, no exact clause: `2p^n - 2r ord <= L <= 2p^n - r ord`.
    TildeBounded,
    /// Wieferich prime, plain, `v = f/2`: `2p^n - (p^m - 1)`.
    WieferichPlainHalf,
    /// Wieferich prime, plain, otherwise: `2p^n`.
    WieferichPlainOther,
    /// Wieferich prime, tilde, `n >= wn`, `v = f`: `2p^n - 3(p^m - 1)/2`.
    WieferichTildeFull,
    /// Wieferich prime, tilde, `n >= wn`, otherwise: `2p^n`.
    WieferichTildeOther,
    /// Wieferich prime, tilde with `n < wn`: no formula is available.
    WieferichTildeBelowLevel,
    /// Wieferich prime with `f` not a power of two: no formula is available.
    WieferichGeneralF,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::PlainHalf => "plain v=f/2",
            Clause::PlainFull => "plain v=1 or 2v|f/2 or v=f",
            Clause::PlainBounded => "plain bounded",
            Clause::TildeFull => "tilde v=f",
            Clause::TildeMax => "tilde v|f/2 or v=2!=f",
            Clause::TildeBounded => "tilde bounded",
            Clause::WieferichPlainHalf => "wieferich plain v=f/2",
            Clause::WieferichPlainOther => "wieferich plain otherwise",
            Clause::WieferichTildeFull => "wieferich tilde v=f",
            Clause::WieferichTildeOther => "wieferich tilde otherwise",
            Clause::WieferichTildeBelowLevel => "wieferich tilde n<wn",
            Clause::WieferichGeneralF => "wieferich f not a power of 2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictionKind {
    Exact,
    Bounded,
    Unspecified,
}

impl fmt::Display for PredictionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PredictionKind::Exact => "exact",
            PredictionKind::Bounded => "bounded",
            PredictionKind::Unspecified => "unspecified",
        })
    }
}

/// A predicted linear complexity.
///
/// Bounded predictions keep the residue structure: with `N = 2p^n`, plain
/// values are `N - r step` and tilde values lie in some
/// `[N - 2r step, N - r step]`, for `0 <= r <= max_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityPrediction {
    pub kind: PredictionKind,
    pub variant: Variant,
    pub value: Option<u64>,
    pub lower: u64,
    pub upper: u64,
    /// `ord_p(2)`.
    pub step: u64,
    /// `(p - 1) / ord_p(2)`.
    pub max_r: u64,
    pub clause: Clause,
    /// Why no value is claimed, for unspecified predictions.
    pub note: Option<String>,
}

impl ComplexityPrediction {
    fn exact(variant: Variant, value: u64, step: u64, max_r: u64, clause: Clause) -> Self {
        Self {
            kind: PredictionKind::Exact,
            variant,
            value: Some(value),
            lower: value,
            upper: value,
            step,
            max_r,
            clause,
            note: None,
        }
    }

    /// Whether a measured `l` is consistent with the prediction; `None` for
    /// unspecified predictions, which make no claim.
    pub fn allows(&self, l: u64) -> Option<bool> {
        match self.kind {
            PredictionKind::Exact => Some(self.value == Some(l)),
            PredictionKind::Unspecified => None,
            PredictionKind::Bounded => {
                let top = self.upper;
                if l > top || l < self.lower {
                    return Some(false);
                }
                let gap = top - l;
                Some(match self.variant {
                    Variant::Plain => {
                        gap.is_multiple_of(self.step) && gap / self.step <= self.max_r
                    }
                    // N - 2r step <= l <= N - r step for some r.
                    Variant::Tilde => {
                        (0..=self.max_r).any(|r| r * self.step <= gap && gap <= 2 * r * self.step)
                    }
                })
            }
        }
    }

    /// Every value the prediction allows, ascending.
    pub fn allowed_values(&self) -> Vec<u64> {
        match self.kind {
            PredictionKind::Exact => self.value.into_iter().collect(),
            PredictionKind::Unspecified => Vec::new(),
            PredictionKind::Bounded => (self.lower..=self.upper)
                .filter(|&l| self.allows(l) == Some(true))
                .collect(),
        }
    }
}

impl fmt::Display for ComplexityPrediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.value) {
            (PredictionKind::Exact, Some(v)) => write!(f, "{v}"),
            (PredictionKind::Bounded, _) => write!(f, "{}..{}", self.lower, self.upper),
            _ => f.write_str("unspecified"),
        }
    }
}

/// The Wieferich-level data behind a prediction for a Wieferich prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WieferichData {
    pub wn: u32,
    /// `min(n, wn)`.
    pub m: u32,
    /// `2 = g^u (mod p^wn)`.
    pub u: u64,
    /// `u / p^(wn-1)`.
    pub z: u64,
    /// `gcd(z, f)`.
    pub v: u64,
    /// Set when `p^(wn-1)` does not divide `u` or `p | z`, so `z` is not
    /// well defined; `v` then falls back to `gcd(u, f)`.
    pub ambiguous: bool,
}

pub fn wieferich_data(ctx: &PrimePowerCtx) -> Result<WieferichData> {
    let (p, wn) = (ctx.p, ctx.wieferich_level);
    let modulus = p
        .checked_pow(wn)
        .ok_or(Error::ModulusTooLarge { p, n: wn })?;
    let order = modulus / p * (p - 1);
    // A primitive root modulo p^2 generates every higher power as well.
    let g = if ctx.n >= 2 {
        ctx.g
    } else {
        find_odd_primitive_root(p, wn.max(2))?
    };
    let u = discrete_log(g, 2, modulus, order)
        .ok_or_else(|| Error::Internal(format!("2 has no log base {g} modulo {modulus}")))?;
    let scale = modulus / p;
    let ambiguous = u % scale != 0 || (u / scale) % p == 0;
    let z = u / scale;
    let v = if ambiguous {
        gcd(u, ctx.f)
    } else {
        gcd(z, ctx.f)
    };
    Ok(WieferichData {
        wn,
        m: ctx.n.min(wn),
        u,
        z,
        v,
        ambiguous,
    })
}

/// Linear complexity predicted for one sequence instance.
///
/// The `v = f/2` (plain) and `v = f` (tilde) clauses take precedence over the
/// clauses they overlap with at `f = 2`.
pub fn predict(params: &SequenceParams) -> Result<ComplexityPrediction> {
    let ctx = &params.ctx;
    let (p, f) = (ctx.p, ctx.f);
    let full = ctx.period();
    let step = ctx.ord2_p;
    let max_r = (p - 1) / step;
    let variant = params.variant;

    if ctx.is_wieferich() {
        return predict_wieferich(params, step, max_r);
    }

    let v = ctx.v;
    let half = f / 2;
    let exact = |value, clause| {
        Ok(ComplexityPrediction::exact(
            variant, value, step, max_r, clause,
        ))
    };
    match variant {
        Variant::Plain => {
            if v == half {
                exact(full - p + 1, Clause::PlainHalf)
            } else if v == 1 || half % (2 * v) == 0 || v == f {
                exact(full, Clause::PlainFull)
            } else {
                Ok(ComplexityPrediction {
                    kind: PredictionKind::Bounded,
                    variant,
                    value: None,
                    lower: full - max_r * step,
                    upper: full,
                    step,
                    max_r,
                    clause: Clause::PlainBounded,
                    note: None,
                })
            }
        }
        Variant::Tilde => {
            if v == f {
                exact(full - 3 * (p - 1) / 2, Clause::TildeFull)
            } else if half % v == 0 || v == 2 {
                exact(full, Clause::TildeMax)
            } else {
                Ok(ComplexityPrediction {
                    kind: PredictionKind::Bounded,
                    variant,
                    value: None,
                    lower: full - 2 * max_r * step,
                    upper: full,
                    step,
                    max_r,
                    clause: Clause::TildeBounded,
                    note: None,
                })
            }
        }
    }
}

fn predict_wieferich(
    params: &SequenceParams,
    step: u64,
    max_r: u64,
) -> Result<ComplexityPrediction> {
    let ctx = &params.ctx;
    let variant = params.variant;
    let full = ctx.period();
    let unspecified = |clause, note: &str| ComplexityPrediction {
        kind: PredictionKind::Unspecified,
        variant,
        value: None,
        lower: 0,
        upper: full,
        step,
        max_r,
        clause,
        note: Some(note.to_string()),
    };
    if !ctx.f.is_power_of_two() {
        return Ok(unspecified(
            Clause::WieferichGeneralF,
            "the Wieferich formulas cover only f = 2^r",
        ));
    }
    let w = wieferich_data(ctx)?;
    let pm_minus_one = ctx.p.pow(w.m) - 1;
    let exact = |value, clause| ComplexityPrediction::exact(variant, value, step, max_r, clause);
    Ok(match variant {
        Variant::Plain if w.v == ctx.f / 2 => {
            exact(full - pm_minus_one, Clause::WieferichPlainHalf)
        }
        Variant::Plain => exact(full, Clause::WieferichPlainOther),
        Variant::Tilde if ctx.n < w.wn => unspecified(
            Clause::WieferichTildeBelowLevel,
            "the tilde formula is stated only for n >= wn",
        ),
        Variant::Tilde if w.v == ctx.f => {
            exact(full - 3 * pm_minus_one / 2, Clause::WieferichTildeFull)
        }
        Variant::Tilde => exact(full, Clause::WieferichTildeOther),
    })
}

/// The two-case table for `f = 2^r`; `None` when `f` is not a power of two.
pub fn predict_corollary(params: &SequenceParams) -> Option<u64> {
    let ctx = &params.ctx;
    if !ctx.f.is_power_of_two() {
        return None;
    }
    let full = ctx.period();
    Some(match params.variant {
        Variant::Plain if ctx.v == ctx.f / 2 => full - ctx.p + 1,
        Variant::Tilde if ctx.v == ctx.f => full - 3 * (ctx.p - 1) / 2,
        _ => full,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    /// `2^e = -1 (mod p)`, `2^e != -1 (mod p^2)`; concerns the plain sequence.
    MinusOne,
    /// `2^e = 1 (mod p)`, `2^e != 1 (mod p^2)`; concerns the tilde sequence.
    PlusOne,
}

impl Hypothesis {
    /// Which hypothesis `(p, e)` satisfies, if any.
    pub fn of(p: u64, e: u64) -> Option<Self> {
        let p2 = p * p;
        let t = pow_mod(2, e, p2);
        if t % p == p - 1 && t != p2 - 1 {
            Some(Hypothesis::MinusOne)
        } else if t % p == 1 && t != 1 {
            Some(Hypothesis::PlusOne)
        } else {
            None
        }
    }

    pub fn variant(self) -> Variant {
        match self {
            Hypothesis::MinusOne => Variant::Plain,
            Hypothesis::PlusOne => Variant::Tilde,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    /// Original and corrected values coincide and match.
    Both,
    Original,
    Corrected,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureRecord {
    pub hypothesis: Hypothesis,
    /// `2p^n - (p - 1)`, or `2p^n - (p - 1) - e` under [`Hypothesis::PlusOne`].
    pub original: u64,
    /// `2p^n - p + 1`, or `2p^n - 3(p - 1)/2` under [`Hypothesis::PlusOne`].
    pub corrected: u64,
    pub measured: u64,
    pub supports: Support,
}

fn conjecture_values(ctx: &PrimePowerCtx, hypothesis: Hypothesis) -> (u64, u64) {
    let full = ctx.period();
    let p = ctx.p;
    match hypothesis {
        Hypothesis::MinusOne => (full - (p - 1), full - p + 1),
        Hypothesis::PlusOne => (full - (p - 1) - ctx.e, full - 3 * (p - 1) / 2),
    }
}

fn hypothesis_for(params: &SequenceParams) -> Result<Hypothesis> {
    let ctx = &params.ctx;
    let h = Hypothesis::of(ctx.p, ctx.e).ok_or(Error::HypothesisNotSatisfied(
        "2^e is neither -1 nor 1 modulo p, or it is also modulo p^2",
    ))?;
    if h.variant() != params.variant {
        return Err(Error::HypothesisNotSatisfied(match h {
            Hypothesis::MinusOne => "2^e = -1 (mod p) concerns the plain sequence",
            Hypothesis::PlusOne => "2^e = 1 (mod p) concerns the tilde sequence",
        }));
    }
    Ok(h)
}

fn adjudicate(original: u64, corrected: u64, measured: u64) -> Support {
    match (original == measured, corrected == measured) {
        (true, true) => Support::Both,
        (true, false) => Support::Original,
        (false, true) => Support::Corrected,
        (false, false) => Support::Neither,
    }
}

/// Generates the sequence, measures it, and compares the conjectured value
/// with the corrected one.
pub fn check_conjecture(params: &SequenceParams) -> Result<ConjectureRecord> {
    let hypothesis = hypothesis_for(params)?;
    let (original, corrected) = conjecture_values(&params.ctx, hypothesis);
    let seq = crate::sequence::generate(params)?;
    let measured = berlekamp_massey(seq.bits()).linear_complexity as u64;
    Ok(ConjectureRecord {
        hypothesis,
        original,
        corrected,
        measured,
        supports: adjudicate(original, corrected, measured),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Measured, but nothing was claimed.
    Unclaimed,
    /// Not measured: the period exceeds the measurement limit.
    Unverified,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Unclaimed => "unclaimed",
            Verdict::Unverified => "unverified",
        })
    }
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    /// Both measurements agree.
    pub oracles: Verdict,
    pub prediction: Verdict,
    /// `ord_p(2) | 2p^n - L` for the plain variant.
    pub residue: Verdict,
    /// Measured value equals the corrected conjecture value.
    pub conjecture: Verdict,
    pub overall: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub params: SequenceParams,
    pub predicted: ComplexityPrediction,
    pub measured_bm: Option<u64>,
    pub measured_gcd: Option<u64>,
    pub conjecture_original: Option<u64>,
    pub conjecture_corrected: Option<u64>,
    pub verdicts: Verdicts,
}

impl VerificationRecord {
    pub fn measured(&self) -> Option<u64> {
        self.measured_bm
    }

    pub fn passed(&self) -> bool {
        self.verdicts.overall != Verdict::Fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Largest period `2p^n` that is measured; longer ones are predicted only.
    pub max_period: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_period: 1 << 15,
        }
    }
}

pub fn verify_point(params: &SequenceParams) -> Result<VerificationRecord> {
    verify_point_with(params, &VerifyOptions::default())
}

pub fn verify_point_with(
    params: &SequenceParams,
    opts: &VerifyOptions,
) -> Result<VerificationRecord> {
    let tables = if params.ctx.period() <= opts.max_period {
        Some(build_all_tables(&params.ctx)?)
    } else {
        None
    };
    verify_with_tables(params, tables.as_deref())
}

fn verify_with_tables(
    params: &SequenceParams,
    tables: Option<&[crate::cyclotomy::ClassTable]>,
) -> Result<VerificationRecord> {
    let ctx = &params.ctx;
    let predicted = predict(params)?;
    let conjecture = hypothesis_for(params)
        .ok()
        .map(|h| conjecture_values(ctx, h));

    let (measured_bm, measured_gcd) = match tables {
        Some(tables) => {
            let seq = generate_with(params, tables)?;
            let bm = berlekamp_massey(seq.bits()).linear_complexity as u64;
            let by_gcd = linear_complexity_gcd(seq.bits()) as u64;
            (Some(bm), Some(by_gcd))
        }
        None => (None, None),
    };

    let verdicts = match (measured_bm, measured_gcd) {
        (Some(bm), Some(by_gcd)) => {
            let oracles = Verdict::from_bool(bm == by_gcd);
            let prediction = match predicted.allows(bm) {
                Some(ok) => Verdict::from_bool(ok),
                None => Verdict::Unclaimed,
            };
            let residue = match params.variant {
                Variant::Plain => Verdict::from_bool(
                    bm <= ctx.period() && (ctx.period() - bm).is_multiple_of(ctx.ord2_p),
                ),
                Variant::Tilde => Verdict::Unclaimed,
            };
            let conjecture = match conjecture {
                Some((_, corrected)) => Verdict::from_bool(corrected == bm),
                None => Verdict::Unclaimed,
            };
            let all = [oracles, prediction, residue, conjecture];
            let overall = if all.contains(&Verdict::Fail) {
                Verdict::Fail
            } else if prediction == Verdict::Unclaimed {
                Verdict::Unclaimed
            } else {
                Verdict::Pass
            };
            Verdicts {
                oracles,
                prediction,
                residue,
                conjecture,
                overall,
            }
        }
        _ => Verdicts {
            oracles: Verdict::Unverified,
            prediction: Verdict::Unverified,
            residue: Verdict::Unverified,
            conjecture: Verdict::Unverified,
            overall: Verdict::Unverified,
        },
    };

    Ok(VerificationRecord {
        params: params.clone(),
        predicted,
        measured_bm,
        measured_gcd,
        conjecture_original: conjecture.map(|c| c.0),
        conjecture_corrected: conjecture.map(|c| c.1),
        verdicts,
    })
}

/// Parameter ranges for a sweep. `f` ranges over every even divisor of
/// `p - 1` unless given explicitly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub primes: Vec<u64>,
    pub exponents: Vec<u32>,
    pub fs: Option<Vec<u64>>,
    /// Explicit shifts; `None` means `{0, 1, d_n/2}`, or all of them with
    /// `full_b`.
    pub shifts: Option<Vec<u64>>,
    pub full_b: bool,
    pub variants: Vec<Variant>,
    pub generator: Option<u64>,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            primes: vec![3, 5, 7, 11, 13, 17],
            exponents: vec![1, 2],
            fs: None,
            shifts: None,
            full_b: false,
            variants: Variant::ALL.to_vec(),
            generator: None,
        }
    }
}

impl Grid {
    pub fn empty() -> Self {
        Self {
            primes: Vec::new(),
            ..Self::default()
        }
    }

    fn shifts_for(&self, d_n: u64) -> Vec<u64> {
        let mut bs: Vec<u64> = match (&self.shifts, self.full_b) {
            (_, true) => (0..d_n).collect(),
            (Some(bs), false) => bs.iter().copied().filter(|&b| b < d_n).collect(),
            (None, false) => vec![0, 1, d_n / 2],
        };
        bs.sort_unstable();
        bs.dedup();
        bs
    }
}

/// Every even divisor of `p - 1`, ascending.
pub fn even_divisors(p: u64) -> Vec<u64> {
    (1..=(p - 1) / 2)
        .map(|k| 2 * k)
        .filter(|f| (p - 1).is_multiple_of(*f))
        .collect()
}

/// A grid cell that could not be built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedCell {
    pub p: u64,
    pub n: u32,
    pub f: Option<u64>,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub cells: usize,
    pub passed: usize,
    pub failed: usize,
    pub unclaimed: usize,
    pub unverified: usize,
    /// Cells where the two measurements disagree.
    pub oracle_failures: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub records: Vec<VerificationRecord>,
    pub skipped: Vec<SkippedCell>,
    pub summary: SweepSummary,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SweepOptions {
    pub verify: VerifyOptions,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

struct Group {
    params: Vec<SequenceParams>,
}

fn expand(grid: &Grid) -> (Vec<Group>, Vec<SkippedCell>) {
    let mut groups = Vec::new();
    let mut skipped = Vec::new();
    let mut primes = grid.primes.clone();
    primes.sort_unstable();
    primes.dedup();
    let mut exponents = grid.exponents.clone();
    exponents.sort_unstable();
    exponents.dedup();
    let mut variants = grid.variants.clone();
    variants.sort_unstable();
    variants.dedup();

    for &p in &primes {
        if !matches!(is_prime(p), Ok(true)) || p == 2 {
            for &n in &exponents {
                skipped.push(SkippedCell {
                    p,
                    n,
                    f: None,
                    reason: Error::NotOddPrime(p).to_string(),
                });
            }
            continue;
        }
        let mut fs = grid.fs.clone().unwrap_or_else(|| even_divisors(p));
        fs.sort_unstable();
        fs.dedup();
        for &n in &exponents {
            for &f in &fs {
                let ctx = match PrimePowerCtx::with_generator(p, n, f, grid.generator) {
                    Ok(ctx) => ctx,
                    Err(e) => {
                        skipped.push(SkippedCell {
                            p,
                            n,
                            f: Some(f),
                            reason: e.to_string(),
                        });
                        continue;
                    }
                };
                let mut params = Vec::new();
                for b in grid.shifts_for(ctx.d(n)) {
                    for &variant in &variants {
                        params.push(SequenceParams {
                            ctx: ctx.clone(),
                            b,
                            variant,
                        });
                    }
                }
                groups.push(Group { params });
            }
        }
    }
    (groups, skipped)
}

fn run_group(group: &Group, opts: &VerifyOptions) -> Result<Vec<VerificationRecord>> {
    let Some(first) = group.params.first() else {
        return Ok(Vec::new());
    };
    let tables = if first.ctx.period() <= opts.max_period {
        Some(build_all_tables(&first.ctx)?)
    } else {
        None
    };
    group
        .params
        .iter()
        .map(|params| verify_with_tables(params, tables.as_deref()))
        .collect()
}

fn cell_key(r: &VerificationRecord) -> (u64, u32, u64, u64, Variant) {
    let c = &r.params.ctx;
    (c.p, c.n, c.f, r.params.b, r.params.variant)
}

/// Verifies every cell of the grid in parallel. Records come back sorted by
/// `(p, n, f, b, variant)` regardless of scheduling.
pub fn sweep(grid: &Grid, opts: &SweepOptions) -> Result<SweepReport> {
    let (groups, skipped) = expand(grid);
    let work = || -> Result<Vec<Vec<VerificationRecord>>> {
        groups
            .par_iter()
            .map(|g| run_group(g, &opts.verify))
            .collect()
    };
    let nested = match opts.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    let mut records: Vec<VerificationRecord> = nested.into_iter().flatten().collect();
    records.sort_by_key(cell_key);
    let summary = summarize(&records);
    Ok(SweepReport {
        records,
        skipped,
        summary,
    })
}

fn summarize(records: &[VerificationRecord]) -> SweepSummary {
    let mut s = SweepSummary {
        cells: records.len(),
        ..SweepSummary::default()
    };
    for r in records {
        match r.verdicts.overall {
            Verdict::Pass => s.passed += 1,
            Verdict::Fail => s.failed += 1,
            Verdict::Unclaimed => s.unclaimed += 1,
            Verdict::Unverified => s.unverified += 1,
        }
        if r.verdicts.oracles == Verdict::Fail {
            s.oracle_failures += 1;
        }
    }
    s
}

/// `(p, n, f, variant)`.
pub type FamilyKey = (u64, u32, u64, Variant);

/// Groups of exact-clause cells that differ only in `b` yet were measured
/// with different values, with the distinct measured values.
pub fn b_invariance_violations(records: &[VerificationRecord]) -> Vec<(FamilyKey, Vec<u64>)> {
    let mut groups: BTreeMap<FamilyKey, Vec<u64>> = BTreeMap::new();
    for r in records {
        if r.predicted.kind != PredictionKind::Exact {
            continue;
        }
        if let Some(l) = r.measured_bm {
            let c = &r.params.ctx;
            groups
                .entry((c.p, c.n, c.f, r.params.variant))
                .or_default()
                .push(l);
        }
    }
    groups
        .into_iter()
        .filter_map(|(key, mut ls)| {
            ls.sort_unstable();
            ls.dedup();
            (ls.len() > 1).then_some((key, ls))
        })
        .collect()
}

/// Non-Wieferich `f = 2^r` cells where the two-case table and the general
/// predictor disagree (or the general one is not exact).
pub fn corollary_violations(records: &[VerificationRecord]) -> Vec<VerificationRecord> {
    records
        .iter()
        .filter(|r| !r.params.ctx.is_wieferich())
        .filter(|r| match predict_corollary(&r.params) {
            Some(c) => r.predicted.value != Some(c),
            None => false,
        })
        .cloned()
        .collect()
}

/// A difference between a stored record and its recomputation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecheckIssue {
    pub index: usize,
    pub message: String,
}

/// Rebuilds every record of a (deserialized) report from its parameters and
/// reports any field that differs. The stored `ctx` is not trusted: it is
/// recomputed from `p`, `n`, `f` and `g`.
pub fn recheck(report: &SweepReport, opts: &VerifyOptions) -> Vec<RecheckIssue> {
    let mut issues = Vec::new();
    for (index, stored) in report.records.iter().enumerate() {
        let c = &stored.params.ctx;
        let fresh = PrimePowerCtx::with_generator(c.p, c.n, c.f, Some(c.g))
            .and_then(|ctx| SequenceParams::new(ctx, stored.params.b, stored.params.variant))
            .and_then(|params| verify_point_with(&params, opts));
        match fresh {
            Err(e) => issues.push(RecheckIssue {
                index,
                message: format!("cannot rebuild: {e}"),
            }),
            Ok(fresh) if fresh != *stored => issues.push(RecheckIssue {
                index,
                message: format!(
                    "p={} n={} f={} b={} {}: stored record differs from recomputation",
                    c.p, c.n, c.f, stored.params.b, stored.params.variant
                ),
            }),
            Ok(_) => {}
        }
    }
    let summary = summarize(&report.records);
    if summary != report.summary {
        issues.push(RecheckIssue {
            index: report.records.len(),
            message: "summary does not match the records".into(),
        });
    }
    issues
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvRow {
    pub p: u64,
    pub n: u32,
    pub f: u64,
    pub e: u64,
    pub b: u64,
    pub variant: String,
    pub v: u64,
    pub ord_p_2: u64,
    pub predicted_kind: String,
    pub predicted: String,
    pub measured: Option<u64>,
    pub conjecture_original: Option<u64>,
    pub conjecture_corrected: Option<u64>,
    pub verdict: String,
}

impl From<&VerificationRecord> for CsvRow {
    fn from(r: &VerificationRecord) -> Self {
        let c = &r.params.ctx;
        Self {
            p: c.p,
            n: c.n,
            f: c.f,
            e: c.e,
            b: r.params.b,
            variant: r.params.variant.to_string(),
            v: c.v,
            ord_p_2: c.ord2_p,
            predicted_kind: r.predicted.kind.to_string(),
            predicted: r.predicted.to_string(),
            measured: r.measured_bm,
            conjecture_original: r.conjecture_original,
            conjecture_corrected: r.conjecture_corrected,
            verdict: r.verdicts.overall.to_string(),
        }
    }
}

pub fn write_csv<W: std::io::Write>(records: &[VerificationRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Internal(format!("csv: {e}"));
    if records.is_empty() {
        w.write_record([
            "p",
            "n",
            "f",
            "e",
            "b",
            "variant",
            "v",
            "ord_p_2",
            "predicted_kind",
            "predicted",
            "measured",
            "conjecture_original",
            "conjecture_corrected",
            "verdict",
        ])
        .map_err(io)?;
    }
    for r in records {
        w.serialize(CsvRow::from(r)).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Internal(format!("csv: {e}")))
}
