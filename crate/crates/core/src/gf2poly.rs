//! Polynomials over GF(2), packed 64 coefficients per word, and the two
//! linear complexity measurements: `N - deg gcd(x^N - 1, S(x))` and
//! Berlekamp-Massey synthesis over two periods.

use std::fmt;
use std::ops::{Add, Mul};

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Dense polynomial over GF(2); bit `i` of the packed words is the
/// coefficient of `x^i`. The highest stored word is never zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

fn trim(words: &mut Vec<u64>) {
    while words.last() == Some(&0) {
        words.pop();
    }
}

/// `dst ^= src * x^shift`, growing `dst` as needed.
fn xor_shifted(dst: &mut Vec<u64>, src: &[u64], shift: usize) {
    let word_shift = shift / 64;
    let bit_shift = shift % 64;
    let needed = src.len() + word_shift + usize::from(bit_shift != 0);
    if dst.len() < needed {
        dst.resize(needed, 0);
    }
    if bit_shift == 0 {
        for (k, &w) in src.iter().enumerate() {
            dst[k + word_shift] ^= w;
        }
    } else {
        for (k, &w) in src.iter().enumerate() {
            dst[k + word_shift] ^= w << bit_shift;
            dst[k + word_shift + 1] ^= w >> (64 - bit_shift);
        }
    }
}

fn degree_of(words: &[u64]) -> Option<usize> {
    let top = words.iter().rposition(|&w| w != 0)?;
    Some(top * 64 + 63 - words[top].leading_zeros() as usize)
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self { words: vec![1] }
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut words = vec![0; k / 64 + 1];
        words[k / 64] = 1 << (k % 64);
        Self { words }
    }

    /// `x^n + 1`, i.e. `x^n - 1` in characteristic 2.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut p = Self::monomial(n);
        p.words[0] ^= 1;
        trim(&mut p.words);
        p
    }

    /// Coefficients from the low bits of a word, `x^i` at bit `i`.
    pub fn from_word(w: u64) -> Self {
        Self::from_words(vec![w])
    }

    pub fn from_words(mut words: Vec<u64>) -> Self {
        trim(&mut words);
        Self { words }
    }

    /// Sum of `x^t` over the given exponents (repeats cancel).
    pub fn from_exponents(exponents: impl IntoIterator<Item = usize>) -> Self {
        let mut words = Vec::new();
        for t in exponents {
            if words.len() <= t / 64 {
                words.resize(t / 64 + 1, 0);
            }
            words[t / 64] ^= 1 << (t % 64);
        }
        Self::from_words(words)
    }

    /// `S(x) = s_0 + s_1 x + ... + s_(N-1) x^(N-1)`.
    pub fn from_bits(bits: &Bits) -> Self {
        Self::from_words(bits.words().to_vec())
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        degree_of(&self.words)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn exponents(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + b)
            })
        })
    }

    /// Remainder and quotient of division by `divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let mut rem = self.words.clone();
        let mut quot = Vec::new();
        let mut deg = degree_of(&rem);
        while let Some(d) = deg.filter(|&d| d >= dd) {
            let shift = d - dd;
            if quot.len() <= shift / 64 {
                quot.resize(shift / 64 + 1, 0);
            }
            quot[shift / 64] ^= 1 << (shift % 64);
            xor_shifted(&mut rem, &divisor.words, shift);
            deg = degree_of(&rem[..=d / 64]);
        }
        Ok((Self::from_words(quot), Self::from_words(rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let mut rem = self.words.clone();
        let mut deg = degree_of(&rem);
        while let Some(d) = deg.filter(|&d| d >= dd) {
            xor_shifted(&mut rem, &divisor.words, d - dd);
            deg = degree_of(&rem[..=d / 64]);
        }
        Ok(Self::from_words(rem))
    }

    /// Euclidean gcd. Every nonzero polynomial over GF(2) is monic, so the
    /// result needs no normalization.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroGcd);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a)
    }

    /// Formal derivative in characteristic 2: only odd-degree terms survive,
    /// each dropping one degree.
    pub fn formal_derivative(&self) -> Self {
        const ODD: u64 = 0xAAAA_AAAA_AAAA_AAAA;
        let n = self.words.len();
        let mut words = vec![0u64; n];
        for k in 0..n {
            let odd = self.words[k] & ODD;
            words[k] |= odd >> 1;
            if k > 0 {
                words[k - 1] |= (odd & 1) << 63;
            }
        }
        Self::from_words(words)
    }

    /// `x^len * P(1/x)`, the coefficient reversal over `len + 1` slots.
    pub fn reciprocal(&self, len: usize) -> Self {
        Self::from_exponents(self.exponents().filter(|&i| i <= len).map(|i| len - i))
    }

    /// Coefficient integer in hexadecimal, most significant digit first.
    pub fn to_hex(&self) -> String {
        let Some(top) = self.words.len().checked_sub(1) else {
            return "0".to_string();
        };
        let mut out = format!("{:x}", self.words[top]);
        for w in self.words[..top].iter().rev() {
            out.push_str(&format!("{w:016x}"));
        }
        out
    }
}

impl Add for &Gf2Poly {
    type Output = Gf2Poly;

    fn add(self, rhs: &Gf2Poly) -> Gf2Poly {
        let mut words = self.words.clone();
        xor_shifted(&mut words, &rhs.words, 0);
        Gf2Poly::from_words(words)
    }
}

impl Mul for &Gf2Poly {
    type Output = Gf2Poly;

    fn mul(self, rhs: &Gf2Poly) -> Gf2Poly {
        let (sparse, dense) = if self.weight() <= rhs.weight() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut words = Vec::new();
        for i in sparse.exponents() {
            xor_shifted(&mut words, &dense.words, i);
        }
        Gf2Poly::from_words(words)
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<usize> = self.exponents().collect();
        for (k, &i) in terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            match i {
                0 => f.write_str("1")?,
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

/// Linear complexity of the periodic sequence with the given period:
/// `N - deg gcd(x^N - 1, S(x))`. Over GF(2) with `N = 2p^n`,
/// `x^N - 1 = (x^(p^n) - 1)^2`, so this is the same gcd.
pub fn linear_complexity_gcd(period: &Bits) -> usize {
    let n = period.len();
    let s = Gf2Poly::from_bits(period);
    if s.is_zero() {
        return 0;
    }
    let g = Gf2Poly::x_pow_minus_one(n)
        .gcd(&s)
        .expect("x^N - 1 is nonzero");
    n - g.degree().expect("gcd of nonzero inputs is nonzero")
}

/// Shortest LFSR found by Berlekamp-Massey.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LfsrSynthesis {
    pub linear_complexity: usize,
    /// Connection polynomial `C(x) = 1 + c_1 x + ... + c_L x^L` with
    /// `sum_j c_j s_(i-j) = 0` for all `i >= L`.
    pub connection: Gf2Poly,
}

impl LfsrSynthesis {
    /// Reversed connection polynomial `x^L C(1/x)`.
    pub fn minimal_polynomial(&self) -> Gf2Poly {
        self.connection.reciprocal(self.linear_complexity)
    }

    /// Whether the recurrence holds at every index of `periods` repetitions
    /// of `period`.
    pub fn annihilates(&self, period: &Bits, periods: usize) -> bool {
        let seq = period.repeat(periods);
        let taps: Vec<usize> = self.connection.exponents().collect();
        (self.linear_complexity..seq.len())
            .all(|i| taps.iter().filter(|&&j| seq.get(i - j)).count() % 2 == 0)
    }
}

/// 64 bits of `words` starting at bit `pos`, zero beyond the end.
#[inline]
fn window(words: &[u64], pos: usize) -> u64 {
    let k = pos / 64;
    let s = pos % 64;
    let lo = words.get(k).copied().unwrap_or(0);
    if s == 0 {
        return lo;
    }
    let hi = words.get(k + 1).copied().unwrap_or(0);
    (lo >> s) | (hi << (64 - s))
}

/// Berlekamp-Massey over two copies of the period, which is always enough
/// for the shortest LFSR of a sequence with period `N` (its complexity is at
/// most `N`).
pub fn berlekamp_massey(period: &Bits) -> LfsrSynthesis {
    let total = 2 * period.len();
    // Reversed doubled sequence: rev bit k is s_(total - 1 - k).
    let mut rev = Bits::zeros(total);
    for i in 0..total {
        if period.get(i % period.len().max(1)) {
            rev.set(total - 1 - i, true);
        }
    }
    let rev = rev.words();

    let mut c: Vec<u64> = vec![1];
    let mut b: Vec<u64> = vec![1];
    let mut l = 0usize;
    let mut gap = 1usize;
    for i in 0..total {
        // d = sum_(j=0..=L) c_j s_(i-j) = parity(c & rev[total-1-i ..]).
        let offset = total - 1 - i;
        let mut acc = 0u64;
        for (k, &w) in c.iter().enumerate().take(l / 64 + 1) {
            acc ^= w & window(rev, offset + 64 * k);
        }
        if acc.count_ones().is_multiple_of(2) {
            gap += 1;
        } else if 2 * l <= i {
            let previous = c.clone();
            xor_shifted(&mut c, &b, gap);
            l = i + 1 - l;
            b = previous;
            gap = 1;
        } else {
            xor_shifted(&mut c, &b, gap);
            gap += 1;
        }
    }
    let connection = Gf2Poly::from_words(c);
    LfsrSynthesis {
        linear_complexity: l,
        connection,
    }
}
