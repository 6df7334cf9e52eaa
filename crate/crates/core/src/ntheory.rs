//! Modular arithmetic on 64-bit integers: primality, multiplicative orders,
//! odd primitive roots modulo `p^n` and `2p^n`, discrete logs of 2 and the
//! Wieferich level of a prime.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted anywhere in the crate (exclusive).
pub const MODULUS_LIMIT: u64 = 1 << 63;

/// Primes below this bound get primitive roots modulo `p^2` without overflow.
const PRIME_LIMIT: u64 = 1 << 31;

/// Brute-force discrete logs below this group order, baby-step/giant-step above.
const BRUTE_FORCE_DLOG_LIMIT: u64 = 1 << 22;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `base^exp` if it fits in a `u64`.
pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// Deterministic Miller-Rabin for `2 <= n < 2^63`.
pub fn is_prime(n: u64) -> Result<bool> {
    if !(2..MODULUS_LIMIT).contains(&n) {
        return Err(Error::OutOfRange {
            value: n,
            constraint: "2 <= n < 2^63",
        });
    }
    Ok(miller_rabin(n))
}

fn miller_rabin(n: u64) -> bool {
    // This witness set is exact for every n < 3.3 * 10^24.
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division. Only ever applied to `p - 1` and
/// small moduli, which keeps it cheap at the scales this crate targets.
pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn euler_phi_factored(m: u64) -> Vec<(u64, u32)> {
    let mut phi: HashMap<u64, u32> = HashMap::new();
    for (q, k) in factorize(m) {
        if k > 1 {
            *phi.entry(q).or_default() += k - 1;
        }
        for (r, j) in factorize(q - 1) {
            *phi.entry(r).or_default() += j;
        }
    }
    let mut v: Vec<_> = phi.into_iter().collect();
    v.sort_unstable();
    v
}

/// Smallest `t >= 1` with `a^t = 1 (mod m)`.
pub fn multiplicative_order(a: u64, m: u64) -> Result<u64> {
    if !(2..MODULUS_LIMIT).contains(&m) {
        return Err(Error::OutOfRange {
            value: m,
            constraint: "2 <= m < 2^63",
        });
    }
    if gcd(a % m, m) != 1 {
        return Err(Error::NotCoprime { a, m });
    }
    let phi = euler_phi_factored(m);
    let mut order: u64 = phi.iter().map(|&(q, k)| q.pow(k)).product();
    for &(q, k) in &phi {
        for _ in 0..k {
            if pow_mod(a, order / q, m) == 1 {
                order /= q;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) || p >= MODULUS_LIMIT || !miller_rabin(p) {
        return Err(Error::NotOddPrime(p));
    }
    if p >= PRIME_LIMIT {
        return Err(Error::OutOfRange {
            value: p,
            constraint: "p < 2^31",
        });
    }
    Ok(())
}

fn is_primitive_root_mod_p(h: u64, p: u64, prime_factors: &[(u64, u32)]) -> bool {
    !h.is_multiple_of(p)
        && prime_factors
            .iter()
            .all(|&(q, _)| pow_mod(h, (p - 1) / q, p) != 1)
}

/// Smallest primitive root modulo `p^2`, which is a primitive root modulo
/// every power of `p`.
pub fn smallest_primitive_root_p2(p: u64) -> Result<u64> {
    check_odd_prime(p)?;
    let p2 = p * p;
    let factors = factorize(p - 1);
    (2..p2)
        .find(|&h| is_primitive_root_mod_p(h, p, &factors) && pow_mod(h, p - 1, p2) != 1)
        .ok_or_else(|| Error::Internal(format!("no primitive root modulo {p}^2")))
}

/// An odd primitive root modulo `p^n`, hence also modulo `2p^n`: the smallest
/// primitive root `h` modulo `p^2`, replaced by `h + p^n` when `h` is even.
pub fn find_odd_primitive_root(p: u64, n: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::BadExponent(n));
    }
    let h = smallest_primitive_root_p2(p)?;
    if h % 2 == 1 {
        return Ok(h);
    }
    checked_pow(p, n)
        .and_then(|pn| pn.checked_add(h))
        .filter(|&g| g < MODULUS_LIMIT)
        .ok_or(Error::ModulusTooLarge { p, n })
}

/// Exponent `k` in `0..order` with `g^k = target (mod m)`, if any.
pub fn discrete_log(g: u64, target: u64, m: u64, order: u64) -> Option<u64> {
    let target = target % m;
    if order < BRUTE_FORCE_DLOG_LIMIT {
        let mut x = 1 % m;
        for k in 0..order {
            if x == target {
                return Some(k);
            }
            x = mul_mod(x, g, m);
        }
        return None;
    }
    // Baby-step/giant-step.
    let step = (order as f64).sqrt().ceil() as u64;
    let mut baby = HashMap::with_capacity(step as usize);
    let mut x = 1 % m;
    for j in 0..step {
        baby.entry(x).or_insert(j);
        x = mul_mod(x, g, m);
    }
    let inv_giant = pow_mod(g, order - (step % order), m);
    let mut y = target;
    for i in 0..=step {
        if let Some(&j) = baby.get(&y) {
            let k = i * step + j;
            if k < order {
                return Some(k);
            }
        }
        y = mul_mod(y, inv_giant, m);
    }
    None
}

/// `gcd((p - 1) / ord_p(2), f)`, computed both from the order of 2 and from
/// the discrete log of 2; the two values must agree.
pub fn compute_v(p: u64, f: u64) -> Result<u64> {
    check_odd_prime(p)?;
    check_f(p, f)?;
    let ord = multiplicative_order(2, p)?;
    let v = gcd((p - 1) / ord, f);
    let g = find_odd_primitive_root(p, 1)?;
    let u = discrete_log(g, 2, p, p - 1)
        .ok_or_else(|| Error::Internal(format!("2 has no log base {g} modulo {p}")))?;
    let v_from_log = gcd(u, f);
    if v != v_from_log {
        return Err(Error::Internal(format!(
            "v = {v} from ord_p(2) but gcd(u, f) = {v_from_log}"
        )));
    }
    Ok(v)
}

fn check_f(p: u64, f: u64) -> Result<()> {
    if f == 0 || f % 2 == 1 || !(p - 1).is_multiple_of(f) {
        return Err(Error::BadF {
            f,
            p_minus_1: p - 1,
        });
    }
    Ok(())
}

/// Largest `k` with `2^(p-1) = 1 (mod p^k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WieferichLevel {
    pub level: u32,
    /// Set when the search stopped because `p^(level+1)` overflows 64 bits
    /// while the congruence still held.
    pub capped: bool,
}

pub fn wieferich_level(p: u64) -> WieferichLevel {
    let mut level = 1;
    loop {
        let Some(pk) = checked_pow(p, level + 1) else {
            return WieferichLevel {
                level,
                capped: true,
            };
        };
        if pow_mod(2, p - 1, pk) != 1 {
            return WieferichLevel {
                level,
                capped: false,
            };
        }
        level += 1;
    }
}

/// Number-theoretic data fixed by `(p, n, f)` and a primitive root `g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePowerCtx {
    pub p: u64,
    pub n: u32,
    pub f: u64,
    pub e: u64,
    /// Odd primitive root modulo `p^n` and `2p^n`.
    pub g: u64,
    /// `g^u = 2 (mod p^n)`, `0 <= u < p^(n-1)(p-1)`.
    pub u: u64,
    pub ord2_p: u64,
    pub v: u64,
    pub wieferich_level: u32,
}

impl PrimePowerCtx {
    /// Context with the deterministic default primitive root.
    pub fn new(p: u64, n: u32, f: u64) -> Result<Self> {
        Self::with_generator(p, n, f, None)
    }

    pub fn with_generator(p: u64, n: u32, f: u64, g: Option<u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadExponent(n));
        }
        check_odd_prime(p)?;
        check_f(p, f)?;
        let pn = checked_pow(p, n)
            .filter(|&pn| pn < MODULUS_LIMIT / 2)
            .ok_or(Error::ModulusTooLarge { p, n })?;
        let group_order = pn / p * (p - 1);

        let g = match g {
            None => find_odd_primitive_root(p, n)?,
            Some(g) => {
                let ok = g % 2 == 1
                    && gcd(g, p) == 1
                    && multiplicative_order(g, pn)? == group_order
                    && multiplicative_order(g, 2 * pn)? == group_order;
                if !ok {
                    return Err(Error::BadGenerator { g, modulus: 2 * pn });
                }
                g
            }
        };

        let u = discrete_log(g, 2, pn, group_order)
            .ok_or_else(|| Error::Internal(format!("2 has no log base {g} modulo {pn}")))?;
        let ord2_p = multiplicative_order(2, p)?;
        let v = gcd((p - 1) / ord2_p, f);
        if v != gcd(u, f) {
            return Err(Error::Internal(format!(
                "v = {v} disagrees with gcd(u, f) = {}",
                gcd(u, f)
            )));
        }

        Ok(Self {
            p,
            n,
            f,
            e: (p - 1) / f,
            g,
            u,
            ord2_p,
            v,
            wieferich_level: wieferich_level(p).level,
        })
    }

    /// `p^j`.
    pub fn p_pow(&self, j: u32) -> u64 {
        self.p.pow(j)
    }

    /// `p^n`.
    pub fn pn(&self) -> u64 {
        self.p_pow(self.n)
    }

    /// Sequence period `2p^n`.
    pub fn period(&self) -> u64 {
        2 * self.pn()
    }

    /// Number of generalized cyclotomic classes at level `j`: `p^(j-1) f`.
    pub fn d(&self, j: u32) -> u64 {
        self.p_pow(j - 1) * self.f
    }

    /// Order of the unit group modulo `p^j`: `p^(j-1)(p-1)`.
    pub fn group_order(&self, j: u32) -> u64 {
        self.p_pow(j - 1) * (self.p - 1)
    }

    pub fn is_wieferich(&self) -> bool {
        self.wieferich_level >= 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_prime(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    fn brute_order(a: u64, m: u64) -> u64 {
        let mut x = a % m;
        let mut t = 1;
        while x != 1 {
            x = x * a % m;
            t += 1;
        }
        t
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(2).unwrap());
        assert!(is_prime(1093).unwrap());
        assert!(!is_prime(49).unwrap());
        assert!(is_prime(1).is_err());
        assert!(is_prime(1 << 63).is_err());
        assert!(is_prime((1 << 61) - 1).unwrap());
        assert!(!is_prime(3_215_031_751).unwrap()); // strong pseudoprime to 2, 3, 5, 7
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 2..20_000u64 {
            assert_eq!(is_prime(n).unwrap(), trial_division_prime(n), "n = {n}");
        }
    }

    #[test]
    fn order_examples() {
        assert_eq!(multiplicative_order(2, 7).unwrap(), 3);
        assert_eq!(multiplicative_order(2, 17).unwrap(), 8);
        assert_eq!(multiplicative_order(2, 25).unwrap(), brute_order(2, 25));
        assert_eq!(multiplicative_order(2, 25).unwrap(), 20);
        assert_eq!(
            multiplicative_order(6, 9),
            Err(Error::NotCoprime { a: 6, m: 9 })
        );
    }

    #[test]
    fn order_matches_brute_force() {
        for m in 2..400u64 {
            for a in 1..m {
                if gcd(a, m) == 1 {
                    assert_eq!(multiplicative_order(a, m).unwrap(), brute_order(a, m));
                }
            }
        }
    }

    #[test]
    fn odd_primitive_root_examples() {
        assert_eq!(find_odd_primitive_root(3, 1).unwrap(), 5);
        assert_eq!(find_odd_primitive_root(5, 2).unwrap(), 27);
        assert_eq!(find_odd_primitive_root(7, 1).unwrap(), 3);
        assert_eq!(brute_order(5, 3), 2);
        assert_eq!(brute_order(27, 25), 20);
        assert_eq!(brute_order(3, 49), 42);
        assert!(find_odd_primitive_root(9, 1).is_err());
    }

    #[test]
    fn odd_primitive_root_has_full_order() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 73] {
            for n in 1..=3 {
                let g = find_odd_primitive_root(p, n).unwrap();
                assert_eq!(g % 2, 1);
                let pn = p.pow(n);
                let want = pn / p * (p - 1);
                assert_eq!(brute_order(g, pn), want);
                assert_eq!(brute_order(g, 2 * pn), want);
            }
        }
    }

    #[test]
    fn index_of_two_examples() {
        let ctx = PrimePowerCtx::new(3, 2, 2).unwrap();
        assert_eq!((ctx.g, ctx.u), (11, 1));
        let ctx = PrimePowerCtx::new(7, 1, 2).unwrap();
        assert_eq!((ctx.g, ctx.u), (3, 2));
        let ctx = PrimePowerCtx::new(17, 1, 4).unwrap();
        assert_eq!((ctx.g, ctx.u), (3, 14));
        assert_eq!(pow_mod(3, 14, 17), 2);
    }

    #[test]
    fn bsgs_agrees_with_scan() {
        // p = 4_194_319 is prime with p - 1 above the brute-force limit.
        let p = 4_194_319;
        assert!(miller_rabin(p));
        let g = find_odd_primitive_root(p, 1).unwrap();
        let u = discrete_log(g, 2, p, p - 1).unwrap();
        assert_eq!(pow_mod(g, u, p), 2);
        for k in [0u64, 1, 17, 2048, 4_194_000] {
            assert_eq!(discrete_log(g, pow_mod(g, k, p), p, p - 1), Some(k));
        }
    }

    #[test]
    fn v_examples() {
        assert_eq!(compute_v(7, 2).unwrap(), 2);
        assert_eq!(compute_v(3, 2).unwrap(), 1);
        assert_eq!(compute_v(17, 4).unwrap(), 2);
        assert_eq!(compute_v(73, 4).unwrap(), 4);
        assert!(matches!(compute_v(7, 4), Err(Error::BadF { .. })));
        assert!(matches!(compute_v(7, 3), Err(Error::BadF { .. })));
    }

    #[test]
    fn wieferich_examples() {
        assert_eq!(wieferich_level(7).level, 1);
        assert_eq!(wieferich_level(1093).level, 2);
        assert_eq!(wieferich_level(3511).level, 2);
        assert!(!wieferich_level(3511).capped);
    }

    #[test]
    fn only_known_wieferich_primes_below_ten_thousand() {
        let found: Vec<u64> = (3..10_000u64)
            .filter(|&p| trial_division_prime(p) && wieferich_level(p).level >= 2)
            .collect();
        assert_eq!(found, vec![1093, 3511]);
    }

    #[test]
    fn ctx_validation() {
        assert!(matches!(
            PrimePowerCtx::new(9, 1, 2),
            Err(Error::NotOddPrime(9))
        ));
        assert!(matches!(
            PrimePowerCtx::new(2, 1, 2),
            Err(Error::NotOddPrime(2))
        ));
        assert!(matches!(
            PrimePowerCtx::new(7, 0, 2),
            Err(Error::BadExponent(0))
        ));
        assert!(matches!(
            PrimePowerCtx::new(7, 1, 3),
            Err(Error::BadF { .. })
        ));
        assert!(matches!(
            PrimePowerCtx::new(7, 1, 4),
            Err(Error::BadF { .. })
        ));
        assert!(matches!(
            PrimePowerCtx::new(3, 40, 2),
            Err(Error::ModulusTooLarge { .. })
        ));
        // 2 is even; 1 is not primitive; 19 = 5 + 14 is odd and primitive mod 7 and 14.
        assert!(PrimePowerCtx::with_generator(7, 1, 2, Some(2)).is_err());
        assert!(PrimePowerCtx::with_generator(7, 1, 2, Some(1)).is_err());
        let ctx = PrimePowerCtx::with_generator(7, 1, 2, Some(19)).unwrap();
        assert_eq!(pow_mod(19, ctx.u, 7), 2);
    }

    #[test]
    fn ctx_derived_quantities() {
        let ctx = PrimePowerCtx::new(5, 2, 2).unwrap();
        assert_eq!(ctx.g, 27);
        assert_eq!(ctx.e, 2);
        assert_eq!(ctx.d(1), 2);
        assert_eq!(ctx.d(2), 10);
        assert_eq!(ctx.period(), 50);
        assert_eq!(pow_mod(ctx.g, ctx.u, 25), 2);
        assert!(ctx.u < 20);
    }
}
