//! Exact integer primitives: primes, factorization, Legendre symbols,
//! totient/sigma and base-p digit expansions.
//!
//! Direct evaluations work on `u64` (callers keep `n < 2^63`); digit
//! expansions and primality of large greedy primes also accept `BigUint`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::Limits;

/// Below this bound `factorize` finishes with plain trial division.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000_000_000;

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

/// Deterministic Miller–Rabin for the whole `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
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

/// Miller–Rabin on arbitrary-precision input using the first 20 primes as
/// bases. Deterministic below 3.3·10^24, a probable-prime test above.
pub fn is_probable_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime(small);
    }
    const BASES: [u32; 20] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    ];
    for &p in &BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> Option<u64> {
    let mut c = n.checked_add(1)?;
    loop {
        if is_prime(c) {
            return Some(c);
        }
        c = c.checked_add(1)?;
    }
}

/// Smallest (probable) prime strictly greater than `n`.
pub fn next_prime_big(n: &BigUint) -> BigUint {
    let mut c = n + 1u32;
    if c <= BigUint::from(2u32) {
        return BigUint::from(2u32);
    }
    if c.is_even() {
        c += 1u32;
    }
    while !is_probable_prime_big(&c) {
        c += 2u32;
    }
    c
}

/// Largest prime strictly between `floor` and `n`, if any.
pub fn prev_prime_above(n: &BigUint, floor: &BigUint) -> Option<BigUint> {
    let mut c = n.clone();
    loop {
        if c <= floor + 1u32 {
            return None;
        }
        c -= 1u32;
        if is_probable_prime_big(&c) {
            return Some(c);
        }
    }
}

fn small_sieve(limit: usize) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Exactly the primes `<= limit`, ascending.
///
/// Memory is bounded by the output plus one sieve window of `2^20` entries.
pub fn primes_up_to(limit: u64, limits: &Limits) -> Result<Vec<u64>> {
    limits.check_sieve("primes_up_to limit", limit)?;
    if limit < 2 {
        return Ok(Vec::new());
    }
    let root = isqrt(limit);
    let base = small_sieve(root as usize);
    if limit <= root.max(1 << 16) {
        return Ok(small_sieve(limit as usize));
    }
    let mut out = base.clone();
    const WINDOW: u64 = 1 << 20;
    let mut mark = vec![false; WINDOW as usize];
    let mut lo = root + 1;
    while lo <= limit {
        let hi = (lo + WINDOW - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        mark[..len].fill(false);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let start = (lo.div_ceil(p) * p).max(p * p);
            let mut m = start;
            while m <= hi {
                mark[(m - lo) as usize] = true;
                m += p;
            }
        }
        out.extend((0..len).filter(|&i| !mark[i]).map(|i| lo + i as u64));
        lo = hi + 1;
    }
    Ok(out)
}

/// Canonical prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub n: u64,
    /// `(prime, exponent)` with primes strictly increasing.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Total number of prime factors counted with multiplicity.
    pub fn omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_square_free(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

// Brent's variant of Pollard rho. `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1u64;
        let m = 128u64;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    if n.is_multiple_of(2) {
        out.push(2);
        split_large(n / 2, out);
        return;
    }
    let d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// Factor `n >= 1`: trial division below `10^12`, Pollard rho above.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(domain("factorize: n must be at least 1"));
    }
    let mut factors = Vec::new();
    let mut m = n;
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0;
        while (*m).is_multiple_of(p) {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut m);
    push(3, &mut m);
    let trial_bound = if n < TRIAL_DIVISION_LIMIT { u64::MAX } else { 1_000 };
    let mut d = 5u64;
    let mut step = 2u64;
    while d <= trial_bound && d.saturating_mul(d) <= m {
        push(d, &mut m);
        d += step;
        step = 6 - step;
    }
    if m > 1 {
        if n < TRIAL_DIVISION_LIMIT || d.saturating_mul(d) > m {
            factors.push((m, 1));
        } else {
            let mut big = Vec::new();
            split_large(m, &mut big);
            big.sort_unstable();
            for p in big {
                match factors.last_mut() {
                    Some((q, e)) if *q == p => *e += 1,
                    _ => factors.push((p, 1)),
                }
            }
        }
    }
    Ok(Factorization { n, factors })
}

/// Ω(n): prime factors counted with multiplicity.
pub fn big_omega(n: u64) -> Result<u32> {
    factorize(n).map(|f| f.omega())
}

/// Legendre symbol `(a/p)` for an odd prime `p`, by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    Ok(legendre_unchecked(a.rem_euclid(p as i64) as u64, p))
}

pub(crate) fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(domain("p = 2 is not an odd prime"));
    }
    if !is_prime(p) {
        return Err(domain(format!("{p} is not prime")));
    }
    Ok(())
}

/// `(a/p)` for `0 <= a < p`, `p` an odd prime (not checked).
#[inline]
pub(crate) fn legendre_unchecked(a: u64, p: u64) -> i8 {
    if a.is_multiple_of(p) {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Euler's totient and the divisor sum, evaluated multiplicatively.
pub fn totient_sigma(n: u64) -> Result<(u64, u128)> {
    let f = factorize(n)?;
    let mut phi = 1u64;
    let mut sigma = 1u128;
    for &(p, e) in &f.factors {
        let pk_1 = p.pow(e - 1);
        phi *= pk_1 * (p - 1);
        // 1 + p + ... + p^e
        let mut term = 1u128;
        let mut s = 1u128;
        for _ in 0..e {
            term *= p as u128;
            s += term;
        }
        sigma *= s;
    }
    Ok((phi, sigma))
}

/// Base-p expansion with digit multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DigitExpansion {
    #[serde(serialize_with = "crate::report::ser_biguint")]
    pub n: BigUint,
    pub base: u64,
    /// Least significant first; empty for `n = 0`.
    pub digits: Vec<u64>,
    /// Digit value `l` to `N(n, l)`; digits that never occur are absent.
    pub counts: BTreeMap<u64, u64>,
}

impl DigitExpansion {
    pub fn count(&self, digit: u64) -> u64 {
        self.counts.get(&digit).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Reassemble `Σ a_j p^j`.
    pub fn value(&self) -> BigUint {
        let base = BigUint::from(self.base);
        self.digits
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * &base + d)
    }
}

fn check_digit_base(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(domain(format!("digit base {p} is not prime")));
    }
    Ok(())
}

fn tally(digits: &[u64]) -> BTreeMap<u64, u64> {
    let mut counts = BTreeMap::new();
    for &d in digits {
        *counts.entry(d).or_insert(0) += 1;
    }
    counts
}

/// Raw little-endian base-p digits of `n` without any bookkeeping.
pub(crate) fn raw_digits_u64(mut n: u64, p: u64) -> Vec<u64> {
    let mut digits = Vec::new();
    while n > 0 {
        digits.push(n % p);
        n /= p;
    }
    digits
}

pub(crate) fn raw_digits_big(n: &BigUint, p: u64) -> Vec<u64> {
    if let Some(small) = n.to_u64() {
        return raw_digits_u64(small, p);
    }
    // Peel off the largest power of p that fits in a u64, then split chunks.
    let mut chunk_pow = 0u32;
    let mut chunk = 1u64;
    while let Some(next) = chunk.checked_mul(p) {
        chunk = next;
        chunk_pow += 1;
    }
    let divisor = BigUint::from(chunk);
    let mut rest = n.clone();
    let mut digits = Vec::new();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&divisor);
        let mut r = r.to_u64().expect("remainder below a u64 divisor");
        if q.is_zero() {
            digits.extend(raw_digits_u64(r, p));
        } else {
            for _ in 0..chunk_pow {
                digits.push(r % p);
                r /= p;
            }
        }
        rest = q;
    }
    digits
}

/// Base-p expansion of a machine-width `n`.
pub fn digits(n: u64, p: u64) -> Result<DigitExpansion> {
    check_digit_base(p)?;
    let d = raw_digits_u64(n, p);
    Ok(DigitExpansion {
        n: BigUint::from(n),
        base: p,
        counts: tally(&d),
        digits: d,
    })
}

/// Base-p expansion of an arbitrary-precision `n`.
pub fn digits_big(n: &BigUint, p: u64) -> Result<DigitExpansion> {
    check_digit_base(p)?;
    let d = raw_digits_big(n, p);
    Ok(DigitExpansion {
        n: n.clone(),
        base: p,
        counts: tally(&d),
        digits: d,
    })
}

/// Parse a non-negative decimal string of any length.
pub fn parse_natural(s: &str) -> Result<BigUint> {
    let t = s.trim().replace('_', "");
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Validation(format!("not a natural number: {s:?}")));
    }
    Ok(t.parse::<BigUint>().expect("validated digits"))
}
