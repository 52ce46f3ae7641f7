//! The character-like functions `λ_p` and `λ_p′`.
//!
//! `λ_p` is completely multiplicative with `λ_p(p) = 1` and `λ_p(q) = (q/p)`
//! for primes `q ≠ p`, so `λ_p(p^k m) = (m/p)`. Its summatory function
//! depends only on the base-p digits of `n`:
//! `L_p(n) = Σ_j S_{a_j}` where `S_l = Σ_{m <= l} (m/p)`.

mod extrema;
mod table;

pub use extrema::{
    lmax, lmax_exhaustive, log_bound_scan, max_abs_up_to, remark_witness, LmaxReport, RemarkWitness, ScanMode, ScanRow,
};
pub use table::{primitive_root, summatory_char, CharacterTable};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{big_omega, check_odd_prime, factorize, legendre_unchecked, raw_digits_big, raw_digits_u64};
use crate::error::{domain, Error, Result};
use crate::genliouville::sieve::{fold_summaries, map_windows, trace_from_values, WindowSummary};
use crate::genliouville::SummatoryTrace;
use crate::Limits;

/// Quadratic character `(l/p)` for `l = 0..p-1` and its prefix sums.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacterProfile {
    pub p: u64,
    #[serde(skip)]
    pub values: Vec<i8>,
    /// `S_k = Σ_{m <= k} (m/p)`.
    #[serde(skip)]
    pub prefix_sums: Vec<i32>,
    pub max_abs: i64,
    /// `S_k >= 0` for every `k`, i.e. `p ∈ 𝓛⁺`.
    pub all_nonneg: bool,
    /// Digits `l` with `|S_l| = max_abs`.
    pub argmax_digits: Vec<u64>,
}

/// `(l/p)` for all residues, from the table of squares.
fn residue_table(p: u64) -> Vec<i8> {
    let mut values = vec![-1i8; p as usize];
    values[0] = 0;
    let mut sq = 0u64;
    // (x+1)^2 = x^2 + 2x + 1
    for x in 0..(p - 1) / 2 {
        sq += 2 * x + 1;
        if sq >= p {
            sq -= p;
        }
        values[sq as usize] = 1;
    }
    values
}

impl CharacterProfile {
    pub fn new(p: u64, limits: &Limits) -> Result<Self> {
        check_odd_prime(p)?;
        limits.check_sieve("character profile size p", p)?;
        if p > i32::MAX as u64 {
            return Err(Error::ResourceLimit {
                what: "character profile size p",
                requested: p as u128,
                budget: i32::MAX as u128,
            });
        }
        Ok(Self::from_values(p, residue_table(p)))
    }

    fn from_values(p: u64, values: Vec<i8>) -> Self {
        let mut prefix_sums = Vec::with_capacity(values.len());
        let (mut s, mut lo, mut hi) = (0i32, 0i32, 0i32);
        for &v in &values {
            s += v as i32;
            lo = lo.min(s);
            hi = hi.max(s);
            prefix_sums.push(s);
        }
        let max_abs = hi.max(-lo);
        let argmax_digits = (0..p).filter(|&l| prefix_sums[l as usize].abs() == max_abs).collect();
        CharacterProfile {
            p,
            all_nonneg: lo >= 0,
            values,
            prefix_sums,
            max_abs: max_abs as i64,
            argmax_digits,
        }
    }

    pub fn check_invariants(&self) -> bool {
        let n = self.p as usize;
        self.values.len() == n
            && self.prefix_sums.len() == n
            && self.values[0] == 0
            && self.prefix_sums[0] == 0
            && self.prefix_sums[n - 1] == 0
    }

    /// `λ_p(n)` for `n >= 1`.
    pub fn lambda(&self, mut n: u64) -> i8 {
        while n.is_multiple_of(self.p) {
            n /= self.p;
        }
        self.values[(n % self.p) as usize]
    }

    /// `L_p(n)` by the digit formula.
    pub fn summatory(&self, n: u64) -> i64 {
        let mut total = 0;
        let mut m = n;
        while m > 0 {
            total += self.prefix_sums[(m % self.p) as usize] as i64;
            m /= self.p;
        }
        total
    }

    pub fn summatory_big(&self, n: &BigUint) -> i64 {
        match n.to_u64() {
            Some(small) => self.summatory(small),
            None => raw_digits_big(n, self.p)
                .iter()
                .map(|&d| self.prefix_sums[d as usize] as i64)
                .sum(),
        }
    }
}

/// `λ_p(n)`; `m = n / p^{v_p(n)}` is reduced mod `p`, never factored.
pub fn lambda_p(n: u64, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    if n == 0 {
        return Err(domain("λ_p(0) is undefined"));
    }
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    Ok(legendre_unchecked(m % p, p))
}

/// `λ_p(n)` for arbitrary-precision `n`.
pub fn lambda_p_big(n: &BigUint, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    if n.is_zero() {
        return Err(domain("λ_p(0) is undefined"));
    }
    let digits = raw_digits_big(n, p);
    let low = digits.iter().find(|&&d| d != 0).copied().expect("n > 0");
    // the lowest nonzero base-p digit is m mod p
    Ok(legendre_unchecked(low, p))
}

/// Largest argument accepted by [`lambda_p_prime`], which must factor `n`.
pub const LAMBDA_PRIME_MAX: u64 = 1 << 63;

/// `λ_p′`: completely multiplicative, `λ_p′(p) = 1`, `λ_p′(q) = -(q/p)`.
pub fn lambda_p_prime(n: u64, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    if n == 0 {
        return Err(domain("λ_p′(0) is undefined"));
    }
    if n >= LAMBDA_PRIME_MAX {
        return Err(Error::ResourceLimit {
            what: "λ_p′ argument",
            requested: n as u128,
            budget: LAMBDA_PRIME_MAX as u128 - 1,
        });
    }
    let mut sign = 1i8;
    for &(q, e) in &factorize(n)?.factors {
        if q != p && e % 2 == 1 {
            sign *= -legendre_unchecked(q % p, p);
        }
    }
    Ok(sign)
}

/// Both sides of `λ(n) = (-1)^k λ_p(n) λ_p′(n)` with `p^k ∥ n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LlpCheck {
    pub k: u32,
    pub lambda: i8,
    pub lambda_p: i8,
    pub lambda_p_prime: i8,
    pub holds: bool,
}

pub fn llp_identity_check(n: u64, p: u64) -> Result<LlpCheck> {
    let lp = lambda_p(n, p)?;
    let lpp = lambda_p_prime(n, p)?;
    let lambda = if big_omega(n)? % 2 == 0 { 1 } else { -1 };
    let mut k = 0;
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    let parity = if k % 2 == 0 { 1 } else { -1 };
    Ok(LlpCheck {
        k,
        lambda,
        lambda_p: lp,
        lambda_p_prime: lpp,
        holds: lambda == parity * lp * lpp,
    })
}

/// `L_p(n)` for arbitrary-precision `n` by the digit formula.
pub fn summatory_digit(n: &BigUint, p: u64, limits: &Limits) -> Result<i64> {
    Ok(CharacterProfile::new(p, limits)?.summatory_big(n))
}

/// `L_p(x)` by accumulating `λ_p(n)` over `1..=x`, window by window.
pub fn summatory_sieve(x: u64, p: u64, with_path: bool, limits: &Limits) -> Result<SummatoryTrace> {
    check_odd_prime(p)?;
    limits.check_sieve("sieve bound x", x)?;
    let table = residue_table(p);
    if with_path {
        limits.check_path(x)?;
        let windows = map_windows(x, |lo, hi| {
            let mut out = Vec::with_capacity((hi - lo) as usize);
            for_each_lambda(lo, hi, p, &table, |v| out.push(v));
            out
        });
        return Ok(trace_from_values(x, windows.iter().map(Vec::as_slice)));
    }
    let summaries = map_windows(x, |lo, hi| {
        let mut w = WindowSummary::default();
        for_each_lambda(lo, hi, p, &table, |v| w.push(v));
        w
    });
    Ok(fold_summaries(x, &summaries))
}

/// Feed `λ_p(n)` for `lo <= n < hi` to `f`, in order.
#[inline]
fn for_each_lambda(lo: u64, hi: u64, p: u64, table: &[i8], mut f: impl FnMut(i8)) {
    let mut r = lo % p;
    for n in lo..hi {
        f(if r == 0 {
            let mut m = n / p;
            while m.is_multiple_of(p) {
                m /= p;
            }
            table[(m % p) as usize]
        } else {
            table[r as usize]
        });
        r += 1;
        if r == p {
            r = 0;
        }
    }
}

/// Odd primes `p <= limit` with `L_p(n) >= 0` for all `n`, ascending.
///
/// By the digit formula this holds exactly when every prefix sum
/// `(1/p) + ... + (k/p)` is nonnegative.
pub fn classify_lplus(limit: u64, limits: &Limits) -> Result<Vec<u64>> {
    if limit < 3 {
        return Err(domain("classify limit must be at least 3"));
    }
    let primes = crate::arith::primes_up_to(limit, limits)?;
    let nonneg = |p: u64| {
        let table = residue_table(p);
        let mut s = 0i64;
        table.iter().all(|&v| {
            s += v as i64;
            s >= 0
        })
    };
    let odd = primes.into_iter().filter(|&p| p > 2);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let odd: Vec<u64> = odd.collect();
        Ok(odd.into_par_iter().filter(|&p| nonneg(p)).collect())
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok(odd.filter(|&p| nonneg(p)).collect())
    }
}

/// Digit counts `N(n, l)` of `n` in base `p`, used by the closed forms.
pub fn digit_count(n: u64, p: u64, l: u64) -> u64 {
    raw_digits_u64(n, p).iter().filter(|&&d| d == l).count() as u64
}
