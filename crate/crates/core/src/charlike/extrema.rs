use num_bigint::BigUint;
use serde::Serialize;

use super::{summatory_sieve, CharacterProfile};
use crate::arith::raw_digits_u64;
use crate::error::{domain, Error, Result};
use crate::report::ser_biguint_vec;
use crate::Limits;

/// `max_{n < p^i} |L_p(n)|` together with the repunit witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LmaxReport {
    pub p: u64,
    pub i: u32,
    pub max_value: i64,
    /// `l·(1 + p + ... + p^{i-1})` for each digit `l` attaining `max_abs`.
    #[serde(serialize_with = "ser_biguint_vec")]
    pub witnesses: Vec<BigUint>,
    /// Every witness re-evaluated by the digit formula attains `max_value`.
    pub verified: bool,
}

/// Below `p^i` every `n` has at most `i` digits, each contributing some
/// `S_l`, so `|L_p(n)| <= i·max_abs`; the digit string `l l ... l` with
/// `|S_l| = max_abs` attains it.
pub fn lmax(p: u64, i: u32, limits: &Limits) -> Result<LmaxReport> {
    if i == 0 {
        return Err(domain("lmax needs i >= 1"));
    }
    let profile = CharacterProfile::new(p, limits)?;
    let max_value = i as i64 * profile.max_abs;
    let base = BigUint::from(p);
    let repunit = (base.pow(i) - 1u32) / (p - 1);
    let witnesses: Vec<BigUint> = profile.argmax_digits.iter().map(|&l| &repunit * l).collect();
    let verified = witnesses.iter().all(|w| profile.summatory_big(w).abs() == max_value);
    Ok(LmaxReport {
        p,
        i,
        max_value,
        witnesses,
        verified,
    })
}

/// `max_{n < p^i} |L_p(n)|` by direct accumulation.
pub fn lmax_exhaustive(p: u64, i: u32, limits: &Limits) -> Result<i64> {
    if i == 0 {
        return Err(domain("lmax needs i >= 1"));
    }
    let top = p.checked_pow(i).ok_or(Error::ResourceLimit {
        what: "p^i",
        requested: u128::MAX,
        budget: limits.sieve_budget as u128,
    })? - 1;
    let t = summatory_sieve(top, p, false, limits)?;
    Ok(t.running_min.abs().max(t.running_max.abs()))
}

/// `max_{1 <= n <= t} |L_p(n)|` by a digit walk over `t`.
///
/// At each position where `n` drops below `t`, the remaining lower digits
/// are free, so the extremes are the prefix plus the best digit below the
/// bound plus the global extreme `S` per free position.
pub fn max_abs_up_to(profile: &CharacterProfile, t: u64) -> i64 {
    let s = &profile.prefix_sums;
    let hi = *s.iter().max().unwrap() as i64;
    let lo = *s.iter().min().unwrap() as i64;
    let digits = raw_digits_u64(t, profile.p);
    let mut best_hi = 0i64;
    let mut best_lo = 0i64;
    let mut prefix = 0i64;
    for (pos, &d) in digits.iter().enumerate().rev() {
        if d > 0 {
            let (mut mx, mut mn) = (i64::MIN, i64::MAX);
            for &v in &s[..d as usize] {
                mx = mx.max(v as i64);
                mn = mn.min(v as i64);
            }
            let free = pos as i64;
            best_hi = best_hi.max(prefix + mx + free * hi);
            best_lo = best_lo.min(prefix + mn + free * lo);
        }
        prefix += s[d as usize] as i64;
    }
    best_hi = best_hi.max(prefix);
    best_lo = best_lo.min(prefix);
    best_hi.max(-best_lo)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMode {
    /// Accumulate `λ_p` directly (bounded by the sieve budget).
    Sieve,
    /// Digit walk; no enumeration, any `u64` bound.
    Digit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub t: u64,
    pub max_abs: i64,
    /// `max_abs / ln t`.
    pub ratio: f64,
}

/// Running `max_{n <= t} |L_p(n)|` at `t = 10, 100, ...` up to `x` (and `x` itself).
pub fn log_bound_scan(p: u64, x: u64, mode: ScanMode, limits: &Limits) -> Result<Vec<ScanRow>> {
    if x < 10 {
        return Err(domain("scan bound must be at least 10"));
    }
    let profile = CharacterProfile::new(p, limits)?;
    let mut ts = Vec::new();
    let mut t = 10u64;
    loop {
        ts.push(t);
        match t.checked_mul(10) {
            Some(next) if next <= x => t = next,
            _ => break,
        }
    }
    if *ts.last().unwrap() != x {
        ts.push(x);
    }
    if mode == ScanMode::Sieve {
        limits.check_sieve("sieve bound x", x)?;
    }
    ts.into_iter()
        .map(|t| {
            let max_abs = match mode {
                ScanMode::Digit => max_abs_up_to(&profile, t),
                ScanMode::Sieve => {
                    let tr = summatory_sieve(t, p, false, limits)?;
                    tr.running_min.abs().max(tr.running_max.abs())
                }
            };
            Ok(ScanRow {
                t,
                max_abs,
                ratio: max_abs as f64 / (t as f64).ln(),
            })
        })
        .collect()
}

/// A point where `|L_p(n)|` exceeds the digit count `⌊log_p n⌋ + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RemarkWitness {
    pub p: u64,
    pub n: u64,
    pub value: i64,
    pub bound: u64,
}

/// Smallest odd prime `p <= limit` (optionally restricted to `p ∉ 𝓛⁺`)
/// with some `n < p` where `|L_p(n)| >= 2 > ⌊log_p n⌋ + 1 = 1`.
pub fn remark_witness(limit: u64, outside_lplus: bool, limits: &Limits) -> Result<Option<RemarkWitness>> {
    for p in crate::arith::primes_up_to(limit, limits)?
        .into_iter()
        .filter(|&p| p > 2)
    {
        let profile = CharacterProfile::new(p, limits)?;
        if outside_lplus && profile.all_nonneg {
            continue;
        }
        if let Some(n) = (1..p).find(|&n| profile.prefix_sums[n as usize].abs() >= 2) {
            return Ok(Some(RemarkWitness {
                p,
                n,
                value: profile.prefix_sums[n as usize] as i64,
                bound: raw_digits_u64(n, p).len() as u64,
            }));
        }
    }
    Ok(None)
}
