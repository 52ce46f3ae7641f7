//! Segmented evaluation of `λ_A` over `1..=x`.
//!
//! Each window of `2^20` integers is processed independently: every base
//! prime `p <= √x` (and each of its powers) is struck out of the window,
//! accumulating the part of `n` it explains and flipping the sign when
//! `p ∈ A`. What remains of `n` is `1` or a single large prime, handled
//! by the compiled membership oracle. Windows are reduced in index order,
//! so results do not depend on how many worker threads ran.

use serde::Serialize;

use super::prime_set::{Membership, PrimeSet};
use crate::arith::{isqrt, primes_up_to};
use crate::error::Result;
use crate::Limits;

pub const SEGMENT_LEN: u64 = 1 << 20;

/// `L_A(x)` with running extrema over `1 <= n <= x` (both 0 when `x = 0`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SummatoryTrace {
    pub x: u64,
    pub value: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<i64>>,
    pub running_min: i64,
    pub running_max: i64,
}

impl SummatoryTrace {
    /// Parity, unit steps, `|L| <= x`, and path consistency.
    pub fn check_invariants(&self) -> bool {
        let x = self.x as i64;
        let basic = self.value.abs() <= x
            && (self.value - x).rem_euclid(2) == 0
            && self.running_min <= self.running_max
            && (x == 0 || (self.running_min <= self.value && self.value <= self.running_max));
        let path_ok = match &self.path {
            None => true,
            Some(p) => {
                p.len() as u64 == self.x
                    && p.first().is_none_or(|&v| v.abs() == 1)
                    && p.windows(2).all(|w| (w[1] - w[0]).abs() == 1)
                    && p.last().is_none_or(|&v| v == self.value)
                    && p.iter().copied().min().unwrap_or(0) == self.running_min
                    && p.iter().copied().max().unwrap_or(0) == self.running_max
            }
        };
        basic && path_ok
    }
}

/// Sum and prefix extrema of one window, relative to the window start.
#[derive(Debug, Clone, Copy)]
pub(crate) struct WindowSummary {
    pub sum: i64,
    pub min_prefix: i64,
    pub max_prefix: i64,
}

impl Default for WindowSummary {
    fn default() -> Self {
        WindowSummary {
            sum: 0,
            min_prefix: i64::MAX,
            max_prefix: i64::MIN,
        }
    }
}

impl WindowSummary {
    #[inline]
    pub(crate) fn push(&mut self, v: i8) {
        self.sum += v as i64;
        self.min_prefix = self.min_prefix.min(self.sum);
        self.max_prefix = self.max_prefix.max(self.sum);
    }

    pub(crate) fn of(values: &[i8]) -> Self {
        let mut w = WindowSummary::default();
        for &v in values {
            w.push(v);
        }
        w
    }
}

/// Fold window summaries (in order) into a trace without a path.
pub(crate) fn fold_summaries(x: u64, windows: &[WindowSummary]) -> SummatoryTrace {
    let mut acc = 0i64;
    let (mut lo, mut hi) = (i64::MAX, i64::MIN);
    for w in windows {
        lo = lo.min(acc + w.min_prefix);
        hi = hi.max(acc + w.max_prefix);
        acc += w.sum;
    }
    if windows.is_empty() {
        lo = 0;
        hi = 0;
    }
    SummatoryTrace {
        x,
        value: acc,
        path: None,
        running_min: lo,
        running_max: hi,
    }
}

pub(crate) fn trace_from_values<'a>(x: u64, windows: impl Iterator<Item = &'a [i8]>) -> SummatoryTrace {
    let mut path = Vec::with_capacity(x as usize);
    let mut acc = 0i64;
    for w in windows {
        for &v in w {
            acc += v as i64;
            path.push(acc);
        }
    }
    SummatoryTrace {
        x,
        value: acc,
        running_min: path.iter().copied().min().unwrap_or(0),
        running_max: path.iter().copied().max().unwrap_or(0),
        path: Some(path),
    }
}

/// Map every window `[lo, hi)` covering `1..=x`, returning results in order.
pub(crate) fn map_windows<R, F>(x: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64, u64) -> R + Sync + Send,
{
    let count = x.div_ceil(SEGMENT_LEN);
    let window = |i: u64| {
        let lo = 1 + i * SEGMENT_LEN;
        let hi = (lo + SEGMENT_LEN).min(x + 1);
        f(lo, hi)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(window).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(window).collect()
    }
}

/// Compensated (Neumaier) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    #[inline]
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn merge(&mut self, other: Neumaier) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Precomputed state for evaluating `λ_A` on windows below `x`.
pub(crate) struct LambdaSieve {
    base: Vec<(u64, bool)>,
    member: Membership,
}

impl LambdaSieve {
    pub(crate) fn new(set: &PrimeSet, x: u64, limits: &Limits) -> Result<Self> {
        limits.check_sieve("sieve bound x", x)?;
        let member = set.compile(x);
        let base = primes_up_to(isqrt(x), limits)?
            .into_iter()
            .map(|p| (p, member.contains_prime(p)))
            .collect();
        Ok(LambdaSieve { base, member })
    }

    /// `λ_A(n)` for `n` in `[lo, hi)`, `lo >= 1`.
    pub(crate) fn window(&self, lo: u64, hi: u64) -> Vec<i8> {
        let len = (hi - lo) as usize;
        let mut explained = vec![1u64; len];
        let mut sign = vec![1i8; len];
        let top = hi - 1;
        for &(p, in_a) in &self.base {
            if p * p > top {
                break;
            }
            let mut pk = p;
            loop {
                let first = lo.div_ceil(pk) * pk;
                let mut m = first;
                while m < hi {
                    let i = (m - lo) as usize;
                    explained[i] *= p;
                    if in_a {
                        sign[i] = -sign[i];
                    }
                    m += pk;
                }
                match pk.checked_mul(p) {
                    Some(next) if next <= top => pk = next,
                    _ => break,
                }
            }
        }
        for (i, (e, s)) in explained.iter().zip(sign.iter_mut()).enumerate() {
            let n = lo + i as u64;
            if *e != n {
                let rest = n / e;
                if self.member.contains_prime(rest) {
                    *s = -*s;
                }
            }
        }
        sign
    }
}
