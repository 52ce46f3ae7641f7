use serde::Serialize;

use super::lambda_a;
use super::prime_set::PrimeSet;
use crate::error::{domain, Result};

/// Default cap on `λ_A` evaluations spent per candidate period.
pub const DEFAULT_PERIOD_STEP_BUDGET: u64 = 1_000_000;

const MEMBER_SEARCH_LIMIT: u64 = 10_000_000;

/// Evidence that `λ_A` does not have period `k` beyond index `M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodWitness {
    pub period: u64,
    /// `n > M` with `λ_A(n) ≠ λ_A(n + k)`.
    pub n: u64,
    pub value_at_n: i8,
    pub value_at_n_plus_k: i8,
    /// `(nk, p·nk)`: congruent mod `k`, opposite signs by multiplicativity.
    pub congruent_pair: (u64, u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodReport {
    /// Smallest prime of `A`, used as the multiplier `p`.
    pub prime: u64,
    pub preperiod: u64,
    pub witnesses: Vec<PeriodWitness>,
    /// Periods for which the step budget ran out first.
    pub inconclusive: Vec<u64>,
}

impl PeriodReport {
    pub fn is_conclusive(&self) -> bool {
        self.inconclusive.is_empty()
    }
}

/// For every `k <= max_period`, find `n > preperiod` with `λ_A(n) ≠ λ_A(n + k)`.
///
/// With `p` the smallest member of `A` and `m` the least multiple of `k`
/// above the preperiod, `λ_A(p·m) = -λ_A(m)` while `p·m ≡ m (mod k)`. Walking
/// `m, m + k, ..., p·m` in steps of `k` therefore crosses a sign change.
pub fn period_violation(set: &PrimeSet, preperiod: u64, max_period: u64, step_budget: u64) -> Result<PeriodReport> {
    if set.is_provably_empty() {
        return Err(domain("λ_∅ is constant; a nonempty prime set is required"));
    }
    if preperiod == 0 || max_period == 0 {
        return Err(domain("preperiod and period bounds must be at least 1"));
    }
    let Some(p) = set.smallest_member(MEMBER_SEARCH_LIMIT) else {
        return Ok(PeriodReport {
            prime: 0,
            preperiod,
            witnesses: Vec::new(),
            inconclusive: (1..=max_period).collect(),
        });
    };
    let mut witnesses = Vec::new();
    let mut inconclusive = Vec::new();
    for k in 1..=max_period {
        let start = (preperiod / k + 1) * k;
        let end = start.checked_mul(p);
        let mut found = None;
        if let Some(end) = end {
            let mut m = start;
            let mut prev = lambda_a(m, set)?;
            let mut steps = 0u64;
            while m < end && steps < step_budget {
                let next = lambda_a(m + k, set)?;
                if next != prev {
                    found = Some(PeriodWitness {
                        period: k,
                        n: m,
                        value_at_n: prev,
                        value_at_n_plus_k: next,
                        congruent_pair: (start, end),
                    });
                    break;
                }
                prev = next;
                m += k;
                steps += 1;
            }
        }
        match found {
            Some(w) => witnesses.push(w),
            None => inconclusive.push(k),
        }
    }
    Ok(PeriodReport {
        prime: p,
        preperiod,
        witnesses,
        inconclusive,
    })
}
