//! The `λ_A` engine: prime sets, pointwise values, summatory functions,
//! Dirichlet series and non-periodicity witnesses.

mod dirichlet;
mod period;
mod prime_set;
pub(crate) mod sieve;

pub use dirichlet::{
    complement_identity, dirichlet_eval, dirichlet_partial_sum, zeta, ComplementIdentity, DirichletEstimate, Estimate,
    DEFAULT_EULER_TRUNCATION,
};
pub use period::{period_violation, PeriodReport, PeriodWitness, DEFAULT_PERIOD_STEP_BUDGET};
pub use prime_set::{cube_gap_primes, is_cube_gap_prime, Convergence, PrimeSet, SetKind};
pub use sieve::{SummatoryTrace, SEGMENT_LEN};

use crate::arith::factorize;
use crate::error::{domain, Result};
use crate::Limits;
use sieve::{fold_summaries, map_windows, trace_from_values, LambdaSieve, Neumaier, WindowSummary};

/// `Ω_A(n)`: prime factors of `n` lying in `A`, with multiplicity.
pub fn omega_a(n: u64, set: &PrimeSet) -> Result<u32> {
    if n == 0 {
        return Err(domain("Ω_A(0) is undefined"));
    }
    Ok(factorize(n)?
        .factors
        .iter()
        .filter(|&&(p, _)| set.contains_prime(p))
        .map(|&(_, e)| e)
        .sum())
}

/// `λ_A(n) = (-1)^{Ω_A(n)}`.
pub fn lambda_a(n: u64, set: &PrimeSet) -> Result<i8> {
    Ok(if omega_a(n, set)? % 2 == 0 { 1 } else { -1 })
}

/// `L_A(x) = Σ_{n <= x} λ_A(n)` by segmented sieve.
pub fn summatory(x: u64, set: &PrimeSet, with_path: bool, limits: &Limits) -> Result<SummatoryTrace> {
    let sieve = LambdaSieve::new(set, x, limits)?;
    if with_path {
        limits.check_path(x)?;
        let windows = map_windows(x, |lo, hi| sieve.window(lo, hi));
        return Ok(trace_from_values(x, windows.iter().map(Vec::as_slice)));
    }
    let windows = map_windows(x, |lo, hi| WindowSummary::of(&sieve.window(lo, hi)));
    Ok(fold_summaries(x, &windows))
}

/// `Σ_{n <= x} λ_A(n)/n` with compensated summation.
pub fn harmonic_sum(x: u64, set: &PrimeSet, limits: &Limits) -> Result<f64> {
    if x == 0 {
        return Err(domain("harmonic_sum needs x >= 1"));
    }
    let sieve = LambdaSieve::new(set, x, limits)?;
    let partials = map_windows(x, |lo, hi| {
        let mut acc = Neumaier::default();
        for (i, &v) in sieve.window(lo, hi).iter().enumerate() {
            acc.add(v as f64 / (lo + i as u64) as f64);
        }
        acc
    });
    let mut total = Neumaier::default();
    for p in partials {
        total.merge(p);
    }
    Ok(total.value())
}

/// Harmonic partial sums at several checkpoints in one sieve pass.
///
/// `checkpoints` must be ascending; the largest one bounds the sieve.
pub fn harmonic_sums_at(checkpoints: &[u64], set: &PrimeSet, limits: &Limits) -> Result<Vec<f64>> {
    let Some(&x) = checkpoints.last() else {
        return Ok(Vec::new());
    };
    if checkpoints.first() == Some(&0) || checkpoints.windows(2).any(|w| w[0] > w[1]) {
        return Err(domain("checkpoints must be ascending and positive"));
    }
    let sieve = LambdaSieve::new(set, x, limits)?;
    // each window reports its partial sums split at the checkpoints inside it
    let pieces = map_windows(x, |lo, hi| {
        let vals = sieve.window(lo, hi);
        let mut out = Vec::new();
        let mut acc = Neumaier::default();
        for (i, &v) in vals.iter().enumerate() {
            let n = lo + i as u64;
            acc.add(v as f64 / n as f64);
            if checkpoints.binary_search(&n).is_ok() {
                out.push((n, acc));
            }
        }
        (out, acc)
    });
    let mut total = Neumaier::default();
    let mut results = Vec::with_capacity(checkpoints.len());
    for (marks, window_total) in pieces {
        for (n, partial) in marks {
            let mut at = total;
            at.merge(partial);
            for _ in checkpoints.iter().filter(|&&c| c == n) {
                results.push(at.value());
            }
        }
        total.merge(window_total);
    }
    Ok(results)
}
