//! Truncated Dirichlet series `𝓛_A(s) = ζ(s) ∏_{p∈A} (1 - p^{-s})/(1 + p^{-s})`
//! with explicit error bounds.

use serde::Serialize;

use super::prime_set::{PrimeSet, SetKind};
use super::sieve::{map_windows, LambdaSieve, Neumaier};
use crate::error::{domain, Result};
use crate::Limits;

/// Default prime bound for infinite Euler products.
pub const DEFAULT_EULER_TRUNCATION: u64 = 1_000_000;

/// A value together with a bound on its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error_bound: f64,
}

impl Estimate {
    pub fn contains(&self, v: f64) -> bool {
        (self.value - v).abs() <= self.error_bound
    }
}

// B_2, B_4, ..., B_20
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// `ζ(s)` for real `s > 1` by Euler–Maclaurin summation.
///
/// The head runs to `N = max(16, ⌈s⌉)`, followed by the integral tail, the
/// half-term and eight Bernoulli corrections. For `x^{-s}` the remainder is
/// no larger than the first omitted correction; the bound doubles it and
/// adds a rounding allowance.
pub fn zeta(s: f64) -> Result<Estimate> {
    if !s.is_finite() || s <= 1.0 {
        return Err(domain(format!("ζ(s) needs real s > 1, got {s}")));
    }
    let n = (s.ceil() as u64).max(16);
    let nf = n as f64;
    let mut head = Neumaier::default();
    for k in (1..n).rev() {
        head.add((k as f64).powf(-s));
    }
    head.add(nf.powf(1.0 - s) / (s - 1.0));
    head.add(0.5 * nf.powf(-s));
    // term_k = B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    let mut rising = s; // s(s+1)...(s+2k-2)
    let mut factorial = 2.0; // (2k)!
    let mut power = nf.powf(-s - 1.0);
    let kept = 8;
    let mut omitted = 0.0;
    for k in 1..=kept + 1 {
        let term = BERNOULLI[k - 1] / factorial * rising * power;
        if k <= kept {
            head.add(term);
        } else {
            omitted = term.abs();
        }
        let kf = k as f64;
        rising *= (s + 2.0 * kf - 1.0) * (s + 2.0 * kf);
        factorial *= (2.0 * kf + 1.0) * (2.0 * kf + 2.0);
        power /= nf * nf;
    }
    let value = head.value();
    Ok(Estimate {
        value,
        error_bound: 2.0 * omitted + 4.0 * f64::EPSILON * value,
    })
}

/// Result of [`dirichlet_eval`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirichletEstimate {
    pub s: f64,
    pub value: f64,
    pub error_bound: f64,
    pub zeta: Estimate,
    /// `∏ (1 - p^{-s})/(1 + p^{-s})` over the primes actually used.
    pub euler_factor: f64,
    pub primes_used: usize,
    /// Bound on `Σ p^{-s}` over members of `A` left out of the product.
    pub tail_sum_bound: f64,
    pub truncation: u64,
}

fn log_factor(p: u64, s: f64) -> f64 {
    let u = (p as f64).powf(-s);
    (-u).ln_1p() - u.ln_1p()
}

/// `𝓛_A(s)` via the Euler product over members of `A` up to `truncation`.
///
/// Finite sets use every member. For infinite sets the omitted factors are
/// each in `[1 - 2u/(1 - u^2), 1]` with `u = p^{-s} <= 1/2`, so their product
/// lies in `[exp(-(8/3) Σ u), 1]`; `Σ u` over the tail is bounded by an
/// integral (or, for the cube-gap set, through `p_n > n^3`).
pub fn dirichlet_eval(s: f64, set: &PrimeSet, truncation: u64, limits: &Limits) -> Result<DirichletEstimate> {
    if s.is_nan() || s <= 1.0 {
        return Err(domain(format!("Dirichlet series needs s > 1, got {s}")));
    }
    if truncation < 2 {
        return Err(domain("truncation must be at least 2"));
    }
    let z = zeta(s)?;
    let (members, tail_sum_bound) = match set.finite_members(limits)? {
        Some(m) => (m, 0.0),
        None => match set.kind() {
            SetKind::CubeGap => {
                let members = set.members_up_to(truncation, limits)?;
                // first omitted index n0 = len + 2 (enumeration starts at n = 2)
                let n0 = (members.len() + 2) as f64;
                let e = 3.0 * s;
                let bound = n0.powf(-e) + n0.powf(1.0 - e) / (e - 1.0);
                (members, bound)
            }
            _ => {
                let members = set.members_up_to(truncation, limits)?;
                let t = truncation as f64;
                (members, t.powf(1.0 - s) / (s - 1.0))
            }
        },
    };
    let mut log_sum = Neumaier::default();
    for &p in &members {
        log_sum.add(log_factor(p, s));
    }
    let euler_factor = log_sum.value().exp();
    let value = z.value * euler_factor;
    let tail_rel = 1.0 - (-(8.0 / 3.0) * tail_sum_bound).exp();
    let rounding = (members.len() as f64 + 4.0) * f64::EPSILON * value.abs();
    Ok(DirichletEstimate {
        s,
        value,
        error_bound: z.error_bound * euler_factor + value.abs() * tail_rel + rounding,
        zeta: z,
        euler_factor,
        primes_used: members.len(),
        tail_sum_bound,
        truncation,
    })
}

/// `Σ_{n <= terms} λ_A(n) n^{-s}` with the bound `Σ_{n > terms} n^{-s} <= terms^{1-s}/(s-1)`.
pub fn dirichlet_partial_sum(s: f64, set: &PrimeSet, terms: u64, limits: &Limits) -> Result<Estimate> {
    if s.is_nan() || s <= 1.0 {
        return Err(domain(format!("Dirichlet series needs s > 1, got {s}")));
    }
    if terms == 0 {
        return Err(domain("need at least one term"));
    }
    let sieve = LambdaSieve::new(set, terms, limits)?;
    let parts = map_windows(terms, |lo, hi| {
        let mut acc = Neumaier::default();
        for (i, &v) in sieve.window(lo, hi).iter().enumerate() {
            acc.add(v as f64 * ((lo + i as u64) as f64).powf(-s));
        }
        acc
    });
    let mut total = Neumaier::default();
    for p in parts {
        total.merge(p);
    }
    let value = total.value();
    let t = terms as f64;
    Ok(Estimate {
        value,
        error_bound: t.powf(1.0 - s) / (s - 1.0) + terms as f64 * f64::EPSILON * 2.0,
    })
}

/// Numeric check of `𝓛_{Ā}(s) · 𝓛_A(s) = ζ(2s)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplementIdentity {
    pub s: f64,
    pub complement_series: Estimate,
    pub set_series: DirichletEstimate,
    pub product: Estimate,
    pub zeta_2s: Estimate,
    pub holds: bool,
}

/// Compare `𝓛_{Ā}(s)` (direct series, `terms` terms) times `𝓛_A(s)` with `ζ(2s)`.
pub fn complement_identity(
    s: f64,
    set: &PrimeSet,
    terms: u64,
    truncation: u64,
    limits: &Limits,
) -> Result<ComplementIdentity> {
    let comp = dirichlet_partial_sum(s, &PrimeSet::complement(set.clone()), terms, limits)?;
    let direct = dirichlet_eval(s, set, truncation, limits)?;
    let value = comp.value * direct.value;
    let error_bound =
        comp.error_bound * (direct.value.abs() + direct.error_bound) + direct.error_bound * comp.value.abs();
    let product = Estimate { value, error_bound };
    let z2 = zeta(2.0 * s)?;
    let holds = (product.value - z2.value).abs() <= product.error_bound + z2.error_bound;
    Ok(ComplementIdentity {
        s,
        complement_series: comp,
        set_series: direct,
        product,
        zeta_2s: z2,
        holds,
    })
}
