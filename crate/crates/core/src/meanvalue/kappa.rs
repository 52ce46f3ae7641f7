use num_rational::BigRational;
use serde::Serialize;

use super::finite_product;
use crate::arith::primes_up_to;
use crate::error::{domain, Result};
use crate::genliouville::PrimeSet;
use crate::report::rational_to_f64;
use crate::Limits;

/// Number of geometric checkpoints in the κ fit.
pub const KAPPA_CHECKPOINTS: u32 = 8;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for `x > 0` (Lanczos, g = 7).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub kappa_hat: f64,
    /// `(t, Σ_{p <= t, p ∈ A} log p / p)`.
    pub samples: Vec<(u64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
}

fn checkpoints(x: u64) -> Vec<u64> {
    let lx = (x as f64).ln();
    let n = KAPPA_CHECKPOINTS as f64;
    let mut ts: Vec<u64> = (1..=KAPPA_CHECKPOINTS)
        .map(|j| ((lx * (n + j as f64) / (2.0 * n)).exp().round() as u64).clamp(2, x))
        .collect();
    *ts.last_mut().unwrap() = x;
    ts.dedup();
    ts
}

/// Estimate κ from `Σ_{p <= t, p ∈ A} log p / p ≈ ((1 - κ)/2) log t + c`.
///
/// The checkpoints run geometrically from `x^{9/16}` to `x`. Starting at
/// `x^{1/8}` lets the `O(1)` term dominate the early samples and biases the
/// slope well away from its limit at desk-scale `x`.
pub fn kappa_estimate(set: &PrimeSet, x: u64, limits: &Limits) -> Result<DensityEstimate> {
    if x < 100 {
        return Err(domain("kappa_estimate needs x >= 100"));
    }
    let members = set.members_up_to(x, limits)?;
    let ts = checkpoints(x);
    let mut samples = Vec::with_capacity(ts.len());
    let mut acc = 0.0;
    let mut it = members.iter().peekable();
    for &t in &ts {
        while let Some(&&p) = it.peek() {
            if p > t {
                break;
            }
            acc += (p as f64).ln() / p as f64;
            it.next();
        }
        samples.push((t, acc));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(t, s)| ((t as f64).ln(), s)).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let residual = (pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Ok(DensityEstimate {
        kappa_hat: (1.0 - 2.0 * slope).clamp(-1.0, 1.0),
        samples,
        slope,
        intercept,
        residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WirsingConstant {
    pub kappa: f64,
    pub value: f64,
    /// The exact product when κ = 1 and `A` is finite.
    #[serde(serialize_with = "ser_opt_rational")]
    pub exact: Option<BigRational>,
    pub truncation: u64,
}

fn ser_opt_rational<S: serde::Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => crate::report::ser_rational(r, s),
        None => s.serialize_none(),
    }
}

/// `c_κ = Γ(κ+1)^{-1} ∏_{p <= T} (1 - 1/p)^κ (1 - λ_A(p)/p)^{-1}`.
pub fn wirsing_constant(kappa: f64, set: &PrimeSet, truncation: u64, limits: &Limits) -> Result<WirsingConstant> {
    if !(kappa > 0.0 && kappa <= 1.0) {
        return Err(domain("wirsing_constant needs 0 < κ <= 1"));
    }
    if truncation < 2 {
        return Err(domain("wirsing_constant truncation must be at least 2"));
    }
    if kappa == 1.0 {
        if let Some(members) = set.finite_members(limits)? {
            // p ∉ A contributes exactly 1, p ∈ A contributes (p-1)/(p+1)
            let used: Vec<u64> = members.into_iter().filter(|&p| p <= truncation).collect();
            let exact = finite_product(&used);
            return Ok(WirsingConstant {
                kappa,
                value: rational_to_f64(&exact),
                exact: Some(exact),
                truncation,
            });
        }
    }
    let mut log = 0.0;
    for p in primes_up_to(truncation, limits)? {
        let inv = 1.0 / p as f64;
        let lambda = set.sign_at_prime(p) as f64;
        log += kappa * (-inv).ln_1p() - (-lambda * inv).ln_1p();
    }
    Ok(WirsingConstant {
        kappa,
        value: log.exp() / gamma(kappa + 1.0),
        exact: None,
        truncation,
    })
}
