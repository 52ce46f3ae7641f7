//! Mean values `R_A = lim L_A(n)/n` and the constructions around them.

mod greedy;
mod kappa;
mod phisigma;

pub use greedy::{greedy_construct, verify_greedy, GreedyConstruction, GreedyStop};
pub use kappa::{gamma, kappa_estimate, wirsing_constant, DensityEstimate, WirsingConstant, KAPPA_CHECKPOINTS};
pub use phisigma::{limit_sequence, phi_sigma_target, LimitTerm, PhiSigmaOutcome, RatioSource};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::genliouville::{cube_gap_primes, Convergence, PrimeSet, SetKind};
use crate::report::{rational_to_f64, ser_rational};
use crate::Limits;

/// Most factors multiplied into an exact finite product.
pub const MAX_EXACT_FACTORS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ExactFinite,
    TailBounded,
    DivergenceZero,
}

/// Bounds `lower <= R_A <= upper` with a representative point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanValueBracket {
    #[serde(serialize_with = "ser_rational")]
    pub lower: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub upper: BigRational,
    pub point: f64,
    pub provenance: Provenance,
    /// Primes whose factor `(p-1)/(p+1)` was multiplied in exactly.
    pub factors_used: usize,
}

impl MeanValueBracket {
    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lower <= v && v <= &self.upper
    }

    pub fn check_invariants(&self) -> bool {
        let zero = BigRational::zero();
        let one = BigRational::one();
        let ordered = zero <= self.lower && self.lower <= self.upper && self.upper <= one;
        let point_ok = rational_to_f64(&self.lower) <= self.point && self.point <= rational_to_f64(&self.upper);
        let exact_ok = self.provenance != Provenance::ExactFinite || self.lower == self.upper;
        ordered && point_ok && exact_ok
    }

    fn exact(value: BigRational, factors_used: usize) -> Self {
        MeanValueBracket {
            point: rational_to_f64(&value),
            lower: value.clone(),
            upper: value,
            provenance: Provenance::ExactFinite,
            factors_used,
        }
    }
}

/// `(p - 1)/(p + 1)` as an exact rational.
pub fn prime_factor(p: u64) -> BigRational {
    BigRational::new(BigInt::from(p - 1), BigInt::from(p + 1))
}

/// `∏ (p - 1)/(p + 1)` over the given primes.
pub fn finite_product(primes: &[u64]) -> BigRational {
    let (num, den) = primes.iter().fold((BigInt::one(), BigInt::one()), |(n, d), &p| {
        (n * BigInt::from(p - 1), d * BigInt::from(p + 1))
    });
    BigRational::new(num, den)
}

/// `∏_{n >= m} (n^3 - 1)/(n^3 + 1) = m(m-1)/(m^2 - m + 1)` for `m >= 2`.
///
/// Writing the factor as `(n-1)/(n+1) · g(n+1)/g(n)` with `g(n) = n^2 - n + 1`
/// makes both pieces telescope.
pub fn cube_tail_product(m: u64) -> BigRational {
    let m = BigInt::from(m);
    let num = &m * (&m - 1);
    let den = &m * &m - &m + 1;
    BigRational::new(num, den)
}

/// `R_A` as an exact value or a rigorous bracket.
///
/// Divergent sets give the zero bracket; finite sets the exact product. For
/// the cube-gap set `K`, `truncation` is the number of enumerated members
/// `p_2, ..., p_{N+1}`: their product is the upper bound and, since
/// `p_n > n^3`, multiplying by `∏_{n > N+1} (n^3 - 1)/(n^3 + 1)` gives the lower.
pub fn mean_value(set: &PrimeSet, truncation: u64, limits: &Limits) -> Result<MeanValueBracket> {
    if truncation < 2 {
        return Err(domain("mean_value truncation must be at least 2"));
    }
    let set = set.simplified();
    match set.reciprocal_sum_converges() {
        Convergence::No => {
            return Ok(MeanValueBracket {
                lower: BigRational::zero(),
                upper: BigRational::zero(),
                point: 0.0,
                provenance: Provenance::DivergenceZero,
                factors_used: 0,
            })
        }
        Convergence::Unknown => {
            return Err(Error::Undecidable(format!(
                "cannot decide whether Σ 1/p converges over {set}"
            )))
        }
        Convergence::Yes => {}
    }
    if let Some(members) = set.finite_members(limits)? {
        if members.len() > MAX_EXACT_FACTORS {
            return Err(Error::ResourceLimit {
                what: "exact product factors",
                requested: members.len() as u128,
                budget: MAX_EXACT_FACTORS as u128,
            });
        }
        return Ok(MeanValueBracket::exact(finite_product(&members), members.len()));
    }
    match set.kind() {
        SetKind::CubeGap => {
            let n = usize::try_from(truncation).unwrap_or(usize::MAX).min(MAX_EXACT_FACTORS);
            let members = cube_gap_primes(n);
            let upper = finite_product(&members);
            let lower = &upper * cube_tail_product(n as u64 + 2);
            let mid = (&lower + &upper) / BigInt::from(2);
            Ok(MeanValueBracket {
                point: rational_to_f64(&mid),
                lower,
                upper,
                provenance: Provenance::TailBounded,
                factors_used: n,
            })
        }
        _ => Err(Error::Undecidable(format!(
            "{set} has a convergent reciprocal sum but no enumerator"
        ))),
    }
}
