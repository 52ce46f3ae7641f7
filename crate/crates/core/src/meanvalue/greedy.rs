use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{next_prime_big, prev_prime_above};
use crate::error::{domain, Error, Result};
use crate::report::{ser_biguint_vec, ser_rational, ser_rational_vec};

/// Largest greedy prime we are willing to search for.
const MAX_PRIME_BITS: u64 = 4096;

/// When to stop choosing primes: after `max_primes`, or once the gap
/// `partial - alpha` drops to `width` (if set), whichever comes first.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyStop {
    pub max_primes: usize,
    pub width: Option<BigRational>,
}

impl Default for GreedyStop {
    fn default() -> Self {
        GreedyStop {
            max_primes: 64,
            width: Some(BigRational::new(BigInt::one(), BigInt::from(1_000_000))),
        }
    }
}

impl GreedyStop {
    pub fn primes(n: usize) -> Self {
        GreedyStop {
            max_primes: n,
            width: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreedyConstruction {
    #[serde(serialize_with = "ser_rational")]
    pub alpha: BigRational,
    #[serde(serialize_with = "ser_biguint_vec")]
    pub primes: Vec<BigUint>,
    /// `partials[i] = ∏_{j <= i} (q_j - 1)/(q_j + 1)`.
    #[serde(serialize_with = "ser_rational_vec")]
    pub partials: Vec<BigRational>,
    /// `partial - alpha` after the last prime (`1 - alpha` if none).
    #[serde(serialize_with = "ser_rational")]
    pub width: BigRational,
}

fn factor(q: &BigUint) -> BigRational {
    let q = BigInt::from(q.clone());
    BigRational::new(&q - 1, &q + 1)
}

/// Choose `q_1 < q_2 < ...`, each the least prime above its predecessor
/// that keeps `∏ (q_i - 1)/(q_i + 1)` strictly above `alpha`.
///
/// With current product `P > alpha`, a prime `q` qualifies exactly when
/// `q > (P + alpha)/(P - alpha)`, so each step is a single next-prime search.
pub fn greedy_construct(alpha: &BigRational, stop: &GreedyStop) -> Result<GreedyConstruction> {
    if !(alpha.is_positive() && alpha < &BigRational::one()) {
        return Err(domain("greedy target must lie in (0, 1); 0 and 1 are R_P and R_∅"));
    }
    if stop.max_primes == 0 && stop.width.is_none() {
        return Err(domain("stop criterion must be positive"));
    }
    if stop.width.as_ref().is_some_and(|w| !w.is_positive()) {
        return Err(domain("stop width must be positive"));
    }
    let mut partial = BigRational::one();
    let mut prev = BigUint::one();
    let mut primes = Vec::new();
    let mut partials = Vec::new();
    while primes.len() < stop.max_primes {
        if stop.width.as_ref().is_some_and(|w| &partial - alpha <= *w) {
            break;
        }
        let threshold = (&partial + alpha) / (&partial - alpha);
        let floor = threshold.numer().div_floor(threshold.denom());
        let floor = floor.to_biguint().expect("threshold is positive");
        let start = if floor > prev { floor } else { prev.clone() };
        if start.bits() > MAX_PRIME_BITS {
            return Err(Error::ResourceLimit {
                what: "greedy prime bits",
                requested: start.bits() as u128,
                budget: MAX_PRIME_BITS as u128,
            });
        }
        let q = next_prime_big(&start);
        partial *= factor(&q);
        debug_assert!(&partial > alpha);
        partials.push(partial.clone());
        primes.push(q.clone());
        prev = q;
    }
    Ok(GreedyConstruction {
        alpha: alpha.clone(),
        width: &partial - alpha,
        primes,
        partials,
    })
}

/// Re-check a construction from scratch: products, strict decrease, the
/// bound above `alpha`, and minimality of every prime (the largest prime
/// strictly between consecutive choices must already fail).
pub fn verify_greedy(g: &GreedyConstruction) -> bool {
    let mut partial = BigRational::one();
    let mut prev = BigUint::one();
    for (q, recorded) in g.primes.iter().zip(&g.partials) {
        if *q <= prev {
            return false;
        }
        let next = &partial * factor(q);
        if &next != recorded || next <= g.alpha || next >= partial {
            return false;
        }
        if let Some(skipped) = prev_prime_above(q, &prev) {
            if &partial * factor(&skipped) > g.alpha {
                return false;
            }
        }
        partial = next;
        prev = q.clone();
    }
    g.primes.len() == g.partials.len() && g.width == &partial - &g.alpha && !g.width.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_prime;
    use crate::report::parse_rational;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    // Independent oracle: scan primes upward one at a time with exact
    // rational comparisons, no threshold algebra.
    fn scan_oracle(alpha: &BigRational, count: usize) -> Vec<u64> {
        let mut partial = BigRational::one();
        let mut out = Vec::new();
        let mut p = 1u64;
        while out.len() < count {
            p += 1;
            if !is_prime(p) {
                continue;
            }
            let f = BigRational::new(BigInt::from(p - 1), BigInt::from(p + 1));
            if &partial * &f > *alpha {
                partial *= f;
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn half_prefix() {
        let g = greedy_construct(&q("1/2"), &GreedyStop::primes(3)).unwrap();
        let primes: Vec<u64> = g.primes.iter().map(|p| p.try_into().unwrap()).collect();
        assert_eq!(primes, vec![5, 11, 23]);
        assert_eq!(g.partials, vec![q("2/3"), q("5/9"), q("55/108")]);
        assert!(verify_greedy(&g));
    }

    #[test]
    fn two_thirds_skips_five() {
        let g = greedy_construct(&q("2/3"), &GreedyStop::primes(1)).unwrap();
        assert_eq!(g.primes, vec![BigUint::from(7u32)]);
    }

    #[test]
    fn matches_scan_oracle() {
        for a in ["1/10", "1/4", "1/2", "2/3", "9/10", "0.3", "3/7"] {
            let alpha = q(a);
            let g = greedy_construct(&alpha, &GreedyStop::primes(4)).unwrap();
            let expected: Vec<BigUint> = scan_oracle(&alpha, 4).into_iter().map(BigUint::from).collect();
            assert_eq!(g.primes, expected, "alpha = {a}");
            assert!(verify_greedy(&g));
        }
    }

    #[test]
    fn default_stop_reaches_width() {
        for a in ["1/10", "1/4", "1/2", "2/3", "9/10"] {
            let g = greedy_construct(&q(a), &GreedyStop::default()).unwrap();
            assert!(verify_greedy(&g));
            assert!(g.width <= q("1/1000000"));
            assert!(g.primes.len() <= 64);
            assert!(g.partials.windows(2).all(|w| w[0] > w[1]));
        }
    }

    #[test]
    fn tampered_constructions_fail_verification() {
        let mut g = greedy_construct(&q("1/2"), &GreedyStop::primes(3)).unwrap();
        g.primes[1] = BigUint::from(13u32);
        assert!(!verify_greedy(&g));
        // a non-minimal but valid-looking choice: 7 instead of 5 for alpha = 1/2
        let alpha = q("1/2");
        let f7 = BigRational::new(BigInt::from(6), BigInt::from(8));
        let fake = GreedyConstruction {
            alpha: alpha.clone(),
            primes: vec![BigUint::from(7u32)],
            partials: vec![f7.clone()],
            width: f7 - alpha,
        };
        assert!(!verify_greedy(&fake));
    }

    #[test]
    fn domain_errors() {
        for bad in ["0", "1", "3/2", "-1/2"] {
            assert!(greedy_construct(&q(bad), &GreedyStop::default()).is_err(), "{bad}");
        }
        let stop = GreedyStop {
            max_primes: 5,
            width: Some(q("0")),
        };
        assert!(greedy_construct(&q("1/2"), &stop).is_err());
    }
}
