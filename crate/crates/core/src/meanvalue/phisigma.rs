use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use super::greedy::{greedy_construct, GreedyStop};
use crate::arith::{primes_up_to, totient_sigma};
use crate::error::{domain, Result};
use crate::report::{format_rational, rational_to_f64, ser_biguint, ser_rational};
use crate::Limits;

/// Number of near misses kept for an exhausted search.
const CLOSEST_KEPT: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NearMiss {
    pub z: u64,
    pub ratio: String,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum PhiSigmaOutcome {
    /// Least square-free `z` with `φ(z)/σ(z) = q`.
    Found { z: u64, primes: Vec<u64> },
    /// No `z <= bound` hits `q`; the closest ratios seen are listed.
    Exhausted { bound: u64, closest: Vec<NearMiss> },
}

/// `a/b` vs `c/d` for positive integers, falling back to big integers on overflow.
fn cmp_frac(a: u128, b: u128, c: u128, d: u128) -> Ordering {
    match (a.checked_mul(d), c.checked_mul(b)) {
        (Some(l), Some(r)) => l.cmp(&r),
        _ => (BigUint::from(a) * BigUint::from(d)).cmp(&(BigUint::from(c) * BigUint::from(b))),
    }
}

struct Search<'a> {
    primes: &'a [u64],
    bound: u64,
    qn: u128,
    qd: u128,
    q: f64,
    best: Option<(u64, Vec<u64>)>,
    closest: Vec<NearMiss>,
    stack: Vec<u64>,
}

impl Search<'_> {
    fn note(&mut self, z: u64, num: u128, den: u128) {
        let distance = (num as f64 / den as f64 - self.q).abs();
        let g = num_integer::gcd(num, den);
        let ratio = format!("{}/{}", num / g, den / g);
        let pos = self
            .closest
            .iter()
            .position(|m| (distance, z) < (m.distance, m.z))
            .unwrap_or(self.closest.len());
        if pos < CLOSEST_KEPT {
            self.closest.insert(pos, NearMiss { z, ratio, distance });
            self.closest.truncate(CLOSEST_KEPT);
        }
    }

    /// Extend `z` (ratio `num/den > q`) by primes from `primes[from..]`.
    fn dfs(&mut self, from: usize, z: u64, num: u128, den: u128) {
        let cap = match &self.best {
            Some((b, _)) => (*b - 1).min(self.bound),
            None => self.bound,
        };
        // Adding p keeps the ratio >= q iff p >= (r + q)/(r - q); skip smaller primes.
        let (qn, qd) = (self.qn, self.qd);
        let rest = &self.primes[from..];
        let skip =
            rest.partition_point(|&p| cmp_frac(num * (p as u128 - 1), den * (p as u128 + 1), qn, qd) == Ordering::Less);
        if skip > 0 {
            let p = rest[skip - 1];
            if let Some(zp) = z.checked_mul(p).filter(|&zp| zp <= self.bound) {
                self.note(zp, num * (p as u128 - 1), den * (p as u128 + 1));
            }
        }
        for i in from + skip..self.primes.len() {
            let p = self.primes[i];
            let Some(zp) = z.checked_mul(p).filter(|&zp| zp <= cap) else {
                break;
            };
            let (n2, d2) = (num * (p as u128 - 1), den * (p as u128 + 1));
            self.stack.push(p);
            match cmp_frac(n2, d2, qn, qd) {
                Ordering::Equal => {
                    self.best = Some((zp, self.stack.clone()));
                    self.stack.pop();
                    // any larger prime gives a larger z
                    return;
                }
                Ordering::Greater => {
                    self.note(zp, n2, d2);
                    self.dfs(i + 1, zp, n2, d2);
                }
                Ordering::Less => unreachable!("skipped by partition point"),
            }
            self.stack.pop();
            if let Some((b, _)) = &self.best {
                if zp >= *b {
                    break;
                }
            }
        }
    }
}

/// Least square-free `z <= bound` with `φ(z)/σ(z) = q`.
///
/// Square-free `z` corresponds to the finite prime set of its divisors, so
/// `φ(z)/σ(z) = ∏_{p | z} (p-1)/(p+1)`; each extra prime strictly lowers the
/// ratio, which prunes every branch that has already dropped below `q`.
pub fn phi_sigma_target(q: &BigRational, bound: u64, limits: &Limits) -> Result<PhiSigmaOutcome> {
    if !(q.is_positive() && q < &BigRational::one()) {
        return Err(domain("target ratio must lie in (0, 1)"));
    }
    if bound < 2 {
        return Err(domain("search bound must be at least 2"));
    }
    let primes = primes_up_to(bound, limits)?;
    let parts = q.numer().to_u128().zip(q.denom().to_u128());
    let Some((qn, qd)) = parts else {
        // σ(z) < bound² fits comfortably in u128, so such a q is unreachable
        return Ok(PhiSigmaOutcome::Exhausted {
            bound,
            closest: Vec::new(),
        });
    };
    let mut search = Search {
        primes: &primes,
        bound,
        qn,
        qd,
        q: rational_to_f64(q),
        best: None,
        closest: Vec::new(),
        stack: Vec::new(),
    };
    search.dfs(0, 1, 1, 1);
    Ok(match search.best {
        Some((z, primes)) => PhiSigmaOutcome::Found { z, primes },
        None => PhiSigmaOutcome::Exhausted {
            bound,
            closest: search.closest,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RatioSource {
    /// Recomputed from `φ(n_k)` and `σ(n_k)` directly.
    TotientSigma,
    /// `n_k` exceeds 64 bits; the exact prime product is reported.
    ExactProduct,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitTerm {
    #[serde(serialize_with = "ser_biguint")]
    pub n_k: BigUint,
    #[serde(serialize_with = "ser_rational")]
    pub ratio: BigRational,
    pub source: RatioSource,
}

/// Square-free `n_k = q_1 ⋯ q_k` over the greedy primes for `alpha`, with
/// `φ(n_k)/σ(n_k)` decreasing to `alpha`.
pub fn limit_sequence(alpha: &BigRational, k: usize) -> Result<Vec<LimitTerm>> {
    if k == 0 {
        return Err(domain("limit_sequence needs k >= 1"));
    }
    let g = greedy_construct(alpha, &GreedyStop::primes(k))?;
    let mut n = BigUint::one();
    let mut out = Vec::with_capacity(k);
    for (p, partial) in g.primes.iter().zip(&g.partials) {
        n *= p;
        let term = match n.to_u64() {
            Some(z) => {
                let (phi, sigma) = totient_sigma(z)?;
                let ratio = BigRational::new(BigInt::from(phi), BigInt::from(sigma));
                assert_eq!(&ratio, partial, "φ/σ disagrees with the greedy product at {z}");
                LimitTerm {
                    n_k: n.clone(),
                    ratio,
                    source: RatioSource::TotientSigma,
                }
            }
            None => LimitTerm {
                n_k: n.clone(),
                ratio: partial.clone(),
                source: RatioSource::ExactProduct,
            },
        };
        out.push(term);
    }
    Ok(out)
}

impl std::fmt::Display for LimitTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}", self.n_k, format_rational(&self.ratio))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;
    use crate::report::parse_rational;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    // Brute force over every z with exact φ/σ from the arithmetic module.
    fn brute(target: &BigRational, bound: u64) -> Option<u64> {
        (2..=bound).find(|&z| {
            let f = factorize(z).unwrap();
            if !f.is_square_free() {
                return false;
            }
            let (phi, sigma) = totient_sigma(z).unwrap();
            BigRational::new(BigInt::from(phi), BigInt::from(sigma)) == *target
        })
    }

    fn found(o: PhiSigmaOutcome) -> u64 {
        match o {
            PhiSigmaOutcome::Found { z, .. } => z,
            other => panic!("expected a hit, got {other:?}"),
        }
    }

    #[test]
    fn small_examples() {
        let lim = Limits::default();
        assert_eq!(found(phi_sigma_target(&q("1/2"), 100, &lim).unwrap()), 3);
        assert_eq!(found(phi_sigma_target(&q("1/3"), 100, &lim).unwrap()), 2);
        assert_eq!(found(phi_sigma_target(&q("1/6"), 100, &lim).unwrap()), 6);
        assert_eq!(found(phi_sigma_target(&q("5/9"), 100, &lim).unwrap()), 55);
    }

    #[test]
    fn agrees_with_brute_force() {
        let lim = Limits::default();
        let bound = 3000;
        for d in 2i64..=40 {
            for n in 1..d {
                let target = BigRational::new(BigInt::from(n), BigInt::from(d));
                if target.denom() != &BigInt::from(d) {
                    continue;
                }
                let got = match phi_sigma_target(&target, bound, &lim).unwrap() {
                    PhiSigmaOutcome::Found { z, primes } => {
                        assert_eq!(primes.iter().product::<u64>(), z);
                        Some(z)
                    }
                    PhiSigmaOutcome::Exhausted { closest, .. } => {
                        assert!(closest.windows(2).all(|w| w[0].distance <= w[1].distance));
                        None
                    }
                };
                assert_eq!(got, brute(&target, bound), "{n}/{d}");
            }
        }
    }

    #[test]
    fn domain_errors() {
        let lim = Limits::default();
        for bad in ["0", "1", "5/4"] {
            assert!(phi_sigma_target(&q(bad), 100, &lim).is_err());
        }
        assert!(phi_sigma_target(&q("1/2"), 1, &lim).is_err());
    }

    #[test]
    fn limit_sequence_examples() {
        let seq = limit_sequence(&q("1/2"), 2).unwrap();
        assert_eq!(seq[0].n_k, BigUint::from(5u32));
        assert_eq!(seq[0].ratio, q("2/3"));
        assert_eq!(seq[1].n_k, BigUint::from(55u32));
        assert_eq!(seq[1].ratio, q("5/9"));
        assert!(limit_sequence(&q("1/2"), 0).is_err());
    }

    #[test]
    fn long_sequences_switch_to_exact_products() {
        let alpha = q("1/3");
        let seq = limit_sequence(&alpha, 12).unwrap();
        let g = greedy_construct(&alpha, &GreedyStop::primes(12)).unwrap();
        for (t, p) in seq.iter().zip(&g.partials) {
            assert_eq!(&t.ratio, p);
            assert!(t.ratio > alpha);
        }
        assert_eq!(seq.last().unwrap().source, RatioSource::ExactProduct);
        assert_eq!(seq[0].source, RatioSource::TotientSigma);
    }
}
