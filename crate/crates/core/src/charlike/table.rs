use num_bigint::BigUint;
use num_complex::Complex64;

use crate::arith::{check_odd_prime, factorize, pow_mod, raw_digits_big};
use crate::error::{validation, Result};

const TOLERANCE: f64 = 1e-9;

/// Largest modulus accepted for an explicit character table.
pub const MAX_TABLE_MODULUS: u64 = 1 << 24;

/// Least primitive root mod the odd prime `p`.
pub fn primitive_root(p: u64) -> Result<u64> {
    check_odd_prime(p)?;
    let order_primes: Vec<u64> = factorize(p - 1)?.primes().collect();
    Ok((2..p)
        .find(|&g| order_primes.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .unwrap_or(1))
}

/// A non-principal Dirichlet character mod an odd prime, as a value table.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable {
    p: u64,
    chi: Vec<Complex64>,
    /// `T_l = Σ_{m <= l} χ(m)`.
    prefix: Vec<Complex64>,
}

impl CharacterTable {
    /// Validate `chi` (indexed by residue) as a non-principal character mod `p`.
    pub fn new(p: u64, chi: Vec<Complex64>) -> Result<Self> {
        check_odd_prime(p)?;
        if p > MAX_TABLE_MODULUS {
            return Err(validation(format!("character modulus {p} exceeds {MAX_TABLE_MODULUS}")));
        }
        if chi.len() as u64 != p {
            return Err(validation(format!("table has {} entries, expected {p}", chi.len())));
        }
        if chi[0].norm() > TOLERANCE {
            return Err(validation("χ(0) must be 0"));
        }
        if (chi[1] - 1.0).norm() > TOLERANCE {
            return Err(validation("χ(1) must be 1"));
        }
        // χ(g^j) = χ(g^{j-1})χ(g) along the cycle of a primitive root forces
        // complete multiplicativity on the units.
        let g = primitive_root(p)?;
        let cg = chi[g as usize];
        let mut prev = 1u64;
        for _ in 1..p {
            let cur = prev * g % p;
            if (chi[cur as usize] - chi[prev as usize] * cg).norm() > TOLERANCE {
                return Err(validation(format!("χ is not multiplicative at {prev}·{g} mod {p}")));
            }
            prev = cur;
        }
        if chi[1..].iter().all(|c| (c - 1.0).norm() <= TOLERANCE) {
            return Err(validation("the principal character is excluded"));
        }
        let mut prefix = Vec::with_capacity(chi.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for c in &chi {
            acc += c;
            prefix.push(acc);
        }
        Ok(CharacterTable { p, chi, prefix })
    }

    /// The Legendre symbol mod `p`.
    pub fn legendre(p: u64) -> Result<Self> {
        check_odd_prime(p)?;
        let chi = (0..p)
            .map(|a| Complex64::new(crate::arith::legendre_unchecked(a, p) as f64, 0.0))
            .collect();
        Self::new(p, chi)
    }

    /// The character with `χ(g) = e^{2πik/(p-1)}` for the least primitive root `g`.
    pub fn from_generator(p: u64, k: u64) -> Result<Self> {
        check_odd_prime(p)?;
        if p > MAX_TABLE_MODULUS {
            return Err(validation(format!("character modulus {p} exceeds {MAX_TABLE_MODULUS}")));
        }
        let g = primitive_root(p)?;
        let mut chi = vec![Complex64::new(0.0, 0.0); p as usize];
        let mut power = 1u64;
        for j in 0..p - 1 {
            let angle = 2.0 * std::f64::consts::PI * ((j * k) % (p - 1)) as f64 / (p - 1) as f64;
            chi[power as usize] = Complex64::from_polar(1.0, angle);
            power = power * g % p;
        }
        Self::new(p, chi)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn chi(&self, a: u64) -> Complex64 {
        self.chi[(a % self.p) as usize]
    }

    /// `f(p^l m) = χ(m)`.
    pub fn f(&self, mut n: u64) -> Complex64 {
        while n > 0 && n.is_multiple_of(self.p) {
            n /= self.p;
        }
        self.chi(n)
    }

    /// True when every value is real.
    pub fn is_real(&self) -> bool {
        self.chi.iter().all(|c| c.im.abs() <= TOLERANCE)
    }
}

/// `Σ_{j <= n} f(j) = Σ_l N(n, l) Σ_{m <= l} χ(m)`.
pub fn summatory_char(n: &BigUint, table: &CharacterTable) -> Complex64 {
    raw_digits_big(n, table.p)
        .iter()
        .map(|&d| table.prefix[d as usize])
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charlike::CharacterProfile;
    use crate::Limits;

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(3).unwrap(), 2);
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert_eq!(primitive_root(41).unwrap(), 6);
    }

    #[test]
    fn legendre_specialises_to_digit_formula() {
        let t = CharacterTable::legendre(5).unwrap();
        assert!(t.is_real());
        assert_eq!(summatory_char(&BigUint::from(93u32), &t), Complex64::new(-3.0, 0.0));
        for p in [3u64, 7, 11, 13] {
            let t = CharacterTable::legendre(p).unwrap();
            let prof = CharacterProfile::new(p, &Limits::default()).unwrap();
            for n in 0..2000u64 {
                assert_eq!(summatory_char(&BigUint::from(n), &t).re, prof.summatory(n) as f64);
            }
        }
    }

    #[test]
    fn rejects_invalid_tables() {
        let principal = (0..7)
            .map(|a| Complex64::new(if a == 0 { 0.0 } else { 1.0 }, 0.0))
            .collect();
        assert!(CharacterTable::new(7, principal).is_err());
        let mut broken: Vec<Complex64> = (0..7)
            .map(|a| Complex64::new(crate::arith::legendre_unchecked(a, 7) as f64, 0.0))
            .collect();
        broken[3] = Complex64::new(1.0, 0.0);
        assert!(CharacterTable::new(7, broken).is_err());
        assert!(CharacterTable::new(7, vec![Complex64::new(0.0, 0.0); 5]).is_err());
        assert!(CharacterTable::from_generator(7, 0).is_err());
        assert!(CharacterTable::from_generator(7, 6).is_err());
    }

    #[test]
    fn complex_characters_match_direct_sum() {
        for (p, k) in [(7u64, 1u64), (7, 2), (7, 3), (11, 2), (13, 5)] {
            let t = CharacterTable::from_generator(p, k).unwrap();
            let total: Complex64 = (0..p).map(|a| t.chi(a)).sum();
            assert!(total.norm() < 1e-9);
            let mut acc = Complex64::new(0.0, 0.0);
            for n in 1..=10_000u64 {
                acc += t.f(n);
                if n % 97 == 0 || n == 10_000 {
                    assert!(
                        (summatory_char(&BigUint::from(n), &t) - acc).norm() < 1e-6,
                        "p={p} k={k} n={n}"
                    );
                }
            }
        }
        // k = 3 mod 7 is the quadratic character
        assert!(CharacterTable::from_generator(7, 3).unwrap().is_real());
    }
}
