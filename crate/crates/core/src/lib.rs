//! Completely multiplicative ±1 functions attached to sets of primes.
//!
//! For a prime set `A`, `λ_A` is the completely multiplicative function with
//! `λ_A(p) = -1` for `p ∈ A` and `+1` otherwise. This crate evaluates it,
//! sums it (segmented sieve), bounds its Dirichlet series and mean value,
//! runs the greedy construction that hits any mean value in `(0, 1)`, and
//! treats the character-like special case `λ_p` whose summatory function
//! has a closed form in the base-p digits of `n`.

pub mod arith;
pub mod charlike;
mod error;
pub mod genliouville;
pub mod meanvalue;
pub mod report;

pub use error::{Error, Result};

/// Default cap on sieve-driven operations (`x <= 10^9`).
pub const DEFAULT_SIEVE_BUDGET: u64 = 1_000_000_000;
/// Default cap on materialised prefix-sum paths.
pub const DEFAULT_PATH_BUDGET: u64 = 50_000_000;

/// Resource budgets shared by the sieve-backed operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub sieve_budget: u64,
    pub path_budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            sieve_budget: DEFAULT_SIEVE_BUDGET,
            path_budget: DEFAULT_PATH_BUDGET,
        }
    }
}

impl Limits {
    pub fn with_sieve_budget(sieve_budget: u64) -> Self {
        Limits {
            sieve_budget,
            ..Limits::default()
        }
    }

    pub(crate) fn check_sieve(&self, what: &'static str, x: u64) -> Result<()> {
        if x > self.sieve_budget {
            return Err(Error::ResourceLimit {
                what,
                requested: x as u128,
                budget: self.sieve_budget as u128,
            });
        }
        Ok(())
    }

    pub(crate) fn check_path(&self, x: u64) -> Result<()> {
        if x > self.path_budget {
            return Err(Error::ResourceLimit {
                what: "path length",
                requested: x as u128,
                budget: self.path_budget as u128,
            });
        }
        Ok(())
    }
}
