//! Browser bindings: summatory paths of `λ_A`, digit-formula plots of
//! `L_p`, and the greedy mean-value construction.
//!
//! Each export has a plain Rust twin returning `Result<_, String>` so the
//! logic is testable off the browser.

use liouville_core::arith::parse_natural;
use liouville_core::charlike::CharacterProfile;
use liouville_core::genliouville::{summatory, PrimeSet};
use liouville_core::meanvalue::{greedy_construct, verify_greedy, GreedyStop};
use liouville_core::report::{format_rational, parse_rational, rational_to_f64};
use liouville_core::Limits;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest `x` the page may request; keeps the tab responsive.
pub const MAX_BROWSER_X: u32 = 2_000_000;
pub const MAX_GREEDY_PRIMES: u32 = 200;

fn browser_limits() -> Limits {
    Limits::with_sieve_budget(MAX_BROWSER_X as u64)
}

/// `L_A(1), ..., L_A(x)` for a set written in the CLI grammar.
pub fn path(set: &str, x: u32) -> Result<Vec<i32>, String> {
    let set: PrimeSet = set.parse().map_err(|e: liouville_core::Error| e.to_string())?;
    let trace = summatory(x as u64, &set, true, &browser_limits()).map_err(|e| e.to_string())?;
    Ok(trace.path.unwrap_or_default().into_iter().map(|v| v as i32).collect())
}

/// `L_p(1), ..., L_p(n_max)` by the digit formula.
pub fn lp_series(p: u32, n_max: u32) -> Result<Vec<i32>, String> {
    if n_max > MAX_BROWSER_X {
        return Err(format!("n_max is capped at {MAX_BROWSER_X}"));
    }
    let profile = CharacterProfile::new(p as u64, &browser_limits()).map_err(|e| e.to_string())?;
    Ok((1..=n_max as u64).map(|n| profile.summatory(n) as i32).collect())
}

#[derive(Serialize)]
struct LpPoint {
    p: u32,
    n: String,
    value: i64,
    digits: Vec<u64>,
    in_lplus: bool,
}

/// `L_p(n)` for `n` given as a decimal string of any length, as JSON.
pub fn lp_value(p: u32, n: &str) -> Result<String, String> {
    let n = parse_natural(n).map_err(|e| e.to_string())?;
    let profile = CharacterProfile::new(p as u64, &browser_limits()).map_err(|e| e.to_string())?;
    let digits = liouville_core::arith::digits_big(&n, p as u64).map_err(|e| e.to_string())?;
    let point = LpPoint {
        p,
        value: profile.summatory_big(&n),
        n: n.to_string(),
        digits: digits.digits.iter().rev().copied().collect(),
        in_lplus: profile.all_nonneg,
    };
    Ok(serde_json::to_string(&point).expect("serializable"))
}

#[derive(Serialize)]
struct GreedyStep {
    prime: String,
    partial: String,
    approx: f64,
}

#[derive(Serialize)]
struct GreedyView {
    alpha: String,
    steps: Vec<GreedyStep>,
    width: f64,
    verified: bool,
}

/// The first `primes` greedy steps toward `alpha`, as JSON.
pub fn greedy(alpha: &str, primes: u32) -> Result<String, String> {
    if primes == 0 || primes > MAX_GREEDY_PRIMES {
        return Err(format!("primes must lie in 1..={MAX_GREEDY_PRIMES}"));
    }
    let alpha = parse_rational(alpha).map_err(|e| e.to_string())?;
    let g = greedy_construct(&alpha, &GreedyStop::primes(primes as usize)).map_err(|e| e.to_string())?;
    let view = GreedyView {
        alpha: format_rational(&g.alpha),
        steps: g
            .primes
            .iter()
            .zip(&g.partials)
            .map(|(q, p)| GreedyStep {
                prime: q.to_string(),
                partial: format_rational(p),
                approx: rational_to_f64(p),
            })
            .collect(),
        width: rational_to_f64(&g.width),
        verified: verify_greedy(&g),
    };
    Ok(serde_json::to_string(&view).expect("serializable"))
}

#[wasm_bindgen]
pub fn summatory_path(set: &str, x: u32) -> Result<Vec<i32>, JsError> {
    path(set, x).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn charlike_series(p: u32, n_max: u32) -> Result<Vec<i32>, JsError> {
    lp_series(p, n_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn charlike_value(p: u32, n: &str) -> Result<String, JsError> {
    lp_value(p, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn greedy_steps(alpha: &str, primes: u32) -> Result<String, JsError> {
    greedy(alpha, primes).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_matches_known_values() {
        let p = path("all", 10).unwrap();
        assert_eq!(p, vec![1, 0, -1, 0, -1, 0, -1, -2, -1, 0]);
        assert!(path("finite:4", 10).is_err());
        assert!(path("all", MAX_BROWSER_X + 1).is_err());
    }

    #[test]
    fn charlike_series_and_value() {
        let s = lp_series(3, 13).unwrap();
        assert_eq!(s[12], 3);
        let v: serde_json::Value = serde_json::from_str(&lp_value(5, "93").unwrap()).unwrap();
        assert_eq!(v["value"], -3);
        assert_eq!(v["digits"], serde_json::json!([3, 3, 3]));
        let big: serde_json::Value =
            serde_json::from_str(&lp_value(7, "123456789012345678901234567890").unwrap()).unwrap();
        assert_eq!(big["value"], 34);
        assert!(lp_value(4, "10").is_err());
    }

    #[test]
    fn greedy_view() {
        let v: serde_json::Value = serde_json::from_str(&greedy("1/2", 3).unwrap()).unwrap();
        let primes: Vec<&str> = v["steps"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s["prime"].as_str().unwrap())
            .collect();
        assert_eq!(primes, ["5", "11", "23"]);
        assert_eq!(v["verified"], true);
        assert!(greedy("3/2", 3).is_err());
        assert!(greedy("1/2", 0).is_err());
    }
}
