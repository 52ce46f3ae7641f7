//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines reach stdout uncaptured; exits non-zero on any FAIL.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use liouville_core::arith::primes_up_to;
use liouville_core::charlike::{
    classify_lplus, lmax, lmax_exhaustive, summatory_digit, summatory_sieve, CharacterProfile,
};
use liouville_core::genliouville::{
    complement_identity, dirichlet_eval, harmonic_sums_at, period_violation, zeta, PrimeSet, DEFAULT_PERIOD_STEP_BUDGET,
};
use liouville_core::meanvalue::{greedy_construct, kappa_estimate, mean_value, verify_greedy, GreedyStop};
use liouville_core::report::parse_rational;
use liouville_core::Limits;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde_json::Value;

type Verdict = Result<String, String>;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_liouville"))
}

fn run_json(args: &[&str]) -> Result<Value, String> {
    let out = bin()
        .arg("--output")
        .arg("json")
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn set(s: &str) -> PrimeSet {
    s.parse().expect("set grammar")
}

fn q(s: &str) -> BigRational {
    parse_rational(s).expect("rational")
}

fn odd_primes(limit: u64) -> Vec<u64> {
    primes_up_to(limit, &Limits::default())
        .unwrap()
        .into_iter()
        .skip(1)
        .collect()
}

// Oracle: base-p digits by repeated division, counted independently of the library.
fn count_digit(mut n: u64, p: u64, d: u64) -> i64 {
    let mut c = 0;
    while n > 0 {
        c += (n % p == d) as i64;
        n /= p;
    }
    c
}

fn num_digits(mut n: u64, p: u64) -> i64 {
    let mut c = 0;
    while n > 0 {
        c += 1;
        n /= p;
    }
    c
}

fn c1_classify() -> Verdict {
    let start = Instant::now();
    let v = run_json(&["classify", "--limit", "260"])?;
    let elapsed = start.elapsed();
    let got: Vec<u64> = v["payload"]["primes"]
        .as_array()
        .ok_or("no primes array")?
        .iter()
        .map(|p| p.as_u64().unwrap())
        .collect();
    let want = [
        3, 7, 11, 23, 31, 47, 59, 71, 79, 83, 103, 131, 151, 167, 191, 199, 239, 251,
    ];
    if got != want {
        return Err(format!("got {got:?}"));
    }
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!(
        "18 primes, {:.0} ms including process start",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn c2_digit_vs_sieve() -> Verdict {
    let start = Instant::now();
    let limits = Limits::default();
    let primes = odd_primes(47);
    for &p in &primes {
        let path = summatory_sieve(100_000, p, true, &limits).unwrap().path.unwrap();
        for (i, &s) in path.iter().enumerate() {
            let n = BigUint::from(i as u64 + 1);
            let d = summatory_digit(&n, p, &limits).unwrap();
            if d != s {
                return Err(format!("p = {p}, n = {n}: digit {d}, sieve {s}"));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(60) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!(
        "{} primes, n <= 1e5, {:.2} s",
        primes.len(),
        elapsed.as_secs_f64()
    ))
}

fn c3_l3() -> Verdict {
    let path = summatory_sieve(1_000_000, 3, true, &Limits::default())
        .unwrap()
        .path
        .unwrap();
    for (i, &s) in path.iter().enumerate() {
        let n = i as u64 + 1;
        // ⌊log_3 n⌋ + 1 is the digit count
        if s != count_digit(n, 3, 1) || s < 0 || s > num_digits(n, 3) {
            return Err(format!("n = {n}: L_3 = {s}"));
        }
    }
    Ok("n <= 1e6".into())
}

fn c4_l5() -> Verdict {
    let path = summatory_sieve(1_000_000, 5, true, &Limits::default())
        .unwrap()
        .path
        .unwrap();
    for (i, &s) in path.iter().enumerate() {
        let n = i as u64 + 1;
        if s != count_digit(n, 5, 1) - count_digit(n, 5, 3) {
            return Err(format!("n = {n}: L_5 = {s}"));
        }
    }
    if path[2] != -1 {
        return Err(format!("L_5(3) = {}", path[2]));
    }
    Ok("n <= 1e6; L_5(3) = -1".into())
}

fn c5_self_similarity() -> Verdict {
    let limits = Limits::default();
    for p in odd_primes(31) {
        for r in 0..=6u32 {
            let scale = BigUint::from(p).pow(r);
            for n in 1..=1000u64 {
                let big = &scale * n;
                let a = summatory_digit(&big, p, &limits).unwrap();
                let b = summatory_digit(&BigUint::from(n), p, &limits).unwrap();
                if a != b {
                    return Err(format!("p = {p}, r = {r}, n = {n}"));
                }
            }
        }
    }
    Ok("odd p <= 31, r <= 6, n <= 1e3".into())
}

fn c6_lmax() -> Verdict {
    let start = Instant::now();
    let limits = Limits::default();
    let mut cases = 0;
    for p in odd_primes(1_000_000) {
        let mut i = 1;
        while p.checked_pow(i).is_some_and(|v| v <= 1_000_000) {
            let fast = lmax(p, i, &limits).unwrap();
            let slow = lmax_exhaustive(p, i, &limits).unwrap();
            if !fast.verified || fast.max_value != slow {
                return Err(format!("p = {p}, i = {i}: {} vs {slow}", fast.max_value));
            }
            cases += 1;
            i += 1;
        }
    }
    Ok(format!(
        "{cases} pairs with p^i <= 1e6, {:.1} s",
        start.elapsed().as_secs_f64()
    ))
}

fn c7_mod4() -> Verdict {
    let start = Instant::now();
    let list = classify_lplus(100_000, &Limits::default()).unwrap();
    if let Some(p) = list.iter().find(|&&p| p % 4 != 3) {
        return Err(format!("{p} is in L+ but not 3 mod 4"));
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(300) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!(
        "{} primes in L+ below 1e5, all 3 mod 4, {:.2} s",
        list.len(),
        elapsed.as_secs_f64()
    ))
}

fn c8_mean_values() -> Verdict {
    let limits = Limits::default();
    for p in primes_up_to(10_000, &limits).unwrap() {
        let b = mean_value(&PrimeSet::finite([p]).unwrap(), 2, &limits).unwrap();
        let want = BigRational::new(BigInt::from(p - 1), BigInt::from(p + 1));
        if b.lower != want || b.upper != want {
            return Err(format!("Finite[{p}]"));
        }
    }
    let k = mean_value(&PrimeSet::cube_gap(), 50, &limits).unwrap();
    let width = k.width();
    if k.lower < q("2/3") || k.upper >= q("5/6") || width >= q("1/1000") {
        return Err(format!("cube-gap bracket [{}, {}]", k.lower, k.upper));
    }
    Ok(format!(
        "Finite[p] exact for p <= 1e4; cube-gap width {:.2e}",
        liouville_core::report::rational_to_f64(&width)
    ))
}

fn c9_greedy() -> Verdict {
    let limit = q("1/10000");
    for a in ["1/10", "1/4", "1/2", "2/3", "9/10"] {
        let alpha = q(a);
        let stop = GreedyStop {
            max_primes: 64,
            width: Some(limit.clone()),
        };
        let g = greedy_construct(&alpha, &stop).map_err(|e| format!("{a}: {e}"))?;
        let decreasing = g.partials.windows(2).all(|w| w[0] > w[1]);
        let above = g.partials.iter().all(|p| *p > alpha);
        if !decreasing || !above || g.width >= limit || !verify_greedy(&g) {
            return Err(format!("alpha = {a}"));
        }
    }
    let half = greedy_construct(&q("1/2"), &GreedyStop::primes(3)).unwrap();
    if half.primes != [5u32, 11, 23].map(BigUint::from) {
        return Err(format!("1/2 prefix {:?}", half.primes));
    }
    Ok("5 targets below 1e-4 within 64 primes; 1/2 -> [5, 11, 23]".into())
}

fn c10_dirichlet() -> Verdict {
    let limits = Limits::default();
    let d = dirichlet_eval(2.0, &set("finite:2"), 2, &limits).unwrap();
    let want = std::f64::consts::PI.powi(2) / 6.0 * 3.0 / 5.0;
    if (d.value - want).abs() >= 1e-10 {
        return Err(format!("L(2) = {}, want {want}", d.value));
    }
    let z4 = zeta(4.0).unwrap();
    for s in ["finite:2", "finite:2,3"] {
        let id = complement_identity(2.0, &set(s), 1_000_000, 2, &limits).unwrap();
        if !id.holds {
            return Err(format!("{s}: product {:?} vs zeta(4) {:?}", id.product, z4));
        }
    }
    Ok(format!(
        "|L(2) - 3ζ(2)/5| = {:.1e}; identity holds for both sets",
        (d.value - want).abs()
    ))
}

fn c11_kappa() -> Verdict {
    let start = Instant::now();
    let limits = Limits::default();
    let all = kappa_estimate(&set("all"), 10_000_000, &limits).unwrap().kappa_hat;
    let nonres = kappa_estimate(&set("nonres:5"), 10_000_000, &limits).unwrap().kappa_hat;
    let empty = kappa_estimate(&set("none"), 10_000_000, &limits).unwrap().kappa_hat;
    let elapsed = start.elapsed();
    let line = format!(
        "all {all:.4}, nonres:5 {nonres:.4}, empty {empty}, {:.1} s",
        elapsed.as_secs_f64()
    );
    let ok = (-1.05..=-0.95).contains(&all)
        && (-0.05..=0.05).contains(&nonres)
        && empty == 1.0
        && elapsed < Duration::from_secs(120);
    if ok {
        Ok(line)
    } else {
        Err(line)
    }
}

fn c12_harmonic() -> Verdict {
    let xs = [10_000, 100_000, 1_000_000, 10_000_000];
    let sums = harmonic_sums_at(&xs, &set("nonres:3"), &Limits::default()).unwrap();
    let last = sums[3];
    let lo = sums.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = sums.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let line = format!("sums {sums:.5?}, spread {:.2e}", hi - lo);
    if (0.90..=0.92).contains(&last) && hi - lo < 1e-2 {
        Ok(line)
    } else {
        Err(line)
    }
}

fn c13_period() -> Verdict {
    for s in ["finite:2", "finite:3,5", "all"] {
        let r = period_violation(&set(s), 1000, 50, DEFAULT_PERIOD_STEP_BUDGET).unwrap();
        if !r.is_conclusive() || r.witnesses.len() != 50 {
            return Err(format!(
                "{s}: {} witnesses, inconclusive {:?}",
                r.witnesses.len(),
                r.inconclusive
            ));
        }
    }
    Ok("every k <= 50 with M = 1000 for 3 sets".into())
}

fn c14_performance() -> Verdict {
    let profile = CharacterProfile::new(7, &Limits::default()).unwrap();
    let start = Instant::now();
    let v = std::hint::black_box(profile.summatory(std::hint::black_box(1_000_000_000_000)));
    let single = start.elapsed();
    let bench = run_json(&["bench", "--p", "7", "--reps", "5", "--sizes", "1000000000"])?;
    let speedup = bench["payload"]["speedups"][0]["speedup"]
        .as_f64()
        .ok_or("no speedup reported")?;
    let agree = bench["payload"]["speedups"][0]["values_agree"] == true;
    let line = format!(
        "L_7(1e12) = {v} in {:.1} µs; speedup at 1e9 = {speedup:.2e}",
        single.as_secs_f64() * 1e6
    );
    if single < Duration::from_millis(1) && speedup >= 1e4 && agree {
        Ok(line)
    } else {
        Err(line)
    }
}

type Criterion = fn() -> Verdict;

const CRITERIA: &[(&str, Criterion)] = &[
    ("classify-260", c1_classify),
    ("digit-equals-sieve", c2_digit_vs_sieve),
    ("l3-digit-count", c3_l3),
    ("l5-law", c4_l5),
    ("self-similarity", c5_self_similarity),
    ("lmax-law", c6_lmax),
    ("mod-4-obstruction", c7_mod4),
    ("mean-values", c8_mean_values),
    ("greedy", c9_greedy),
    ("dirichlet-identities", c10_dirichlet),
    ("kappa-estimation", c11_kappa),
    ("harmonic-limit", c12_harmonic),
    ("non-periodicity", c13_period),
    ("performance", c14_performance),
];

fn main() -> ExitCode {
    let mut failed = 0;
    for (i, (name, f)) in CRITERIA.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", CRITERIA.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
