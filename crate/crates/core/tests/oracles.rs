//! Cross-checks against oracles that share no code with the library.

use liouville_core::charlike::{lambda_p, CharacterProfile};
use liouville_core::genliouville::{dirichlet_eval, lambda_a, summatory, PrimeSet};
use liouville_core::meanvalue::{phi_sigma_target, PhiSigmaOutcome};
use liouville_core::report::parse_rational;
use liouville_core::Limits;
use num_traits::ToPrimitive;

fn trial_factor(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        while n.is_multiple_of(d) {
            out.push(d);
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn is_prime(n: u64) -> bool {
    n >= 2 && trial_factor(n) == [n]
}

// membership predicates written out by hand
type Member = fn(u64) -> bool;

const SETS: &[(&str, Member)] = &[
    ("all", |_| true),
    ("none", |_| false),
    ("finite:2,3", |q| q == 2 || q == 3),
    ("residues:4:1", |q| q % 4 == 1),
    ("nonres:5", |q| q % 5 == 2 || q % 5 == 3),
    ("tail:50", |q| q >= 50),
    ("complement:(residues:4:1)", |q| q % 4 != 1),
];

#[test]
fn summatory_matches_trial_division() {
    let limits = Limits::default();
    for &(name, member) in SETS {
        let set: PrimeSet = name.parse().unwrap();
        let path = summatory(20_000, &set, true, &limits).unwrap().path.unwrap();
        let mut acc = 0i64;
        for n in 1..=20_000u64 {
            let k = trial_factor(n).into_iter().filter(|&q| member(q)).count();
            let lambda = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(lambda_a(n, &set).unwrap(), lambda, "{name}, n = {n}");
            acc += lambda as i64;
            assert_eq!(path[n as usize - 1], acc, "{name}, n = {n}");
        }
    }
}

#[test]
fn classical_liouville_summatory_values() {
    // published values of Σ_{n<=x} λ(n)
    let limits = Limits::default();
    let all = PrimeSet::all();
    for (x, want) in [
        (100, -2),
        (1_000, -14),
        (10_000, -94),
        (100_000, -288),
        (1_000_000, -530),
        (10_000_000, -842),
    ] {
        assert_eq!(summatory(x, &all, false, &limits).unwrap().value, want, "x = {x}");
    }
}

#[test]
fn character_like_matches_euler_criterion() {
    fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
        let mut r = 1;
        b %= m;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        r
    }
    let limits = Limits::default();
    for p in (3..200).filter(|&p| is_prime(p)) {
        let profile = CharacterProfile::new(p, &limits).unwrap();
        let mut acc = 0i64;
        for n in 1..=5 * p * p {
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            let e = pow_mod(m, (p - 1) / 2, p);
            let want = if e == 1 { 1 } else { -1 };
            assert_eq!(lambda_p(n, p).unwrap(), want, "p = {p}, n = {n}");
            acc += want as i64;
            assert_eq!(profile.summatory(n), acc, "p = {p}, n = {n}");
        }
    }
}

#[test]
fn empirical_mean_approaches_finite_product() {
    let limits = Limits::default();
    for (set, want) in [
        ("finite:3", 0.5),
        ("finite:2,3", 1.0 / 6.0),
        ("finite:5,7", 2.0 / 3.0 * 3.0 / 4.0),
    ] {
        let t = summatory(1_000_000, &set.parse().unwrap(), false, &limits).unwrap();
        let mean = t.value as f64 / 1e6;
        assert!((mean - want).abs() < 1e-3, "{set}: {mean} vs {want}");
    }
}

#[test]
fn liouville_dirichlet_series_at_two() {
    // Σ λ(n)/n^2 = ζ(4)/ζ(2) = π²/15
    let d = dirichlet_eval(2.0, &PrimeSet::all(), 1_000_000, &Limits::default()).unwrap();
    let want = std::f64::consts::PI.powi(2) / 15.0;
    assert!(
        (d.value - want).abs() <= d.error_bound,
        "{} ± {}",
        d.value,
        d.error_bound
    );
    assert!(d.error_bound < 1e-5);
}

#[test]
fn phi_sigma_found_matches_brute_force() {
    let limits = Limits::default();
    for (q, z) in [("1/3", 2u64), ("2/3", 5), ("1/2", 3), ("5/9", 55)] {
        let target = parse_rational(q).unwrap();
        match phi_sigma_target(&target, 1000, &limits).unwrap() {
            PhiSigmaOutcome::Found { z: got, .. } => assert_eq!(got, z, "q = {q}"),
            other => panic!("q = {q}: {other:?}"),
        }
        // the least square-free z with φ(z)/σ(z) = q, by brute force
        let (a, b) = (target.numer().to_u64().unwrap(), target.denom().to_u64().unwrap());
        let brute = (1..=1000u64)
            .find(|&n| {
                let f = trial_factor(n);
                let square_free = f.windows(2).all(|w| w[0] != w[1]);
                let (num, den) = f.iter().fold((1u64, 1u64), |(a, b), &p| (a * (p - 1), b * (p + 1)));
                square_free && num * b == den * a
            })
            .unwrap();
        assert_eq!(brute, z);
    }
}
