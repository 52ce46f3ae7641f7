use liouville_core::arith::{legendre, primes_up_to, totient_sigma};
use liouville_core::charlike::{
    classify_lplus, digit_count, lambda_p, llp_identity_check, lmax, lmax_exhaustive, summatory_sieve, CharacterProfile,
};
use liouville_core::genliouville::{
    complement_identity, dirichlet_eval, lambda_a, period_violation, summatory, zeta, PrimeSet,
    DEFAULT_PERIOD_STEP_BUDGET,
};
use liouville_core::meanvalue::{greedy_construct, mean_value, verify_greedy, GreedyStop};
use liouville_core::report::{parse_rational, rational_to_f64};
use liouville_core::{Limits, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::json;

use crate::args::Scale;
use crate::output::{Outcome, Table};

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

struct Ctx {
    n: u64,
    seed: u64,
    limits: Limits,
}

type CheckFn = fn(&Ctx) -> Result<(bool, String)>;

const CHECKS: &[(&str, CheckFn)] = &[
    ("sieve-matches-pointwise", sieve_matches_pointwise),
    ("digit-formula-equals-sieve", digit_equals_sieve),
    ("l3-digit-count", l3_digit_count),
    ("l5-digit-law", l5_law),
    ("self-similarity", self_similarity),
    ("lmax-law", lmax_law),
    ("lplus-mod-4", lplus_mod_4),
    ("classify-vs-legendre", classify_vs_legendre),
    ("llp-identity", llp_identity),
    ("random-multiplicativity", random_multiplicativity),
    ("mean-finite-exact", mean_finite_exact),
    ("mean-empirical-bracket", mean_empirical),
    ("cube-gap-bracket", cube_gap_bracket),
    ("greedy", greedy),
    ("dirichlet-identities", dirichlet_identities),
    ("period-violation", period),
];

pub fn run(scale: Scale, seed: u64, limits: &Limits) -> Result<Outcome> {
    let n = match scale {
        Scale::Small => 10_000,
        Scale::Default => 100_000,
        Scale::Large => 1_000_000,
    };
    let ctx = Ctx {
        n,
        seed,
        limits: *limits,
    };
    let mut checks = Vec::new();
    for (name, f) in CHECKS {
        let (passed, detail) = match f(&ctx) {
            Ok(r) => r,
            Err(e) => (false, e.to_string()),
        };
        checks.push(Check { name, passed, detail });
    }
    let mut table = Table::new(&["check", "status", "detail"]);
    for c in &checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        table.push(vec![c.name.to_string(), status.to_string(), c.detail.clone()]);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut out = Outcome::new(json!({
        "scale": scale,
        "n": n,
        "seed": seed,
        "passed": checks.len() - failed,
        "failed": failed,
        "checks": checks,
    }))
    .with_table(table);
    out.failed = failed > 0;
    Ok(out)
}

fn sets() -> Vec<PrimeSet> {
    [
        "all",
        "finite:2",
        "finite:3,5",
        "nonres:5",
        "cubegap",
        "tail:50",
        "complement:(residues:4:1)",
    ]
    .iter()
    .map(|s| s.parse().expect("fixture grammar"))
    .collect()
}

fn sieve_matches_pointwise(c: &Ctx) -> Result<(bool, String)> {
    let x = c.n / 10;
    for set in sets() {
        let path = summatory(x, &set, true, &c.limits)?.path.unwrap_or_default();
        let mut acc = 0i64;
        for n in 1..=x {
            acc += lambda_a(n, &set)? as i64;
            if path[(n - 1) as usize] != acc {
                return Ok((false, format!("{set} differs at n = {n}")));
            }
        }
    }
    Ok((true, format!("7 sets, n <= {x}")))
}

fn digit_equals_sieve(c: &Ctx) -> Result<(bool, String)> {
    for p in primes_up_to(47, &c.limits)?.into_iter().skip(1) {
        let profile = CharacterProfile::new(p, &c.limits)?;
        let path = summatory_sieve(c.n, p, true, &c.limits)?.path.unwrap_or_default();
        if let Some(i) = (0..path.len()).find(|&i| profile.summatory(i as u64 + 1) != path[i]) {
            return Ok((false, format!("p = {p}, n = {}", i + 1)));
        }
    }
    Ok((true, format!("odd p <= 47, n <= {}", c.n)))
}

fn l3_digit_count(c: &Ctx) -> Result<(bool, String)> {
    let profile = CharacterProfile::new(3, &c.limits)?;
    for n in 1..=c.n {
        let v = profile.summatory(n);
        let digits = liouville_core::arith::digits(n, 3)?.len() as i64;
        if v != digit_count(n, 3, 1) as i64 || v < 0 || v > digits {
            return Ok((false, format!("n = {n}")));
        }
    }
    Ok((true, format!("n <= {}", c.n)))
}

fn l5_law(c: &Ctx) -> Result<(bool, String)> {
    let profile = CharacterProfile::new(5, &c.limits)?;
    for n in 1..=c.n {
        if profile.summatory(n) != digit_count(n, 5, 1) as i64 - digit_count(n, 5, 3) as i64 {
            return Ok((false, format!("n = {n}")));
        }
    }
    Ok((
        profile.summatory(3) == -1,
        format!("n <= {}; L_5(3) = {}", c.n, profile.summatory(3)),
    ))
}

fn self_similarity(c: &Ctx) -> Result<(bool, String)> {
    let top = (c.n / 100).max(100);
    for p in primes_up_to(31, &c.limits)?.into_iter().skip(1) {
        let profile = CharacterProfile::new(p, &c.limits)?;
        for r in 0..=6u32 {
            let scale = BigUint::from(p).pow(r);
            for n in 1..=top {
                if profile.summatory_big(&(&scale * n)) != profile.summatory(n) {
                    return Ok((false, format!("p = {p}, r = {r}, n = {n}")));
                }
            }
        }
    }
    Ok((true, format!("p <= 31, r <= 6, n <= {top}")))
}

fn lmax_law(c: &Ctx) -> Result<(bool, String)> {
    let mut cases = 0;
    for p in primes_up_to(c.n, &c.limits)?.into_iter().skip(1) {
        let mut i = 1;
        while p.checked_pow(i).is_some_and(|v| v <= c.n) {
            let r = lmax(p, i, &c.limits)?;
            if !r.verified || r.max_value != lmax_exhaustive(p, i, &c.limits)? {
                return Ok((false, format!("p = {p}, i = {i}")));
            }
            cases += 1;
            i += 1;
        }
    }
    Ok((true, format!("{cases} cases with p^i <= {}", c.n)))
}

fn lplus_mod_4(c: &Ctx) -> Result<(bool, String)> {
    let list = classify_lplus(c.n, &c.limits)?;
    let bad = list.iter().find(|&&p| p % 4 != 3);
    Ok(match bad {
        Some(p) => (false, format!("{p} ∈ 𝓛⁺ but p ≢ 3 mod 4")),
        None => (true, format!("{} primes in 𝓛⁺ below {}", list.len(), c.n)),
    })
}

fn classify_vs_legendre(c: &Ctx) -> Result<(bool, String)> {
    let limit = (c.n / 10).min(5000);
    let got = classify_lplus(limit, &c.limits)?;
    let mut brute = Vec::new();
    for p in primes_up_to(limit, &c.limits)?.into_iter().skip(1) {
        let mut s = 0i64;
        let mut ok = true;
        for k in 1..p {
            s += legendre(k as i64, p)? as i64;
            ok &= s >= 0;
        }
        if ok {
            brute.push(p);
        }
    }
    Ok((got == brute, format!("limit {limit}, {} primes", got.len())))
}

fn llp_identity(c: &Ctx) -> Result<(bool, String)> {
    let top = c.n / 10;
    for p in [3u64, 5, 7, 11, 13] {
        for n in 1..=top {
            if !llp_identity_check(n, p)?.holds {
                return Ok((false, format!("n = {n}, p = {p}")));
            }
        }
    }
    Ok((true, format!("n <= {top}, p ∈ {{3,5,7,11,13}}")))
}

fn random_multiplicativity(c: &Ctx) -> Result<(bool, String)> {
    let mut rng = StdRng::seed_from_u64(c.seed);
    let sets = sets();
    for _ in 0..10_000 {
        let m = rng.gen_range(1..1_000_000u64);
        let n = rng.gen_range(1..1_000_000u64);
        let p = [3u64, 5, 7, 11, 13, 101][rng.gen_range(0..6)];
        if lambda_p(m * n, p)? != lambda_p(m, p)? * lambda_p(n, p)? {
            return Ok((false, format!("λ_{p} at ({m}, {n})")));
        }
        let set = &sets[rng.gen_range(0..sets.len())];
        if lambda_a(m * n, set)? != lambda_a(m, set)? * lambda_a(n, set)? {
            return Ok((false, format!("λ_A for {set} at ({m}, {n})")));
        }
    }
    Ok((true, format!("10000 pairs, seed {}", c.seed)))
}

fn mean_finite_exact(c: &Ctx) -> Result<(bool, String)> {
    let top = (c.n / 10).min(10_000);
    for p in primes_up_to(top, &c.limits)? {
        let b = mean_value(&PrimeSet::finite([p])?, 2, &c.limits)?;
        let want = BigRational::new(BigInt::from(p - 1), BigInt::from(p + 1));
        let (phi, sigma) = totient_sigma(p)?;
        let via = BigRational::new(BigInt::from(phi), BigInt::from(sigma));
        if b.lower != want || b.upper != want || via != want {
            return Ok((false, format!("p = {p}")));
        }
    }
    Ok((true, format!("p <= {top}")))
}

fn mean_empirical(c: &Ctx) -> Result<(bool, String)> {
    let x = c.n * 10;
    let slack = 10.0 * (x as f64).powf(-0.25);
    for s in ["finite:2", "finite:3,5", "finite:2,3,5,7", "finite:11,13,47"] {
        let set: PrimeSet = s.parse()?;
        let b = mean_value(&set, 2, &c.limits)?;
        let ratio = summatory(x, &set, false, &c.limits)?.value as f64 / x as f64;
        if ratio < rational_to_f64(&b.lower) - slack || ratio > rational_to_f64(&b.upper) + slack {
            return Ok((false, format!("{s}: L/x = {ratio}")));
        }
    }
    Ok((true, format!("x = {x}, slack {slack:.3e}")))
}

fn cube_gap_bracket(c: &Ctx) -> Result<(bool, String)> {
    let b = mean_value(&PrimeSet::cube_gap(), 50, &c.limits)?;
    let two_thirds = BigRational::new(2.into(), 3.into());
    let five_sixths = BigRational::new(5.into(), 6.into());
    let width = rational_to_f64(&b.width());
    let ok = b.lower >= two_thirds && b.upper < five_sixths && width < 1e-3 && b.check_invariants();
    Ok((
        ok,
        format!(
            "[{:.9}, {:.9}], width {width:.2e}",
            rational_to_f64(&b.lower),
            rational_to_f64(&b.upper)
        ),
    ))
}

fn greedy(_: &Ctx) -> Result<(bool, String)> {
    let limit = parse_rational("1/10000")?;
    for a in ["1/10", "1/4", "1/2", "2/3", "9/10"] {
        let alpha = parse_rational(a)?;
        let stop = GreedyStop {
            max_primes: 64,
            width: Some(limit.clone()),
        };
        let g = greedy_construct(&alpha, &stop)?;
        let decreasing = g.partials.windows(2).all(|w| w[0] > w[1]);
        if !verify_greedy(&g) || !decreasing || g.width >= limit {
            return Ok((false, format!("alpha = {a}")));
        }
    }
    let half = greedy_construct(&parse_rational("1/2")?, &GreedyStop::primes(3))?;
    let ok = half.primes == [5u32, 11, 23].map(BigUint::from);
    Ok((ok, "5 targets; width < 1e-4 within 64 primes".into()))
}

fn dirichlet_identities(c: &Ctx) -> Result<(bool, String)> {
    let d = dirichlet_eval(2.0, &"finite:2".parse()?, 2, &c.limits)?;
    let want = std::f64::consts::PI.powi(2) / 6.0 * 0.6;
    let first = (d.value - want).abs() < 1e-10;
    let mut ok = first;
    for s in ["finite:2", "finite:2,3"] {
        let id = complement_identity(2.0, &s.parse()?, c.n * 10, 2, &c.limits)?;
        ok &= id.holds;
    }
    let z4 = zeta(4.0)?;
    Ok((
        ok,
        format!(
            "|𝓛(2) - 3ζ(2)/5| = {:.1e}; ζ(4) = {:.12}",
            (d.value - want).abs(),
            z4.value
        ),
    ))
}

fn period(_: &Ctx) -> Result<(bool, String)> {
    for s in ["finite:2", "finite:3,5", "all"] {
        let r = period_violation(&s.parse()?, 1000, 50, DEFAULT_PERIOD_STEP_BUDGET)?;
        if !r.is_conclusive() || r.witnesses.len() != 50 {
            return Ok((false, format!("{s}: {} inconclusive", r.inconclusive.len())));
        }
    }
    Ok((true, "k <= 50, M = 1000".into()))
}
