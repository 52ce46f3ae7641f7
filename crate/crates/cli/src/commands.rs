use liouville_core::charlike::{
    classify_lplus, lmax, lmax_exhaustive, log_bound_scan, summatory_sieve, CharacterProfile, ScanMode,
};
use liouville_core::genliouville::{
    complement_identity, dirichlet_eval, harmonic_sums_at, lambda_a, omega_a, summatory,
};
use liouville_core::meanvalue::{
    greedy_construct, kappa_estimate, limit_sequence, mean_value, phi_sigma_target, verify_greedy, wirsing_constant,
    GreedyStop, PhiSigmaOutcome, Provenance,
};
use liouville_core::report::{format_rational, rational_to_f64};
use liouville_core::{Error, Limits, Result};
use num_traits::ToPrimitive;
use serde_json::json;

use crate::args::*;
use crate::output::{Outcome, Table};
use crate::{bench, verify};

pub fn run(cmd: &Command, limits: &Limits, seed: u64) -> Result<Outcome> {
    match cmd {
        Command::Eval(a) => Ok(Outcome::new(json!({
            "set": a.set.to_string(),
            "n": a.n,
            "omega_a": omega_a(a.n, &a.set)?,
            "lambda_a": lambda_a(a.n, &a.set)?,
        }))),
        Command::Sum(a) => {
            let t = summatory(a.x, &a.set, false, limits)?;
            Ok(Outcome::new(json!({
                "set": a.set.to_string(),
                "x": t.x,
                "value": t.value,
                "running_min": t.running_min,
                "running_max": t.running_max,
            })))
        }
        Command::Trace(a) => {
            let t = summatory(a.x, &a.set, true, limits)?;
            let path = t.path.unwrap_or_default();
            let mut table = Table::new(&["n", "L"]);
            for (i, v) in path.iter().enumerate() {
                table.push(vec![(i + 1).to_string(), v.to_string()]);
            }
            Ok(Outcome::new(json!({
                "set": a.set.to_string(),
                "x": t.x,
                "value": t.value,
                "running_min": t.running_min,
                "running_max": t.running_max,
                "path": path,
            }))
            .with_table(table))
        }
        Command::Dirichlet(a) => dirichlet(a, limits),
        Command::Mean(a) => {
            let b = mean_value(&a.set, a.truncation, limits)?;
            let mut out = Outcome::new(json!({
                "set": a.set.to_string(),
                "lower": format_rational(&b.lower),
                "upper": format_rational(&b.upper),
                "point": b.point,
                "width": rational_to_f64(&b.width()),
                "provenance": b.provenance,
                "factors_used": b.factors_used,
            }));
            if b.provenance == Provenance::TailBounded {
                out = out.note(format!(
                    "product over the first {} members; lower bound multiplies in the tail ∏_{{n > {}}} (n^3-1)/(n^3+1)",
                    b.factors_used,
                    b.factors_used + 1
                ));
            }
            Ok(out)
        }
        Command::Greedy(a) => {
            let stop = match (a.primes, &a.width) {
                (None, None) => GreedyStop::default(),
                (Some(n), None) => GreedyStop::primes(n),
                (n, Some(w)) => GreedyStop {
                    max_primes: n.unwrap_or(GreedyStop::default().max_primes),
                    width: Some(w.clone()),
                },
            };
            let g = greedy_construct(&a.alpha, &stop)?;
            let mut table = Table::new(&["i", "prime", "partial"]);
            for (i, (q, p)) in g.primes.iter().zip(&g.partials).enumerate() {
                table.push(vec![(i + 1).to_string(), q.to_string(), format_rational(p)]);
            }
            let verified = verify_greedy(&g);
            Ok(Outcome::new(json!({
                "alpha": format_rational(&g.alpha),
                "primes": g.primes.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                "partials": g.partials.iter().map(format_rational).collect::<Vec<_>>(),
                "width": format_rational(&g.width),
                "width_approx": rational_to_f64(&g.width),
                "verified": verified,
            }))
            .with_table(table))
        }
        Command::Kappa(a) => kappa(a, limits),
        Command::CharlikeSum(a) => charlike_sum(a, limits),
        Command::Classify(a) => {
            let primes = classify_lplus(a.limit, limits)?;
            let mut table = Table::new(&["p"]);
            for p in &primes {
                table.push(vec![p.to_string()]);
            }
            Ok(Outcome::new(json!({
                "limit": a.limit,
                "count": primes.len(),
                "primes": primes,
            }))
            .with_table(table))
        }
        Command::Lmax(a) => {
            let r = lmax(a.p, a.i, limits)?;
            let exhaustive = if a.exhaustive {
                Some(lmax_exhaustive(a.p, a.i, limits)?)
            } else {
                None
            };
            Ok(Outcome::new(json!({
                "p": r.p,
                "i": r.i,
                "max_value": r.max_value,
                "witnesses": r.witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                "verified": r.verified,
                "exhaustive": exhaustive,
                "agrees": exhaustive.map(|e| e == r.max_value),
            })))
        }
        Command::Scan(a) => {
            let mode = match a.mode {
                ScanModeArg::Digit => ScanMode::Digit,
                ScanModeArg::Sieve => ScanMode::Sieve,
            };
            let rows = log_bound_scan(a.p, a.x, mode, limits)?;
            let mut table = Table::new(&["t", "max_abs", "ratio"]);
            for r in &rows {
                table.push(vec![r.t.to_string(), r.max_abs.to_string(), format!("{:.6}", r.ratio)]);
            }
            Ok(Outcome::new(json!({ "p": a.p, "x": a.x, "mode": mode, "rows": rows })).with_table(table))
        }
        Command::Phisigma(a) => phisigma(a, limits),
        Command::Bench(a) => bench::run(a, limits),
        Command::Verify(a) => verify::run(a.scale, seed, limits),
    }
}

fn dirichlet(a: &DirichletArgs, limits: &Limits) -> Result<Outcome> {
    let d = dirichlet_eval(a.s, &a.set, a.truncation, limits)?;
    let identity = match a.identity_terms {
        Some(terms) => Some(complement_identity(a.s, &a.set, terms, a.truncation, limits)?),
        None => None,
    };
    let mut out = Outcome::new(json!({
        "set": a.set.to_string(),
        "estimate": d,
        "complement_identity": identity,
    }));
    out = out.note(format!(
        "ζ(s) by Euler-Maclaurin with error bound {:e}",
        d.zeta.error_bound
    ));
    if d.tail_sum_bound > 0.0 {
        out = out.note(format!(
            "Euler product truncated at {}; omitted Σ p^-s <= {:e}",
            a.truncation, d.tail_sum_bound
        ));
    }
    if let Some(id) = &identity {
        out = out.note(format!(
            "complement series truncated after {} terms; error bound {:e}",
            a.identity_terms.unwrap_or(0),
            id.complement_series.error_bound
        ));
    }
    Ok(out)
}

fn kappa(a: &KappaArgs, limits: &Limits) -> Result<Outcome> {
    let est = kappa_estimate(&a.set, a.x, limits)?;
    let harmonic = if a.harmonic {
        let mut checkpoints = Vec::new();
        let mut t = 10u64;
        while t <= a.x {
            checkpoints.push(t);
            t = match t.checked_mul(10) {
                Some(v) => v,
                None => break,
            };
        }
        if checkpoints.last() != Some(&a.x) {
            checkpoints.push(a.x);
        }
        let sums = harmonic_sums_at(&checkpoints, &a.set, limits)?;
        Some(
            checkpoints
                .iter()
                .zip(sums)
                .map(|(x, v)| json!({ "x": x, "sum": v }))
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };
    let mut out = Outcome::new(json!({
        "set": a.set.to_string(),
        "x": a.x,
        "kappa_hat": est.kappa_hat,
        "slope": est.slope,
        "intercept": est.intercept,
        "residual": est.residual,
        "samples": est.samples.iter().map(|(t, s)| json!({ "t": t, "sum": s })).collect::<Vec<_>>(),
        "harmonic": harmonic,
        "wirsing": null,
    }))
    .note("κ fitted by least squares over 8 geometric checkpoints from x^(9/16) to x");
    if let Some(k) = a.wirsing {
        let w = wirsing_constant(k, &a.set, a.truncation, limits)?;
        let mut entry = json!({
            "kappa": w.kappa,
            "value": w.value,
            "exact": w.exact.as_ref().map(format_rational),
            "truncation": w.truncation,
        });
        if w.exact.is_none() {
            let half = wirsing_constant(k, &a.set, (a.truncation / 2).max(2), limits)?;
            let drift = (w.value - half.value).abs();
            entry["change_since_half_truncation"] = json!(drift);
            out = out.note(format!(
                "Wirsing product truncated at {}; value moved by {:e} since {} (heuristic, not a bound)",
                a.truncation,
                drift,
                a.truncation / 2
            ));
        }
        out.payload["wirsing"] = entry;
    }
    Ok(out)
}

fn charlike_sum(a: &CharlikeSumArgs, limits: &Limits) -> Result<Outcome> {
    let profile = CharacterProfile::new(a.p, limits)?;
    let digit = matches!(a.method, SumMethod::Digit | SumMethod::Both).then(|| profile.summatory_big(&a.n));
    let sieve = if matches!(a.method, SumMethod::Sieve | SumMethod::Both) {
        let x = a.n.to_u64().ok_or(Error::ResourceLimit {
            what: "sieve bound x",
            requested: u128::MAX,
            budget: limits.sieve_budget as u128,
        })?;
        Some(summatory_sieve(x, a.p, false, limits)?.value)
    } else {
        None
    };
    let value = digit.or(sieve).expect("one method ran");
    Ok(Outcome::new(json!({
        "p": a.p,
        "n": a.n.to_string(),
        "value": value,
        "digit": digit,
        "sieve": sieve,
        "agree": digit.zip(sieve).map(|(d, s)| d == s),
        "in_lplus": profile.all_nonneg,
    })))
}

fn phisigma(a: &PhisigmaArgs, limits: &Limits) -> Result<Outcome> {
    if let Some(k) = a.sequence {
        let seq = limit_sequence(&a.q, k)?;
        let mut table = Table::new(&["k", "n_k", "ratio", "source"]);
        for (i, t) in seq.iter().enumerate() {
            table.push(vec![
                (i + 1).to_string(),
                t.n_k.to_string(),
                format_rational(&t.ratio),
                serde_json::to_value(t.source).unwrap().as_str().unwrap().to_string(),
            ]);
        }
        return Ok(Outcome::new(json!({ "alpha": format_rational(&a.q), "terms": seq })).with_table(table));
    }
    let outcome = phi_sigma_target(&a.q, a.bound, limits)?;
    let mut out = Outcome::new(json!({
        "q": format_rational(&a.q),
        "bound": a.bound,
        "result": outcome,
    }));
    if matches!(outcome, PhiSigmaOutcome::Exhausted { .. }) {
        out = out.note(format!("no square-free z <= {} attains the target", a.bound));
    }
    Ok(out)
}
