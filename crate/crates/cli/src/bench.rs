use std::hint::black_box;
use std::time::Instant;

use liouville_core::charlike::{summatory_sieve, CharacterProfile};
use liouville_core::{Error, Limits, Result, DEFAULT_SIEVE_BUDGET};
use serde::Serialize;
use serde_json::json;

use crate::args::BenchArgs;
use crate::output::{Outcome, Table};

pub const MIN_REPS: usize = 5;

/// Calls per timed sample for the digit formula, whose single calls sit
/// near the clock resolution.
const DIGIT_BATCH: u32 = 1000;

#[derive(Debug, Clone, Serialize)]
pub struct Cell {
    pub strategy: &'static str,
    pub n: u64,
    pub reps: usize,
    pub median_seconds: Option<f64>,
    pub value: Option<i64>,
    pub status: &'static str,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

pub fn run(args: &BenchArgs, limits: &Limits) -> Result<Outcome> {
    if args.reps < MIN_REPS {
        return Err(Error::Validation(format!(
            "bench needs at least {MIN_REPS} repetitions, got {}",
            args.reps
        )));
    }
    if args.sizes.is_empty() {
        return Err(Error::Validation("bench needs at least one size".into()));
    }
    let profile = CharacterProfile::new(args.p, limits)?;
    let sieve_cap = limits.sieve_budget.min(DEFAULT_SIEVE_BUDGET);
    let mut cells = Vec::new();
    let mut speedups = Vec::new();
    for &n in &args.sizes {
        let samples: Vec<f64> = (0..args.reps)
            .map(|_| {
                let start = Instant::now();
                for _ in 0..DIGIT_BATCH {
                    black_box(profile.summatory(black_box(n)));
                }
                start.elapsed().as_secs_f64() / DIGIT_BATCH as f64
            })
            .collect();
        let digit_value = profile.summatory(n);
        let digit_median = median(samples);
        cells.push(Cell {
            strategy: "digit",
            n,
            reps: args.reps,
            median_seconds: Some(digit_median),
            value: Some(digit_value),
            status: "ok",
        });
        if n > sieve_cap {
            cells.push(Cell {
                strategy: "sieve",
                n,
                reps: 0,
                median_seconds: None,
                value: None,
                status: "over-budget",
            });
            continue;
        }
        let mut samples = Vec::with_capacity(args.reps);
        let mut value = 0;
        for _ in 0..args.reps {
            let start = Instant::now();
            value = summatory_sieve(n, args.p, false, limits)?.value;
            samples.push(start.elapsed().as_secs_f64());
        }
        let sieve_median = median(samples);
        cells.push(Cell {
            strategy: "sieve",
            n,
            reps: args.reps,
            median_seconds: Some(sieve_median),
            value: Some(value),
            status: if value == digit_value { "ok" } else { "mismatch" },
        });
        speedups.push(json!({
            "n": n,
            "speedup": sieve_median / digit_median.max(f64::MIN_POSITIVE),
            "values_agree": value == digit_value,
        }));
    }
    let mut table = Table::new(&["strategy", "n", "reps", "median_seconds", "value", "status"]);
    for c in &cells {
        table.push(vec![
            c.strategy.to_string(),
            c.n.to_string(),
            c.reps.to_string(),
            c.median_seconds.map(|s| format!("{s:.3e}")).unwrap_or_default(),
            c.value.map(|v| v.to_string()).unwrap_or_default(),
            c.status.to_string(),
        ]);
    }
    let mut out = Outcome::new(json!({
        "p": args.p,
        "sieve_cap": sieve_cap,
        "cells": cells,
        "speedups": speedups,
    }))
    .with_table(table);
    for s in &speedups {
        out = out.note(format!(
            "n = {}: digit formula {:.2e}x faster than the sieve",
            s["n"],
            s["speedup"].as_f64().unwrap_or(0.0)
        ));
    }
    if args.sizes.iter().any(|&n| n > sieve_cap) {
        out = out.note(format!("sieve cells above {sieve_cap} are skipped as over-budget"));
    }
    Ok(out)
}
