//! Serialization helpers and textual parsing for exact numbers.
//!
//! Big integers and rationals travel as decimal strings (`"12345"`,
//! `"55/108"`) so JSON consumers never lose precision.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serializer;

use crate::error::{validation, Result};

pub fn ser_biguint<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn ser_biguint_vec<S: Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn ser_rational<S: Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(v))
}

pub fn ser_rational_vec<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

/// `a/b` in lowest terms, or just `a` when the denominator is 1.
pub fn format_rational(v: &BigRational) -> String {
    if v.denom() == &BigInt::from(1) {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Parse `a/b`, an integer, or a finite decimal such as `0.125` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || validation(format!("not a rational number: {s:?}"));
    if let Some((a, b)) = t.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(validation("zero denominator"));
        }
        return Ok(BigRational::new(a, b));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| bad())?,
        };
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let mag = BigRational::new(int_part * &scale + frac_part, scale);
        return Ok(if negative { -mag } else { mag });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Nearest `f64` to an exact rational; stays accurate when numerator and
/// denominator individually overflow `f64`.
pub fn rational_to_f64(v: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (v.numer().to_f64(), v.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = v.numer().bits() as i64;
    let db = v.denom().bits() as i64;
    let shift = 60 - (nb - db);
    let scaled = if shift >= 0 {
        (v.numer().abs() << shift as usize) / v.denom()
    } else {
        (v.numer().abs() >> (-shift) as usize) / v.denom()
    };
    let mag = scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-shift as i32);
    if v.is_negative() {
        -mag
    } else {
        mag
    }
}
