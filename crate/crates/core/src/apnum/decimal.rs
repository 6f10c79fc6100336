//! Decimal rendering. All conversions are exact rational roundings of the
//! binary value, so identical bits always render to identical strings.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Signed, Zero};

use super::context::reliable_digits;
use super::real::{Real, EXACT};
use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecimalRounding {
    /// Round half to even.
    Nearest,
    /// Truncate, as digit listings of constants do.
    TowardZero,
}

fn max_reliable(x: &Real) -> u64 {
    if x.precision() == EXACT {
        u64::MAX
    } else {
        reliable_digits(x.precision())
    }
}

fn pow10(k: u64) -> BigInt {
    Pow::pow(&BigInt::from(10u32), k)
}

/// `|x| * 10^k` rounded to an integer.
fn scaled_integer(x: &Real, k: i64, mode: DecimalRounding) -> BigInt {
    let m = x.mantissa().abs();
    let e = x.exponent();
    let mut num = m;
    let mut den = BigInt::from(1u32);
    if k >= 0 {
        num *= pow10(k as u64);
    } else {
        den *= pow10(k.unsigned_abs());
    }
    if e >= 0 {
        num <<= e as usize;
    } else {
        den <<= e.unsigned_abs() as usize;
    }
    let (q, r) = num.div_rem(&den);
    match mode {
        DecimalRounding::TowardZero => q,
        DecimalRounding::Nearest => {
            let twice: BigInt = r << 1usize;
            match twice.cmp(&den) {
                std::cmp::Ordering::Greater => q + 1,
                std::cmp::Ordering::Equal if q.is_odd() => q + 1,
                _ => q,
            }
        }
    }
}

/// `(digits, e10)` with `digits` exactly `sig` characters and
/// `|x| ~= 0.d1d2... * 10^(e10 + 1)`.
fn significant(x: &Real, sig: u64) -> (String, i64) {
    let log10 = x.log2_abs().unwrap() * std::f64::consts::LOG10_2;
    let mut e10 = log10.floor() as i64;
    let lo = pow10(sig - 1);
    let hi = pow10(sig);
    loop {
        let n = scaled_integer(x, sig as i64 - 1 - e10, DecimalRounding::Nearest);
        if n >= hi {
            e10 += 1;
        } else if n < lo {
            e10 -= 1;
        } else {
            return (n.to_string(), e10);
        }
    }
}

fn check(x: &Real, digits: u64) -> Result<()> {
    if digits == 0 {
        return Err(invalid("digit count must be at least 1"));
    }
    let max = max_reliable(x);
    if digits > max {
        return Err(Error::PrecisionCeiling {
            requested: digits,
            max,
        });
    }
    Ok(())
}

/// Renders `x` with `digits` significant digits in positional notation,
/// rounding to nearest.
pub fn to_decimal(x: &Real, digits: u64) -> Result<String> {
    check(x, digits)?;
    if x.is_zero() {
        return Ok(if digits == 1 {
            "0".to_string()
        } else {
            format!("0.{}", "0".repeat(digits as usize - 1))
        });
    }
    let (ds, e10) = significant(x, digits);
    let sign = if x.is_negative() { "-" } else { "" };
    let body = if e10 >= 0 {
        let int_len = e10 as usize + 1;
        if int_len >= ds.len() {
            format!("{ds}{}", "0".repeat(int_len - ds.len()))
        } else {
            format!("{}.{}", &ds[..int_len], &ds[int_len..])
        }
    } else {
        format!("0.{}{ds}", "0".repeat((-e10 - 1) as usize))
    };
    Ok(format!("{sign}{body}"))
}

/// Renders `x` as `d.ddd…e±N` with `digits` significant digits.
pub fn to_scientific(x: &Real, digits: u64) -> Result<String> {
    check(x, digits)?;
    if x.is_zero() {
        return Ok("0".to_string());
    }
    let (ds, e10) = significant(x, digits);
    let sign = if x.is_negative() { "-" } else { "" };
    let mantissa = if ds.len() > 1 {
        format!("{}.{}", &ds[..1], &ds[1..])
    } else {
        ds
    };
    Ok(format!("{sign}{mantissa}e{e10}"))
}

/// Renders `x` with exactly `places` digits after the decimal point.
///
/// Fails when the implied number of significant digits exceeds what the
/// value's precision supports.
pub fn to_fixed(x: &Real, places: u64, mode: DecimalRounding) -> Result<String> {
    let n = scaled_integer(x, places as i64, mode);
    if !x.is_zero() {
        let e10 = (x.log2_abs().unwrap() * std::f64::consts::LOG10_2).floor() as i64;
        let sig = (e10 + 1 + places as i64).max(1) as u64;
        let max = max_reliable(x);
        if sig > max {
            return Err(Error::PrecisionCeiling {
                requested: sig,
                max,
            });
        }
    }
    let s = n.to_string();
    let places = places as usize;
    let s = if s.len() <= places {
        format!("{}{s}", "0".repeat(places + 1 - s.len()))
    } else {
        s
    };
    let (int_part, frac) = s.split_at(s.len() - places);
    let sign = if x.is_negative() && !n.is_zero() {
        "-"
    } else {
        ""
    };
    Ok(if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    })
}
