use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Default number of bits carried beyond the requested decimal precision.
pub const DEFAULT_GUARD_BITS: u64 = 32;

/// Largest accepted request, in decimal digits.
pub const MAX_DECIMAL_DIGITS: u64 = 100_000_000;

/// `floor(log2(10) * 2^64)`.
const LOG2_10_Q64: u128 = 61_278_757_397_652_712_441;

/// Working precision for every arithmetic call.
///
/// `binary_precision` always covers `decimal_digits` plus `guard_bits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrecisionContext {
    decimal_digits: u64,
    binary_precision: u64,
    guard_bits: u64,
}

/// Builds a context for `decimal_digits` with the default guard.
pub fn make_context(decimal_digits: u64) -> Result<PrecisionContext> {
    PrecisionContext::with_guard_bits(decimal_digits, DEFAULT_GUARD_BITS)
}

/// `ceil(digits * log2(10))`: bits needed to resolve `digits` decimals.
pub fn bits_for_digits(digits: u64) -> u64 {
    let scaled = digits as u128 * LOG2_10_Q64;
    ((scaled + (1u128 << 64) - 1) >> 64) as u64
}

/// Largest decimal digit count a value carrying `prec` bits supports,
/// assuming the minimum guard was reserved when it was produced.
pub fn reliable_digits(prec: u64) -> u64 {
    if prec <= DEFAULT_GUARD_BITS {
        return 0;
    }
    let avail = prec - DEFAULT_GUARD_BITS;
    let mut d = (avail as f64 * std::f64::consts::LOG10_2).floor() as u64;
    while d > 0 && bits_for_digits(d) > avail {
        d -= 1;
    }
    while bits_for_digits(d + 1) <= avail {
        d += 1;
    }
    d
}

impl PrecisionContext {
    pub fn new(decimal_digits: u64) -> Result<PrecisionContext> {
        make_context(decimal_digits)
    }

    pub fn with_guard_bits(decimal_digits: u64, guard_bits: u64) -> Result<PrecisionContext> {
        if decimal_digits == 0 {
            return Err(invalid("decimal digits must be at least 1"));
        }
        if decimal_digits > MAX_DECIMAL_DIGITS {
            return Err(Error::PrecisionCeiling {
                requested: decimal_digits,
                max: MAX_DECIMAL_DIGITS,
            });
        }
        if guard_bits < DEFAULT_GUARD_BITS {
            return Err(invalid(format!(
                "guard bits must be at least {DEFAULT_GUARD_BITS}, got {guard_bits}"
            )));
        }
        Ok(PrecisionContext {
            decimal_digits,
            binary_precision: bits_for_digits(decimal_digits) + guard_bits,
            guard_bits,
        })
    }

    /// Context with exactly `bits` of working precision; the decimal request
    /// is whatever those bits support after the minimum guard.
    pub fn with_binary_precision(bits: u64) -> PrecisionContext {
        let bits = bits.max(DEFAULT_GUARD_BITS + 4);
        let decimal_digits = reliable_digits(bits).max(1);
        PrecisionContext {
            decimal_digits,
            binary_precision: bits,
            guard_bits: bits - bits_for_digits(decimal_digits),
        }
    }

    pub fn decimal_digits(&self) -> u64 {
        self.decimal_digits
    }

    pub fn binary_precision(&self) -> u64 {
        self.binary_precision
    }

    pub fn guard_bits(&self) -> u64 {
        self.guard_bits
    }

    /// Same request with the guard doubled.
    pub fn escalated(&self) -> PrecisionContext {
        self.widened(self.guard_bits)
    }

    /// Same request carrying `extra` additional guard bits.
    pub fn widened(&self, extra: u64) -> PrecisionContext {
        PrecisionContext {
            decimal_digits: self.decimal_digits,
            binary_precision: self.binary_precision + extra,
            guard_bits: self.guard_bits + extra,
        }
    }

    /// Ceiling for automatic guard doubling.
    pub fn max_guard_bits(&self) -> u64 {
        (8 * self.binary_precision).max(1024)
    }
}
