//! Precision-managed binary floating point.
//!
//! [`Real`] values are immutable; all rounding happens inside
//! [`PrecisionContext`] methods, which are pure functions of their inputs.

mod context;
mod decimal;
mod ops;
mod real;
pub mod stats;

pub use context::{
    bits_for_digits, make_context, reliable_digits, PrecisionContext, DEFAULT_GUARD_BITS,
    MAX_DECIMAL_DIGITS,
};
pub use decimal::{to_decimal, to_fixed, to_scientific, DecimalRounding};
pub use ops::{cancelled_bits, int_pow, Escalated};
pub use real::{Real, EXACT};

use crate::error::Result;

/// Square root at `ctx`; see [`PrecisionContext::sqrt`].
pub fn sqrt(x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    ctx.sqrt(x)
}

/// k-th root at `ctx` for k in {2, 3, 4}.
pub fn root(x: &Real, k: u32, ctx: &PrecisionContext) -> Result<Real> {
    ctx.root(x, k)
}
