use num_bigint::BigInt;
use num_traits::Pow;
use serde::Serialize;

use crate::apnum::{reliable_digits, to_decimal, to_scientific, PrecisionContext, Real, EXACT};
use crate::error::{invalid, Result};

/// One row of a convergence table.
#[derive(Clone, Debug)]
pub struct ConvergenceRecord {
    pub n: u32,
    pub estimate_rendered: String,
    /// `|estimate - reference|`.
    pub abs_error: Real,
    pub correct_digits: u64,
    /// Observed order `log(e[n+1]/e[n]) / log(e[n]/e[n-1])`, when the three
    /// errors around this row are all above the precision floor.
    pub local_order: Option<f64>,
}

/// Flat, serializable form of a [`ConvergenceRecord`]. Field order and
/// names match the CSV header `n,estimate,abs_error,correct_digits,local_order`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: u32,
    pub estimate: String,
    pub abs_error: String,
    pub correct_digits: u64,
    pub local_order: Option<f64>,
}

/// Significant digits used when rendering absolute errors.
const ERROR_DIGITS: u64 = 6;

impl ConvergenceRecord {
    pub fn row(&self) -> ConvergenceRow {
        ConvergenceRow {
            n: self.n,
            estimate: self.estimate_rendered.clone(),
            abs_error: to_scientific(&self.abs_error, ERROR_DIGITS)
                .unwrap_or_else(|_| "0".to_string()),
            correct_digits: self.correct_digits,
            local_order: self.local_order.map(|p| (p * 1e4).round() / 1e4),
        }
    }
}

/// Number of leading decimal digits on which `approx` matches `reference`:
/// `floor(-log10(|approx - reference| / |reference|))`, clamped to
/// `[0, reliable digits of the less precise input]`.
pub fn correct_digits(approx: &Real, reference: &Real) -> Result<u64> {
    if reference.is_zero() {
        return Err(invalid("reference value must be non-zero"));
    }
    let prec = approx.precision().min(reference.precision());
    let ceiling = if prec == EXACT {
        u64::MAX
    } else {
        reliable_digits(prec)
    };
    let approx_bits = approx.top().unwrap_or(0) - approx.exponent();
    let reference_bits = reference.top().unwrap_or(0) - reference.exponent();
    let span = approx.top().unwrap_or(0).max(reference.top().unwrap_or(0))
        - approx.exponent().min(reference.exponent());
    // enough bits that the difference is exact
    let ctx = PrecisionContext::with_binary_precision(
        (span.max(approx_bits).max(reference_bits) as u64) + 2,
    );
    let diff = ctx.sub(approx, reference);
    if diff.is_zero() {
        return Ok(ceiling);
    }
    let digits = floor_neg_log10_ratio(&diff.abs(), &reference.abs());
    Ok(digits.clamp(0, ceiling.min(i64::MAX as u64) as i64) as u64)
}

/// `floor(-log10(num / den))` for positive `num`, `den`: the largest `k`
/// with `num * 10^k <= den`. Decided by exact integer comparisons.
fn floor_neg_log10_ratio(num: &Real, den: &Real) -> i64 {
    let ten = BigInt::from(10u32);
    let fits = |k: i64| -> bool {
        if k >= 0 {
            let scaled = Real::exact(num.mantissa() * Pow::pow(&ten, k as u64), num.exponent());
            scaled.cmp_exact(den).is_le()
        } else {
            let scaled = Real::exact(
                den.mantissa() * Pow::pow(&ten, k.unsigned_abs()),
                den.exponent(),
            );
            num.cmp_exact(&scaled).is_le()
        }
    };
    let log2_ratio = num.log2_abs().unwrap() - den.log2_abs().unwrap();
    let mut k = (-log2_ratio * std::f64::consts::LOG10_2).floor() as i64;
    while !fits(k) {
        k -= 1;
    }
    while fits(k + 1) {
        k += 1;
    }
    k
}

/// Local convergence orders of an error sequence.
///
/// Entry `i` estimates the order at interior index `i + 1`. All errors must
/// be strictly positive.
pub fn convergence_orders(errors: &[Real]) -> Result<Vec<Option<f64>>> {
    orders_above(errors, None)
}

/// Like [`convergence_orders`], but entries whose three errors are not all
/// strictly above `floor` are `None`.
pub fn convergence_orders_above(errors: &[Real], floor: &Real) -> Result<Vec<Option<f64>>> {
    orders_above(errors, Some(floor))
}

fn orders_above(errors: &[Real], floor: Option<&Real>) -> Result<Vec<Option<f64>>> {
    if errors.len() < 3 {
        return Err(invalid("order estimation needs at least three errors"));
    }
    if errors.iter().any(|e| !e.is_positive()) {
        return Err(invalid("errors must be strictly positive"));
    }
    let logs: Vec<f64> = errors.iter().map(|e| e.log2_abs().unwrap()).collect();
    let usable = |e: &Real| floor.is_none_or(|f| e.cmp_exact(f).is_gt());
    Ok((1..errors.len() - 1)
        .map(|i| {
            if !(usable(&errors[i - 1]) && usable(&errors[i]) && usable(&errors[i + 1])) {
                return None;
            }
            local_order(logs[i - 1], logs[i], logs[i + 1])
        })
        .collect())
}

fn local_order(prev: f64, cur: f64, next: f64) -> Option<f64> {
    let den = cur - prev;
    if den == 0.0 {
        return None;
    }
    Some((next - cur) / den)
}

/// Errors at or below this are indistinguishable from rounding noise for
/// a value near `reference` computed at `ctx`.
pub fn precision_floor(reference: &Real, ctx: &PrecisionContext) -> Real {
    let shift = ctx.guard_bits() as i64 - ctx.binary_precision() as i64;
    reference.abs().mul_pow2(shift)
}

/// Builds one record per `(n, estimate)` against `reference`.
///
/// Order estimates use only the errors inside this table.
pub fn convergence_table(
    estimates: &[(u32, Real)],
    reference: &Real,
    ctx: &PrecisionContext,
) -> Result<Vec<ConvergenceRecord>> {
    let floor = precision_floor(reference, ctx);
    let mut records = Vec::with_capacity(estimates.len());
    for (n, est) in estimates {
        let render_digits = ctx.decimal_digits().min(reliable_digits(est.precision()));
        records.push(ConvergenceRecord {
            n: *n,
            estimate_rendered: to_decimal(est, render_digits.max(1))?,
            abs_error: ctx.sub(est, reference).abs(),
            correct_digits: correct_digits(est, reference)?,
            local_order: None,
        });
    }
    for i in 1..records.len().saturating_sub(1) {
        let window = [
            &records[i - 1].abs_error,
            &records[i].abs_error,
            &records[i + 1].abs_error,
        ];
        if window.iter().all(|e| e.cmp_exact(&floor).is_gt()) {
            records[i].local_order = local_order(
                window[0].log2_abs().unwrap(),
                window[1].log2_abs().unwrap(),
                window[2].log2_abs().unwrap(),
            );
        }
    }
    Ok(records)
}
