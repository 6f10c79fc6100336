//! Correctly rounded arithmetic at a context's binary precision.
//!
//! Every operation computes the exact result (or an integer quotient/root
//! plus an inexact flag) and rounds once, ties to even.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use super::context::PrecisionContext;
use super::real::{round_mag, split, Real};
use super::stats;
use crate::error::{domain, invalid, Result};

/// Outcome of a subtraction evaluated under automatic guard escalation.
#[derive(Clone, Debug)]
pub struct Escalated {
    pub minuend: Real,
    pub subtrahend: Real,
    /// `minuend - subtrahend`, exact-as-rounded at `context`.
    pub difference: Real,
    /// Context the accepted evaluation ran at.
    pub context: PrecisionContext,
}

impl PrecisionContext {
    fn prec(&self) -> u64 {
        self.binary_precision()
    }

    /// Rounds `x` into this context.
    pub fn round(&self, x: &Real) -> Real {
        x.with_precision(self.prec())
    }

    pub fn from_int(&self, v: i64) -> Real {
        self.round(&Real::exact_int(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Real {
        self.round(&Real::exact_bigint(v.clone()))
    }

    /// `num / den` rounded once.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Real> {
        self.div(
            &Real::exact_bigint(num.clone()),
            &Real::exact_bigint(den.clone()),
        )
    }

    pub fn add(&self, x: &Real, y: &Real) -> Real {
        self.add_signed(x, y, false)
    }

    pub fn sub(&self, x: &Real, y: &Real) -> Real {
        self.add_signed(x, y, true)
    }

    fn add_signed(&self, x: &Real, y: &Real, negate_y: bool) -> Real {
        let y = if negate_y { y.neg() } else { y.clone() };
        if y.is_zero() {
            return self.round(x);
        }
        if x.is_zero() {
            return self.round(&y);
        }
        let p = self.prec();
        let (big, small) = if x.top() >= y.top() { (x, &y) } else { (&y, x) };
        // Pad the larger operand to p + 3 bits; if the smaller one sits
        // entirely below that, it only contributes a sticky bit.
        let big_bits = big.mantissa().bits();
        let pad = (p + 3).saturating_sub(big_bits);
        let low = big.exponent() - pad as i64;
        if small.top().unwrap() < low {
            let (neg, mag) = split(big.mantissa());
            let mag = mag << pad as usize;
            let same_sign = big.signum() == small.signum();
            let mag = if same_sign {
                (mag << 1usize) | BigUint::one()
            } else {
                (mag << 1usize) - BigUint::one()
            };
            return round_mag(neg, mag, low - 1, p, false);
        }
        let e = x.exponent().min(y.exponent());
        let mx = x.mantissa() << (x.exponent() - e) as usize;
        let my = y.mantissa() << (y.exponent() - e) as usize;
        let (neg, mag) = split(&(mx + my));
        round_mag(neg, mag, e, p, false)
    }

    pub fn mul(&self, x: &Real, y: &Real) -> Real {
        let (neg, mag) = split(&(x.mantissa() * y.mantissa()));
        round_mag(neg, mag, x.exponent() + y.exponent(), self.prec(), false)
    }

    pub fn sqr(&self, x: &Real) -> Real {
        self.mul(x, x)
    }

    /// `x^k` by repeated squaring, rounding after every product.
    pub fn powu(&self, x: &Real, k: u32) -> Real {
        if k == 0 {
            return self.from_int(1);
        }
        let mut result: Option<Real> = None;
        let mut base = self.round(x);
        let mut k = k;
        loop {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => self.mul(&r, &base),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = self.sqr(&base);
        }
        result.unwrap()
    }

    /// Multiplication by an exact integer.
    pub fn mul_int(&self, x: &Real, k: &BigInt) -> Real {
        self.mul(x, &Real::exact_bigint(k.clone()))
    }

    pub fn div(&self, x: &Real, y: &Real) -> Result<Real> {
        if y.is_zero() {
            return Err(domain("division by zero"));
        }
        if x.is_zero() {
            return Ok(Real::zero().with_precision(self.prec()));
        }
        let p = self.prec();
        let (nx, mx) = split(x.mantissa());
        let (ny, my) = split(y.mantissa());
        let shift = (p + 3 + my.bits()).saturating_sub(mx.bits());
        let num = mx << shift as usize;
        let (q, r) = num.div_rem(&my);
        let exp = x.exponent() - y.exponent() - shift as i64;
        Ok(round_mag(nx != ny, q, exp, p, !r.is_zero()))
    }

    pub fn recip(&self, x: &Real) -> Result<Real> {
        self.div(&Real::one(), x)
    }

    /// Correctly rounded square root. `sqrt(0) = 0` exactly.
    pub fn sqrt(&self, x: &Real) -> Result<Real> {
        if x.is_negative() {
            return Err(domain("square root of a negative number"));
        }
        stats::count_sqrt();
        Ok(self.kth_root(x, 2))
    }

    /// Correctly rounded k-th root for k in {2, 3, 4}.
    pub fn root(&self, x: &Real, k: u32) -> Result<Real> {
        if !(2..=4).contains(&k) {
            return Err(invalid(format!("root index must be 2, 3 or 4, got {k}")));
        }
        if x.is_negative() {
            return Err(domain(format!("root of index {k} of a negative number")));
        }
        stats::count_root();
        Ok(self.kth_root(x, k))
    }

    fn kth_root(&self, x: &Real, k: u32) -> Real {
        let p = self.prec();
        if x.is_zero() {
            return Real::zero().with_precision(p);
        }
        let (_, m) = split(x.mantissa());
        let e = x.exponent();
        let kk = k as u64;
        // Enough bits that the integer root carries at least p + 3 bits,
        // and an exponent divisible by k.
        let mut shift = (kk * (p + 3)).saturating_sub(m.bits());
        shift += (e - shift as i64).rem_euclid(k as i64) as u64;
        let n = m << shift as usize;
        let r = if k == 2 { n.sqrt() } else { n.nth_root(k) };
        let exact = Pow::pow(&r, k) == n;
        let exp = (e - shift as i64) / k as i64;
        round_mag(false, r, exp, p, !exact)
    }

    /// Evaluates `minuend - subtrahend` where both operands come from
    /// `operands`, doubling the guard and re-evaluating while the
    /// subtraction cancels more than half of the guard bits.
    ///
    /// Re-evaluation stops at [`PrecisionContext::max_guard_bits`]; an exact
    /// zero difference is treated as total cancellation.
    pub fn sub_escalating<F>(&self, operands: F) -> Result<Escalated>
    where
        F: Fn(&PrecisionContext) -> Result<(Real, Real)>,
    {
        self.sub_escalating_capped(self.max_guard_bits(), operands)
    }

    /// [`sub_escalating`](Self::sub_escalating) with an explicit guard ceiling.
    pub fn sub_escalating_capped<F>(&self, cap: u64, operands: F) -> Result<Escalated>
    where
        F: Fn(&PrecisionContext) -> Result<(Real, Real)>,
    {
        let mut ctx = *self;
        loop {
            let (minuend, subtrahend) = operands(&ctx)?;
            let difference = ctx.sub(&minuend, &subtrahend);
            let lost = cancelled_bits(&minuend, &subtrahend, &difference);
            if lost <= ctx.guard_bits() / 2 || ctx.guard_bits() * 2 > cap {
                return Ok(Escalated {
                    minuend,
                    subtrahend,
                    difference,
                    context: ctx,
                });
            }
            ctx = ctx.escalated();
        }
    }
}

/// Leading bits lost when forming `diff = x - y`.
pub fn cancelled_bits(x: &Real, y: &Real, diff: &Real) -> u64 {
    let top = match (x.top(), y.top()) {
        (Some(a), Some(b)) => a.max(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => return 0,
    };
    match diff.top() {
        None => u64::MAX,
        Some(d) => (top - d).max(0) as u64,
    }
}

/// `base^exp` as an exact integer.
pub fn int_pow(base: u32, exp: u32) -> BigInt {
    Pow::pow(&BigInt::from(base), exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apnum::make_context;

    fn ctx(d: u64) -> PrecisionContext {
        make_context(d).unwrap()
    }

    #[test]
    fn sqrt_exact_cases() {
        let c = ctx(30);
        assert!(c
            .sqrt(&Real::one())
            .unwrap()
            .cmp_exact(&Real::one())
            .is_eq());
        assert!(c.sqrt(&Real::zero()).unwrap().is_zero());
        assert!(c.sqrt(&Real::exact_int(-1)).is_err());
        assert!(c
            .root(&Real::exact_int(16), 4)
            .unwrap()
            .cmp_exact(&Real::exact_int(2))
            .is_eq());
    }

    #[test]
    fn root_rejects_bad_index() {
        let c = ctx(10);
        assert!(c.root(&Real::exact_int(8), 5).is_err());
        assert!(c.root(&Real::exact_int(8), 1).is_err());
        assert!(c.root(&Real::exact_int(-8), 3).is_err());
    }

    #[test]
    fn addition_with_far_operand_rounds_correctly() {
        let c = ctx(10);
        let one = Real::one();
        let tiny = Real::exact_pow2(-10_000);
        let s = c.add(&one, &tiny);
        assert!(s.cmp_exact(&one).is_eq());
        let d = c.sub(&one, &tiny);
        assert!(d.cmp_exact(&one).is_eq());
        // just below 1 the spacing halves, still rounds back to 1
        let d = c.sub(&Real::exact_pow2(-1), &tiny);
        assert!(d.cmp_exact(&Real::exact_pow2(-1)).is_eq());
    }

    #[test]
    fn division_rounds_to_nearest() {
        let c = ctx(10);
        let third = c.from_ratio(&BigInt::from(1), &BigInt::from(3)).unwrap();
        // 1/3 = 0.0101...b; check error below half an ulp
        let back = c.mul(&third, &Real::exact_int(3));
        let err = c.sub(&back, &Real::one()).abs();
        assert!(err < Real::exact_pow2(-(c.binary_precision() as i64) + 1));
        assert!(c.div(&Real::one(), &Real::zero()).is_err());
    }

    #[test]
    fn powu_matches_repeated_multiplication() {
        let c = ctx(40);
        let x = c.from_ratio(&BigInt::from(7), &BigInt::from(5)).unwrap();
        let p4 = c.powu(&x, 4);
        let m = c.mul(&c.mul(&x, &x), &c.mul(&x, &x));
        assert!(p4.cmp_exact(&m).is_eq());
        assert!(c.powu(&x, 0).cmp_exact(&Real::one()).is_eq());
    }

    #[test]
    fn escalation_recovers_cancelled_bits() {
        let c = ctx(20);
        let tiny = Real::exact_pow2(-200);
        // 1 - sqrt(1 - tiny^2) ~ tiny^2 / 2 is invisible at 20 digits
        let esc = c
            .sub_escalating(|cc| {
                let q = cc.sqrt(&cc.sub(&Real::one(), &cc.sqr(&tiny)))?;
                Ok((Real::one(), q))
            })
            .unwrap();
        assert!(esc.context.guard_bits() > c.guard_bits());
        let expected = Real::exact_pow2(-401);
        let rel = c
            .div(&c.sub(&esc.difference, &expected), &expected)
            .unwrap();
        assert!(rel.abs() < Real::exact_pow2(-(c.binary_precision() as i64)));
    }

    #[test]
    fn cancellation_count() {
        let c = ctx(10);
        let a = c.from_int(1024);
        let b = c.from_int(1023);
        let d = c.sub(&a, &b);
        assert_eq!(cancelled_bits(&a, &b, &d), 10);
        assert_eq!(cancelled_bits(&a, &a, &c.sub(&a, &a)), u64::MAX);
    }
}
