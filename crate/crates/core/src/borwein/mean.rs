use serde::Serialize;

use crate::agm::MAX_ITERATIONS;
use crate::apnum::{int_pow, PrecisionContext, Real};
use crate::error::{domain, Error, Result};

/// The two higher-order means behind the cubic and quartic-analog
/// iterations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanVariant {
    /// `a' = (a + 2b)/3`, `b' = cbrt(b (a^2 + ab + b^2) / 3)`;
    /// sum of `3^k (a_k^2 - a_{k+1}^2)` tends to `1/3 - M^2/pi`.
    Cubic,
    /// `a' = (a + b)/2`, `b' = (ab (a^2 + b^2) / 2)^(1/4)`;
    /// sum of `4^k (a_k^4 - a_{k+1}^4)` tends to `1/4 - 3 M^4 / (4 pi)`.
    Quartic,
}

#[derive(Clone, Debug)]
pub struct MeanState {
    pub variant: MeanVariant,
    pub n: u32,
    pub a: Real,
    pub b: Real,
    pub weighted_sum: Real,
}

impl MeanState {
    pub fn new(variant: MeanVariant, a: Real, b: Real) -> MeanState {
        MeanState {
            variant,
            n: 0,
            a,
            b,
            weighted_sum: Real::zero(),
        }
    }

    fn is_converged(&self, ctx: &PrecisionContext) -> bool {
        let gap = ctx.sub(&self.a, &self.b).abs();
        let shift = (ctx.guard_bits() / 2) as i64 - ctx.binary_precision() as i64;
        gap.is_zero() || gap.cmp_exact(&self.a.abs().mul_pow2(shift)).is_le()
    }
}

/// `a_0 = 1` with the variant's `b_0`: `cbrt(18 - 6 sqrt 3) / 2` (cubic) or
/// `(12 sqrt 2 - 16)^(1/4)` (quartic).
pub fn mean_start(variant: MeanVariant, ctx: &PrecisionContext) -> Result<MeanState> {
    let b0 = match variant {
        MeanVariant::Cubic => {
            let s3 = ctx.sqrt(&Real::exact_int(3))?;
            let inner = ctx.sub(&Real::exact_int(18), &ctx.mul_int(&s3, &6.into()));
            ctx.root(&inner, 3)?.mul_pow2(-1)
        }
        MeanVariant::Quartic => {
            let s2 = ctx.sqrt(&Real::exact_int(2))?;
            let inner = ctx.sub(&ctx.mul_int(&s2, &12.into()), &Real::exact_int(16));
            ctx.root(&inner, 4)?
        }
    };
    Ok(MeanState::new(variant, ctx.from_int(1), b0))
}

/// One step of the selected mean iteration, accumulating the weighted
/// difference of consecutive `a` powers.
pub fn mean_step(state: &MeanState, ctx: &PrecisionContext) -> Result<MeanState> {
    let (a, b) = (&state.a, &state.b);
    if !a.is_positive() || !b.is_positive() {
        return Err(domain("mean iteration needs positive a and b"));
    }
    let wide = ctx.widened(ctx.binary_precision() + 2);
    let (a_next, b_next, term) = match state.variant {
        MeanVariant::Cubic => {
            let a_next = ctx.div(&ctx.add(a, &b.mul_pow2(1)), &Real::exact_int(3))?;
            let quad = ctx.add(&ctx.add(&ctx.sqr(a), &ctx.mul(a, b)), &ctx.sqr(b));
            let inner = ctx.div(&ctx.mul(b, &quad), &Real::exact_int(3))?;
            let b_next = ctx.root(&inner, 3)?;
            // a^2 - a'^2 with the gap formed exactly
            let diff = ctx.mul(&wide.sub(a, &a_next), &ctx.add(a, &a_next));
            (a_next, b_next, ctx.mul_int(&diff, &int_pow(3, state.n)))
        }
        MeanVariant::Quartic => {
            let a_next = ctx.add(a, b).mul_pow2(-1);
            let sum_sq = ctx.add(&ctx.sqr(a), &ctx.sqr(b));
            let inner = ctx.mul(&ctx.mul(a, b), &sum_sq).mul_pow2(-1);
            let b_next = ctx.root(&inner, 4)?;
            // a^4 - a'^4 = (a - a')(a + a')(a^2 + a'^2)
            let diff = ctx.mul(
                &ctx.mul(&wide.sub(a, &a_next), &ctx.add(a, &a_next)),
                &ctx.add(&ctx.sqr(a), &ctx.sqr(&a_next)),
            );
            (a_next, b_next, ctx.mul_int(&diff, &int_pow(4, state.n)))
        }
    };
    Ok(MeanState {
        variant: state.variant,
        n: state.n + 1,
        a: a_next,
        b: b_next,
        weighted_sum: ctx.add(&state.weighted_sum, &term),
    })
}

/// States `0..=steps` from the variant's standard start.
pub fn mean_trace(
    variant: MeanVariant,
    steps: u32,
    ctx: &PrecisionContext,
) -> Result<Vec<MeanState>> {
    let mut trace = vec![mean_start(variant, ctx)?];
    for _ in 0..steps {
        let next = mean_step(trace.last().unwrap(), ctx)?;
        trace.push(next);
    }
    Ok(trace)
}

/// Common limit `M` and converged weighted sum from the standard start.
pub fn mean_limit(variant: MeanVariant, ctx: &PrecisionContext) -> Result<(Real, Real)> {
    mean_limit_from(mean_start(variant, ctx)?, ctx)
}

/// Iterates until `|a - b| <= 2^(guard/2 - precision) a`, then takes one
/// more step so the last non-negligible sum term is included.
pub fn mean_limit_from(state: MeanState, ctx: &PrecisionContext) -> Result<(Real, Real)> {
    let mut state = state;
    for _ in 0..MAX_ITERATIONS {
        if state.is_converged(ctx) {
            let last = mean_step(&state, ctx)?;
            return Ok((state.a, last.weighted_sum));
        }
        state = mean_step(&state, ctx)?;
    }
    Err(Error::NoConvergence {
        what: "mean iteration".into(),
        iterations: MAX_ITERATIONS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apnum::{make_context, to_decimal};
    use crate::verify::machin_pi;

    #[test]
    fn first_steps() {
        let c = make_context(30).unwrap();
        let s = mean_start(MeanVariant::Cubic, &c).unwrap();
        assert_eq!(to_decimal(&s.b, 7).unwrap(), "0.9833792");
        let s1 = mean_step(&s, &c).unwrap();
        assert_eq!(to_decimal(&s1.a, 7).unwrap(), "0.9889195");
        let q = mean_start(MeanVariant::Quartic, &c).unwrap();
        assert_eq!(to_decimal(&q.b, 7).unwrap(), "0.9925580");
        let q1 = mean_step(&q, &c).unwrap();
        assert_eq!(to_decimal(&q1.a, 7).unwrap(), "0.9962790");
    }

    #[test]
    fn equal_inputs_are_fixed() {
        let c = make_context(25).unwrap();
        let x = c.from_ratio(&5.into(), &9.into()).unwrap();
        for v in [MeanVariant::Cubic, MeanVariant::Quartic] {
            let s = MeanState::new(v, x.clone(), x.clone());
            let t = mean_step(&s, &c).unwrap();
            assert!(t.a == x && t.b == x, "{v:?}");
            assert!(t.weighted_sum.is_zero());
            let (m, sum) = mean_limit_from(s, &c).unwrap();
            assert!(m.cmp_exact(&x).is_eq());
            assert!(sum.is_zero());
        }
    }

    #[test]
    fn residual_identities_hold() {
        let d = 60;
        let c = make_context(d).unwrap();
        let pi = machin_pi(&c);
        let tol =
            Real::exact(1.into(), 0).mul_pow2(-((crate::apnum::bits_for_digits(d - 10)) as i64));
        let (m, sum) = mean_limit(MeanVariant::Cubic, &c).unwrap();
        let rhs = c.sub(
            &c.div(&Real::one(), &Real::exact_int(3)).unwrap(),
            &c.div(&c.sqr(&m), &pi).unwrap(),
        );
        assert!(c.sub(&sum, &rhs).abs() < tol);
        let (m, sum) = mean_limit(MeanVariant::Quartic, &c).unwrap();
        let m4 = c.sqr(&c.sqr(&m));
        let rhs = c.sub(
            &Real::exact_pow2(-2),
            &c.div(&c.mul_int(&m4, &3.into()), &c.mul_int(&pi, &4.into()))
                .unwrap(),
        );
        assert!(c.sub(&sum, &rhs).abs() < tol);
    }

    #[test]
    fn rejects_non_positive() {
        let c = make_context(10).unwrap();
        let s = MeanState::new(MeanVariant::Quartic, Real::zero(), Real::one());
        assert!(mean_step(&s, &c).is_err());
    }
}
