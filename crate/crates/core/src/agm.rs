//! The arithmetic-geometric mean and what Gauss's weighted sum of squared
//! differences gives for pi.
//!
//! Started at `a = 1, b = 1/sqrt(2)` the sum `S = sum_k 2^k (a_k^2 - b_k^2)`
//! satisfies `S = 1 - 2 M^2 / pi` where `M` is the common limit. Solving for
//! pi with partial sums is the Salamin–Brent iteration; the same sum also
//! defines a sequence `r_n` tending to `1/pi` that the quadratic Borwein
//! recurrence reproduces exactly.

use crate::apnum::{PrecisionContext, Real};
use crate::error::{domain, invalid, Error, Result};
use crate::verify::{correct_digits, machin_pi};

/// Iteration budget for anything that runs "to convergence".
pub(crate) const MAX_ITERATIONS: u32 = 200;

/// `(a_n, b_n)` with the partial sum `sum_{k<n} 2^k (a_k^2 - b_k^2)`.
#[derive(Clone, Debug)]
pub struct AgmState {
    pub n: u32,
    pub a: Real,
    pub b: Real,
    pub weighted_sum: Real,
}

impl AgmState {
    pub fn new(a: Real, b: Real) -> AgmState {
        AgmState {
            n: 0,
            a,
            b,
            weighted_sum: Real::zero(),
        }
    }

    /// `a_0 = 1`, `b_0 = 1/sqrt(2)`.
    pub fn gauss_start(ctx: &PrecisionContext) -> Result<AgmState> {
        let b0 = ctx.sqrt(&Real::exact_pow2(-1))?;
        Ok(AgmState::new(ctx.from_int(1), b0))
    }

    /// `a_n^2 - b_n^2`, with the subtraction performed exactly.
    pub fn square_gap(&self, ctx: &PrecisionContext) -> Real {
        let wide = ctx.widened(ctx.binary_precision() + 2);
        let gap = wide.sub(&self.a, &self.b);
        ctx.mul(&gap, &ctx.add(&self.a, &self.b))
    }

    /// True once `|a - b| <= 2^(guard/2 - precision) * a`.
    pub fn is_converged(&self, ctx: &PrecisionContext) -> bool {
        let gap = ctx.sub(&self.a, &self.b).abs();
        if gap.is_zero() {
            return true;
        }
        let shift = (ctx.guard_bits() / 2) as i64 - ctx.binary_precision() as i64;
        gap.cmp_exact(&self.a.abs().mul_pow2(shift)).is_le()
    }
}

/// One AGM step: `(n+1, (a+b)/2, sqrt(ab), sum + 2^n (a^2 - b^2))`.
pub fn agm_step(state: &AgmState, ctx: &PrecisionContext) -> Result<AgmState> {
    if !state.a.is_positive() || !state.b.is_positive() {
        return Err(domain("AGM needs positive a and b"));
    }
    let term = state.square_gap(ctx).mul_pow2(state.n as i64);
    Ok(AgmState {
        n: state.n + 1,
        a: ctx.add(&state.a, &state.b).mul_pow2(-1),
        b: ctx.sqrt(&ctx.mul(&state.a, &state.b))?,
        weighted_sum: ctx.add(&state.weighted_sum, &term),
    })
}

/// States `0..=steps` of the iteration from `(1, 1/sqrt(2))`.
pub fn agm_trace(steps: u32, ctx: &PrecisionContext) -> Result<Vec<AgmState>> {
    let mut trace = vec![AgmState::gauss_start(ctx)?];
    for _ in 0..steps {
        let next = agm_step(trace.last().unwrap(), ctx)?;
        trace.push(next);
    }
    Ok(trace)
}

/// Arithmetic-geometric mean of `a0` and `b0`, with the number of steps
/// taken to reach `|a - b| <= 2^(guard/2 - precision) * a`.
pub fn agm_limit(a0: &Real, b0: &Real, ctx: &PrecisionContext) -> Result<(Real, u32)> {
    if !a0.is_positive() || !b0.is_positive() {
        return Err(domain("AGM needs positive a and b"));
    }
    let mut state = AgmState::new(ctx.round(a0), ctx.round(b0));
    for steps in 0..MAX_ITERATIONS {
        if state.is_converged(ctx) {
            return Ok((state.a, steps));
        }
        state = agm_step(&state, ctx)?;
    }
    Err(Error::NoConvergence {
        what: "arithmetic-geometric mean".into(),
        iterations: MAX_ITERATIONS,
    })
}

/// `M(1, 1/sqrt(2))`.
pub fn gauss_mean(ctx: &PrecisionContext) -> Result<Real> {
    let start = AgmState::gauss_start(ctx)?;
    agm_limit(&start.a, &start.b, ctx).map(|(m, _)| m)
}

/// `sum_{k=0}^{terms-1} 2^k (a_k^2 - b_k^2)` from `(1, 1/sqrt(2))`.
pub fn gauss_sum(terms: u32, ctx: &PrecisionContext) -> Result<Real> {
    if terms < 1 {
        return Err(invalid("gauss_sum needs at least one term"));
    }
    let mut state = AgmState::gauss_start(ctx)?;
    for _ in 0..terms {
        state = agm_step(&state, ctx)?;
    }
    Ok(state.weighted_sum)
}

/// Salamin–Brent estimate of pi from a state reached by at least one step.
///
/// Uses `M ~ (a_n + b_n)/2` and the sum through the current index:
/// `pi ~ (a_n + b_n)^2 / 2 / (1 - S_n - 2^n (a_n^2 - b_n^2))`.
pub fn salamin_brent_estimate(state: &AgmState, ctx: &PrecisionContext) -> Result<Real> {
    let mean = ctx.add(&state.a, &state.b);
    let numer = ctx.sqr(&mean).mul_pow2(-1);
    let current = state.square_gap(ctx).mul_pow2(state.n as i64);
    let denom = ctx.sub(&ctx.sub(&Real::one(), &state.weighted_sum), &current);
    ctx.div(&numer, &denom)
}

/// Result of [`salamin_brent_pi`].
#[derive(Clone, Debug)]
pub struct SalaminBrent {
    pub pi: Real,
    /// Estimate after each AGM step, starting with step 1.
    pub estimates: Vec<Real>,
}

/// Pi by the Gauss–Salamin–Brent iteration, stopping once two successive
/// estimates agree to the context's decimal digits.
pub fn salamin_brent_pi(ctx: &PrecisionContext) -> Result<SalaminBrent> {
    let target = ctx.decimal_digits();
    let mut state = AgmState::gauss_start(ctx)?;
    let mut estimates: Vec<Real> = Vec::new();
    for _ in 0..MAX_ITERATIONS {
        state = agm_step(&state, ctx)?;
        let est = salamin_brent_estimate(&state, ctx)?;
        let agreed = match estimates.last() {
            Some(prev) => correct_digits(prev, &est)? >= target,
            None => false,
        };
        estimates.push(est);
        if agreed {
            return Ok(SalaminBrent {
                pi: estimates.last().unwrap().clone(),
                estimates,
            });
        }
    }
    Err(Error::NoConvergence {
        what: "Salamin-Brent estimates".into(),
        iterations: MAX_ITERATIONS,
    })
}

/// `r_n = M^2 / (pi a_n^2) + (1 / (2 a_n^2)) sum_{k>=n} 2^k (a_k^2 - b_k^2)`,
/// with pi from the Machin oracle and `M` from [`agm_limit`], evaluated
/// with 64 extra bits and rounded once.
///
/// The tail stops once a term, or the next term predicted from the current
/// gap (`2^k (a_k - b_k)^2 / 2`), drops below `2^-precision`.
pub fn gauss_r(n: u32, ctx: &PrecisionContext) -> Result<Real> {
    let wide = ctx.widened(64);
    Ok(ctx.round(&gauss_r_at(n, &wide)?))
}

fn gauss_r_at(n: u32, ctx: &PrecisionContext) -> Result<Real> {
    let pi = machin_pi(ctx);
    let m = gauss_mean(ctx)?;
    let mut state = AgmState::gauss_start(ctx)?;
    for _ in 0..n {
        state = agm_step(&state, ctx)?;
    }
    let a_n_sq = ctx.sqr(&state.a);
    let p = ctx.binary_precision() as f64;
    let mut tail = Real::zero();
    for _ in 0..MAX_ITERATIONS {
        let term = state.square_gap(ctx).mul_pow2(state.n as i64);
        tail = ctx.add(&tail, &term);
        let gap = ctx.sub(&state.a, &state.b);
        let negligible = |x: Option<f64>| x.is_none_or(|l| l < -p - 2.0);
        let predicted = gap.log2_abs().map(|l| 2.0 * l + state.n as f64 - 1.0);
        if negligible(term.log2_abs()) || negligible(predicted) {
            let head = ctx.div(&ctx.sqr(&m), &pi)?;
            let total = ctx.add(&head, &tail.mul_pow2(-1));
            return ctx.div(&total, &a_n_sq);
        }
        state = agm_step(&state, ctx)?;
    }
    Err(Error::NoConvergence {
        what: "tail of the r_n series".into(),
        iterations: MAX_ITERATIONS,
    })
}
