//! Borwein-style iterations converging to `1/pi`, driven through one
//! uniform state type, plus the cubic and quartic mean iterations whose
//! weighted sums they are derived from.
//!
//! | algorithm        | `aux`  | start                    | update |
//! |------------------|--------|--------------------------|--------|
//! | `quadratic`      | `d_n`  | `d = 1/sqrt 2, r = 1/2`  | `d' = (1 - sqrt(1-d^2)) / (1 + sqrt(1-d^2))`, `r' = (1+d')^2 r - 2^(n+1) d'` |
//! | `quartic`        | `s_n`  | `s = 2^(-1/4), t = 1/2`  | `s' = (1 - (1-s^4)^(1/4)) / (1 + (1-s^4)^(1/4))`, `t' = (1+s')^4 t - 2^(2n+2) s'(1+s'+s'^2)` |
//! | `cubic`          | `e_n`  | `e = sqrt 3, r = 1/3`    | `e' = 3 / (1 + cbrt(8 - (e-1)^3))`, `r' = e'^2 r - 3^n (e'^2 - 1)` |
//! | `quartic_analog` | `e_n`  | `e = sqrt 2, r = 1/3`    | `e' = 2 / (1 + (1 - (e-1)^4)^(1/4))`, `r' = e'^4 r - 4^(n+1)/3 (e'^4 - 1)` |
//!
//! The quartic iteration is the quadratic one taken two steps at a time:
//! `s_n = sqrt(d_2n)` and `t_n = r_2n`.

mod algorithm;
mod mean;

pub use algorithm::AlgorithmId;
pub use mean::{
    mean_limit, mean_limit_from, mean_start, mean_step, mean_trace, MeanState, MeanVariant,
};

use crate::apnum::{int_pow, PrecisionContext, Real};
use crate::error::{domain, invalid, Result};

/// Per-iteration state shared by all four recurrences.
#[derive(Clone, Debug)]
pub struct IterationState {
    pub algorithm: AlgorithmId,
    pub n: u32,
    /// `d_n`, `s_n` or `e_n` depending on the algorithm.
    pub aux: Real,
    /// `r_n` (or `t_n` for the quartic iteration), tending to `1/pi`.
    pub estimate: Real,
}

/// The `n = 0` state of `algorithm`.
pub fn init(algorithm: AlgorithmId, ctx: &PrecisionContext) -> Result<IterationState> {
    let half = Real::exact_pow2(-1);
    let third = || ctx.div(&Real::one(), &Real::exact_int(3));
    let (aux, estimate) = match algorithm {
        AlgorithmId::Quadratic => (ctx.sqrt(&half)?, ctx.round(&half)),
        AlgorithmId::Quartic => (ctx.root(&half, 4)?, ctx.round(&half)),
        AlgorithmId::Cubic => (ctx.sqrt(&Real::exact_int(3))?, third()?),
        AlgorithmId::QuarticAnalog => (ctx.sqrt(&Real::exact_int(2))?, third()?),
        AlgorithmId::SalaminBrent => {
            return Err(invalid(
                "salamin_brent has no Borwein-style state; use agm::salamin_brent_pi",
            ))
        }
    };
    Ok(IterationState {
        algorithm,
        n: 0,
        aux,
        estimate,
    })
}

/// `x - 1` formed exactly, then `(x - 1)(x + 1)` rounded once.
fn gap_from_one_squared(x: &Real, ctx: &PrecisionContext) -> Real {
    let wide = ctx.widened(ctx.binary_precision() + 2);
    let below = wide.sub(x, &Real::one());
    ctx.mul(&below, &ctx.add(x, &Real::one()))
}

/// `(1 - q) / (1 + q)` where `q = root_k(1 - x^k)`.
///
/// `1 - q` cancels badly once `x` is small, so the radical is re-evaluated
/// under guard escalation until the difference keeps at least half the guard.
fn contracted(x: &Real, k: u32, ctx: &PrecisionContext) -> Result<Real> {
    let one = Real::one();
    let esc = ctx.sub_escalating(|c| {
        let radicand = c.sub(&one, &c.powu(x, k));
        let q = if k == 2 {
            c.sqrt(&radicand)?
        } else {
            c.root(&radicand, k)?
        };
        Ok((one.clone(), q))
    })?;
    let wc = esc.context;
    let ratio = wc.div(&esc.difference, &wc.add(&one, &esc.subtrahend))?;
    Ok(ctx.round(&ratio))
}

fn check_unit_interval(x: &Real, what: &str) -> Result<()> {
    if x.is_negative() || x.cmp_exact(&Real::one()).is_ge() {
        return Err(domain(format!("{what} must lie in [0, 1)")));
    }
    Ok(())
}

/// Applies one update of the state's algorithm.
pub fn step(state: &IterationState, ctx: &PrecisionContext) -> Result<IterationState> {
    let n = state.n;
    let r = &state.estimate;
    let one = Real::one();
    let (aux, estimate) = match state.algorithm {
        AlgorithmId::Quadratic => {
            check_unit_interval(&state.aux, "d_n")?;
            let d = contracted(&state.aux, 2, ctx)?;
            let grow = ctx.sqr(&ctx.add(&one, &d));
            let est = ctx.sub(&ctx.mul(&grow, r), &d.mul_pow2(n as i64 + 1));
            (d, est)
        }
        AlgorithmId::Quartic => {
            check_unit_interval(&state.aux, "s_n")?;
            let s = contracted(&state.aux, 4, ctx)?;
            let grow = ctx.powu(&ctx.add(&one, &s), 4);
            let poly = ctx.add(&ctx.add(&one, &s), &ctx.sqr(&s));
            let corr = ctx.mul(&s, &poly).mul_pow2(2 * n as i64 + 2);
            let est = ctx.sub(&ctx.mul(&grow, r), &corr);
            (s, est)
        }
        AlgorithmId::Cubic => {
            let e = &state.aux;
            if e.cmp_exact(&one).is_lt() || e.cmp_exact(&Real::exact_int(3)).is_gt() {
                return Err(domain("cubic e_n must lie in [1, 3]"));
            }
            let em1 = ctx.sub(e, &one);
            let radicand = ctx.sub(&Real::exact_int(8), &ctx.powu(&em1, 3));
            let cbrt = ctx.root(&radicand, 3)?;
            let e_next = ctx.div(&Real::exact_int(3), &ctx.add(&one, &cbrt))?;
            let sq = ctx.sqr(&e_next);
            let gap = gap_from_one_squared(&e_next, ctx);
            let corr = ctx.mul_int(&gap, &int_pow(3, n));
            let est = ctx.sub(&ctx.mul(&sq, r), &corr);
            (e_next, est)
        }
        AlgorithmId::QuarticAnalog => {
            let e = &state.aux;
            if e.cmp_exact(&one).is_lt() || e.cmp_exact(&Real::exact_int(2)).is_gt() {
                return Err(domain("quartic-analog e_n must lie in [1, 2]"));
            }
            let em1 = ctx.sub(e, &one);
            let radicand = ctx.sub(&one, &ctx.powu(&em1, 4));
            let q = ctx.root(&radicand, 4)?;
            let e_next = ctx.div(&Real::exact_int(2), &ctx.add(&one, &q))?;
            let sq = ctx.sqr(&e_next);
            let fourth = ctx.sqr(&sq);
            // e^4 - 1 = (e^2 - 1)(e^2 + 1)
            let gap = ctx.mul(&gap_from_one_squared(&e_next, ctx), &ctx.add(&sq, &one));
            let scaled = ctx.mul_int(&gap, &int_pow(4, n + 1));
            let corr = ctx.div(&scaled, &Real::exact_int(3))?;
            let est = ctx.sub(&ctx.mul(&fourth, r), &corr);
            (e_next, est)
        }
        AlgorithmId::SalaminBrent => {
            return Err(invalid(
                "salamin_brent has no Borwein-style state; use agm::salamin_brent_pi",
            ))
        }
    };
    Ok(IterationState {
        algorithm: state.algorithm,
        n: n + 1,
        aux,
        estimate,
    })
}

/// States `0..=iterations`.
pub fn run(
    algorithm: AlgorithmId,
    iterations: u32,
    ctx: &PrecisionContext,
) -> Result<Vec<IterationState>> {
    let mut states = Vec::with_capacity(iterations as usize + 1);
    states.push(init(algorithm, ctx)?);
    for _ in 0..iterations {
        let next = step(states.last().unwrap(), ctx)?;
        states.push(next);
    }
    Ok(states)
}
