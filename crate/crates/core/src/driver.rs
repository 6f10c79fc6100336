//! End-to-end runs: iterate an algorithm until successive estimates agree,
//! or for a fixed count to build a convergence table.

use crate::agm::{agm_step, salamin_brent_estimate, salamin_brent_pi, AgmState, MAX_ITERATIONS};
use crate::apnum::{PrecisionContext, Real};
use crate::borwein::{init, step, AlgorithmId};
use crate::error::{invalid, Error, Result};
use crate::verify::{convergence_table, correct_digits, machin_pi, ConvergenceRecord};

/// A completed run to agreement.
#[derive(Clone, Debug)]
pub struct Computation {
    pub algorithm: AlgorithmId,
    /// Iterations performed; equals `estimates.len()`.
    pub iterations: u32,
    /// Raw estimates after steps `1..=iterations` (`1/pi` for Borwein
    /// iterations, `pi` for Salamin–Brent).
    pub estimates: Vec<Real>,
    pub pi: Real,
}

/// Runs `algorithm` until two successive estimates agree to the context's
/// decimal digits.
pub fn compute(algorithm: AlgorithmId, ctx: &PrecisionContext) -> Result<Computation> {
    if algorithm == AlgorithmId::SalaminBrent {
        let sb = salamin_brent_pi(ctx)?;
        return Ok(Computation {
            algorithm,
            iterations: sb.estimates.len() as u32,
            estimates: sb.estimates,
            pi: sb.pi,
        });
    }
    let target = ctx.decimal_digits();
    let mut state = init(algorithm, ctx)?;
    let mut estimates: Vec<Real> = Vec::new();
    for _ in 0..MAX_ITERATIONS {
        state = step(&state, ctx)?;
        let agreed = match estimates.last() {
            Some(prev) => correct_digits(prev, &state.estimate)? >= target,
            None => false,
        };
        estimates.push(state.estimate.clone());
        if agreed {
            let pi = ctx.recip(&state.estimate)?;
            return Ok(Computation {
                algorithm,
                iterations: state.n,
                estimates,
                pi,
            });
        }
    }
    Err(Error::NoConvergence {
        what: format!("{algorithm} estimates"),
        iterations: MAX_ITERATIONS,
    })
}

/// Raw estimates after steps `1..=iterations`.
pub fn estimates(
    algorithm: AlgorithmId,
    iterations: u32,
    ctx: &PrecisionContext,
) -> Result<Vec<(u32, Real)>> {
    let mut out = Vec::with_capacity(iterations as usize);
    if algorithm == AlgorithmId::SalaminBrent {
        let mut state = AgmState::gauss_start(ctx)?;
        for n in 1..=iterations {
            state = agm_step(&state, ctx)?;
            out.push((n, salamin_brent_estimate(&state, ctx)?));
        }
        return Ok(out);
    }
    let mut state = init(algorithm, ctx)?;
    for n in 1..=iterations {
        state = step(&state, ctx)?;
        out.push((n, state.estimate.clone()));
    }
    Ok(out)
}

/// The value `algorithm`'s estimates tend to, from the Machin oracle.
pub fn limit(algorithm: AlgorithmId, ctx: &PrecisionContext) -> Result<Real> {
    let pi = machin_pi(ctx);
    if algorithm.estimates_reciprocal() {
        ctx.recip(&pi)
    } else {
        Ok(pi)
    }
}

/// One record per iteration `1..=iterations`, measured against the oracle.
pub fn convergence(
    algorithm: AlgorithmId,
    iterations: u32,
    ctx: &PrecisionContext,
) -> Result<Vec<ConvergenceRecord>> {
    if iterations < 1 {
        return Err(invalid("a convergence table needs at least one iteration"));
    }
    let est = estimates(algorithm, iterations, ctx)?;
    convergence_table(&est, &limit(algorithm, ctx)?, ctx)
}
