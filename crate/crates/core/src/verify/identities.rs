//! Numerical checks of every algebraic step linking the AGM, Gauss's sum
//! and the Borwein recurrences. Each check evaluates both sides at the
//! working precision and reports the largest absolute residual.

use num_bigint::BigInt;
use num_traits::Pow;
use serde::Serialize;

use crate::agm::{agm_limit, agm_trace, gauss_r, gauss_sum, AgmState};
use crate::apnum::{to_scientific, PrecisionContext, Real};
use crate::borwein::{mean_limit, mean_trace, run, AlgorithmId, IterationState, MeanVariant};
use crate::error::{invalid, Result};
use crate::verify::machin_pi;

/// Outcome of one identity check over a range of indices.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub identity_name: String,
    pub max_residual: Real,
    pub tolerance: Real,
    pub pass: bool,
    /// Inclusive index range exercised.
    pub n_range: (u32, u32),
    /// Reported for information; never fails a verification run.
    pub flagged: bool,
    pub note: Option<String>,
}

/// Serializable form; keys match the CLI's CSV header.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityRow {
    pub identity: String,
    pub max_residual: String,
    pub tolerance: String,
    pub pass: bool,
    pub n_range: String,
    pub flagged: bool,
    pub note: String,
}

impl IdentityReport {
    pub fn row(&self) -> IdentityRow {
        let sci = |x: &Real| to_scientific(x, 3).unwrap_or_else(|_| "0".to_string());
        IdentityRow {
            identity: self.identity_name.clone(),
            max_residual: sci(&self.max_residual),
            tolerance: sci(&self.tolerance),
            pass: self.pass,
            n_range: format!("{}..={}", self.n_range.0, self.n_range.1),
            flagged: self.flagged,
            note: self.note.clone().unwrap_or_default(),
        }
    }
}

/// Deliberate corruption used to prove the suite detects broken steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Perturb the quadratic estimate `r_1` by about `10^(-digits/2)` and
    /// keep iterating from the corrupted state.
    CorruptQuadraticStep,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    pub fault: Option<Fault>,
}

const CUBIC_NOTE: &str = "cubic mean uses a' = (a + 2b)/3; a divisor of 2 has no common limit";

/// Runs the full identity suite for indices up to `n_max`.
pub fn check_identities(n_max: u32, ctx: &PrecisionContext) -> Result<Vec<IdentityReport>> {
    check_identities_with(n_max, ctx, CheckOptions::default())
}

pub fn check_identities_with(
    n_max: u32,
    ctx: &PrecisionContext,
    options: CheckOptions,
) -> Result<Vec<IdentityReport>> {
    if n_max < 2 {
        return Err(invalid("identity checks need n_max >= 2"));
    }
    let suite = Suite::new(n_max, ctx, options)?;
    Ok(vec![
        suite.telescoping()?,
        suite.ratio_relation()?,
        suite.gauss_formula()?,
        suite.r_sequence_vs_recurrence()?,
        suite.d_from_agm()?,
        suite.d_inversion()?,
        suite.quartic_aux()?,
        suite.quartic_estimate()?,
        suite.mean_residual(MeanVariant::Cubic)?,
        suite.mean_linkage(MeanVariant::Cubic)?,
        suite.mean_residual(MeanVariant::Quartic)?,
        suite.mean_linkage(MeanVariant::Quartic)?,
    ])
}

/// `10^(12 - digits)`.
fn default_tolerance(ctx: &PrecisionContext) -> Result<Real> {
    let d = ctx.decimal_digits() as i64 - 12;
    let ten = BigInt::from(10u32);
    if d <= 0 {
        Ok(Real::exact_bigint(Pow::pow(&ten, d.unsigned_abs())))
    } else {
        ctx.from_ratio(&BigInt::from(1u32), &Pow::pow(&ten, d as u64))
    }
}

struct Suite {
    n_max: u32,
    ctx: PrecisionContext,
    tolerance: Real,
    agm: Vec<AgmState>,
    quadratic: Vec<IterationState>,
    pi: Real,
}

impl Suite {
    fn new(n_max: u32, ctx: &PrecisionContext, options: CheckOptions) -> Result<Suite> {
        let mut quadratic = run(AlgorithmId::Quadratic, 1, ctx)?;
        if options.fault == Some(Fault::CorruptQuadraticStep) {
            let bump = Real::exact_pow2(-(ctx.binary_precision() as i64) / 2);
            let s = &mut quadratic[1];
            s.estimate = ctx.add(&s.estimate, &bump);
        }
        while quadratic.len() < 2 * n_max as usize + 2 {
            let next = crate::borwein::step(quadratic.last().unwrap(), ctx)?;
            quadratic.push(next);
        }
        Ok(Suite {
            n_max,
            ctx: *ctx,
            tolerance: default_tolerance(ctx)?,
            agm: agm_trace(n_max + 1, ctx)?,
            quadratic,
            pi: machin_pi(ctx),
        })
    }

    fn report(&self, name: &str, range: (u32, u32), residuals: Vec<Real>) -> IdentityReport {
        let max_residual = residuals
            .into_iter()
            .map(|r| r.abs())
            .max_by(|a, b| a.cmp_exact(b))
            .unwrap_or_else(Real::zero);
        IdentityReport {
            identity_name: name.to_string(),
            pass: max_residual.cmp_exact(&self.tolerance).is_le(),
            max_residual,
            tolerance: self.tolerance.clone(),
            n_range: range,
            flagged: false,
            note: None,
        }
    }

    /// `|x - y|` formed without rounding away the residual.
    fn residual(&self, x: &Real, y: &Real) -> Real {
        let p = x
            .precision()
            .min(y.precision())
            .max(self.ctx.binary_precision());
        PrecisionContext::with_binary_precision(p.saturating_add(64).min(1 << 40))
            .sub(x, y)
            .abs()
    }

    /// Guard ceiling for checks that recompute a whole trace.
    fn escalation_cap(&self) -> u64 {
        64 * self.ctx.binary_precision() + (1 << 16)
    }

    fn telescoping(&self) -> Result<IdentityReport> {
        let c = &self.ctx;
        let r: Vec<Real> = (0..=self.n_max + 1)
            .map(|n| gauss_r(n, c))
            .collect::<Result<_>>()?;
        let mut residuals = Vec::new();
        for n in 0..=self.n_max as usize {
            let (s, t) = (&self.agm[n], &self.agm[n + 1]);
            let lhs = c.sub(&c.mul(&r[n], &c.sqr(&s.a)), &c.mul(&r[n + 1], &c.sqr(&t.a)));
            let rhs = s.square_gap(c).mul_pow2(n as i64 - 1);
            residuals.push(self.residual(&lhs, &rhs));
        }
        Ok(self.report("telescoping_r_a_squared", (0, self.n_max), residuals))
    }

    /// `a_n/a_{n+1} - 1 = sqrt(1 - b_{n+1}^2 / a_{n+1}^2)`.
    fn ratio_relation(&self) -> Result<IdentityReport> {
        let mut residuals = Vec::new();
        for n in 0..=self.n_max {
            let lhs = self.ctx.sub_escalating_capped(self.escalation_cap(), |c| {
                let tr = agm_trace(n + 1, c)?;
                Ok((
                    c.div(&tr[n as usize].a, &tr[n as usize + 1].a)?,
                    Real::one(),
                ))
            })?;
            let rhs = self.ctx.sub_escalating_capped(self.escalation_cap(), |c| {
                let tr = agm_trace(n + 1, c)?;
                let t = &tr[n as usize + 1];
                Ok((Real::one(), c.div(&c.sqr(&t.b), &c.sqr(&t.a))?))
            })?;
            let root = rhs.context.sqrt(&rhs.difference)?;
            residuals.push(self.residual(&lhs.difference, &root));
        }
        Ok(self.report("agm_ratio_relation", (0, self.n_max), residuals))
    }

    /// `sum_k 2^k (a_k^2 - b_k^2) = 1 - 2 M^2 / pi` with the sum run past
    /// convergence of the mean.
    fn gauss_formula(&self) -> Result<IdentityReport> {
        let c = &self.ctx;
        let start = AgmState::gauss_start(c)?;
        let (m, steps) = agm_limit(&start.a, &start.b, c)?;
        let terms = steps + 1;
        let sum = gauss_sum(terms, c)?;
        let rhs = c.sub(&Real::one(), &c.div(&c.sqr(&m).mul_pow2(1), &self.pi)?);
        Ok(self.report(
            "gauss_sum_formula",
            (terms, terms),
            vec![self.residual(&sum, &rhs)],
        ))
    }

    /// Closed-form `r_n` against the quadratic recurrence.
    fn r_sequence_vs_recurrence(&self) -> Result<IdentityReport> {
        let mut residuals = Vec::new();
        for n in 0..=self.n_max {
            let closed = gauss_r(n, &self.ctx)?;
            residuals.push(self.residual(&closed, &self.quadratic[n as usize].estimate));
        }
        Ok(self.report("r_sequence_matches_recurrence", (0, self.n_max), residuals))
    }

    /// `d_{n+1} = a_n/a_{n+1} - 1 = (a_n - b_n)/(a_n + b_n)`.
    fn d_from_agm(&self) -> Result<IdentityReport> {
        let c = &self.ctx;
        let mut residuals = Vec::new();
        for n in 0..=self.n_max as usize {
            let (s, t) = (&self.agm[n], &self.agm[n + 1]);
            let d = &self.quadratic[n + 1].aux;
            let ratio = c.sub(&c.div(&s.a, &t.a)?, &Real::one());
            let quotient = c.div(&c.sub(&s.a, &s.b), &c.add(&s.a, &s.b))?;
            residuals.push(self.residual(d, &ratio));
            residuals.push(self.residual(d, &quotient));
        }
        Ok(self.report("quadratic_d_from_agm", (0, self.n_max), residuals))
    }

    /// `d_n = 2 sqrt(d_{n+1}) / (1 + d_{n+1})`.
    fn d_inversion(&self) -> Result<IdentityReport> {
        let c = &self.ctx;
        let mut residuals = Vec::new();
        for n in 0..=self.n_max as usize {
            let next = &self.quadratic[n + 1].aux;
            let inv = c.div(&c.sqrt(next)?.mul_pow2(1), &c.add(&Real::one(), next))?;
            residuals.push(self.residual(&self.quadratic[n].aux, &inv));
        }
        Ok(self.report("quadratic_d_inversion", (0, self.n_max), residuals))
    }

    fn quartic_trace(&self) -> Result<Vec<IterationState>> {
        run(AlgorithmId::Quartic, self.n_max, &self.ctx)
    }

    /// `s_n = sqrt(d_{2n})`.
    fn quartic_aux(&self) -> Result<IdentityReport> {
        let quartic = self.quartic_trace()?;
        let mut residuals = Vec::new();
        for (n, s) in quartic.iter().enumerate() {
            let root = self.ctx.sqrt(&self.quadratic[2 * n].aux)?;
            residuals.push(self.residual(&s.aux, &root));
        }
        Ok(self.report("quartic_s_is_sqrt_d_even", (0, self.n_max), residuals))
    }

    /// `t_n = r_{2n}`.
    fn quartic_estimate(&self) -> Result<IdentityReport> {
        let quartic = self.quartic_trace()?;
        let residuals = quartic
            .iter()
            .enumerate()
            .map(|(n, t)| self.residual(&t.estimate, &self.quadratic[2 * n].estimate))
            .collect();
        Ok(self.report("quartic_t_equals_r_even", (0, self.n_max), residuals))
    }

    /// `sum 3^k (a_k^2 - a_{k+1}^2) = 1/3 - M^2/pi` or
    /// `sum 4^k (a_k^4 - a_{k+1}^4) = 1/4 - 3 M^4 / (4 pi)`.
    fn mean_residual(&self, variant: MeanVariant) -> Result<IdentityReport> {
        let c = &self.ctx;
        let (m, sum) = mean_limit(variant, c)?;
        let rhs = match variant {
            MeanVariant::Cubic => c.sub(
                &c.div(&Real::one(), &Real::exact_int(3))?,
                &c.div(&c.sqr(&m), &self.pi)?,
            ),
            MeanVariant::Quartic => {
                let m4 = c.sqr(&c.sqr(&m));
                c.sub(
                    &Real::exact_pow2(-2),
                    &c.div(&c.mul_int(&m4, &3.into()), &c.mul_int(&self.pi, &4.into()))?,
                )
            }
        };
        let name = match variant {
            MeanVariant::Cubic => "cubic_mean_sum_formula",
            MeanVariant::Quartic => "quartic_mean_sum_formula",
        };
        let report = self.report(name, (0, 0), vec![self.residual(&sum, &rhs)]);
        Ok(self.flag_cubic(variant, report))
    }

    /// `e_{n+1} = a_n / a_{n+1}` between an algorithm trace and its mean.
    fn mean_linkage(&self, variant: MeanVariant) -> Result<IdentityReport> {
        let c = &self.ctx;
        let algorithm = match variant {
            MeanVariant::Cubic => AlgorithmId::Cubic,
            MeanVariant::Quartic => AlgorithmId::QuarticAnalog,
        };
        let states = run(algorithm, self.n_max + 1, c)?;
        let means = mean_trace(variant, self.n_max + 1, c)?;
        let mut residuals = Vec::new();
        for n in 0..=self.n_max as usize {
            let ratio = c.div(&means[n].a, &means[n + 1].a)?;
            residuals.push(self.residual(&states[n + 1].aux, &ratio));
        }
        let name = match variant {
            MeanVariant::Cubic => "cubic_e_from_mean",
            MeanVariant::Quartic => "quartic_analog_e_from_mean",
        };
        let report = self.report(name, (0, self.n_max), residuals);
        Ok(self.flag_cubic(variant, report))
    }

    fn flag_cubic(&self, variant: MeanVariant, mut report: IdentityReport) -> IdentityReport {
        if variant == MeanVariant::Cubic {
            report.flagged = true;
            report.note = Some(CUBIC_NOTE.to_string());
        }
        report
    }
}
