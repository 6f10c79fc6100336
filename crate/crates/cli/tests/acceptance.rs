//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines come out in order.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use pi_cli::{bench, cmd_compute, cmd_table, cmd_verify, OutputFormat, Settings};
use pi_core::agm::{agm_limit, gauss_r, gauss_sum, AgmState};
use pi_core::apnum::{make_context, PrecisionContext, Real};
use pi_core::borwein::{run, AlgorithmId};
use pi_core::driver::convergence;
use pi_core::verify::{machin_pi, ConvergenceRecord};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Working precision for the digit-growth criteria.
const GROWTH_DIGITS: u64 = 4000;
const TARGET_DIGITS: u64 = 1000;

fn ctx(digits: u64) -> PrecisionContext {
    make_context(digits).unwrap()
}

fn table(alg: AlgorithmId, iterations: u32) -> Vec<ConvergenceRecord> {
    convergence(alg, iterations, &ctx(GROWTH_DIGITS)).unwrap()
}

fn digits_of(rows: &[ConvergenceRecord]) -> Vec<u64> {
    rows.iter().map(|r| r.correct_digits).collect()
}

/// First `n` with at least [`TARGET_DIGITS`] correct digits.
fn reach(rows: &[ConvergenceRecord]) -> Option<u32> {
    rows.iter()
        .find(|r| r.correct_digits >= TARGET_DIGITS)
        .map(|r| r.n)
}

/// `|x - y|` in units of the last place of `y` at `ctx`.
fn ulps_apart(x: &Real, y: &Real, ctx: &PrecisionContext) -> f64 {
    let diff = ctx.widened(ctx.binary_precision()).sub(x, y).abs();
    match diff.log2_abs() {
        None => 0.0,
        Some(l) => (l - (y.top().unwrap() - ctx.binary_precision() as i64) as f64).exp2(),
    }
}

fn growth_rate(alg: AlgorithmId, max_iterations: u32, lo: f64, hi: f64) -> Outcome {
    let rows = table(alg, max_iterations);
    let digits = digits_of(&rows);
    let n =
        reach(&rows).ok_or_else(|| format!("never reached {TARGET_DIGITS} digits: {digits:?}"))?;
    let orders: Vec<f64> = rows.iter().filter_map(|r| r.local_order).collect();
    if orders.is_empty() {
        return Err(format!("no order estimates: {digits:?}"));
    }
    if let Some(o) = orders.iter().find(|o| !(lo..=hi).contains(*o)) {
        return Err(format!(
            "order {o:.4} outside [{lo}, {hi}]; orders {orders:.4?}"
        ));
    }
    Ok(format!(
        "{TARGET_DIGITS} digits at n={n} (limit {max_iterations}); orders {orders:.3?}"
    ))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let rows = table(AlgorithmId::Quadratic, 12);
    let elapsed = start.elapsed();
    let digits = digits_of(&rows);
    let n =
        reach(&rows).ok_or_else(|| format!("never reached {TARGET_DIGITS} digits: {digits:?}"))?;
    // the cap is the last iteration still below the precision ceiling
    let ceiling = GROWTH_DIGITS;
    for w in digits.windows(2) {
        if w[1] >= ceiling {
            break;
        }
        if (w[1] as f64) < 1.8 * w[0] as f64 {
            return Err(format!(
                "digits {} -> {} grew by less than 1.8x: {digits:?}",
                w[0], w[1]
            ));
        }
    }
    if elapsed >= Duration::from_secs(10) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!(
        "{TARGET_DIGITS} digits at n={n}; digits {digits:?}; {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn criterion_5() -> Outcome {
    let c = ctx(1000);
    let pi = machin_pi(&c);
    let start = AgmState::gauss_start(&c).unwrap();
    let (m, steps) = agm_limit(&start.a, &start.b, &c).unwrap();
    let rhs = c.sub(&Real::one(), &c.div(&c.sqr(&m).mul_pow2(1), &pi).unwrap());
    let bound = c.from_ratio(&1.into(), &num_pow10(990)).unwrap();
    let mut residuals = Vec::new();
    for k in 2..=steps + 2 {
        residuals.push(c.sub(&gauss_sum(k, &c).unwrap(), &rhs).abs());
    }
    let last = residuals.last().unwrap();
    if last.cmp_exact(&bound).is_gt() {
        return Err(format!(
            "residual 2^{:.1} above 1e-990",
            last.log2_abs().unwrap_or(f64::NEG_INFINITY)
        ));
    }
    // strictly shrinking until the residual reaches the bound
    for w in residuals.windows(2) {
        if w[0].cmp_exact(&bound).is_gt() && w[1].cmp_exact(&w[0]).is_ge() {
            return Err("residual did not shrink monotonically".into());
        }
    }
    let log10 = last
        .log2_abs()
        .map(|l| l * std::f64::consts::LOG10_2)
        .unwrap_or(f64::NEG_INFINITY);
    Ok(format!("K={} residual 10^{log10:.1}", steps + 2))
}

fn num_pow10(k: u32) -> num_bigint::BigInt {
    num_bigint::BigInt::from(10u32).pow(k)
}

fn criterion_6() -> Outcome {
    let c = ctx(200);
    let quad = run(AlgorithmId::Quadratic, 12, &c).unwrap();
    let quart = run(AlgorithmId::Quartic, 6, &c).unwrap();
    let worst = quart
        .iter()
        .enumerate()
        .map(|(n, t)| ulps_apart(&t.estimate, &quad[2 * n].estimate, &c))
        .fold(0.0, f64::max);
    if worst > 10.0 {
        return Err(format!("worst {worst:.2} ulp"));
    }
    Ok(format!("n <= 6, worst {worst:.2} ulp"))
}

fn criterion_7() -> Outcome {
    let c = ctx(200);
    let quad = run(AlgorithmId::Quadratic, 10, &c).unwrap();
    let mut worst = 0.0f64;
    for (n, s) in quad.iter().enumerate() {
        worst = worst.max(ulps_apart(&gauss_r(n as u32, &c).unwrap(), &s.estimate, &c));
    }
    if worst > 10.0 {
        return Err(format!("worst {worst:.2} ulp"));
    }
    let wide = c.widened(64);
    let r1 = c.round(&wide.sub(
        &Real::exact_int(6),
        &wide.mul_int(&wide.sqrt(&Real::exact_int(2)).unwrap(), &4.into()),
    ));
    let e0 = ulps_apart(
        &gauss_r(0, &c).unwrap(),
        &c.round(&Real::exact_pow2(-1)),
        &c,
    );
    let e1 = ulps_apart(&gauss_r(1, &c).unwrap(), &r1, &c);
    if e0 > 1.0 || e1 > 1.0 {
        return Err(format!("r_0 off by {e0:.2} ulp, r_1 off by {e1:.2} ulp"));
    }
    Ok(format!(
        "n <= 10, worst {worst:.2} ulp; r_0 {e0:.2} ulp, r_1 {e1:.2} ulp"
    ))
}

fn criterion_8() -> Outcome {
    let rows = bench(TARGET_DIGITS, &Settings::default()).map_err(|e| e.to_string())?;
    let oracle = rows.iter().map(|r| r.oracle_digits).min().unwrap();
    let mutual = rows.iter().map(|r| r.agreement_digits).min().unwrap();
    if oracle < TARGET_DIGITS || mutual < TARGET_DIGITS {
        return Err(format!("oracle {oracle}, mutual {mutual}"));
    }
    Ok(format!(
        "min oracle agreement {oracle}, min mutual agreement {mutual}"
    ))
}

fn criterion_9() -> Outcome {
    let mut out = Vec::new();
    cmd_verify(6, 100, None, &Settings::default(), &mut out).map_err(|e| e.to_string())?;
    let text = String::from_utf8(out).unwrap();
    let flagged = text.lines().filter(|l| l.starts_with("FLAG")).count();
    if !text
        .lines()
        .any(|l| l.starts_with("FLAG") && l.contains("cubic"))
    {
        return Err("cubic mean not reported as flagged".into());
    }
    Ok(format!("exit 0, {flagged} flagged cubic-mean items"))
}

fn criterion_10() -> Outcome {
    let formats = [OutputFormat::Text, OutputFormat::Csv, OutputFormat::Json];
    for format in formats {
        let settings = Settings {
            format,
            ..Settings::default()
        };
        for alg in AlgorithmId::ALL {
            let render = |f: &dyn Fn(&mut Vec<u8>)| {
                let mut v = Vec::new();
                f(&mut v);
                v
            };
            let compute = |w: &mut Vec<u8>| cmd_compute(alg, 300, &settings, w).unwrap();
            let tab = |w: &mut Vec<u8>| cmd_table(alg, 6, 120, &settings, w).unwrap();
            if render(&compute) != render(&compute) || render(&tab) != render(&tab) {
                return Err(format!("{alg} output differs between runs ({format:?})"));
            }
        }
    }
    let bin = env!("CARGO_BIN_EXE_pi");
    let invoke = || {
        Command::new(bin)
            .args([
                "table",
                "--algorithm",
                "cubic",
                "--iterations",
                "5",
                "--digits",
                "200",
                "--format",
                "csv",
            ])
            .output()
            .unwrap()
            .stdout
    };
    let first = invoke();
    if first.is_empty() || first != invoke() {
        return Err("binary output differs between runs".into());
    }
    Ok("compute and table byte-identical across repeated runs".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("digit doubling (quadratic)", criterion_1),
        ("digit quadrupling (quartic)", || {
            growth_rate(AlgorithmId::Quartic, 6, 3.7, 4.3)
        }),
        ("cubic rate", || {
            growth_rate(AlgorithmId::Cubic, 8, 2.7, 3.3)
        }),
        ("quartic-analog rate", || {
            growth_rate(AlgorithmId::QuarticAnalog, 6, 3.7, 4.3)
        }),
        ("Gauss formula residual", criterion_5),
        ("quartic t_n equals quadratic r_2n", criterion_6),
        ("closed-form r_n matches recurrence", criterion_7),
        ("five-way cross-validation", criterion_8),
        ("identity suite", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
