//! Browser bindings for the demo page in `www/`.
//!
//! Each export returns a JSON string so the page needs no generated
//! TypeScript types. The `*_json` functions hold the logic and run natively
//! too, which is how they are tested.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use pi_core::apnum::{make_context, to_fixed, DecimalRounding};
use pi_core::borwein::AlgorithmId;
use pi_core::driver;
use pi_core::verify::check_identities;

/// Keeps a single call well under a second in the browser.
pub const MAX_DEMO_DIGITS: u64 = 20_000;
pub const MAX_DEMO_ITERATIONS: u32 = 16;

#[derive(Serialize)]
struct Computed {
    algorithm: &'static str,
    digits: u64,
    iterations: u32,
    pi: String,
}

fn algorithm(name: &str) -> Result<AlgorithmId, String> {
    name.parse().map_err(|e: pi_core::Error| e.to_string())
}

fn demo_digits(digits: u64) -> Result<u64, String> {
    if digits == 0 || digits > MAX_DEMO_DIGITS {
        return Err(format!("digits must be between 1 and {MAX_DEMO_DIGITS}"));
    }
    Ok(digits)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

pub fn compute_pi_json(name: &str, digits: u64) -> Result<String, String> {
    let alg = algorithm(name)?;
    let digits = demo_digits(digits)?;
    let ctx = make_context(digits + 1).map_err(|e| e.to_string())?;
    let run = driver::compute(alg, &ctx).map_err(|e| e.to_string())?;
    let pi = to_fixed(&run.pi, digits, DecimalRounding::TowardZero).map_err(|e| e.to_string())?;
    to_json(&Computed {
        algorithm: alg.name(),
        digits,
        iterations: run.iterations,
        pi,
    })
}

pub fn convergence_table_json(name: &str, iterations: u32, digits: u64) -> Result<String, String> {
    let alg = algorithm(name)?;
    let digits = demo_digits(digits)?;
    if iterations == 0 || iterations > MAX_DEMO_ITERATIONS {
        return Err(format!(
            "iterations must be between 1 and {MAX_DEMO_ITERATIONS}"
        ));
    }
    let ctx = make_context(digits).map_err(|e| e.to_string())?;
    let rows: Vec<_> = driver::convergence(alg, iterations, &ctx)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|r| r.row())
        .collect();
    to_json(&rows)
}

pub fn verify_identities_json(n_max: u32, digits: u64) -> Result<String, String> {
    let digits = demo_digits(digits.min(2_000))?;
    if n_max > 10 {
        return Err("n_max must be at most 10".into());
    }
    let ctx = make_context(digits).map_err(|e| e.to_string())?;
    let rows: Vec<_> = check_identities(n_max, &ctx)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|r| r.row())
        .collect();
    to_json(&rows)
}

/// `{algorithm, digits, iterations, pi}` with pi truncated to `digits`
/// decimals.
#[wasm_bindgen]
pub fn compute_pi(algorithm: &str, digits: u32) -> Result<String, JsError> {
    compute_pi_json(algorithm, digits as u64).map_err(|e| JsError::new(&e))
}

/// Array of `{n, estimate, abs_error, correct_digits, local_order}`.
#[wasm_bindgen]
pub fn convergence_table(algorithm: &str, iterations: u32, digits: u32) -> Result<String, JsError> {
    convergence_table_json(algorithm, iterations, digits as u64).map_err(|e| JsError::new(&e))
}

/// Array of identity report rows.
#[wasm_bindgen]
pub fn verify_identities(n_max: u32, digits: u32) -> Result<String, JsError> {
    verify_identities_json(n_max, digits as u64).map_err(|e| JsError::new(&e))
}
