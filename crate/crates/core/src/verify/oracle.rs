use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::apnum::{PrecisionContext, Real};

/// Extra fixed-point bits carried through the series sums.
const SERIES_GUARD: u64 = 64;

/// `arctan(1/x) * 2^bits`, truncated, by the alternating Taylor series.
fn arctan_inv_scaled(x: u32, bits: u64) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power: BigInt = (BigInt::one() << bits as usize) / &x;
    let mut sum = power.clone();
    let mut k: u64 = 1;
    loop {
        power /= &x2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

/// Pi from Machin's formula `pi/4 = 4 arctan(1/5) - arctan(1/239)`.
///
/// Independent of every AGM-style routine in this crate. The series are
/// summed in fixed point with 64 bits beyond the context, so the absolute
/// error is far below `2^(8 - binary_precision)`.
pub fn machin_pi(ctx: &PrecisionContext) -> Real {
    let bits = ctx.binary_precision() + SERIES_GUARD;
    let a5 = arctan_inv_scaled(5, bits);
    let a239 = arctan_inv_scaled(239, bits);
    let quarter = (a5 << 2usize) - a239;
    ctx.round(&Real::exact(quarter << 2usize, -(bits as i64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apnum::{make_context, to_decimal};

    #[test]
    fn ten_digits() {
        let c = make_context(10).unwrap();
        assert_eq!(to_decimal(&machin_pi(&c), 10).unwrap(), "3.141592654");
    }

    #[test]
    fn fifty_digits() {
        let c = make_context(50).unwrap();
        assert!(to_decimal(&machin_pi(&c), 51).is_err());
        assert_eq!(
            to_decimal(&machin_pi(&c), 50).unwrap(),
            "3.1415926535897932384626433832795028841971693993751"
        );
    }
}
