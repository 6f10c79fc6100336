use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Precision tag carried by values that are exact (integer constants,
/// dyadic literals). Exact values never lose information when compared.
pub const EXACT: u64 = u64::MAX;

/// A binary floating-point number `mantissa * 2^exponent`.
///
/// The mantissa is kept odd (or zero), so two values are bit-identical
/// exactly when their mantissa, exponent and precision tag agree. `prec`
/// records the binary precision of the context that produced the value;
/// the mantissa never has more significant bits than that.
#[derive(Clone, Debug)]
pub struct Real {
    mant: BigInt,
    exp: i64,
    prec: u64,
}

impl Real {
    pub fn zero() -> Real {
        Real {
            mant: BigInt::zero(),
            exp: 0,
            prec: EXACT,
        }
    }

    pub fn one() -> Real {
        Real::exact_int(1)
    }

    pub fn exact_int(v: i64) -> Real {
        Real::exact(BigInt::from(v), 0)
    }

    pub fn exact_bigint(v: BigInt) -> Real {
        Real::exact(v, 0)
    }

    /// The exact value `mant * 2^exp`.
    pub fn exact(mant: BigInt, exp: i64) -> Real {
        normalized(mant, exp, EXACT)
    }

    pub fn exact_pow2(k: i64) -> Real {
        Real::exact(BigInt::one(), k)
    }

    /// Binary precision of the producing context, or [`EXACT`].
    pub fn precision(&self) -> u64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn neg(&self) -> Real {
        Real {
            mant: -&self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Real {
        Real {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Exact scaling by `2^k`; precision tag unchanged.
    pub fn mul_pow2(&self, k: i64) -> Real {
        if self.is_zero() {
            return self.clone();
        }
        Real {
            mant: self.mant.clone(),
            exp: self.exp + k,
            prec: self.prec,
        }
    }

    /// Re-round to `prec` bits (round-to-nearest-even).
    pub fn with_precision(&self, prec: u64) -> Real {
        if self.prec == prec {
            return self.clone();
        }
        let (neg, mag) = split(&self.mant);
        round_mag(neg, mag, self.exp, prec, false)
    }

    /// `floor(log2 |x|) + 1`, i.e. `|x|` lies in `[2^(top-1), 2^top)`.
    pub fn top(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64)
        }
    }

    /// One unit in the last place at this value's precision.
    pub fn ulp(&self) -> Option<Real> {
        if self.is_exact() {
            return None;
        }
        let top = self.top().unwrap_or(0);
        Some(Real::exact_pow2(top - self.prec as i64))
    }

    /// Nearest-ish `f64`; saturates to 0 or infinity outside the f64 range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let shift = bits.saturating_sub(60);
        let top: BigInt = self.mant.abs() >> shift;
        let m = top.to_u64().unwrap_or(u64::MAX) as f64;
        let v = ldexp(m, self.exp + shift as i64);
        if self.is_negative() {
            -v
        } else {
            v
        }
    }

    /// Approximate `log2 |x|`, valid far outside the f64 exponent range.
    pub fn log2_abs(&self) -> Option<f64> {
        if self.is_zero() {
            return None;
        }
        let bits = self.mant.bits();
        let shift = bits.saturating_sub(53);
        let top: BigInt = self.mant.abs() >> shift;
        let m = top.to_u64().unwrap_or(u64::MAX) as f64;
        Some(m.log2() + shift as f64 + self.exp as f64)
    }

    /// Compares the represented values exactly, ignoring precision tags.
    pub fn cmp_exact(&self, other: &Real) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let mag = cmp_mag(self, other);
        if sa < 0 {
            mag.reverse()
        } else {
            mag
        }
    }

    /// True when mantissa, exponent and precision tag all agree.
    pub fn bits_eq(&self, other: &Real) -> bool {
        self.mant == other.mant && self.exp == other.exp && self.prec == other.prec
    }

    fn lower_precision_pair(&self, other: &Real) -> (Real, Real) {
        let p = self.prec.min(other.prec);
        (self.with_precision(p), other.with_precision(p))
    }
}

/// Values compare after rounding both to the lower of their precisions.
impl PartialEq for Real {
    fn eq(&self, other: &Real) -> bool {
        let (a, b) = self.lower_precision_pair(other);
        a.cmp_exact(&b) == Ordering::Equal
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        let (a, b) = self.lower_precision_pair(other);
        Some(a.cmp_exact(&b))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}*2^{}", self.mant, self.exp)
        } else {
            write!(f, "{:e}", self.to_f64())
        }
    }
}

fn cmp_mag(a: &Real, b: &Real) -> Ordering {
    let (ta, tb) = (a.top().unwrap_or(i64::MIN), b.top().unwrap_or(i64::MIN));
    if ta != tb {
        return ta.cmp(&tb);
    }
    let e = a.exp.min(b.exp);
    let ma = a.mant.abs() << (a.exp - e) as usize;
    let mb = b.mant.abs() << (b.exp - e) as usize;
    ma.cmp(&mb)
}

pub(crate) fn split(m: &BigInt) -> (bool, BigUint) {
    (m.is_negative(), m.magnitude().clone())
}

fn normalized(mant: BigInt, exp: i64, prec: u64) -> Real {
    if mant.is_zero() {
        return Real { mant, exp: 0, prec };
    }
    let tz = mant.trailing_zeros().unwrap_or(0);
    Real {
        mant: mant >> tz as usize,
        exp: exp + tz as i64,
        prec,
    }
}

/// Rounds `(-1)^neg * mag * 2^exp` to `prec` bits, ties to even.
///
/// With `sticky` set the true magnitude lies strictly between `mag` and
/// `mag + 1` units. Callers must then supply at least `prec + 2` bits so
/// the odd extra bit can never be mistaken for an exact tie.
pub(crate) fn round_mag(neg: bool, mag: BigUint, exp: i64, prec: u64, sticky: bool) -> Real {
    let (mut mag, mut exp) = (mag, exp);
    if sticky {
        debug_assert!(prec != EXACT && mag.bits() >= prec + 2);
        mag = (mag << 1usize) | BigUint::one();
        exp -= 1;
    }
    if prec != EXACT {
        let bits = mag.bits();
        if bits > prec {
            let shift = bits - prec;
            let mut q: BigUint = &mag >> shift as usize;
            let rem = &mag - (&q << shift as usize);
            let half = BigUint::one() << (shift - 1) as usize;
            match rem.cmp(&half) {
                Ordering::Greater => q += 1u32,
                Ordering::Equal if q.bit(0) => q += 1u32,
                _ => {}
            }
            mag = q;
            exp += shift as i64;
        }
    }
    let m = BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, mag);
    normalized(m, exp, prec)
}

/// `m * 2^k` without leaving the f64 range prematurely.
fn ldexp(m: f64, k: i64) -> f64 {
    let mut v = m;
    let mut k = k;
    while k > 1000 {
        v *= 2f64.powi(1000);
        k -= 1000;
        if v.is_infinite() {
            return v;
        }
    }
    while k < -1000 {
        v *= 2f64.powi(-1000);
        k += 1000;
        if v == 0.0 {
            return v;
        }
    }
    v * 2f64.powi(k as i32)
}
