//! Small big-integer helpers shared across the crate.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `round(num / den)` with ties rounded half away from zero.
///
/// `den` must be nonzero; its sign is taken into account.
pub fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    assert!(!den.is_zero(), "round_div by zero");
    let (num, den) = if den.is_negative() {
        (-num, -den)
    } else {
        (num.clone(), den.clone())
    };
    let twice: BigInt = &num << 1u32;
    if num.is_negative() {
        -((-twice + &den).div_floor(&(&den * 2)))
    } else {
        (twice + &den).div_floor(&(&den * 2))
    }
}

pub fn round_rational(q: &BigRational) -> BigInt {
    round_div(q.numer(), q.denom())
}

/// Base-2 logarithm of `|x|`, accurate to f64 precision for any size.
pub fn log2_abs(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().unwrap_or(f64::INFINITY).log2();
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.log2() + shift as f64
}

/// Base-2 logarithm of `|num / den|`.
pub fn log2_ratio(num: &BigInt, den: &BigInt) -> f64 {
    log2_abs(num) - log2_abs(den)
}

/// Converts `num / den` to the nearest-ish f64 without intermediate overflow.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let negative = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
    let (num, den) = (num.abs(), den.abs());
    // scale so the integer quotient carries at least 64 significant bits
    let shift = 64i64 + den.bits() as i64 - num.bits() as i64;
    let quotient = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let value = ldexp(quotient.to_f64().unwrap_or(f64::INFINITY), -shift);
    if negative {
        -value
    } else {
        value
    }
}

fn ldexp(mut x: f64, mut exp: i64) -> f64 {
    // step in chunks so intermediate powers stay representable
    while exp > 1000 {
        x *= 2f64.powi(1000);
        exp -= 1000;
    }
    while exp < -1000 {
        x *= 2f64.powi(-1000);
        exp += 1000;
    }
    x * 2f64.powi(exp as i32)
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    ratio_to_f64(q.numer(), q.denom())
}

/// Exact rational value of a finite f64.
pub fn f64_to_rational(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Parses `a/b` (or a plain integer) into an exact rational.
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let (a, b) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let a: BigInt = a.parse().ok()?;
    let b: BigInt = b.parse().ok()?;
    if b.is_zero() {
        return None;
    }
    Some(BigRational::new(a, b))
}

/// Formats an f64 as an exact `num/den` ratio.
pub fn format_f64_ratio(x: f64) -> String {
    let q = f64_to_rational(x).unwrap_or_else(BigRational::zero);
    format!("{}/{}", q.numer(), q.denom())
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

pub fn norm_sq(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |acc, x| acc + x * x)
}

pub fn is_zero_vec(a: &[BigInt]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn lcm_all<'a>(items: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    items.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x))
}

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
