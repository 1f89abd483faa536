//! Exact rational arithmetic helpers.
//!
//! Probabilities throughout the crate are arbitrary-precision rationals so
//! that distribution sums, bin masses, and the scheme's rounded increments
//! are computed without any floating-point tolerance. Utilities stay `f64`:
//! only their order and weighted sums matter.

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

/// Exact probability type used everywhere in this crate.
pub type Rational = num_rational::BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `n / d` from unsigned parts. Panics if `d == 0`.
pub fn ratio_u(n: u64, d: u64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Nearest `f64` to an exact rational.
///
/// Panics only if the value overflows `f64`, which cannot happen for
/// probabilities and the moderate utility scales this crate works with.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64()
        .unwrap_or_else(|| panic!("rational {r} does not fit in f64"))
}

/// The exact rational value of a finite `f64` (every finite float is dyadic).
/// Returns `None` for NaN or infinities.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_f64(x)
}

/// Parses `"num/den"` or a plain integer string into an exact rational.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<BigInt>().ok()?,
            d.trim().parse::<BigInt>().ok()?,
        ),
        None => (s.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Canonical `"num/den"` rendering (always includes the denominator).
pub fn render(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `floor(r)` as `u64`; `r` must be nonnegative and small enough to fit.
pub fn floor_u64(r: &Rational) -> u64 {
    debug_assert!(!r.is_negative());
    r.floor()
        .to_integer()
        .to_u64()
        .expect("floor exceeds u64 range")
}

/// Smallest integer `>= r`, clamped below at zero.
pub fn ceil_at_least_zero(r: &Rational) -> u64 {
    if r.is_negative() {
        0
    } else {
        r.ceil()
            .to_integer()
            .to_u64()
            .expect("ceil exceeds u64 range")
    }
}
