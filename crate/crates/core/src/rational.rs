//! Exact rational arithmetic. All truth values, payoffs, probabilities and
//! expectations in this crate are arbitrary-precision rationals; no floating
//! point appears on any semantic path.

use num::{BigInt, BigRational, One, Signed, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Builds a rational from a signed numerator and denominator.
///
/// Panics if `den` is zero.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds a rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// True iff `0 <= v <= 1`.
pub fn in_unit_interval(v: &Rational) -> bool {
    !v.is_negative() && *v <= Rational::one()
}

/// Parses `a/b` or `a` with an optional leading minus sign.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().ok()?;
            let den: BigInt = den.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(Rational::new(num, den))
        }
        None => {
            let num: BigInt = text.parse().ok()?;
            Some(Rational::from_integer(num))
        }
    }
}
