//! Pointwise truth functions of the Lukasiewicz connectives and of the
//! product-logic connectives that extend them at the goal level.
//!
//! Every function expects arguments in `[0, 1]` and returns a value in
//! `[0, 1]`; callers validate operands at the evaluation boundary.

use crate::rational::{in_unit_interval, one, zero, Rational};

fn clamped(v: Rational) -> Rational {
    debug_assert!(in_unit_interval(&v), "truth value {v} escaped [0,1]");
    v
}

/// `min(1 - a + b, 1)`
pub fn implies(a: &Rational, b: &Rational) -> Rational {
    let v = one() - a + b;
    clamped(if v > one() { one() } else { v })
}

/// `1 - a`
pub fn neg(a: &Rational) -> Rational {
    clamped(one() - a)
}

/// Strong conjunction: `max(0, a + b - 1)`
pub fn strong_conj(a: &Rational, b: &Rational) -> Rational {
    let v = a + b - one();
    clamped(if v < zero() { zero() } else { v })
}

/// Strong disjunction: `min(1, a + b)`
pub fn strong_disj(a: &Rational, b: &Rational) -> Rational {
    let v = a + b;
    clamped(if v > one() { one() } else { v })
}

/// Truncated difference: `max(0, a - b)`
pub fn trunc_sub(a: &Rational, b: &Rational) -> Rational {
    let v = a - b;
    clamped(if v < zero() { zero() } else { v })
}

/// `min(a, b)`
pub fn min_conj(a: &Rational, b: &Rational) -> Rational {
    clamped(if a <= b { a.clone() } else { b.clone() })
}

/// `max(a, b)`
pub fn max_disj(a: &Rational, b: &Rational) -> Rational {
    clamped(if a >= b { a.clone() } else { b.clone() })
}

/// `1 - |a - b|`
pub fn iff(a: &Rational, b: &Rational) -> Rational {
    clamped(one() - distance(a, b))
}

/// `|a - b|`
pub fn distance(a: &Rational, b: &Rational) -> Rational {
    clamped(if a >= b { a - b } else { b - a })
}

/// Product: `a * b`
pub fn product(a: &Rational, b: &Rational) -> Rational {
    clamped(a * b)
}

/// Truncated division: `1` if `a <= b`, else `b / a`.
///
/// The else branch implies `a > b >= 0`, so the division is well defined.
pub fn trunc_div(a: &Rational, b: &Rational) -> Rational {
    clamped(if a <= b { one() } else { b / a })
}

/// `1` if `a = 1`, else `0`; coincides with `trunc_div(neg(a), 0)`.
pub fn delta(a: &Rational) -> Rational {
    clamped(if *a >= one() { one() } else { zero() })
}
