//! The finite truth-value scale `L_k = {0, 1/k, ..., (k-1)/k, 1}`.

use crate::rational::{rat_int, Rational};
use num::{BigInt, Signed};

/// The scale parameter of a finitely-valued game: truth values are the
/// `k + 1` equally spaced rationals `0, 1/k, ..., 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LkScale {
    k: u32,
}

impl LkScale {
    /// Panics if `k` is zero; the scale needs at least the endpoints 0 and 1.
    pub fn new(k: u32) -> Self {
        assert!(k > 0, "scale parameter k must be positive");
        LkScale { k }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Number of truth values, `k + 1`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> u64 {
        u64::from(self.k) + 1
    }

    /// Membership test: `v` is in `L_k` iff `v * k` is an integer in `[0, k]`.
    pub fn contains(&self, v: &Rational) -> bool {
        let scaled = v * rat_int(i64::from(self.k));
        scaled.is_integer() && !scaled.is_negative() && scaled.to_integer() <= BigInt::from(self.k)
    }

    /// The `i`-th truth value, `i / k`.
    pub fn value(&self, i: u64) -> Rational {
        debug_assert!(i <= u64::from(self.k));
        Rational::new(BigInt::from(i), BigInt::from(self.k))
    }

    /// All truth values in ascending order.
    pub fn values(&self) -> impl Iterator<Item = Rational> + '_ {
        (0..self.len()).map(|i| self.value(i))
    }
}

impl std::fmt::Display for LkScale {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "L_{}", self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{one, rat, zero};

    #[test]
    fn membership() {
        let l4 = LkScale::new(4);
        assert!(l4.contains(&zero()));
        assert!(l4.contains(&one()));
        assert!(l4.contains(&rat(3, 4)));
        assert!(l4.contains(&rat(1, 2)));
        assert!(!l4.contains(&rat(1, 3)));
        assert!(!l4.contains(&rat(5, 4)));
        assert!(!l4.contains(&rat(-1, 4)));
    }

    #[test]
    fn values_are_ascending_and_complete() {
        let l2 = LkScale::new(2);
        let vs: Vec<_> = l2.values().collect();
        assert_eq!(vs, vec![zero(), rat(1, 2), one()]);
        assert_eq!(l2.len(), 3);
    }
}
