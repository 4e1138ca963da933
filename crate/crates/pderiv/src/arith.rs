//! p-derivations on integers and rationals.
//!
//! The p-derivation on the integers is `delta_p(n) = (n - n^p) / p`; the
//! division is exact by Fermat's little theorem. This module implements the
//! operator together with the sum, product, power and quotient rules it
//! satisfies, all in exact arbitrary-precision arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational with reduced numerator and positive denominator.
pub type BigRat = BigRational;

/// Largest prime accepted by [`PrimeInt::new`]. Primality is established by
/// deterministic trial division, so inputs are capped at desk scale.
pub const MAX_PRIME: u32 = 10_000;

/// Errors from the integer-level operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArithError {
    /// The candidate modulus failed the trial-division primality check.
    NotPrime(BigInt),
    /// The candidate modulus exceeds [`MAX_PRIME`].
    PrimeTooLarge(BigInt),
    /// `ord_p(0)` is undefined (the order is infinite).
    OrdOfZero,
    /// Quotient-rule denominator input was zero.
    ZeroDenominator,
}

impl fmt::Display for ArithError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithError::NotPrime(n) => write!(f, "{} is not prime", n),
            ArithError::PrimeTooLarge(n) => {
                write!(f, "{} exceeds the prime cap {}", n, MAX_PRIME)
            }
            ArithError::OrdOfZero => write!(f, "p-adic order of 0 is undefined"),
            ArithError::ZeroDenominator => write!(f, "denominator input must be nonzero"),
        }
    }
}

impl std::error::Error for ArithError {}

/// A validated prime number p with 2 <= p <= [`MAX_PRIME`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeInt {
    value: BigInt,
}

impl PrimeInt {
    /// Validates primality by trial division up to sqrt(p).
    pub fn new(value: impl Into<BigInt>) -> Result<Self, ArithError> {
        let value = value.into();
        if value > BigInt::from(MAX_PRIME) {
            return Err(ArithError::PrimeTooLarge(value));
        }
        let Some(v) = u32::try_from(&value).ok() else {
            return Err(ArithError::NotPrime(value));
        };
        if v < 2 {
            return Err(ArithError::NotPrime(value));
        }
        let mut d = 2u32;
        while d * d <= v {
            if v % d == 0 {
                return Err(ArithError::NotPrime(value));
            }
            d += 1;
        }
        Ok(PrimeInt { value })
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    /// The prime as a machine exponent; always fits by the [`MAX_PRIME`] cap.
    pub fn as_u32(&self) -> u32 {
        u32::try_from(&self.value).expect("prime fits in u32 by construction")
    }

    pub fn is_two(&self) -> bool {
        self.as_u32() == 2
    }
}

impl fmt::Display for PrimeInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

/// Divides exactly, panicking if the division leaves a remainder.
///
/// Inexact division in this crate always signals a broken invariant (a
/// non-prime modulus slipped through, or an identity was misstated), so the
/// diagnostic names both operands.
pub(crate) fn exact_div(numerator: &BigInt, denominator: &BigInt) -> BigInt {
    let (q, r) = numerator.div_rem(denominator);
    assert!(
        r.is_zero(),
        "exact division failed: {} is not divisible by {}",
        numerator,
        denominator
    );
    q
}

/// The p-derivation on the integers: `(n - n^p) / p`.
pub fn delta_int(p: &PrimeInt, n: &BigInt) -> BigInt {
    let np = n.pow(p.as_u32());
    exact_div(&(n - np), p.value())
}

/// The p-derivation extended to the rationals: `(r - r^p) / p`.
pub fn delta_rat(p: &PrimeInt, r: &BigRat) -> BigRat {
    let rp = pow_rat(r, p.as_u32());
    (r - rp) / BigRat::from(p.value().clone())
}

fn pow_rat(r: &BigRat, e: u32) -> BigRat {
    BigRat::new_raw(r.numer().pow(e), r.denom().pow(e))
}

/// The p-adic order of a nonzero integer: the multiplicity of p in n.
pub fn ord_p(p: &PrimeInt, n: &BigInt) -> Result<u64, ArithError> {
    if n.is_zero() {
        return Err(ArithError::OrdOfZero);
    }
    let mut m = n.clone();
    let mut order = 0u64;
    loop {
        let (q, r) = m.div_rem(p.value());
        if !r.is_zero() {
            return Ok(order);
        }
        order += 1;
        m = q;
    }
}

/// The sum-rule error term `C_p(m, n) = -sum_{i=1}^{p-1} (C(p,i)/p) m^i n^{p-i}`.
///
/// Each binomial coefficient `C(p, i)` with `0 < i < p` is a multiple of p,
/// so each summand is an exact integer.
pub fn cp_error_term(p: &PrimeInt, m: &BigInt, n: &BigInt) -> BigInt {
    let pv = p.as_u32();
    let mut acc = BigInt::zero();
    for i in 1..pv {
        let binom = binomial(p.value().clone(), BigInt::from(i));
        let coeff = exact_div(&binom, p.value());
        acc += coeff * m.pow(i) * n.pow(pv - i);
    }
    -acc
}

/// Right-hand side of the power rule:
/// `delta_p(n^a) = sum_{i=1}^{a} C(a,i) p^{i-1} delta_p(n)^i n^{(a-i)p}`.
pub fn power_rule_rhs(p: &PrimeInt, n: &BigInt, a: u32) -> BigInt {
    assert!(a >= 1, "power rule exponent must be positive");
    let d = delta_int(p, n);
    let mut acc = BigInt::zero();
    for i in 1..=a {
        let term = binomial(BigInt::from(a), BigInt::from(i))
            * p.value().pow(i - 1)
            * d.pow(i)
            * n.pow((a - i) * p.as_u32());
        acc += term;
    }
    acc
}

/// Right-hand side of the quotient rule:
/// `delta_p(m/n) = (n^p delta_p(m) - m^p delta_p(n)) / (n^{2p} + p n^p delta_p(n))`.
pub fn quotient_rule_rhs(p: &PrimeInt, m: &BigInt, n: &BigInt) -> Result<BigRat, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroDenominator);
    }
    let pv = p.as_u32();
    let dm = delta_int(p, m);
    let dn = delta_int(p, n);
    let numer = n.pow(pv) * dm - m.pow(pv) * &dn;
    let denom = n.pow(2 * pv) + p.value() * n.pow(pv) * dn;
    Ok(BigRat::new(numer, denom))
}

/// The Frobenius lift attached to `delta_p` on the integers:
/// `n^p + p delta_p(n)`, which collapses to n itself.
pub fn canonical_lift_int(p: &PrimeInt, n: &BigInt) -> BigInt {
    n.pow(p.as_u32()) + p.value() * delta_int(p, n)
}

/// True when no prime square divides n. Fully factors by trial division, so
/// |n| is capped at 10^12 (every prime factor below 10^6 is then reachable).
pub fn is_squarefree(n: &BigInt) -> Result<bool, SquarefreeError> {
    if n.is_zero() {
        return Ok(false);
    }
    if n.abs() > BigInt::from(1_000_000_000_000u64) {
        return Err(SquarefreeError::InputTooLarge(n.clone()));
    }
    let mut m = u64::try_from(n.abs()).expect("bounded above");
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return Ok(false);
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    Ok(true)
}

/// Error from the squarefreeness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SquarefreeError {
    /// |n| exceeds the trial-division cap of 10^12.
    InputTooLarge(BigInt),
}

impl fmt::Display for SquarefreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SquarefreeError::InputTooLarge(n) => {
                write!(f, "{} is too large for the squarefreeness check", n)
            }
        }
    }
}

impl std::error::Error for SquarefreeError {}

#[cfg(test)]
mod tests {
    use super::*;

    fn prime(p: u32) -> PrimeInt {
        PrimeInt::new(p).unwrap()
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn rat(n: i64, d: i64) -> BigRat {
        BigRat::new(big(n), big(d))
    }

    #[test]
    fn prime_validation() {
        assert!(PrimeInt::new(2).is_ok());
        assert!(PrimeInt::new(9973).is_ok());
        assert_eq!(PrimeInt::new(4).unwrap_err(), ArithError::NotPrime(big(4)));
        assert_eq!(PrimeInt::new(1).unwrap_err(), ArithError::NotPrime(big(1)));
        assert_eq!(PrimeInt::new(0).unwrap_err(), ArithError::NotPrime(big(0)));
        assert_eq!(
            PrimeInt::new(-3).unwrap_err(),
            ArithError::NotPrime(big(-3))
        );
        assert!(matches!(
            PrimeInt::new(10_007).unwrap_err(),
            ArithError::PrimeTooLarge(_)
        ));
        assert_eq!(PrimeInt::new(4).unwrap_err().to_string(), "4 is not prime");
    }

    #[test]
    fn delta_int_table_values() {
        assert_eq!(delta_int(&prime(2), &big(6)), big(-15));
        assert_eq!(delta_int(&prime(5), &big(-4)), big(204));
        assert_eq!(delta_int(&prime(3), &big(1)), big(0));
        assert_eq!(delta_int(&prime(13), &big(2)), big(-630));
    }

    #[test]
    fn delta_rat_values() {
        assert_eq!(delta_rat(&prime(2), &rat(1, 2)), rat(1, 8));
        assert_eq!(delta_rat(&prime(3), &rat(2, 1)), rat(-2, 1));
        assert_eq!(delta_rat(&prime(5), &rat(1, 1)), rat(0, 1));
    }

    #[test]
    fn ord_p_values() {
        assert_eq!(ord_p(&prime(2), &big(12)).unwrap(), 2);
        assert_eq!(ord_p(&prime(3), &big(8)).unwrap(), 0);
        // -66 = delta_2(12); order drops from 2 to 1.
        assert_eq!(delta_int(&prime(2), &big(12)), big(-66));
        assert_eq!(ord_p(&prime(2), &big(-66)).unwrap(), 1);
        assert_eq!(ord_p(&prime(2), &big(0)).unwrap_err(), ArithError::OrdOfZero);
    }

    #[test]
    fn cp_error_term_values() {
        assert_eq!(cp_error_term(&prime(2), &big(1), &big(1)), big(-1));
        assert_eq!(cp_error_term(&prime(3), &big(1), &big(1)), big(-2));
        assert_eq!(cp_error_term(&prime(5), &big(0), &big(7)), big(0));
        // delta_3(2) via the sum rule on 1 + 1 agrees with the direct value.
        let p = prime(3);
        let lhs = delta_int(&p, &big(2));
        let rhs = delta_int(&p, &big(1)) + delta_int(&p, &big(1)) + cp_error_term(&p, &big(1), &big(1));
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, big(-2));
    }

    #[test]
    fn power_rule_values() {
        assert_eq!(power_rule_rhs(&prime(2), &big(3), 2), big(-36));
        assert_eq!(delta_int(&prime(2), &big(9)), big(-36));
        assert_eq!(power_rule_rhs(&prime(3), &big(1), 5), big(0));
        assert_eq!(power_rule_rhs(&prime(2), &big(2), 1), big(-1));
    }

    #[test]
    fn quotient_rule_values() {
        assert_eq!(quotient_rule_rhs(&prime(2), &big(1), &big(2)).unwrap(), rat(1, 8));
        assert_eq!(quotient_rule_rhs(&prime(3), &big(4), &big(1)).unwrap(), rat(-20, 1));
        assert_eq!(quotient_rule_rhs(&prime(2), &big(0), &big(5)).unwrap(), rat(0, 1));
        assert_eq!(
            quotient_rule_rhs(&prime(2), &big(1), &big(0)).unwrap_err(),
            ArithError::ZeroDenominator
        );
    }

    #[test]
    fn canonical_lift_is_identity() {
        assert_eq!(canonical_lift_int(&prime(2), &big(6)), big(6));
        assert_eq!(canonical_lift_int(&prime(13), &big(-7)), big(-7));
        assert_eq!(canonical_lift_int(&prime(3), &big(0)), big(0));
    }

    #[test]
    fn odd_function_fails_for_two() {
        // delta_2(-1) = -1 while -delta_2(1) = 0.
        let p = prime(2);
        assert_eq!(delta_int(&p, &big(-1)), big(-1));
        assert_eq!(delta_int(&p, &big(1)), big(0));
    }

    #[test]
    fn squarefree_check() {
        assert!(is_squarefree(&big(10)).unwrap());
        assert!(is_squarefree(&big(-15)).unwrap());
        assert!(is_squarefree(&big(-1)).unwrap());
        assert!(!is_squarefree(&big(12)).unwrap());
        assert!(!is_squarefree(&big(0)).unwrap());
        assert!(!is_squarefree(&big(-49)).unwrap());
        // 10^12 = 2^12 * 5^12 sits exactly at the cap.
        assert!(!is_squarefree(&big(1_000_000_000_000)).unwrap());
        assert!(matches!(
            is_squarefree(&BigInt::from(2_000_000_000_000u64)),
            Err(SquarefreeError::InputTooLarge(_))
        ));
    }
}
