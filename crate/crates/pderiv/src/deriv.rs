//! p-derivations on polynomial rings.
//!
//! The standard p-derivation on `Z[x_1, ..., x_n]` is
//! `(f(x_1^p, ..., x_n^p) - f^p) / p`. More generally, every Frobenius lift
//! `x_i -> h_i` with `h_i = x_i^p (mod p)` determines a p-derivation
//! `(Phi(f) - f^p) / p` and conversely `Phi(f) = f^p + p delta(f)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::Zero;

use crate::arith::{delta_int, exact_div, PrimeInt};
use crate::poly::{Poly, VarContext};

/// A lift candidate whose image failed the `h_i = x_i^p (mod p)` congruence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftError {
    pub variable: String,
}

impl fmt::Display for LiftError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "image of {} is not congruent to {}^p modulo p",
            self.variable, self.variable
        )
    }
}

impl std::error::Error for LiftError {}

/// A Frobenius lift of `Z[x_1, ..., x_n]`, given by per-variable images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusLift {
    p: PrimeInt,
    ctx: VarContext,
    images: Vec<Poly>,
}

impl FrobeniusLift {
    /// Validates `h_i = x_i^p (mod p)` for every image at construction.
    pub fn new(p: PrimeInt, ctx: &VarContext, images: Vec<Poly>) -> Result<Self, LiftError> {
        assert_eq!(images.len(), ctx.arity(), "one image per variable required");
        for (i, h) in images.iter().enumerate() {
            assert!(*h.context() == *ctx, "image context mismatch");
            let xi_p = Poly::variable(ctx, i).pow(p.as_u32());
            if !(h - &xi_p).reduce_mod(&p).is_zero() {
                return Err(LiftError { variable: ctx.name(i).to_string() });
            }
        }
        Ok(FrobeniusLift { p, ctx: ctx.clone(), images })
    }

    /// The lift `x_i -> x_i^p` underlying the standard p-derivation.
    pub fn standard(p: PrimeInt, ctx: &VarContext) -> Self {
        let images = (0..ctx.arity())
            .map(|i| Poly::variable(ctx, i).pow(p.as_u32()))
            .collect();
        FrobeniusLift { p, ctx: ctx.clone(), images }
    }

    pub fn prime(&self) -> &PrimeInt {
        &self.p
    }

    pub fn context(&self) -> &VarContext {
        &self.ctx
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    /// Applies the lift by direct substitution of the variable images.
    pub fn apply(&self, f: &Poly) -> Poly {
        assert!(*f.context() == self.ctx, "polynomial context mismatch");
        f.substitute(&self.images)
    }
}

/// The p-derivation determined by a Frobenius lift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PDerivation {
    lift: FrobeniusLift,
}

impl PDerivation {
    pub fn from_lift(lift: FrobeniusLift) -> Self {
        PDerivation { lift }
    }

    pub fn standard(p: PrimeInt, ctx: &VarContext) -> Self {
        PDerivation { lift: FrobeniusLift::standard(p, ctx) }
    }

    pub fn lift(&self) -> &FrobeniusLift {
        &self.lift
    }

    /// `(Phi(f) - f^p) / p` with the division checked exact; an inexact
    /// division means an invalid lift escaped construction.
    pub fn delta(&self, f: &Poly) -> Poly {
        let p = &self.lift.p;
        let numerator = &self.lift.apply(f) - &f.pow(p.as_u32());
        numerator.exact_div_scalar(p.value())
    }

    /// `f^p + p delta(f)`; coincides with applying the lift directly.
    pub fn lift_apply(&self, f: &Poly) -> Poly {
        let p = &self.lift.p;
        &f.pow(p.as_u32()) + &self.delta(f).scale(p.value())
    }
}

/// The standard p-derivation `(f(x_1^p, ..., x_n^p) - f^p) / p`.
///
/// Panics with a divisibility diagnostic if the numerator is not divisible
/// by p, which cannot happen for a genuine prime.
pub fn standard_delta(p: &PrimeInt, f: &Poly) -> Poly {
    let numerator = &f.frobenius_substitute(p) - &f.pow(p.as_u32());
    numerator.exact_div_scalar(p.value())
}

/// k-fold composition of the standard p-derivation; k = 0 is the identity.
pub fn iterate_delta(p: &PrimeInt, f: &Poly, k: u32) -> Poly {
    let mut acc = f.clone();
    for _ in 0..k {
        acc = standard_delta(p, &acc);
    }
    acc
}

/// Right-hand side of the chain rule for a univariate f and integer n:
/// `delta_st(f)(n) + sum_{j=1}^{deg f} p^{j-1} (d^j f / j! dx^j)(n^p) delta_p(n)^j`.
pub fn chain_rule_rhs(p: &PrimeInt, f: &Poly, n: &BigInt) -> BigInt {
    assert_eq!(f.context().arity(), 1, "chain rule requires a univariate polynomial");
    let deg = f.univariate_degree().expect("univariate").unwrap_or(0);
    let dn = delta_int(p, n);
    let np = n.pow(p.as_u32());
    let mut acc = standard_delta(p, f).eval_int(std::slice::from_ref(n));
    for j in 1..=deg {
        acc += p.value().pow(j - 1)
            * f.divided_partial(0, j).eval_int(std::slice::from_ref(&np))
            * dn.pow(j);
    }
    acc
}

/// The polynomial sum-rule error term
/// `-sum_{i=1}^{p-1} (C(p,i)/p) f^i g^{p-i}`, so that
/// `delta(f + g) = delta(f) + delta(g) + sum_rule_error(p, f, g)`.
pub fn sum_rule_error(p: &PrimeInt, f: &Poly, g: &Poly) -> Poly {
    let pv = p.as_u32();
    let mut acc = Poly::zero(f.context());
    for i in 1..pv {
        let binom = binomial(p.value().clone(), BigInt::from(i));
        let coeff = exact_div(&binom, p.value());
        acc = &acc + &(&f.pow(i) * &g.pow(pv - i)).scale(&coeff);
    }
    -&acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;

    fn ctx(names: &str) -> VarContext {
        VarContext::new(names.split(',')).unwrap()
    }

    fn p(text: &str, ctx: &VarContext) -> Poly {
        parse_poly(text, ctx).unwrap()
    }

    fn prime(q: u32) -> PrimeInt {
        PrimeInt::new(q).unwrap()
    }

    #[test]
    fn standard_delta_worked_example() {
        let c = ctx("x");
        assert_eq!(
            standard_delta(&prime(2), &p("x^3 + 5*x", &c)),
            p("-5*x^4 - 10*x^2", &c)
        );
    }

    #[test]
    fn standard_delta_cubic() {
        let c = ctx("x");
        assert_eq!(
            standard_delta(&prime(3), &p("x^3 - 2", &c)),
            p("2*x^6 - 4*x^3 + 2", &c)
        );
        assert_eq!(standard_delta(&prime(5), &p("1", &c)), Poly::zero(&c));
    }

    #[test]
    fn lift_delta_matches_standard() {
        let c = ctx("x");
        let op = PDerivation::standard(prime(2), &c);
        let f = p("x^3 + 5*x", &c);
        assert_eq!(op.delta(&f), standard_delta(&prime(2), &f));
        assert_eq!(op.delta(&Poly::zero(&c)), Poly::zero(&c));
    }

    #[test]
    fn custom_lift_delta() {
        let c = ctx("x");
        let lift = FrobeniusLift::new(prime(2), &c, vec![p("x^2 + 6", &c)]).unwrap();
        let op = PDerivation::from_lift(lift);
        assert_eq!(op.delta(&p("x", &c)), p("3", &c));
    }

    #[test]
    fn invalid_lift_rejected() {
        let c = ctx("x");
        let err = FrobeniusLift::new(prime(2), &c, vec![p("x^2 + 1", &c)]).unwrap_err();
        assert_eq!(err.variable, "x");
    }

    #[test]
    fn lift_apply_identities() {
        let c = ctx("x");
        let two = PDerivation::standard(prime(2), &c);
        assert_eq!(two.lift_apply(&p("x", &c)), p("x^2", &c));
        let three = PDerivation::standard(prime(3), &c);
        let f = p("x + 1", &c);
        assert_eq!(three.lift_apply(&f), p("x^3 + 1", &c));
        assert_eq!(three.lift_apply(&f), three.lift().apply(&f));
        assert_eq!(two.lift_apply(&Poly::one(&c)), Poly::one(&c));
    }

    #[test]
    fn iteration() {
        let c = ctx("x");
        let two = prime(2);
        assert_eq!(iterate_delta(&two, &p("2", &c), 2), p("-1", &c));
        let f = p("x^2 - 3", &c);
        assert_eq!(iterate_delta(&prime(3), &f, 0), f);
        assert_eq!(iterate_delta(&two, &p("4", &c), 1), p("-6", &c));
    }

    #[test]
    fn chain_rule_anchor() {
        let c = ctx("x");
        let f = p("x^3 + 5*x", &c);
        let n = BigInt::from(2);
        let rhs = chain_rule_rhs(&prime(2), &f, &n);
        assert_eq!(rhs, BigInt::from(-153));
        let fn_value = f.eval_int(std::slice::from_ref(&n));
        assert_eq!(delta_int(&prime(2), &fn_value), rhs);
    }

    #[test]
    fn chain_rule_degenerate_cases() {
        let c = ctx("x");
        let five = prime(5);
        let n = BigInt::from(7);
        assert_eq!(chain_rule_rhs(&five, &p("x", &c), &n), delta_int(&five, &n));
        let three = prime(3);
        assert_eq!(
            chain_rule_rhs(&three, &p("11", &c), &n),
            delta_int(&three, &BigInt::from(11))
        );
    }

    #[test]
    fn constant_compatibility() {
        let c = ctx("x,y");
        for q in [2u32, 3, 5] {
            let pr = prime(q);
            let n = BigInt::from(-9);
            assert_eq!(
                standard_delta(&pr, &Poly::constant(&c, n.clone())),
                Poly::constant(&c, delta_int(&pr, &n))
            );
        }
    }

    #[test]
    fn sum_rule_small_case() {
        let c = ctx("x");
        let pr = prime(3);
        let f = p("x^2 + 1", &c);
        let g = p("2*x - 4", &c);
        let lhs = standard_delta(&pr, &(&f + &g));
        let rhs = &(&standard_delta(&pr, &f) + &standard_delta(&pr, &g))
            + &sum_rule_error(&pr, &f, &g);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_rule_small_case() {
        let c = ctx("x");
        let pr = prime(2);
        let f = p("x^2 + 1", &c);
        let g = p("x - 3", &c);
        let df = standard_delta(&pr, &f);
        let dg = standard_delta(&pr, &g);
        let lhs = standard_delta(&pr, &(&f * &g));
        let rhs = &(&(&f.pow(2) * &dg) + &(&g.pow(2) * &df)) + &(&df * &dg).scale(pr.value());
        assert_eq!(lhs, rhs);
    }
}
