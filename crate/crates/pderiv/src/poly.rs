//! Sparse multivariate polynomials over the integers.
//!
//! A [`Poly`] is a map from exponent vectors to nonzero arbitrary-precision
//! coefficients, tied to a fixed [`VarContext`]. Canonical form (no zero
//! coefficients, merged keys) is restored after every operation, so equality
//! is structural.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_traits::{One, Signed, Zero};

use crate::arith::{BigRat, PrimeInt};

/// Errors from building a variable context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContextError {
    Empty,
    BadName(String),
    DuplicateName(String),
}

impl fmt::Display for ContextError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContextError::Empty => write!(f, "variable context must be nonempty"),
            ContextError::BadName(s) => {
                write!(f, "bad variable name {:?} (expected [a-z][a-z0-9_]*)", s)
            }
            ContextError::DuplicateName(s) => write!(f, "duplicate variable name {:?}", s),
        }
    }
}

impl std::error::Error for ContextError {}

/// Errors from the univariate operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    NotUnivariate,
    NotMonic,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::NotUnivariate => write!(f, "operation requires a one-variable context"),
            PolyError::NotMonic => write!(f, "divisor must be monic of degree >= 1"),
        }
    }
}

impl std::error::Error for PolyError {}

/// An ordered list of distinct variable names, fixed for the lifetime of
/// every polynomial built against it.
#[derive(Clone, Eq)]
pub struct VarContext {
    vars: Arc<Vec<String>>,
}

impl VarContext {
    /// Validates that names are distinct and match `[a-z][a-z0-9_]*`.
    pub fn new<I, S>(names: I) -> Result<Self, ContextError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars: Vec<String> = names.into_iter().map(Into::into).collect();
        if vars.is_empty() {
            return Err(ContextError::Empty);
        }
        for (i, name) in vars.iter().enumerate() {
            if !valid_var_name(name) {
                return Err(ContextError::BadName(name.clone()));
            }
            if vars[..i].contains(name) {
                return Err(ContextError::DuplicateName(name.clone()));
            }
        }
        Ok(VarContext { vars: Arc::new(vars) })
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn names(&self) -> &[String] {
        &self.vars
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vars[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

fn valid_var_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl PartialEq for VarContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }
}

impl fmt::Debug for VarContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarContext({})", self.vars.join(","))
    }
}

/// An exponent vector, one entry per context variable.
///
/// Ordered graded-lexicographically: total degree first, then lexicographic
/// comparison of the exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b).expect("monomial exponent overflow"))
            .collect();
        Monomial { exps }
    }

    fn scale(&self, k: u32) -> Monomial {
        let exps = self
            .exps
            .iter()
            .map(|e| e.checked_mul(k).expect("monomial exponent overflow"))
            .collect();
        Monomial { exps }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse polynomial with integer coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    ctx: VarContext,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero(ctx: &VarContext) -> Self {
        Poly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &VarContext) -> Self {
        Poly::constant(ctx, 1)
    }

    pub fn constant(ctx: &VarContext, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(vec![0; ctx.arity()]), c);
        }
        Poly { ctx: ctx.clone(), terms }
    }

    /// The i-th context variable as a polynomial.
    pub fn variable(ctx: &VarContext, i: usize) -> Self {
        assert!(i < ctx.arity(), "variable index out of range");
        let mut exps = vec![0; ctx.arity()];
        exps[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::new(exps), BigInt::one());
        Poly { ctx: ctx.clone(), terms }
    }

    /// Builds a polynomial from raw terms, merging duplicate monomials and
    /// dropping zero coefficients.
    pub fn from_terms<I>(ctx: &VarContext, raw: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (mono, coeff) in raw {
            assert_eq!(mono.exponents().len(), ctx.arity(), "monomial arity mismatch");
            merge_term(&mut terms, mono, coeff);
        }
        Poly { ctx: ctx.clone(), terms }
    }

    pub fn context(&self) -> &VarContext {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded-lex ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> BigInt {
        self.terms.get(mono).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&Monomial::new(vec![0; self.ctx.arity()]))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Gcd of all coefficients (nonnegative); zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.ctx);
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to the i-th variable.
    pub fn partial_derivative(&self, i: usize) -> Poly {
        assert!(i < self.ctx.arity(), "variable index out of range");
        let mut terms = BTreeMap::new();
        for (mono, coeff) in &self.terms {
            let e = mono.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut exps = mono.exponents().to_vec();
            exps[i] = e - 1;
            merge_term(&mut terms, Monomial::new(exps), coeff * BigInt::from(e));
        }
        Poly { ctx: self.ctx.clone(), terms }
    }

    /// Divided-power derivative of order j in the i-th variable:
    /// the coefficient of `x^k` maps to `C(k, j) x^{k-j}`, which equals
    /// `(1/j!) d^j/dx^j` and stays integral.
    pub fn divided_partial(&self, i: usize, j: u32) -> Poly {
        assert!(i < self.ctx.arity(), "variable index out of range");
        if j == 0 {
            return self.clone();
        }
        let mut terms = BTreeMap::new();
        for (mono, coeff) in &self.terms {
            let e = mono.exponents()[i];
            if e < j {
                continue;
            }
            let mut exps = mono.exponents().to_vec();
            exps[i] = e - j;
            let binom = binomial(BigInt::from(e), BigInt::from(j));
            merge_term(&mut terms, Monomial::new(exps), coeff * binom);
        }
        Poly { ctx: self.ctx.clone(), terms }
    }

    /// Substitutes `x_i -> x_i^p`, scaling every exponent vector by p.
    pub fn frobenius_substitute(&self, p: &PrimeInt) -> Poly {
        let k = p.as_u32();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.scale(k), c.clone()))
            .collect();
        Poly { ctx: self.ctx.clone(), terms }
    }

    /// Substitutes `x_i -> images[i]`. All images must share one context,
    /// which becomes the context of the result.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.ctx.arity(), "one image per variable required");
        let target = images[0].context().clone();
        for im in images {
            assert!(*im.context() == target, "images must share a context");
        }
        let mut acc = Poly::zero(&target);
        for (mono, coeff) in &self.terms {
            let mut prod = Poly::constant(&target, coeff.clone());
            for (i, &e) in mono.exponents().iter().enumerate() {
                if e > 0 {
                    prod = &prod * &images[i].pow(e);
                }
            }
            acc = &acc + &prod;
        }
        acc
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[BigRat]) -> BigRat {
        assert_eq!(point.len(), self.ctx.arity(), "point arity mismatch");
        let mut acc = BigRat::zero();
        for (mono, coeff) in &self.terms {
            let mut term = BigRat::from(coeff.clone());
            for (i, &e) in mono.exponents().iter().enumerate() {
                if e > 0 {
                    term *= pow_rat(&point[i], e);
                }
            }
            acc += term;
        }
        acc
    }

    /// Exact evaluation at an integer point.
    pub fn eval_int(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.ctx.arity(), "point arity mismatch");
        let mut acc = BigInt::zero();
        for (mono, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (i, &e) in mono.exponents().iter().enumerate() {
                if e > 0 {
                    term *= point[i].pow(e);
                }
            }
            acc += term;
        }
        acc
    }

    /// Reduces every coefficient into `{0, ..., p-1}`, dropping zeros.
    pub fn reduce_mod(&self, p: &PrimeInt) -> Poly {
        let mut terms = BTreeMap::new();
        for (mono, coeff) in &self.terms {
            let r = coeff.mod_floor(p.value());
            if !r.is_zero() {
                terms.insert(mono.clone(), r);
            }
        }
        Poly { ctx: self.ctx.clone(), terms }
    }

    /// Divides every coefficient exactly by d, panicking with a diagnostic
    /// if any coefficient is not divisible.
    pub(crate) fn exact_div_scalar(&self, d: &BigInt) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), crate::arith::exact_div(c, d)))
            .collect();
        Poly { ctx: self.ctx.clone(), terms }
    }

    pub(crate) fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect();
        Poly { ctx: self.ctx.clone(), terms }
    }

    /// Degree in a one-variable context; `None` for the zero polynomial.
    pub fn univariate_degree(&self) -> Result<Option<u32>, PolyError> {
        if self.ctx.arity() != 1 {
            return Err(PolyError::NotUnivariate);
        }
        Ok(self.terms.keys().next_back().map(|m| m.exponents()[0]))
    }

    fn univariate_coeff(&self, e: u32) -> BigInt {
        self.coefficient(&Monomial::new(vec![e]))
    }
}

pub(crate) fn pow_rat(r: &BigRat, e: u32) -> BigRat {
    // Reduced inputs stay reduced under powers, so the raw constructor is safe.
    BigRat::new_raw(r.numer().pow(e), r.denom().pow(e))
}

fn merge_term(terms: &mut BTreeMap<Monomial, BigInt>, mono: Monomial, coeff: BigInt) {
    if coeff.is_zero() {
        return;
    }
    match terms.entry(mono) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(coeff);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += coeff;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn assert_same_context(a: &Poly, b: &Poly) {
    assert!(
        a.ctx == b.ctx,
        "polynomial context mismatch: {:?} vs {:?}",
        a.ctx,
        b.ctx
    );
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        assert_same_context(self, rhs);
        let mut terms = self.terms.clone();
        for (mono, coeff) in &rhs.terms {
            merge_term(&mut terms, mono.clone(), coeff.clone());
        }
        Poly { ctx: self.ctx.clone(), terms }
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        assert_same_context(self, rhs);
        let mut terms = self.terms.clone();
        for (mono, coeff) in &rhs.terms {
            merge_term(&mut terms, mono.clone(), -coeff.clone());
        }
        Poly { ctx: self.ctx.clone(), terms }
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Poly { ctx: self.ctx.clone(), terms }
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        assert_same_context(self, rhs);
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                merge_term(&mut terms, ma.mul(mb), ca * cb);
            }
        }
        Poly { ctx: self.ctx.clone(), terms }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

/// Remainder of f upon division by a monic univariate g; exact over the
/// integers because g is monic.
pub fn univariate_reduce(f: &Poly, g: &Poly) -> Result<Poly, PolyError> {
    assert_same_context(f, g);
    let deg_g = match g.univariate_degree()? {
        Some(d) if d >= 1 => d,
        _ => return Err(PolyError::NotMonic),
    };
    if !g.univariate_coeff(deg_g).is_one() {
        return Err(PolyError::NotMonic);
    }
    let mut r = f.clone();
    loop {
        let deg_r = match r.univariate_degree()? {
            Some(d) if d >= deg_g => d,
            _ => return Ok(r),
        };
        let lead = r.univariate_coeff(deg_r);
        // r -= lead * x^(deg_r - deg_g) * g
        let shift = Poly::from_terms(
            f.context(),
            [(Monomial::new(vec![deg_r - deg_g]), lead)],
        );
        r = &r - &(&shift * g);
    }
}

/// Monic gcd in F_p[x] of the mod-p reductions of the inputs; the gcd of
/// all-zero inputs is zero.
pub fn univariate_gcd_mod_p(fs: &[Poly], p: &PrimeInt) -> Poly {
    assert!(!fs.is_empty(), "gcd of an empty list");
    let ctx = fs[0].context().clone();
    assert!(ctx.arity() == 1, "gcd requires a one-variable context");
    for f in fs {
        assert!(*f.context() == ctx, "gcd inputs must share a context");
    }
    let pm = u64::from(p.as_u32());
    let mut acc: Vec<u64> = Vec::new();
    for f in fs {
        let dense = to_dense_mod_p(f, pm);
        acc = dense_gcd(acc, dense, pm);
    }
    // Normalize to a monic representative.
    if let Some(&lead) = acc.last() {
        let inv = mod_inverse(lead, pm);
        for c in &mut acc {
            *c = *c * inv % pm;
        }
    }
    from_dense(&ctx, &acc)
}

fn to_dense_mod_p(f: &Poly, p: u64) -> Vec<u64> {
    let mut dense: Vec<u64> = Vec::new();
    for (mono, coeff) in f.terms() {
        let e = mono.exponents()[0] as usize;
        if dense.len() <= e {
            dense.resize(e + 1, 0);
        }
        let c = coeff.mod_floor(&BigInt::from(p));
        dense[e] = u64::try_from(c).expect("residue fits u64");
    }
    trim_zeros(&mut dense);
    dense
}

fn from_dense(ctx: &VarContext, dense: &[u64]) -> Poly {
    Poly::from_terms(
        ctx,
        dense.iter().enumerate().filter(|(_, &c)| c != 0).map(|(e, &c)| {
            (Monomial::new(vec![e as u32]), BigInt::from(c))
        }),
    )
}

fn trim_zeros(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn dense_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    while !b.is_empty() {
        let r = dense_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn dense_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let lead_inv = mod_inverse(*b.last().expect("nonzero divisor"), p);
    while r.len() >= b.len() {
        let factor = *r.last().expect("trimmed") * lead_inv % p;
        let shift = r.len() - b.len();
        for (i, &bc) in b.iter().enumerate() {
            let sub = factor * bc % p;
            r[i + shift] = (r[i + shift] + p - sub) % p;
        }
        trim_zeros(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Extended Euclid; p is prime and a is a nonzero residue.
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "input not invertible mod p");
    t.rem_euclid(p as i64) as u64
}
