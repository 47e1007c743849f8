//! Truncated formal Laurent series in the formal parameter λ.
//!
//! A [`LambdaSeries`] stores only nonzero coefficients, indexed by integer
//! exponent, and a truncation bound `trunc`: every stored exponent is
//! `<= trunc` and products silently drop anything above it. Binary
//! operations require equal truncation bounds.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::{int, sign_of, Cf, Cq, Rational, Scalar, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(i32, i32),
    #[error("series is not invertible")]
    NotInvertible,
    #[error("exponent {exponent} is not allowed in a {class:?} series")]
    InadmissibleExponent { exponent: String, class: AdmissibilityClass },
}

/// A commutative or noncommutative coefficient ring with a conjugation.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn vanishes(&self) -> bool;
    fn add_assign_ref(&mut self, rhs: &Self);
    fn sub_assign_ref(&mut self, rhs: &Self);
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn conj(&self) -> Self;
}

/// Coefficient rings that are modules over the scalar field `S`.
pub trait Module<S: Scalar>: Ring {
    fn scale(&self, s: &S) -> Self;
}

impl<S: Scalar> Module<S> for S {
    fn scale(&self, s: &S) -> Self {
        s.mul_ref(self)
    }
}

impl Ring for Rational {
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self -= rhs;
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        self.clone()
    }
}

impl Ring for Value {
    fn vanishes(&self) -> bool {
        Value::is_zero(self)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self = self.add_ref(rhs);
    }
    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self = self.add_ref(&rhs.neg_ref());
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        Value::mul_ref(self, rhs)
    }
    fn neg_ref(&self) -> Self {
        Value::neg_ref(self)
    }
    fn conj(&self) -> Self {
        Value::conj(self)
    }
}

/// λ-adic order: an integer or +∞ (for the zero series).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(i32),
    Infinity,
}

impl Order {
    pub fn finite(self) -> Option<i32> {
        match self {
            Order::Finite(o) => Some(o),
            Order::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Order::Infinity
    }

    /// `o(f) + o(g)`, with ∞ absorbing.
    pub fn plus(self, other: Order) -> Order {
        match (self, other) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            _ => Order::Infinity,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(o) => write!(f, "{o}"),
            Order::Infinity => write!(f, "inf"),
        }
    }
}

/// Truncated formal Laurent series `Σ_e c_e λ^e` with `e <= trunc`.
#[derive(Clone, PartialEq)]
pub struct LambdaSeries<C> {
    terms: BTreeMap<i32, C>,
    trunc: i32,
}

impl<C: Ring> LambdaSeries<C> {
    pub fn zero(trunc: i32) -> Self {
        LambdaSeries { terms: BTreeMap::new(), trunc }
    }

    /// `c·λ^e`, or zero if `e` lies beyond the window.
    pub fn monomial(e: i32, c: C, trunc: i32) -> Self {
        let mut s = Self::zero(trunc);
        s.add_term(e, c);
        s
    }

    pub fn constant(c: C, trunc: i32) -> Self {
        Self::monomial(0, c, trunc)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, C)>, trunc: i32) -> Self {
        let mut s = Self::zero(trunc);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn trunc(&self) -> i32 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> Order {
        self.terms.keys().next().map_or(Order::Infinity, |&e| Order::Finite(e))
    }

    /// Highest stored exponent.
    pub fn top(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, e: i32) -> Option<&C> {
        self.terms.get(&e)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &C)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn into_terms(self) -> impl Iterator<Item = (i32, C)> {
        self.terms.into_iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest nonzero coefficient.
    pub fn leading(&self) -> Option<(i32, &C)> {
        self.terms.iter().next().map(|(&e, c)| (e, c))
    }

    /// Add `c·λ^e` in place, dropping it if outside the window.
    pub fn add_term(&mut self, e: i32, c: C) {
        if e > self.trunc || Ring::vanishes(&c) {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&c);
                if Ring::vanishes(o.get()) {
                    o.remove();
                }
            }
        }
    }

    pub fn add_term_ref(&mut self, e: i32, c: &C) {
        if e > self.trunc || Ring::vanishes(c) {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(c);
                if Ring::vanishes(o.get()) {
                    o.remove();
                }
            }
        }
    }

    /// Same coefficients in a different window (dropping exponents above it).
    pub fn with_trunc(&self, trunc: i32) -> Self {
        LambdaSeries {
            terms: self.terms.range(..=trunc).map(|(&e, c)| (e, c.clone())).collect(),
            trunc,
        }
    }

    /// Multiply by `λ^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self::from_terms(self.terms.iter().map(|(&e, c)| (e + k, c.clone())), self.trunc)
    }

    /// Keep only exponents strictly below `e`.
    pub fn below(&self, e: i32) -> Self {
        LambdaSeries {
            terms: self.terms.range(..e).map(|(&x, c)| (x, c.clone())).collect(),
            trunc: self.trunc,
        }
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> LambdaSeries<D> {
        LambdaSeries::from_terms(self.terms.iter().map(|(&e, c)| (e, f(c))), self.trunc)
    }

    pub fn map_with_exponent<D: Ring>(&self, f: impl Fn(i32, &C) -> D) -> LambdaSeries<D> {
        LambdaSeries::from_terms(self.terms.iter().map(|(&e, c)| (e, f(e, c))), self.trunc)
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.trunc != other.trunc {
            Err(SeriesError::TruncationMismatch(self.trunc, other.trunc))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term_ref(e, c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c.neg_ref());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let mut out = Self::zero(self.trunc);
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &other.terms {
                if ea + eb > self.trunc {
                    break;
                }
                out.add_term(ea + eb, ca.mul_ref(cb));
            }
        }
        Ok(out)
    }

    pub fn neg_series(&self) -> Self {
        LambdaSeries {
            terms: self.terms.iter().map(|(&e, c)| (e, c.neg_ref())).collect(),
            trunc: self.trunc,
        }
    }

    /// Conjugate every coefficient; λ is real.
    pub fn conj(&self) -> Self {
        LambdaSeries {
            terms: self.terms.iter().map(|(&e, c)| (e, c.conj())).collect(),
            trunc: self.trunc,
        }
    }

    /// `2^{-o(f)}`, zero for the zero series.
    pub fn abs_lambda(&self) -> Rational {
        match self.order() {
            Order::Infinity => Rational::zero(),
            Order::Finite(o) => pow2(-o),
        }
    }

    /// Ultrametric `d(f, g) = 2^{-o(f-g)}`.
    pub fn distance(&self, other: &Self) -> Result<Rational, SeriesError> {
        Ok(self.checked_sub(other)?.abs_lambda())
    }

    /// Scale every coefficient by a field element.
    pub fn scale<S: Scalar>(&self, s: &S) -> Self
    where
        C: Module<S>,
    {
        Self::from_terms(self.terms.iter().map(|(&e, c)| (e, c.scale(s))), self.trunc)
    }

    /// Multiply by a λ-scalar series.
    pub fn scale_series<S: Scalar>(&self, s: &LambdaSeries<S>) -> Self
    where
        C: Module<S>,
    {
        let mut out = Self::zero(self.trunc);
        for (&es, cs) in &s.terms {
            for (&e, c) in &self.terms {
                if e + es > self.trunc {
                    break;
                }
                out.add_term(e + es, c.scale(cs));
            }
        }
        out
    }
}

impl<S: Scalar + Ring> LambdaSeries<S> {
    pub fn scalar(c: S, trunc: i32) -> Self {
        Self::constant(c, trunc)
    }

    pub fn one(trunc: i32) -> Self {
        Self::constant(S::one(), trunc)
    }

    /// `λ^k`.
    pub fn lambda_pow(k: i32, trunc: i32) -> Self {
        Self::monomial(k, S::one(), trunc)
    }

    /// Multiplicative inverse of a nonzero Laurent series.
    ///
    /// For `f = c λ^o (1 + u)` the inverse `c⁻¹ λ^{-o} Σ (-u)^k` is known up
    /// to exponent `trunc - 2·o` when `o > 0`; this keeps the window fixed and
    /// assumes `f` is known exactly to the extent needed.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let (o, c) = self.leading().ok_or(SeriesError::NotInvertible)?;
        let cinv = S::one() / c.clone();
        // u = f/(c λ^o) - 1, has order >= 1
        let mut u = Self::zero(self.trunc);
        for (&e, ce) in self.terms.iter().skip(1) {
            u.add_term(e - o, cinv.mul_ref(ce));
        }
        let mut acc = Self::one(self.trunc);
        let mut power = Self::one(self.trunc);
        let neg_u = u.neg_series();
        loop {
            power = power.checked_mul(&neg_u)?;
            if power.is_zero() {
                break;
            }
            acc = acc.checked_add(&power)?;
        }
        Ok(acc.shift(-o).map(|x| cinv.mul_ref(x)))
    }

    pub fn to_values(&self) -> LambdaSeries<Value> {
        self.map(|c| c.to_value())
    }
}

impl LambdaSeries<Cq> {
    /// Real part of each coefficient, as an ordered-ring element.
    pub fn real_part(&self) -> LambdaSeries<Rational> {
        self.map(|c| c.re.clone())
    }
}

impl LambdaSeries<Value> {
    /// Sign of the real part of the lowest non-negligible coefficient.
    pub fn re_sign(&self, eps: f64) -> i8 {
        for (_, c) in self.terms() {
            let s = c.re_sign(eps);
            if s != 0 {
                return s;
            }
        }
        0
    }

    /// All coefficients negligible (zero, or below `eps` if inexact).
    pub fn is_negligible(&self, eps: f64) -> bool {
        self.terms().all(|(_, c)| c.is_negligible(eps))
    }

    pub fn is_exact(&self) -> bool {
        self.terms().all(|(_, c)| c.is_exact())
    }

    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        let exps: std::collections::BTreeSet<i32> =
            self.terms.keys().chain(other.terms.keys()).copied().collect();
        let zero = Value::zero();
        exps.into_iter().all(|e| {
            let a = self.coeff(e).unwrap_or(&zero);
            let b = other.coeff(e).unwrap_or(&zero);
            a.approx_eq(b, eps)
        })
    }

    /// Lowest order whose coefficient exceeds `eps`.
    pub fn order_eps(&self, eps: f64) -> Order {
        self.terms()
            .find(|(_, c)| !c.is_negligible(eps))
            .map_or(Order::Infinity, |(e, _)| Order::Finite(e))
    }

    pub fn to_cf(&self) -> LambdaSeries<Cf> {
        self.map(|c| c.to_cf())
    }
}

/// Sign of an element of the ordered ring of real formal series: the sign of
/// its lowest coefficient.
pub fn ordered_sign(a: &LambdaSeries<Rational>) -> i8 {
    a.leading().map_or(0, |(_, c)| sign_of(c))
}

fn pow2(k: i32) -> Rational {
    let two = int(2);
    if k >= 0 {
        num_traits::pow(two, k as usize)
    } else {
        Rational::one() / num_traits::pow(two, (-k) as usize)
    }
}

macro_rules! forward_ops {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<C: Ring> $tr for LambdaSeries<C> {
            type Output = LambdaSeries<C>;
            fn $m(self, rhs: Self) -> Self::Output {
                self.$checked(&rhs).expect("λ-series window mismatch")
            }
        }
        impl<'a, C: Ring> $tr<&'a LambdaSeries<C>> for &'a LambdaSeries<C> {
            type Output = LambdaSeries<C>;
            fn $m(self, rhs: Self) -> Self::Output {
                self.$checked(rhs).expect("λ-series window mismatch")
            }
        }
    };
}

forward_ops!(Add, add, checked_add);
forward_ops!(Sub, sub, checked_sub);
forward_ops!(Mul, mul, checked_mul);

impl<C: Ring> Neg for LambdaSeries<C> {
    type Output = LambdaSeries<C>;
    fn neg(self) -> Self::Output {
        self.neg_series()
    }
}

impl<C: Ring> Ring for LambdaSeries<C> {
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self = self.checked_add(rhs).expect("λ-series window mismatch");
    }
    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self = self.checked_sub(rhs).expect("λ-series window mismatch");
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs).expect("λ-series window mismatch")
    }
    fn neg_ref(&self) -> Self {
        self.neg_series()
    }
    fn conj(&self) -> Self {
        LambdaSeries::conj(self)
    }
}

impl<C: fmt::Debug> fmt::Debug for LambdaSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LambdaSeries[trunc={}]", self.trunc)?;
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// Admissibility classes of exponent sets, `L ⊆ NP ⊆ CNP`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmissibilityClass {
    /// Integers, bounded below.
    Laurent,
    /// Bounded below with `n·S ⊆ ℤ`; carries the least such `n`.
    BoundedDenominator(u64),
    /// Has a minimum and no accumulation point.
    Discrete,
    Inadmissible,
}

/// An infinite tail `{ slope·n + offset + inverse/n : n >= start }` of an
/// exponent set.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentTail {
    pub slope: Rational,
    pub offset: Rational,
    pub inverse: Rational,
    pub start: u64,
}

impl ExponentTail {
    pub fn arithmetic(first: Rational, step: Rational) -> Self {
        ExponentTail { offset: first, slope: step, inverse: Rational::zero(), start: 0 }
    }

    fn element(&self, n: u64) -> Rational {
        let n = Rational::from_integer(n.into());
        let mut v = &self.slope * &n + &self.offset;
        if !self.inverse.is_zero() {
            v += &self.inverse / n;
        }
        v
    }
}

/// A describable exponent set: finitely many points plus infinite tails.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExponentSet {
    pub points: Vec<Rational>,
    pub tails: Vec<ExponentTail>,
}

/// Tightest admissibility class of an exponent set.
pub fn admissibility(set: &ExponentSet) -> AdmissibilityClass {
    let mut denominators: Vec<num_bigint::BigInt> =
        set.points.iter().map(|p| p.denom().clone()).collect();
    let mut discrete_only = false;
    for t in &set.tails {
        if t.start == 0 && !t.inverse.is_zero() {
            return AdmissibilityClass::Inadmissible;
        }
        if t.slope.is_negative() {
            // unbounded below, no minimum
            return AdmissibilityClass::Inadmissible;
        }
        if t.slope.is_zero() {
            if t.inverse.is_zero() {
                denominators.push(t.offset.denom().clone());
                continue;
            }
            // converges to `offset`: accumulation point
            return AdmissibilityClass::Inadmissible;
        }
        if !t.inverse.is_zero() {
            // denominators of inverse/n are unbounded
            discrete_only = true;
            continue;
        }
        denominators.push(t.slope.denom().clone());
        denominators.push(t.element(t.start).denom().clone());
    }
    if discrete_only {
        return AdmissibilityClass::Discrete;
    }
    let lcm = denominators
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, d| acc.lcm(d));
    if lcm.is_one() {
        AdmissibilityClass::Laurent
    } else {
        use num_traits::ToPrimitive;
        match lcm.to_u64() {
            Some(n) => AdmissibilityClass::BoundedDenominator(n),
            None => AdmissibilityClass::Discrete,
        }
    }
}

/// A formal series with rational exponents, tagged with the admissibility
/// class its support has to satisfy. Only the support bookkeeping is provided.
#[derive(Debug, Clone, PartialEq)]
pub struct QSeries<C> {
    coeffs: BTreeMap<Rational, C>,
    class: AdmissibilityClass,
}

impl<C: Ring> QSeries<C> {
    pub fn new(
        terms: impl IntoIterator<Item = (Rational, C)>,
        class: AdmissibilityClass,
    ) -> Result<Self, SeriesError> {
        let coeffs: BTreeMap<Rational, C> =
            terms.into_iter().filter(|(_, c)| !Ring::vanishes(c)).collect();
        let support = ExponentSet { points: coeffs.keys().cloned().collect(), tails: vec![] };
        let actual = admissibility(&support);
        let ok = match (&class, &actual) {
            (AdmissibilityClass::Inadmissible, _) => false,
            (_, AdmissibilityClass::Laurent) => true,
            (AdmissibilityClass::Laurent, _) => false,
            (AdmissibilityClass::BoundedDenominator(n), AdmissibilityClass::BoundedDenominator(m)) => {
                n % m == 0
            }
            (AdmissibilityClass::BoundedDenominator(_), _) => false,
            (AdmissibilityClass::Discrete, _) => true,
        };
        if !ok {
            let bad = coeffs.keys().find(|e| !e.is_integer()).cloned().unwrap_or_else(Rational::zero);
            return Err(SeriesError::InadmissibleExponent { exponent: bad.to_string(), class });
        }
        Ok(QSeries { coeffs, class })
    }

    pub fn class(&self) -> &AdmissibilityClass {
        &self.class
    }

    pub fn support(&self) -> impl Iterator<Item = &Rational> {
        self.coeffs.keys()
    }

    pub fn order(&self) -> Option<&Rational> {
        self.coeffs.keys().next()
    }
}
