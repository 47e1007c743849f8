//! Coefficient fields and the value type produced by functionals.
//!
//! Everything in the crate is generic over [`Scalar`], which is implemented
//! for exact complex rationals ([`Cq`]) and for complex doubles ([`Cf`]).
//! Functionals return [`Value`], which stays exact as long as the Gaussian
//! integrals involved only produce integer powers of π.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::series::Ring;

/// Arbitrary precision rational.
pub type Rational = BigRational;
/// Exact complex rational, `re + i·im`.
pub type Cq = Complex<BigRational>;
/// Complex double.
pub type Cf = Complex<f64>;

/// Default tolerance for comparisons that involve floating point values.
pub const DEFAULT_EPS: f64 = 1e-12;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn cq(re: Rational, im: Rational) -> Cq {
    Complex::new(re, im)
}

pub fn cq_real(re: Rational) -> Cq {
    Complex::new(re, Rational::zero())
}

pub fn cq_int(n: i64) -> Cq {
    cq_real(int(n))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// A complex coefficient field.
///
/// Arithmetic by reference is exposed through the `*_ref` methods so generic
/// code never needs higher-ranked bounds on `&Self`.
pub trait Scalar:
    Ring
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether arithmetic in this field is exact.
    const EXACT: bool;

    fn imag_unit() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn from_cq(c: &Cq) -> Self;
    fn to_cf(&self) -> Cf;
    fn to_value(&self) -> Value;
    /// A real double as a field element, if the field can hold it.
    fn from_f64(x: f64) -> Option<Self>;
    /// Sign of the real part; `0` for (numerically) zero.
    fn re_sign(&self, eps: f64) -> i8;
    fn is_negligible(&self, eps: f64) -> bool;

    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&int(n))
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(&rat(n, d))
    }
}

impl Scalar for Cq {
    const EXACT: bool = true;

    fn imag_unit() -> Self {
        Complex::new(Rational::zero(), Rational::one())
    }
    fn from_rational(r: &Rational) -> Self {
        cq_real(r.clone())
    }
    fn from_cq(c: &Cq) -> Self {
        c.clone()
    }
    fn to_cf(&self) -> Cf {
        Complex::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
    fn to_value(&self) -> Value {
        Value::exact(self.clone(), 0)
    }
    fn from_f64(_x: f64) -> Option<Self> {
        None
    }
    fn re_sign(&self, _eps: f64) -> i8 {
        sign_of(&self.re)
    }
    fn is_negligible(&self, _eps: f64) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
}

impl Ring for Cq {
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self -= rhs;
    }
    fn mul_ref(&self, o: &Self) -> Self {
        // Avoid the generic complex product for the very common real case.
        if self.im.is_zero() && o.im.is_zero() {
            return cq_real(&self.re * &o.re);
        }
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
}

impl Scalar for Cf {
    const EXACT: bool = false;

    fn imag_unit() -> Self {
        Complex::new(0.0, 1.0)
    }
    fn from_rational(r: &Rational) -> Self {
        Complex::new(rational_to_f64(r), 0.0)
    }
    fn from_cq(c: &Cq) -> Self {
        c.to_cf()
    }
    fn to_cf(&self) -> Cf {
        *self
    }
    fn to_value(&self) -> Value {
        Value::Float(*self)
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(Complex::new(x, 0.0))
    }
    fn re_sign(&self, eps: f64) -> i8 {
        if self.re.abs() <= eps {
            0
        } else if self.re > 0.0 {
            1
        } else {
            -1
        }
    }
    fn is_negligible(&self, eps: f64) -> bool {
        self.norm() <= eps
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
}

impl Ring for Cf {
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self -= rhs;
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex::new(self.re, -self.im)
    }
}

pub fn sign_of(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// A functional value: either `coeff · π^pi_pow` with exact `coeff`, or a
/// complex double.
///
/// Exact zero is canonical with `pi_pow = 0`. Adding exact values with
/// different powers of π promotes to `Float`.
#[derive(Clone, Debug)]
pub enum Value {
    Exact { coeff: Cq, pi_pow: i32 },
    Float(Cf),
}

impl Value {
    pub fn exact(coeff: Cq, pi_pow: i32) -> Self {
        if coeff.is_zero() {
            Value::Exact { coeff, pi_pow: 0 }
        } else {
            Value::Exact { coeff, pi_pow }
        }
    }

    pub fn zero() -> Self {
        Value::exact(Cq::zero(), 0)
    }

    pub fn one() -> Self {
        Value::exact(Cq::one(), 0)
    }

    pub fn pi() -> Self {
        Value::exact(Cq::one(), 1)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact { .. })
    }

    pub fn to_cf(&self) -> Cf {
        match self {
            Value::Exact { coeff, pi_pow } => coeff.to_cf() * std::f64::consts::PI.powi(*pi_pow),
            Value::Float(c) => *c,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact { coeff, .. } => coeff.is_zero(),
            Value::Float(c) => c.re == 0.0 && c.im == 0.0,
        }
    }

    pub fn is_negligible(&self, eps: f64) -> bool {
        match self {
            Value::Exact { coeff, .. } => coeff.is_zero(),
            Value::Float(c) => c.norm() <= eps,
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Value::Exact { coeff, pi_pow } => Value::exact(coeff.conj(), *pi_pow),
            Value::Float(c) => Value::Float(c.conj()),
        }
    }

    pub fn re(&self) -> Value {
        match self {
            Value::Exact { coeff, pi_pow } => Value::exact(cq_real(coeff.re.clone()), *pi_pow),
            Value::Float(c) => Value::Float(Complex::new(c.re, 0.0)),
        }
    }

    pub fn im(&self) -> Value {
        match self {
            Value::Exact { coeff, pi_pow } => Value::exact(cq_real(coeff.im.clone()), *pi_pow),
            Value::Float(c) => Value::Float(Complex::new(c.im, 0.0)),
        }
    }

    /// Sign of the real part (π > 0, so exact signs are exact).
    pub fn re_sign(&self, eps: f64) -> i8 {
        match self {
            Value::Exact { coeff, .. } => sign_of(&coeff.re),
            Value::Float(c) => Cf::re_sign(c, eps),
        }
    }

    /// Equality up to `eps` once either side is inexact.
    pub fn approx_eq(&self, other: &Value, eps: f64) -> bool {
        match (self, other) {
            (Value::Exact { .. }, Value::Exact { .. }) => self == other,
            _ => (self.to_cf() - other.to_cf()).norm() <= eps,
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Value {
        match self {
            Value::Exact { coeff, pi_pow } => Value::exact(coeff * cq_real(r.clone()), *pi_pow),
            Value::Float(c) => Value::Float(c * rational_to_f64(r)),
        }
    }

    pub fn add_ref(&self, o: &Value) -> Value {
        match (self, o) {
            (Value::Exact { coeff: a, pi_pow: pa }, Value::Exact { coeff: b, pi_pow: pb }) => {
                if a.is_zero() {
                    o.clone()
                } else if b.is_zero() {
                    self.clone()
                } else if pa == pb {
                    Value::exact(a + b, *pa)
                } else {
                    Value::Float(self.to_cf() + o.to_cf())
                }
            }
            _ => Value::Float(self.to_cf() + o.to_cf()),
        }
    }

    pub fn neg_ref(&self) -> Value {
        match self {
            Value::Exact { coeff, pi_pow } => Value::exact(-coeff.clone(), *pi_pow),
            Value::Float(c) => Value::Float(-c),
        }
    }

    pub fn mul_ref(&self, o: &Value) -> Value {
        match (self, o) {
            (Value::Exact { coeff: a, pi_pow: pa }, Value::Exact { coeff: b, pi_pow: pb }) => {
                Value::exact(a.mul_ref(b), pa + pb)
            }
            _ => Value::Float(self.to_cf() * o.to_cf()),
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Exact { coeff: a, pi_pow: pa }, Value::Exact { coeff: b, pi_pow: pb }) => {
                a == b && (pa == pb || a.is_zero())
            }
            (Value::Float(a), Value::Float(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact { coeff, pi_pow } => {
                let pi = match pi_pow {
                    0 => String::new(),
                    1 => "pi".to_string(),
                    k => format!("pi^{k}"),
                };
                if pi.is_empty() {
                    write!(f, "{}", crate::text::format_cq(coeff))
                } else if coeff.is_one() {
                    write!(f, "{pi}")
                } else if *coeff == -Cq::one() {
                    write!(f, "-{pi}")
                } else {
                    write!(f, "{}*{pi}", crate::text::format_cq_factor(coeff))
                }
            }
            Value::Float(c) => {
                if c.im == 0.0 {
                    write!(f, "{}", c.re)
                } else {
                    write!(f, "({}{:+}*i)", c.re, c.im)
                }
            }
        }
    }
}

/// Compare two rationals, used for ordering exponents.
pub fn cmp_rational(a: &Rational, b: &Rational) -> Ordering {
    a.cmp(b)
}
