//! Observables: one λ-series of weighted polynomials per chart component.

use std::collections::BTreeSet;
use std::ops::{Add, Mul, Neg, Sub};

use super::chart::Chart;
use super::gauss::GaussPoly;
use super::poly::{Mono, Poly};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar, Value};
use crate::series::{LambdaSeries, Order, Ring, SeriesError};

/// Coefficient series of one component.
pub type Part<C> = LambdaSeries<GaussPoly<C>>;

#[derive(Clone, PartialEq, Debug)]
pub struct Observable<C> {
    chart: Chart,
    trunc: i32,
    parts: Vec<Part<C>>,
}

impl<C: Scalar> Observable<C> {
    pub fn zero(chart: &Chart, trunc: i32) -> Self {
        Observable { chart: chart.clone(), trunc, parts: vec![LambdaSeries::zero(trunc); chart.components] }
    }

    /// The same series on every component.
    pub fn uniform(chart: &Chart, part: Part<C>) -> Self {
        let trunc = part.trunc();
        Observable { chart: chart.clone(), trunc, parts: vec![part; chart.components] }
    }

    pub fn from_parts(chart: &Chart, trunc: i32, parts: Vec<Part<C>>) -> Result<Self> {
        if parts.len() != chart.components {
            return Err(Error::DimensionMismatch { expected: chart.components, got: parts.len() });
        }
        for p in &parts {
            if p.trunc() != trunc {
                return Err(SeriesError::TruncationMismatch(trunc, p.trunc()).into());
            }
        }
        Ok(Observable { chart: chart.clone(), trunc, parts })
    }

    /// `c·λ^e·coeff` on every component.
    pub fn term(chart: &Chart, trunc: i32, e: i32, coeff: GaussPoly<C>) -> Self {
        Self::uniform(chart, LambdaSeries::monomial(e, coeff, trunc))
    }

    pub fn scalar(chart: &Chart, trunc: i32, c: C) -> Self {
        Self::term(chart, trunc, 0, GaussPoly::constant(chart.frame(), c))
    }

    pub fn one(chart: &Chart, trunc: i32) -> Self {
        Self::scalar(chart, trunc, C::one())
    }

    pub fn lambda_scalar(chart: &Chart, s: &LambdaSeries<C>) -> Self {
        let frame = chart.frame();
        Self::uniform(chart, s.map(|c| GaussPoly::constant(frame, c.clone())))
    }

    pub fn var(chart: &Chart, trunc: i32, v: usize) -> Self {
        Self::term(chart, trunc, 0, GaussPoly::var(chart.frame(), v))
    }

    /// Variable by name, e.g. `q1` or `zbar2`.
    pub fn named(chart: &Chart, trunc: i32, name: &str) -> Result<Self> {
        let v = chart.var_index(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Self::var(chart, trunc, v))
    }

    pub fn poly(chart: &Chart, trunc: i32, p: Poly<C>) -> Self {
        Self::term(chart, trunc, 0, GaussPoly::from_poly(chart.frame(), p))
    }

    pub fn monomial(chart: &Chart, trunc: i32, m: Mono) -> Self {
        Self::poly(chart, trunc, Poly::term(m, C::one()))
    }

    pub fn gauss(chart: &Chart, trunc: i32, gamma: Rational) -> Self {
        Self::term(chart, trunc, 0, GaussPoly::gauss(chart.frame(), gamma))
    }

    /// Indicator of a set of components.
    pub fn indicator(chart: &Chart, trunc: i32, comps: &BTreeSet<usize>) -> Self {
        Self::one(chart, trunc).restrict(comps)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn trunc(&self) -> i32 {
        self.trunc
    }

    pub fn parts(&self) -> &[Part<C>] {
        &self.parts
    }

    pub fn part(&self, k: usize) -> &Part<C> {
        &self.parts[k]
    }

    pub fn into_parts(self) -> Vec<Part<C>> {
        self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(LambdaSeries::is_zero)
    }

    /// Minimum λ-order over all components.
    pub fn order(&self) -> Order {
        self.parts.iter().map(LambdaSeries::order).min().unwrap_or(Order::Infinity)
    }

    /// Components on which the observable does not vanish.
    pub fn support(&self) -> BTreeSet<usize> {
        (0..self.parts.len()).filter(|&k| !self.parts[k].is_zero()).collect()
    }

    /// Highest polynomial degree appearing anywhere.
    pub fn degree(&self) -> Option<u32> {
        self.parts
            .iter()
            .flat_map(|p| p.terms().filter_map(|(_, g)| g.degree()))
            .max()
    }

    pub fn is_polynomial(&self) -> bool {
        self.parts.iter().all(|p| p.terms().all(|(_, g)| g.is_polynomial()))
    }

    pub fn map_parts(&self, f: impl Fn(&Part<C>) -> Part<C>) -> Self {
        Observable { chart: self.chart.clone(), trunc: self.trunc, parts: self.parts.iter().map(f).collect() }
    }

    pub fn map_parts_indexed(&self, f: impl Fn(usize, &Part<C>) -> Part<C>) -> Self {
        Observable {
            chart: self.chart.clone(),
            trunc: self.trunc,
            parts: self.parts.iter().enumerate().map(|(k, p)| f(k, p)).collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&GaussPoly<C>) -> GaussPoly<C>) -> Self {
        self.map_parts(|p| p.map(&f))
    }

    /// Keep only the listed components.
    pub fn restrict(&self, comps: &BTreeSet<usize>) -> Self {
        self.map_parts_indexed(|k, p| if comps.contains(&k) { p.clone() } else { LambdaSeries::zero(self.trunc) })
    }

    /// Put `self`'s component `from` (or its only component) on component `k`
    /// of a chart with `m` components.
    pub fn inject(&self, k: usize, m: usize) -> Result<Self> {
        if k >= m {
            return Err(Error::Invalid(format!("component {} out of range 1..={m}", k + 1)));
        }
        let chart = self.chart.clone().with_components(m);
        let src = if self.parts.len() == 1 { 0 } else { k };
        if src >= self.parts.len() {
            return Err(Error::DimensionMismatch { expected: m, got: self.parts.len() });
        }
        let mut out = Self::zero(&chart, self.trunc);
        out.parts[k] = self.parts[src].clone();
        Ok(out)
    }

    /// Same coefficients on a different component count: a one-component
    /// observable is spread over all components.
    pub fn broadcast(&self, m: usize) -> Result<Self> {
        if self.parts.len() == m {
            return Ok(self.clone());
        }
        if self.parts.len() != 1 {
            return Err(Error::DimensionMismatch { expected: m, got: self.parts.len() });
        }
        Ok(Self::uniform(&self.chart.clone().with_components(m), self.parts[0].clone()))
    }

    pub fn with_trunc(&self, trunc: i32) -> Self {
        Observable { chart: self.chart.clone(), trunc, parts: self.parts.iter().map(|p| p.with_trunc(trunc)).collect() }
    }

    /// Reinterpret on a chart with the same variable frame and component count.
    pub fn with_chart(&self, chart: &Chart) -> Result<Self> {
        if chart.frame() != self.chart.frame() || chart.components != self.chart.components {
            return Err(Error::ChartMismatch(format!("{} vs {}", self.chart, chart)));
        }
        Ok(Observable { chart: chart.clone(), trunc: self.trunc, parts: self.parts.clone() })
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch(format!("{} vs {}", self.chart, other.chart)));
        }
        if self.trunc != other.trunc {
            return Err(SeriesError::TruncationMismatch(self.trunc, other.trunc).into());
        }
        Ok(())
    }

    fn zip(&self, other: &Self, f: impl Fn(&Part<C>, &Part<C>) -> Part<C>) -> Result<Self> {
        self.check(other)?;
        Ok(Observable {
            chart: self.chart.clone(),
            trunc: self.trunc,
            parts: self.parts.iter().zip(&other.parts).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    /// Pointwise product of coefficient functions.
    pub fn checked_pointwise(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    pub fn neg(&self) -> Self {
        self.map_parts(|p| p.neg_series())
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_parts(|p| p.scale(c))
    }

    /// Multiply by a λ-scalar.
    pub fn scale_series(&self, s: &LambdaSeries<C>) -> Self {
        self.map_parts(|p| p.scale_series(s))
    }

    /// Multiply by `λ^k`.
    pub fn shift(&self, k: i32) -> Self {
        self.map_parts(|p| p.shift(k))
    }

    pub fn conj(&self) -> Self {
        self.map_parts(|p| p.conj())
    }

    pub fn derive(&self, v: usize) -> Self {
        self.map_coeffs(|g| g.derive(v))
    }

    pub fn derive_multi(&self, alpha: &Mono) -> Self {
        self.map_coeffs(|g| g.derive_multi(alpha))
    }

    pub fn mul_var(&self, v: usize) -> Self {
        self.map_coeffs(|g| g.mul_var(v))
    }

    /// Real-coefficient check: invariant under conjugation.
    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Integral of every λ-coefficient over the listed components.
    pub fn integrate(&self, comps: &BTreeSet<usize>) -> Result<LambdaSeries<Value>> {
        let mut out = LambdaSeries::zero(self.trunc);
        for &k in comps {
            for (e, g) in self.parts[k].terms() {
                out.add_term(e, g.integrate()?);
            }
        }
        Ok(out)
    }

    /// λ-series of values at a point of component `k`.
    pub fn evaluate(&self, k: usize, point: &[C]) -> Result<LambdaSeries<Value>> {
        let mut out = LambdaSeries::zero(self.trunc);
        for (e, g) in self.parts[k].terms() {
            out.add_term(e, g.evaluate(point)?);
        }
        Ok(out)
    }

    /// λ-series of field values at a point of component `k`.
    pub fn evaluate_in_field(&self, k: usize, point: &[C]) -> Result<LambdaSeries<C>> {
        let mut out = LambdaSeries::zero(self.trunc);
        for (e, g) in self.parts[k].terms() {
            out.add_term(e, g.evaluate_in_field(point)?);
        }
        Ok(out)
    }

    /// If the observable is a λ-scalar (the same constant on every
    /// component), return it.
    pub fn as_lambda_scalar(&self) -> Option<LambdaSeries<C>> {
        let first = self.parts.first()?;
        if self.parts.iter().any(|p| p != first) {
            return None;
        }
        let one = Mono::one(self.chart.nvars());
        let mut out = LambdaSeries::zero(self.trunc);
        for (e, g) in first.terms() {
            if !g.is_polynomial() {
                return None;
            }
            let p = g.polynomial_part();
            if p.len() != 1 {
                return None;
            }
            out.add_term(e, p.coeff(&one)?.clone());
        }
        Some(out)
    }
}

macro_rules! obs_op {
    ($tr:ident, $m:ident, $f:ident) => {
        impl<'a, C: Scalar> $tr<&'a Observable<C>> for &'a Observable<C> {
            type Output = Observable<C>;
            fn $m(self, rhs: &'a Observable<C>) -> Observable<C> {
                self.$f(rhs).expect("observables on different charts or windows")
            }
        }
        impl<C: Scalar> $tr for Observable<C> {
            type Output = Observable<C>;
            fn $m(self, rhs: Observable<C>) -> Observable<C> {
                self.$f(&rhs).expect("observables on different charts or windows")
            }
        }
    };
}

obs_op!(Add, add, checked_add);
obs_op!(Sub, sub, checked_sub);
obs_op!(Mul, mul, checked_pointwise);

impl<C: Scalar> Neg for Observable<C> {
    type Output = Observable<C>;
    fn neg(self) -> Observable<C> {
        Observable::neg(&self)
    }
}

impl<C: Scalar> Ring for Observable<C> {
    fn vanishes(&self) -> bool {
        Observable::is_zero(self)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self = &*self + rhs;
    }
    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self = &*self - rhs;
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        Observable::neg(self)
    }
    fn conj(&self) -> Self {
        Observable::conj(self)
    }
}
