//! Differential operators with weighted-polynomial λ-series coefficients.

use std::collections::BTreeMap;

use crate::coeffs::{GaussPoly, Mono, Observable, Part};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{LambdaSeries, Order};

/// `Σ_α c_α ∂^α`, acting the same way on every component.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOp<C> {
    nvars: usize,
    trunc: i32,
    terms: BTreeMap<Mono, Part<C>>,
}

fn binomial(a: &Mono, b: &Mono) -> i64 {
    a.0.iter()
        .zip(&b.0)
        .map(|(&n, &k)| {
            let (n, k) = (n as i64, k as i64);
            (0..k).fold(1i64, |acc, j| acc * (n - j) / (j + 1))
        })
        .product()
}

impl<C: Scalar> DiffOp<C> {
    pub fn zero(nvars: usize, trunc: i32) -> Self {
        DiffOp { nvars, trunc, terms: BTreeMap::new() }
    }

    pub fn from_terms(nvars: usize, trunc: i32, terms: impl IntoIterator<Item = (Mono, Part<C>)>) -> Self {
        let mut out = Self::zero(nvars, trunc);
        for (m, c) in terms {
            out.add_term(m, &c);
        }
        out
    }

    /// `∂^α`.
    pub fn derivative(nvars: usize, trunc: i32, alpha: Mono) -> Self {
        let one = LambdaSeries::constant(GaussPoly::one(crate::coeffs::Frame::real(nvars)), trunc);
        Self::from_terms(nvars, trunc, [(alpha, one)])
    }

    /// Multiplication by a coefficient series.
    pub fn multiplication(nvars: usize, c: Part<C>) -> Self {
        let trunc = c.trunc();
        Self::from_terms(nvars, trunc, [(Mono::one(nvars), c)])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn trunc(&self) -> i32 {
        self.trunc
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Part<C>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: &Part<C>) {
        let c = c.with_trunc(self.trunc);
        let e = self.terms.entry(m.clone()).or_insert_with(|| LambdaSeries::zero(self.trunc));
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg_series())
    }

    pub fn scale_series(&self, s: &LambdaSeries<C>) -> Self {
        self.map(|c| c.scale_series(s))
    }

    fn map(&self, f: impl Fn(&Part<C>) -> Part<C>) -> Self {
        let mut out = Self::zero(self.nvars, self.trunc);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    pub fn with_trunc(&self, trunc: i32) -> Self {
        let mut out = Self::zero(self.nvars, trunc);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.with_trunc(trunc));
        }
        out
    }

    /// Lowest λ-order among the coefficients.
    pub fn order(&self) -> Order {
        self.terms.values().map(LambdaSeries::order).min().unwrap_or(Order::Infinity)
    }

    /// Highest derivative order.
    pub fn max_derivative(&self) -> u32 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    /// `self ∘ other` by the Leibniz rule.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars, self.trunc);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                for g in a.divisors() {
                    let rest = a.div(&g).expect("divisor");
                    let k = C::from_i64(binomial(a, &g));
                    let db = cb.map(|x| x.derive_multi(&g));
                    if db.is_zero() {
                        continue;
                    }
                    let coeff = (ca * &db).scale(&k);
                    out.add_term(rest.mul(b), &coeff);
                }
            }
        }
        out
    }

    pub fn apply(&self, u: &Observable<C>) -> Result<Observable<C>> {
        if u.chart().nvars() != self.nvars {
            return Err(Error::ModelMismatch(format!(
                "differential operator in {} variables on a {}-variable chart",
                self.nvars,
                u.chart().nvars()
            )));
        }
        let u = u.with_trunc(self.trunc);
        let mut out = Observable::zero(u.chart(), self.trunc);
        for (alpha, c) in &self.terms {
            let d = u.derive_multi(alpha);
            if d.is_zero() {
                continue;
            }
            out = out.checked_add(&d.map_parts(|p| c * p))?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{Chart, Frame};
    use crate::scalar::Cq;

    #[test]
    fn leibniz_composition() {
        let chart = Chart::moyal(1);
        let frame = Frame::real(2);
        let q = LambdaSeries::constant(GaussPoly::<Cq>::var(frame, 0), 3);
        let dq = DiffOp::derivative(2, 3, Mono::from_exps(&[1, 0]));
        let mq = DiffOp::multiplication(2, q);
        let comp = dq.compose(&mq);
        let u = Observable::<Cq>::monomial(&chart, 3, Mono::from_exps(&[2, 1]));
        let direct = dq.apply(&mq.apply(&u).unwrap()).unwrap();
        assert_eq!(comp.apply(&u).unwrap(), direct);
        assert_eq!(comp.terms().len(), 2);
    }
}
