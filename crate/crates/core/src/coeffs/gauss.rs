//! Polynomials times Gaussian weights `exp(-γ·φ)`.
//!
//! `φ` is `Σ x_v²` on real frames and `Σ z_k z̄_k` on Wick frames. A
//! [`GaussPoly`] is a finite sum of weighted blocks `P_γ · exp(-γφ)`, which
//! keeps sums of differently weighted terms inside the type.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::poly::{Mono, Poly};
use crate::error::{Error, Result};
use crate::scalar::{cq_real, int, rational_to_f64, Rational, Scalar, Value};
use crate::series::{Module, Ring};

/// Variable layout of a coefficient algebra.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Frame {
    pub nvars: usize,
    /// Wick frames have `nvars = 2n` with `z_k` at `k` and `z̄_k` at `k + n`.
    pub wick: bool,
}

impl Frame {
    pub fn real(nvars: usize) -> Self {
        Frame { nvars, wick: false }
    }

    pub fn wick(n: usize) -> Self {
        Frame { nvars: 2 * n, wick: true }
    }

    /// Variable whose swap implements conjugation, if any.
    fn partner(&self, v: usize) -> usize {
        let n = self.nvars / 2;
        if v < n {
            v + n
        } else {
            v - n
        }
    }

    /// `∂φ/∂x_v` as a polynomial.
    fn dphi(&self, v: usize) -> (Mono, i64) {
        if self.wick {
            (Mono::var(self.nvars, self.partner(v)), 1)
        } else {
            (Mono::var(self.nvars, v), 2)
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct GaussPoly<C> {
    frame: Frame,
    blocks: BTreeMap<Rational, Poly<C>>,
}

impl<C: Scalar> GaussPoly<C> {
    pub fn zero(frame: Frame) -> Self {
        GaussPoly { frame, blocks: BTreeMap::new() }
    }

    pub fn from_poly(frame: Frame, p: Poly<C>) -> Self {
        Self::weighted(frame, Rational::zero(), p)
    }

    /// `p · exp(-γφ)`.
    pub fn weighted(frame: Frame, gamma: Rational, p: Poly<C>) -> Self {
        let mut g = Self::zero(frame);
        g.add_block(gamma, p);
        g
    }

    pub fn constant(frame: Frame, c: C) -> Self {
        Self::from_poly(frame, Poly::constant(frame.nvars, c))
    }

    pub fn one(frame: Frame) -> Self {
        Self::constant(frame, C::one())
    }

    pub fn var(frame: Frame, v: usize) -> Self {
        Self::from_poly(frame, Poly::var(frame.nvars, v))
    }

    /// The weight `exp(-γφ)` itself.
    pub fn gauss(frame: Frame, gamma: Rational) -> Self {
        Self::weighted(frame, gamma, Poly::constant(frame.nvars, C::one()))
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&Rational, &Poly<C>)> + '_ {
        self.blocks.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Whether every block carries the trivial weight.
    pub fn is_polynomial(&self) -> bool {
        self.blocks.keys().all(|g| g.is_zero())
    }

    /// The unweighted part.
    pub fn polynomial_part(&self) -> Poly<C> {
        self.blocks.get(&Rational::zero()).cloned().unwrap_or_else(|| Poly::zero(self.frame.nvars))
    }

    /// Highest polynomial degree over all blocks.
    pub fn degree(&self) -> Option<u32> {
        self.blocks.values().filter_map(Poly::degree).max()
    }

    pub fn add_block(&mut self, gamma: Rational, p: Poly<C>) {
        if p.is_zero() {
            return;
        }
        match self.blocks.entry(gamma) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign(&p);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn map_blocks(&self, f: impl Fn(&Rational, &Poly<C>) -> Poly<C>) -> Self {
        let mut out = Self::zero(self.frame);
        for (g, p) in &self.blocks {
            out.add_block(g.clone(), f(g, p));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.frame, other.frame, "coefficient frames differ");
        let mut out = self.clone();
        for (g, p) in &other.blocks {
            out.add_block(g.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_blocks(|_, p| p.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.frame, other.frame, "coefficient frames differ");
        let mut out = Self::zero(self.frame);
        for (ga, pa) in &self.blocks {
            for (gb, pb) in &other.blocks {
                out.add_block(ga + gb, pa.mul(pb));
            }
        }
        out
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero(self.frame);
        }
        self.map_blocks(|_, p| p.scale(s))
    }

    /// Multiply by `x_v`.
    pub fn mul_var(&self, v: usize) -> Self {
        let m = Mono::var(self.frame.nvars, v);
        self.map_blocks(|_, p| p.mul_mono(&m))
    }

    /// `∂(P·w) = (∂P - γ·P·∂φ)·w` on each block.
    pub fn derive(&self, v: usize) -> Self {
        let (m, k) = self.frame.dphi(v);
        self.map_blocks(|g, p| {
            let mut d = p.derive(v);
            if !g.is_zero() {
                let factor = C::from_rational(&(g * int(k)));
                d.sub_assign(&p.mul_mono(&m).scale(&factor));
            }
            d
        })
    }

    pub fn derive_multi(&self, alpha: &Mono) -> Self {
        if self.is_polynomial() {
            return self.map_blocks(|_, p| p.derive_multi(alpha));
        }
        let mut out = self.clone();
        for (v, &e) in alpha.0.iter().enumerate() {
            for _ in 0..e {
                out = out.derive(v);
                if out.is_zero() {
                    return out;
                }
            }
        }
        out
    }

    /// Complex conjugation; swaps `z_k ↔ z̄_k` on Wick frames.
    pub fn conj(&self) -> Self {
        if !self.frame.wick {
            return self.map_blocks(|_, p| p.conj_coeffs());
        }
        let n = self.frame.nvars / 2;
        self.map_blocks(|_, p| {
            p.conj_coeffs().map_monos(self.frame.nvars, |m| {
                let mut e = m.clone();
                for k in 0..n {
                    e.0.swap(k, k + n);
                }
                Some(e)
            })
        })
    }

    /// Keep the variables in `keep` (renumbered in order) and set all others
    /// to zero.
    pub fn restrict(&self, keep: &[usize], target: Frame) -> Self {
        let nv = self.frame.nvars;
        self.map_blocks(|_, p| {
            p.map_monos(target.nvars, |m| {
                let dropped = (0..nv).any(|v| !keep.contains(&v) && m.exp(v) > 0);
                if dropped {
                    None
                } else {
                    Some(Mono::from_exps(&keep.iter().map(|&v| m.exp(v)).collect::<Vec<_>>()))
                }
            })
        })
        .reframe(target)
    }

    /// Embed variables into a larger frame, sending variable `v` to `map[v]`.
    pub fn embed(&self, map: &[usize], target: Frame) -> Self {
        let mut out = Self::zero(target);
        for (g, p) in &self.blocks {
            let q = p.map_monos(target.nvars, |m| {
                let mut e = vec![0u16; target.nvars];
                for (v, &x) in m.0.iter().enumerate() {
                    e[map[v]] = x;
                }
                Some(Mono::from_exps(&e))
            });
            out.add_block(g.clone(), q);
        }
        out
    }

    fn reframe(mut self, frame: Frame) -> Self {
        self.frame = frame;
        self
    }

    /// `φ(point)`.
    fn phi_at(&self, point: &[C]) -> C {
        if self.frame.wick {
            let n = self.frame.nvars / 2;
            (0..n).fold(C::zero(), |acc, k| acc.add_ref(&point[k].mul_ref(&point[k + n])))
        } else {
            point.iter().fold(C::zero(), |acc, x| acc.add_ref(&x.mul_ref(x)))
        }
    }

    /// Value at a point given in all frame variables.
    pub fn evaluate(&self, point: &[C]) -> Result<Value> {
        self.check_point(point)?;
        let phi = self.phi_at(point);
        let mut acc = Value::zero();
        for (g, p) in &self.blocks {
            let v = p.evaluate(point);
            let term = if g.is_zero() || phi.is_zero() {
                v.to_value()
            } else {
                let w = (-rational_to_f64(g) * phi.to_cf().re).exp();
                Value::Float(v.to_cf() * w)
            };
            acc = acc.add_ref(&term);
        }
        Ok(acc)
    }

    /// Value at a point as a field element, when the field can represent it.
    pub fn evaluate_in_field(&self, point: &[C]) -> Result<C> {
        self.check_point(point)?;
        let phi = self.phi_at(point);
        let mut acc = C::zero();
        for (g, p) in &self.blocks {
            let v = p.evaluate(point);
            if g.is_zero() || phi.is_zero() {
                acc = acc.add_ref(&v);
            } else {
                let w = (-rational_to_f64(g) * phi.to_cf().re).exp();
                let w = C::from_f64(w)
                    .ok_or_else(|| Error::Inexact(format!("exp(-{g}·{:?})", phi.to_cf().re)))?;
                acc = acc.add_ref(&v.mul_ref(&w));
            }
        }
        Ok(acc)
    }

    fn check_point(&self, point: &[C]) -> Result<()> {
        if point.len() != self.frame.nvars {
            return Err(Error::DimensionMismatch { expected: self.frame.nvars, got: point.len() });
        }
        Ok(())
    }

    /// Integral over all variables against Lebesgue measure.
    ///
    /// Real frames use `∫ x^{2m} e^{-γx²} = (2m-1)!!/(2γ)^m · √(π/γ)`; Wick
    /// frames use `∫ z^a z̄^b e^{-γ|z|²} d²z = δ_ab · a! · π/γ^{a+1}`. The
    /// result is exact whenever the powers of √π pair up.
    pub fn integrate(&self) -> Result<Value> {
        let mut acc = Value::zero();
        for (g, p) in &self.blocks {
            if !g.is_positive() {
                return Err(Error::DivergentIntegral(format!(
                    "weight exp(-({g})·φ) is not integrable"
                )));
            }
            for (m, c) in p.terms() {
                acc = acc.add_ref(&self.monomial_integral(g, m, c));
            }
        }
        Ok(acc)
    }

    fn monomial_integral(&self, g: &Rational, m: &Mono, c: &C) -> Value {
        let nv = self.frame.nvars;
        if self.frame.wick {
            let n = nv / 2;
            let mut r = Rational::one();
            for k in 0..n {
                let (a, b) = (m.exp(k), m.exp(k + n));
                if a != b {
                    return Value::zero();
                }
                r *= factorial(a as u32) / pow(g, a as u32 + 1);
            }
            return c.to_value().mul_ref(&Value::exact(cq_real(r), n as i32));
        }
        let mut r = Rational::one();
        for v in 0..nv {
            let e = m.exp(v) as u32;
            if e % 2 == 1 {
                return Value::zero();
            }
            let half = e / 2;
            r *= double_factorial(e) / pow(&(g * int(2)), half);
        }
        if nv.is_multiple_of(2) {
            let d2 = (nv / 2) as u32;
            r /= pow(g, d2);
            c.to_value().mul_ref(&Value::exact(cq_real(r), d2 as i32))
        } else {
            let s = (std::f64::consts::PI / rational_to_f64(g)).sqrt().powi(nv as i32);
            Value::Float(c.to_cf() * (rational_to_f64(&r) * s))
        }
    }
}

fn pow(r: &Rational, k: u32) -> Rational {
    num_traits::pow(r.clone(), k as usize)
}

fn factorial(k: u32) -> Rational {
    (1..=k as i64).fold(Rational::one(), |acc, j| acc * int(j))
}

/// `(e-1)!!` for even `e`, `1` for `e = 0`.
fn double_factorial(e: u32) -> Rational {
    let mut acc = Rational::one();
    let mut j = e as i64 - 1;
    while j > 1 {
        acc *= int(j);
        j -= 2;
    }
    acc
}

impl<C: Scalar> Ring for GaussPoly<C> {
    fn vanishes(&self) -> bool {
        self.blocks.is_empty()
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        assert_eq!(self.frame, rhs.frame, "coefficient frames differ");
        for (g, p) in &rhs.blocks {
            self.add_block(g.clone(), p.clone());
        }
    }
    fn sub_assign_ref(&mut self, rhs: &Self) {
        assert_eq!(self.frame, rhs.frame, "coefficient frames differ");
        for (g, p) in &rhs.blocks {
            self.add_block(g.clone(), p.neg());
        }
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn conj(&self) -> Self {
        GaussPoly::conj(self)
    }
}

impl<C: Scalar> Module<C> for GaussPoly<C> {
    fn scale(&self, s: &C) -> Self {
        GaussPoly::scale(self, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cq_int, rat, Cq};

    fn f2() -> Frame {
        Frame::real(2)
    }

    #[test]
    fn derivative_of_weighted_monomial() {
        // ∂_q (q·e^{-q²-p²}) = (1 - 2q²)·e^{-q²-p²}
        let g = GaussPoly::<Cq>::weighted(f2(), int(1), Poly::var(2, 0));
        let mut expect = Poly::constant(2, cq_int(1));
        expect.add_term(Mono::from_exps(&[2, 0]), cq_int(-2));
        assert_eq!(g.derive(0), GaussPoly::weighted(f2(), int(1), expect));
    }

    #[test]
    fn wick_symbols_are_independent() {
        let w = Frame::wick(1);
        let z = GaussPoly::<Cq>::var(w, 0);
        assert!(z.derive(1).is_zero());
        assert_eq!(z.conj(), GaussPoly::var(w, 1));
    }

    #[test]
    fn gaussian_integrals() {
        let g = GaussPoly::<Cq>::gauss(f2(), int(1));
        assert_eq!(g.integrate().unwrap(), Value::pi());
        let one = Frame::real(1);
        let q = GaussPoly::<Cq>::weighted(one, int(1), Poly::var(1, 0));
        assert!(q.integrate().unwrap().is_zero());
        let q2 = q.mul_var(0);
        let v = q2.integrate().unwrap();
        assert!(!v.is_exact());
        assert!((v.to_cf().re - 0.886_226_925_452_758).abs() < 1e-12);
    }

    #[test]
    fn unweighted_integral_diverges() {
        let c = GaussPoly::<Cq>::constant(f2(), cq_int(2));
        assert!(matches!(c.integrate(), Err(Error::DivergentIntegral(_))));
    }

    #[test]
    fn evaluation_at_origin_is_exact() {
        let one = Frame::real(1);
        let mut p = Poly::constant(1, cq_int(1));
        p.add_term(Mono::from_exps(&[2]), cq_int(1));
        let g = GaussPoly::<Cq>::weighted(one, int(1), p);
        assert_eq!(g.evaluate(&[cq_int(0)]).unwrap(), Value::one());
        assert!(!g.evaluate(&[cq_int(1)]).unwrap().is_exact());
        assert!(g.evaluate_in_field(&[cq_int(1)]).is_err());
    }

    #[test]
    fn wick_moment() {
        // ∫ z z̄ e^{-2|z|²} = 1!·π/2²
        let w = Frame::wick(1);
        let g = GaussPoly::<Cq>::weighted(w, int(2), Poly::term(Mono::from_exps(&[1, 1]), cq_int(1)));
        assert_eq!(g.integrate().unwrap(), Value::exact(cq_real(rat(1, 4)), 1));
    }
}
