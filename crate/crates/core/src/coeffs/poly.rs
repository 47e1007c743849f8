//! Sparse multivariate polynomials with exponent vectors in graded order.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use smallvec::SmallVec;

use crate::scalar::Scalar;

/// Exponent vector of a monomial.
///
/// Ordered by total degree first; within a degree, larger exponents on
/// earlier variables come first, so `q²  <  q·p  <  p²` for variables `(q, p)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub SmallVec<[u16; 4]>);

impl Mono {
    pub fn one(nvars: usize) -> Self {
        Mono(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[v] = 1;
        m
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        Mono(SmallVec::from_slice(exps))
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exp(&self, v: usize) -> u16 {
        self.0[v]
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        let mut out = self.clone();
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a = a.checked_sub(*b)?;
        }
        Some(out)
    }

    pub fn with_exp(&self, v: usize, e: u16) -> Mono {
        let mut m = self.clone();
        m.0[v] = e;
        m
    }

    /// `α!` as an integer.
    pub fn factorial(&self) -> u128 {
        self.0.iter().map(|&e| (1..=e as u128).product::<u128>()).product()
    }

    /// All exponent vectors `β <= self` componentwise.
    pub fn divisors(&self) -> Vec<Mono> {
        let mut out = vec![Mono(SmallVec::new())];
        for &e in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for m in &out {
                for k in 0..=e {
                    let mut m2 = m.clone();
                    m2.0.push(k);
                    next.push(m2);
                }
            }
            out = next;
        }
        out
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Every exponent vector in `nvars` variables of total degree `<= d`, in
/// graded order.
pub fn monomials_up_to(nvars: usize, d: u32) -> Vec<Mono> {
    fn rec(nvars: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Mono>) {
        if cur.len() == nvars {
            out.push(Mono::from_exps(cur));
            return;
        }
        for e in 0..=left {
            cur.push(e as u16);
            rec(nvars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(nvars, d, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Sparse polynomial: nonzero coefficients keyed by monomial.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<C> {
    nvars: usize,
    terms: BTreeMap<Mono, C>,
}

impl<C: Scalar> Poly<C> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::term(Mono::one(nvars), c)
    }

    pub fn term(m: Mono, c: C) -> Self {
        let mut p = Self::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        Self::term(Mono::var(nvars, v), C::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &C)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Option<&C> {
        self.terms.get(m)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).max()
    }

    pub fn add_term(&mut self, m: Mono, c: C) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add_ref(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Poly<C>) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Poly<C>) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }

    pub fn add(&self, other: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn neg(&self) -> Poly<C> {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn mul(&self, other: &Poly<C>) -> Poly<C> {
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.mul_ref(cb));
            }
        }
        out
    }

    pub fn scale(&self, s: &C) -> Poly<C> {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        self.map_coeffs(|c| s.mul_ref(c))
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Poly<C> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn map_monos(&self, nvars: usize, f: impl Fn(&Mono) -> Option<Mono>) -> Poly<C> {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            if let Some(m2) = f(m) {
                out.add_term(m2, c.clone());
            }
        }
        out
    }

    /// Multiply by the monomial `m`.
    pub fn mul_mono(&self, m: &Mono) -> Poly<C> {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn derive(&self, v: usize) -> Poly<C> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e > 0 {
                out.add_term(m.with_exp(v, e - 1), C::from_i64(e as i64).mul_ref(c));
            }
        }
        out
    }

    /// `∂^α` applied to the polynomial.
    pub fn derive_multi(&self, alpha: &Mono) -> Poly<C> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if let Some(rest) = m.div(alpha) {
                let mut k = c.clone();
                for (v, &a) in alpha.0.iter().enumerate() {
                    for t in 0..a {
                        k = C::from_i64((m.exp(v) - t) as i64).mul_ref(&k);
                    }
                }
                out.add_term(rest, k);
            }
        }
        out
    }

    pub fn evaluate(&self, point: &[C]) -> C {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul_ref(&point[v]);
                }
            }
            acc = acc.add_ref(&t);
        }
        acc
    }

    pub fn conj_coeffs(&self) -> Poly<C> {
        self.map_coeffs(|c| c.conj())
    }
}
